// Oracle tests for the constants pipeline. Every literal below was computed
// independently with an 80-digit arbitrary-precision evaluation of the same
// printed formulas and frozen here; the library must reproduce them. The
// in-code evaluation carries 60 digits, so agreement to 1e-22 relative is
// demanded wherever a literal has enough digits.
#include <catch2/catch.hpp>

#include "ucplab/constants.hpp"
#include "ucplab/params.hpp"

#include "test_util.hpp"

#include <stdexcept>

using namespace ucplab;
using testutil::rel_err;
using testutil::X;

namespace {

ModelParams P1() { return ModelParams{1, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0}; }
ModelParams P2() { return ModelParams{2, 2.0, 1.0, 0.0, 0.0, 0.0, 1.0}; }
ModelParams P3() { return ModelParams{3, 5.0, 10.0, 0.0, 0.0, 0.0, 1.0}; }

// P2 with the reference norm set used by the loaded-operator oracles.
ModelParams P2n() {
  ModelParams p = P2();
  p.normV = 1.0;
  p.normB = 0.5;
  p.normC = 0.25;
  return p;
}

const CalibrationConstants kCal;  // cutoffTheta = 32, C' = 1

}  // namespace

TEST_CASE("delta0 reproduces the frozen admissible radii", "[constants]") {
  CHECK(rel_err(delta0(P1()), "7.2497345841220396939990882730817e-5") < 1e-22);
  CHECK(rel_err(delta0(P2()), "1.4533459075334025031811141905903e-7") < 1e-22);
  CHECK(rel_err(delta0(P3()), "2.0168333151050855672978241452781e-11") < 1e-22);

  ModelParams pG = P2();
  pG.G = 0.5;
  CHECK(rel_err(delta0(pG), "9.6889727168893500212074279372685e-8") < 1e-22);

  // thetaL = 0 makes the G-dependence purely multiplicative.
  ModelParams p1G = P1();
  p1G.G = 2.0;
  CHECK(rel_err(delta0(p1G), delta0(P1()) * 2) < 1e-40);
}

TEST_CASE("canonical radii and the weight pair match the frozen values", "[constants]") {
  struct Row {
    ModelParams p;
    const char *r2, *R2, *r3, *R3, *mu, *mu1;
  };
  const Row rows[] = {
      {P1(), "7.249734584122039693999088e-5", "3.624867292061019846999544e-4",
       "5.573930926840035175689754e-3", "1.114786185368007035137951e-2",
       "1.000000000000000000000000", "2.718281828459045235360287"},
      {P2(), "1.453345907533402503181114e-7", "7.266729537667012515905571e-7",
       "2.052793935538545203433367e-5", "6.158381806615635610300100e-5",
       "1.183939720585721160797762", "4.551337809345664349264516"},
      {P3(), "2.016833315105085567297824e-11", "1.008416657552542783648912e-10",
       "8.057333950256307525588372e-9", "4.834400370153784515353023e-8",
       "1.334435855610402110541385", "8.111052020891201826046572"},
  };
  for (const Row& row : rows) {
    const AnnuliRadii radii = standard_radii(row.p, RadiiVariant::chain_fixed);
    CHECK(rel_err(radii.r2, row.r2) < 1e-22);
    CHECK(rel_err(radii.R2, row.R2) < 1e-22);
    CHECK(rel_err(radii.r3, row.r3) < 1e-22);
    CHECK(rel_err(radii.R3, row.R3) < 1e-22);
    // The inner sensing radius of the canonical family is delta0 itself.
    CHECK(rel_err(radii.r2, delta0(row.p)) < 1e-40);
    // chain_fixed ties the first annulus to r2.
    CHECK(rel_err(radii.r1, radii.r2 / 2) < 1e-40);
    CHECK(rel_err(radii.R1, radii.r2) < 1e-40);

    const auto [mu, mu1] = mu_pair(radii.R3, 1, row.p);
    CHECK(rel_err(mu, row.mu) < 1e-22);
    CHECK(rel_err(mu1, row.mu1) < 1e-22);
  }
}

TEST_CASE("mu1 switches branch at mu sqrt(thetaE) = 1", "[constants]") {
  // Below the knee: exponential branch.
  const auto [muA, mu1A] = mu_pair(standard_radii(P1(), RadiiVariant::chain_fixed).R3, 1, P1());
  CHECK(rel_err(muA, xreal(1)) < 1e-40);
  CHECK(rel_err(mu1A, euler_e()) < 1e-40);

  // Above the knee: linear branch e * mu * sqrt(thetaE).
  ModelParams p{1, 4.0, 1.0, 0.0, 0.0, 0.0, 1.0};
  const xreal R3 = X("0.01");
  const auto [muB, mu1B] = mu_pair(R3, 1, p);
  const xreal muExpected = 33 * R3 * pow(xreal(4), xreal(11) / 2) * 1 + 1;
  CHECK(rel_err(muB, muExpected) < 1e-30);
  CHECK(rel_err(mu1B, euler_e() * muExpected * 2) < 1e-30);
}

TEST_CASE("radii variants respect their admissibility windows", "[constants]") {
  const xreal d0 = delta0(P1());

  const AnnuliRadii interp = standard_radii(P1(), RadiiVariant::interp_delta, d0 / 2);
  CHECK(rel_err(interp.r1, d0 / 4) < 1e-40);
  CHECK(rel_err(interp.R1, d0 / 2) < 1e-40);
  CHECK_THROWS_AS(standard_radii(P1(), RadiiVariant::interp_delta, d0 * X("1.000001")),
                  std::invalid_argument);
  CHECK_THROWS_AS(standard_radii(P1(), RadiiVariant::interp_delta, 0), std::invalid_argument);

  const AnnuliRadii lap = standard_radii(P2(), RadiiVariant::laplacian, X("0.4"));
  const xreal sqrtD = sqrt(xreal(2));
  CHECK(rel_err(lap.r1, X("0.2")) < 1e-40);
  CHECK(rel_err(lap.R1, X("0.4")) < 1e-40);
  CHECK(rel_err(lap.r2, xreal(1)) < 1e-40);
  CHECK(rel_err(lap.R2, 3 * sqrtD) < 1e-40);
  CHECK(rel_err(lap.r3, 6 * euler_e() * sqrtD) < 1e-40);
  CHECK(rel_err(lap.R3, 9 * euler_e() * sqrtD) < 1e-40);
  CHECK_THROWS_AS(standard_radii(P2(), RadiiVariant::laplacian, X("1.5")),
                  std::invalid_argument);
}

TEST_CASE("Cacciopoli constant matches hand-evaluated points", "[constants]") {
  CHECK(rel_err(cacciopoli_F(1, P1(), kCal), xreal(9)) < 1e-40);

  CHECK(rel_err(cacciopoli_F(X("0.5"), P2n(), kCal), xreal(132)) < 1e-40);

  ModelParams p{1, 5.0, 0.0, 2.0, 1.0, 0.5, 1.0};
  CalibrationConstants cal2;
  cal2.cacciopoliCPrime = 2.0;
  CHECK(rel_err(cacciopoli_F(X("0.3"), p, cal2), "4456.4444444444444444444444444444") < 1e-22);
}

TEST_CASE("Carleman constants at the reference and loaded points", "[constants]") {
  // Reference point: P1 norms zero, canonical radii. ThetaL = 0 collapses the
  // closed forms to C = 6 * 14 e^8 and alpha0 = 132 e^12.
  {
    const AnnuliRadii radii = standard_radii(P1(), RadiiVariant::chain_fixed);
    const auto [mu, mu1] = mu_pair(radii.R3, 1, P1());
    const auto [C, alpha0] = carleman_constants(radii.R3, mu, mu1, P1());
    CHECK(rel_err(C, "250400.47091150517507846173635404") < 1e-22);
    CHECK(rel_err(C, 6 * 14 * pow(euler_e(), 8)) < 1e-40);
    CHECK(rel_err(alpha0, "21483632.467308517546656687046600") < 1e-22);
    CHECK(rel_err(alpha0, 132 * pow(euler_e(), 12)) < 1e-40);
  }
  {
    const AnnuliRadii radii = standard_radii(P2(), RadiiVariant::chain_fixed);
    const auto [mu, mu1] = mu_pair(radii.R3, 1, P2n());
    const auto [C, alpha0] = carleman_constants(radii.R3, mu, mu1, P2n());
    CHECK(rel_err(C, "37415892151.060732752036770691967") < 1e-22);
    CHECK(rel_err(alpha0, "57202392228403495.406654379765162") < 1e-22);
  }
}

TEST_CASE("three-annuli constants at the frozen points", "[constants]") {
  {
    const AnnuliRadii radii = standard_radii(P1(), RadiiVariant::chain_fixed);
    const ThreeAnnuliConstants t = three_annuli_constants(radii, P1(), kCal);
    CHECK(rel_err(t.D1, "316561900433280795863074.0") < 1e-22);
    CHECK(rel_err(t.D2, "566214441463325.2901933534") < 1e-22);
    CHECK(rel_err(t.D3, "6403196830836.696677573129") < 1e-22);
    CHECK(rel_err(t.alphaStar, "21483632.46730851754665669") < 1e-22);
  }
  {
    const AnnuliRadii radii = standard_radii(P2(), RadiiVariant::chain_fixed);
    const ThreeAnnuliConstants t = three_annuli_constants(radii, P2n(), kCal);
    CHECK(rel_err(t.D1, "6.641573447523104259980021e+34") < 1e-22);
    CHECK(rel_err(t.D2, "246804424366925740681674.5") < 1e-22);
    CHECK(rel_err(t.D3, "1330061683617208791.029655") < 1e-22);
    CHECK(rel_err(t.alphaStar, "57202392228403495.40665438") < 1e-22);
  }
  {
    ModelParams p = P1();
    p.normV = 1.0;
    const AnnuliRadii radii = standard_radii(p, RadiiVariant::laplacian, X("0.4"));
    const ThreeAnnuliConstants t = three_annuli_constants(radii, p, kCal);
    CHECK(rel_err(t.D1, "6211304100696553.641487380") < 1e-22);
    CHECK(rel_err(t.D2, "21157714251.05579585147980") < 1e-22);
    CHECK(rel_err(t.D3, "3820286783533.420119782665") < 1e-22);
    CHECK(rel_err(t.alphaStar, "21483632.46730851754665669") < 1e-22);
    CHECK(rel_err(t.mu, xreal(1)) < 1e-40);
    CHECK(rel_err(t.mu1, euler_e()) < 1e-40);
  }
}

TEST_CASE("assumption radii check holds canonically and rejects tight radii", "[constants]") {
  for (int d : {1, 2, 3})
    for (double tE : {1.0, 2.0, 5.0})
      for (double tL : {0.0, 1.0, 10.0}) {
        ModelParams p{d, tE, tL, 0.0, 0.0, 0.0, 1.0};
        CHECK(check_assumption_radii(standard_radii(p, RadiiVariant::chain_fixed), p));
      }

  // r3 barely above R2 makes the strict inequality mu1 < r3/(R2 thetaE) fail.
  AnnuliRadii bad;
  bad.r1 = X("0.1");
  bad.R1 = X("0.2");
  bad.r2 = X("0.3");
  bad.R2 = X("0.4");
  bad.r3 = X("0.45");
  bad.R3 = X("0.5");
  CHECK_FALSE(check_assumption_radii(bad, P1()));
}

TEST_CASE("chained composition matches the frozen constants", "[constants]") {
  {
    const AnnuliRadii radii = standard_radii(P1(), RadiiVariant::chain_fixed);
    const ChainConstants ch = chain_constants(radii, P1(), kCal);
    CHECK(rel_err(ch.gamma, "0.3441334744108292027151392") < 1e-22);
    CHECK(rel_err(ch.gamma2, ch.gamma) < 1e-40);
    CHECK(ch.m == 13794);
    CHECK(rel_err(ch.N, xreal(13794)) < 1e-40);
    CHECK(rel_err(ch.a, "1.449946916824407938799818e-4") < 1e-22);
    CHECK(rel_err(ch.M, "1.022585713090725022290519") < 1e-22);
    CHECK(rel_err(ch.lnC1, "74456603.98912384393285660") < 1e-22);
    CHECK(rel_err(ch.lnC2, "9.565141310867891316638476e+6397") < 1e-22);
    CHECK(rel_err(ln_to_log10(ch.lnC1), "32336092.25373213307941740") < 1e-22);
    CHECK(rel_err(ln_to_log10(ch.lnC2), "4.154088089934761889706651e+6397") < 1e-22);
  }
  {
    const AnnuliRadii radii = standard_radii(P2(), RadiiVariant::chain_fixed);
    const ChainConstants ch = chain_constants(radii, P2n(), kCal);
    CHECK(rel_err(ch.gamma2, "0.2006674895574736471034770") < 1e-22);
    CHECK(ch.m == 9730744);
    CHECK(rel_err(ch.N, X("94687378793536")) < 1e-40);
    CHECK(rel_err(ch.a, "2.906691815066805006362228e-7") < 1e-22);
    CHECK(rel_err(ch.M, "1.000247513262799340791278") < 1e-22);
    CHECK(rel_err(ch.lnC1, "129563100263241990.8666894") < 1e-22);
    CHECK(rel_err(ch.lnC2, "1.228070204732340656839869e+6787434") < 1e-22);
  }
}

TEST_CASE("composed sampling constant at the frozen evaluation points", "[constants]") {
  const xreal d0 = delta0(P1());

  // Zero-norm point at delta = delta0/2.
  const CsfucResult o1 = csfuc(d0 / 2, P1(), kCal);
  CHECK(rel_err(o1.gamma1, "0.3024941317865870256270386") < 1e-22);
  CHECK(rel_err(o1.lnC1Delta, "74456603.98912386135375382") < 1e-22);
  CHECK(rel_err(o1.lnExact, "-3.162091526990746682247979e+6398") < 1e-22);
  CHECK(rel_err(ln_to_log10(o1.lnExact), "-1.373278901445108773123899e+6398") < 1e-22);
  CHECK(rel_err(o1.exponentN, "3.092477451621808444333924e+6397") < 1e-22);
  CHECK(o1.lnExact < 0);
  CHECK(o1.gamma1 > 0);
  CHECK(o1.gamma1 < 1);

  // Loaded-operator point near the admissibility edge.
  const CsfucResult o2 = csfuc(delta0(P2()) * X("0.9"), P2n(), kCal);
  CHECK(rel_err(o2.gamma1, "0.1969899127780366416186639") < 1e-22);
  CHECK(rel_err(o2.lnC1Delta, "129563100263241990.8529215") < 1e-22);
  CHECK(rel_err(o2.lnExact, "-6.234178123202175178448242e+6787434") < 1e-22);
  CHECK(rel_err(o2.exponentN, "3.933337713960506766534192e+6787433") < 1e-22);

  // Finite-cube reflection factor.
  const CsfucResult o3 = csfuc(d0 / 2, P1(), kCal, false, true);
  CHECK(rel_err(o3.lnExact, "-3.162091588192109074097916e+6398") < 1e-22);
  CHECK(rel_err(o3.exponentN, "3.092477511475810641875225e+6397") < 1e-22);
  CHECK(rel_err(o3.lnExact - o1.lnExact, "-6.120136239184993690516960e+6390") < 1e-22);

  // Homogeneous (eigenfunction) form with the effective potential in the V
  // slot coincides with the inhomogeneous form at V = 2, c = 0.
  ModelParams p1v2 = P1();
  p1v2.normV = 2.0;
  const CsfucResult o4h = csfuc(d0 / 2, p1v2, kCal, true);
  CHECK(rel_err(o4h.lnExact, "-3.162091526990718723593272e+6398") < 1e-22);
  CHECK(rel_err(o4h.exponentN, "3.092477451621781101194575e+6397") < 1e-22);
  const CsfucResult o4 = csfuc(d0 / 2, p1v2, kCal, false);
  CHECK(rel_err(o4h.lnExact, o4.lnExact) < 1e-40);

  // Worst-parameter point: only the magnitude of the logarithm is checkable.
  const CsfucResult ow = csfuc(delta0(P3()) / 2, P3(), kCal);
  CHECK(rel_err(log(-ow.lnExact) / ln10(), "85337688251.94650950795285") < 1e-20);
  CHECK(rel_err(log(ow.exponentN) / ln10(), "85337688250.54304487030352") < 1e-20);
}

TEST_CASE("composed constant under the G-cell reduction", "[constants]") {
  ModelParams pG{1, 1.0, 0.0, 0.3, 0.2, 0.1, 2.0};
  const xreal dG = delta0(pG);
  CHECK(rel_err(dG, delta0(P1()) * 2) < 1e-40);

  const CsfucResult og = csfuc(dG / 2, pG, kCal);
  CHECK(rel_err(og.lnExact, "-3.162091526990732283534125e+6398") < 1e-22);
  CHECK(rel_err(og.exponentN, "3.092477451621794362610626e+6397") < 1e-22);

  // The reduction is an identity: evaluating the unit-G problem with the
  // pulled-back norms at the scaled radius gives the same constant, with the
  // exponent taken to the same base delta/G.
  ModelParams pUnit = scaled_params(pG);
  CHECK(pUnit.G == 1.0);
  CHECK(pUnit.normV == 0.3 * 4);
  CHECK(pUnit.normB == 0.2 * 2);
  CHECK(pUnit.normC == 0.1 * 4);
  const CsfucResult ou = csfuc(dG / 4, pUnit, kCal);
  CHECK(rel_err(ou.lnExact, og.lnExact) < 1e-40);
  CHECK(rel_err(ou.exponentN, og.exponentN) < 1e-40);
}

TEST_CASE("composed constant is monotone in delta; exponent shrinks with V", "[constants]") {
  const xreal d0 = delta0(P1());
  const CsfucResult a = csfuc(d0 * X("0.2"), P1(), kCal);
  const CsfucResult b = csfuc(d0 * X("0.5"), P1(), kCal);
  const CsfucResult c = csfuc(d0 * X("0.8"), P1(), kCal);
  const CsfucResult d = csfuc(d0 * X("0.99"), P1(), kCal);
  CHECK(rel_err(a.lnExact, "-3.6678686882069066545e+6398") < 1e-18);
  CHECK(rel_err(b.lnExact, "-3.1620915269907466822e+6398") < 1e-18);
  CHECK(rel_err(c.lnExact, "-2.9026573833374753491e+6398") < 1e-18);
  CHECK(rel_err(d.lnExact, "-2.7850334918792531646e+6398") < 1e-18);
  CHECK(a.lnExact < b.lnExact);
  CHECK(b.lnExact < c.lnExact);
  CHECK(c.lnExact < d.lnExact);

  // Realized-exponent ordering at fixed delta: loading the potential slot
  // lowers the exponent (the constant itself still weakens through C1).
  ModelParams p1v1 = P1();
  p1v1.normV = 1.0;
  const CsfucResult v1 = csfuc(d0 / 2, p1v1, kCal);
  CHECK(rel_err(v1.exponentN, "3.0924774516218016085e+6397") < 1e-18);
  CHECK(v1.exponentN < b.exponentN);
}

TEST_CASE("spectral application thresholds compose from the realized exponent", "[constants]") {
  const xreal d0 = delta0(P1());
  const xreal delta = d0 / 2;
  const xreal lnDelta = log(delta);

  const ApplicationKappas k0 = application_kappas(P1(), kCal, delta, 0.0, 0.0);
  CHECK(rel_err(k0.NrealZero, "3.092477451621808444333924e+6397") < 1e-22);
  CHECK(rel_err(k0.Mreal, k0.NrealZero) < 1e-40);
  CHECK(rel_err(k0.lnKappaShort, "-3.162091526990746682247979e+6398") < 1e-22);
  CHECK(rel_err(k0.lnKappaLow, log(xreal(1) / 4) + 3 * k0.NrealZero * lnDelta) < 1e-30);
  CHECK(rel_err(k0.lnKappaLip, log(xreal(1) / 2) + 2 * k0.Mreal * lnDelta) < 1e-30);

  // E0 enters the short-interval threshold through the potential slot.
  const ApplicationKappas k2 = application_kappas(P1(), kCal, delta, 2.0, 0.0);
  CHECK(rel_err(k2.lnKappaShort, "-3.162091526990718723593272e+6398") < 1e-22);

  // Loaded shape factors, evaluated against the printed closed forms.
  ModelParams pl = P1();
  pl.normB = 0.3;
  pl.normC = 0.5;
  const ApplicationKappas kl = application_kappas(pl, kCal, delta, 0.0, 1.5);
  const xreal twoThirds = xreal(2) / 3;
  // Reconstruct from the stored doubles: the parameters enter as binary
  // doubles, so decimal string literals would differ in the 17th digit.
  const xreal shapeLow = 3 + pow(xreal(1.5), twoThirds) + pow(xreal(pl.normC), twoThirds) +
                         xreal(pl.normB) * pl.normB;
  CHECK(rel_err(kl.lnKappaLow, log(xreal(1) / 4) + kl.NrealZero * shapeLow * lnDelta) < 1e-30);
  CHECK(rel_err(kl.NrealZero, k0.NrealZero) < 1e-40);
}

TEST_CASE("control cost closed form", "[constants]") {
  const xreal d0 = delta0(P1());
  const xreal delta = d0 / 2;
  const ApplicationKappas k0 = application_kappas(P1(), kCal, delta, 0.0, 0.0);

  const xreal atT2 = control_cost(2.0, delta, P1(), kCal);
  CHECK(rel_err(atT2, -xreal(1.5) * k0.NrealZero * log(delta)) < 1e-30);

  // The sqrt(2/T) term sits thousands of orders below the exponent term, so
  // at 60 digits it is absorbed exactly: within the admissible parameter
  // range T affects the returned value only through the domain check.
  const xreal atT8 = control_cost(8.0, delta, P1(), kCal);
  CHECK(atT8 == atT2);

  CHECK_THROWS_AS(control_cost(0.0, delta, P1(), kCal), std::invalid_argument);
}
