#include "ucplab/constants.hpp"

#include <algorithm>
#include <stdexcept>

namespace ucplab {

namespace {

// thetaE^{11/2} appears in nearly every formula.
xreal theta_e_115(const ModelParams& p) { return pow(xreal(p.thetaE), xreal(11) / 2); }

struct CanonicalRadii {
  xreal r2, R2, r3, R3;
};

// Canonical radii of the unit-cell analysis:
//   R3 = (33 e d thetaE^{11/2} (thetaL+1))^{-1}, R2 = R3/(2 e (thetaE+1)^{5/2}),
//   r3 = R3/(thetaE+1), r2 = R2/5.
CanonicalRadii canonical_radii(const ModelParams& p) {
  const xreal tE = p.thetaE;
  CanonicalRadii c;
  c.R3 = 1 / (33 * euler_e() * p.d * theta_e_115(p) * (xreal(p.thetaL) + 1));
  c.R2 = c.R3 / (2 * euler_e() * pow(tE + 1, xreal(5) / 2));
  c.r3 = c.R3 / (tE + 1);
  c.r2 = c.R2 / 5;
  return c;
}

// ln C1(gamma) = ln 2 + gamma ln(D1~/D2~) + max{ln D2~, 2 gamma alphaStar ln(r3/r1)}.
xreal ln_chain_c1(const xreal& gamma, const xreal& D1, const xreal& D2, const xreal& alphaStar,
                  const xreal& r3, const xreal& r1) {
  const xreal D1t = std::max(xreal(1), D1);
  const xreal D2t = std::max(xreal(1), D2);
  return log(xreal(2)) + gamma * log(D1t / D2t) +
         std::max(log(D2t), 2 * gamma * alphaStar * log(r3 / r1));
}

}  // namespace

xreal delta0(const ModelParams& p) {
  p.validate();
  const xreal tE = p.thetaE;
  return xreal(p.G) / (330 * p.d * euler_e() * euler_e() * theta_e_115(p) *
                       pow(tE + 1, xreal(5) / 2) * (xreal(p.G) * p.thetaL + 1));
}

std::pair<xreal, xreal> mu_pair(const xreal& R3, const xreal& eps, const ModelParams& p) {
  p.validate();
  if (!(R3 > 0)) throw std::invalid_argument("mu_pair: R3 must be > 0");
  if (!(eps > 0)) throw std::invalid_argument("mu_pair: eps must be > 0");
  const xreal mu = 33 * p.d * R3 * theta_e_115(p) * p.thetaL + eps;
  const xreal x = mu * sqrt(xreal(p.thetaE));
  const xreal mu1 = (x <= 1) ? exp(x) : euler_e() * x;
  return {mu, mu1};
}

xreal cacciopoli_F(const xreal& kappa, const ModelParams& p, const CalibrationConstants& cal) {
  p.validate();
  cal.validate();
  if (!(kappa > 0)) throw std::domain_error("cacciopoli_F: kappa must be > 0");
  const xreal tE = p.thetaE;
  return 1 + 2 * xreal(p.normV) * p.normV + 2 * xreal(p.normB) * p.normB + 2 * xreal(p.normC) +
         8 * tE * tE * cal.cacciopoliCPrime / (kappa * kappa);
}

std::pair<xreal, xreal> carleman_constants(const xreal& rho, const xreal& mu, const xreal& mu1,
                                           const ModelParams& p) {
  p.validate();
  const xreal tE = p.thetaE;
  const xreal Cmu = mu - 33 * p.d * theta_e_115(p) * p.thetaL * rho;
  if (!(Cmu > 0))
    throw std::domain_error("carleman_constants: mu too small for rho (need mu > 33 d thetaE^{11/2} thetaL rho)");
  const xreal srtE = sqrt(tE);
  const xreal Ctilde = 2 * p.d * p.d * pow(tE, 8) * exp(4 * mu * srtE) * pow(mu1, 4) *
                       (3 * mu * mu + (9 * rho * p.thetaL + 3) * mu + 1) / Cmu;
  const xreal alphaTilde0 = 11 * pow(xreal(p.d), 4) * pow(tE, xreal(33) / 2) * exp(6 * mu * srtE) *
                            pow(mu1, 6) * pow(3 * rho * p.thetaL + mu + 1, 2) *
                            (1 + mu * (mu + 1) / Cmu);
  const xreal C = 6 * Ctilde;
  const xreal alpha0 =
      std::max({alphaTilde0, C * rho * rho * xreal(p.normB) * p.normB * pow(tE, xreal(3) / 2),
                pow(C, xreal(1) / 3) * pow(rho, xreal(4) / 3) *
                    pow(xreal(p.normC), xreal(2) / 3) * srtE});
  return {C, alpha0};
}

ThreeAnnuliConstants three_annuli_constants(const AnnuliRadii& radii, const ModelParams& p,
                                            const CalibrationConstants& cal) {
  radii.validate();
  p.validate();
  cal.validate();
  const xreal tE = p.thetaE;
  const xreal rho = radii.R3;
  ThreeAnnuliConstants out;
  std::tie(out.mu, out.mu1) = mu_pair(radii.R3, radii.eps, p);
  const auto [C, alpha0] = carleman_constants(rho, out.mu, out.mu1, p);
  const xreal alpha1 =
      pow(16 * pow(rho, 4) * C * xreal(p.normV) * p.normV * pow(tE, xreal(3) / 2), xreal(1) / 3);
  out.alphaStar = std::max({alpha0, alpha1, xreal(1)});

  const xreal r1p = radii.r1 + (radii.R1 - radii.r1) / 4;
  const xreal r3p = radii.r3 + (radii.R3 - radii.r3) / 4;
  const xreal Th1 = xreal(cal.cutoffTheta) / pow(radii.R1 - radii.r1, 2);
  const xreal Th3 = xreal(cal.cutoffTheta) / pow(radii.R3 - radii.r3, 2);
  const xreal F1 = cacciopoli_F((radii.R1 - radii.r1) / 4, p, cal);
  const xreal F3 = cacciopoli_F((radii.R3 - radii.r3) / 4, p, cal);
  const xreal firstOrder = 3 * pow(xreal(p.thetaL) * p.d * p.d + p.normB, 2);
  const xreal pref = xreal(24) / 5 * radii.R3 * C / sqrt(tE) / (out.mu1 * out.mu1) * radii.R2;

  out.D1 = pref * r1p * r1p * Th1 * Th1 *
           (3 * tE * tE + 12 * tE * tE * p.d * p.d / (r1p * r1p) + firstOrder + 4 * tE * F1);
  out.D2 = pref * r3p * r3p * Th3 * Th3 *
           (3 * tE * tE + 12 * tE * tE * p.d * p.d / (r3p * r3p) + firstOrder + 4 * tE * F3);
  out.D3 = pref * r1p * r1p * (8 * (Th1 * Th1 + Th3 * Th3) * tE + 2);
  return out;
}

AnnuliRadii standard_radii(const ModelParams& p, RadiiVariant variant, const xreal& delta) {
  p.validate();
  AnnuliRadii r;
  r.eps = 1;
  if (variant == RadiiVariant::laplacian) {
    if (!(delta > 0 && delta <= 1))
      throw std::invalid_argument("standard_radii: laplacian variant needs 0 < delta <= 1");
    const xreal sd = sqrt(xreal(p.d));
    r.r1 = delta / 2;
    r.R1 = delta;
    r.r2 = 1;
    r.R2 = 3 * sd;
    r.r3 = 6 * euler_e() * sd;
    r.R3 = 9 * euler_e() * sd;
    r.validate();
    return r;
  }
  const ModelParams pu = scaled_params(p);
  const CanonicalRadii c = canonical_radii(pu);
  r.r2 = c.r2;
  r.R2 = c.R2;
  r.r3 = c.r3;
  r.R3 = c.R3;
  if (variant == RadiiVariant::chain_fixed) {
    r.r1 = c.r2 / 2;
    r.R1 = c.r2;
  } else {
    const xreal du = delta / p.G;  // delta is on the original scale
    if (!(du > 0 && du <= c.r2))
      throw std::invalid_argument("standard_radii: interp_delta needs 0 < delta <= delta0(p)");
    r.r1 = du / 2;
    r.R1 = du;
  }
  r.validate();
  return r;
}

bool check_assumption_radii(const AnnuliRadii& radii, const ModelParams& p) {
  radii.validate();
  p.validate();
  const auto [mu, mu1] = mu_pair(radii.R3, radii.eps, p);
  (void)mu;
  const xreal tE = p.thetaE;
  const bool first = mu1 < radii.r3 / (radii.R2 * tE);
  const xreal s = mu1 * radii.R2 * tE;
  const bool second = s * s >= radii.r1 * radii.r3;
  return first && second;
}

ChainConstants chain_constants(const AnnuliRadii& radii, const ModelParams& p,
                               const CalibrationConstants& cal) {
  if (!check_assumption_radii(radii, p))
    throw std::invalid_argument("chain_constants: radii fail the interpolation assumption");
  const ThreeAnnuliConstants tac = three_annuli_constants(radii, p, cal);
  const xreal tE = p.thetaE;

  ChainConstants out;
  out.gamma = log(radii.r3 / (radii.R2 * tac.mu1 * tE)) / log(radii.r3 / radii.r1);
  out.gamma2 = out.gamma;
  out.lnC1 = ln_chain_c1(out.gamma, tac.D1, tac.D2, tac.alphaStar, radii.r3, radii.r1);

  const xreal band = radii.R2 - radii.r2;
  const xreal sd = sqrt(xreal(p.d));
  out.m = 2 * floor(2 * sd / band).convert_to<long long>() + 2;
  out.N = pow(ceil(4 * sd / band), p.d);
  out.a = (radii.R2 + 3 * radii.r2) / 4;
  out.M = pow(2 * radii.R3 + 2 * out.a + 1, p.d);

  // gamma2^{1-m} and the closed-form exponent sum sum_{i=1}^{m-1} gamma2^{-i};
  // m reaches ~1e10 on admissible inputs, so the sum is never looped.
  const xreal gpow = exp(xreal(1 - out.m) * log(out.gamma2));
  const xreal S = (gpow - 1) / (1 - out.gamma2);
  out.lnC2 = S * out.lnC1 + (gpow - 1) * log(out.M) + gpow * log(out.N);
  return out;
}

CsfucResult csfuc(const xreal& delta, const ModelParams& p, const CalibrationConstants& cal,
                  bool homogeneous, bool cube) {
  p.validate();
  cal.validate();
  ModelParams pu = scaled_params(p);
  if (homogeneous) pu.normC = 0;  // normV already carries |V - c|
  const xreal du = delta / p.G;
  const CanonicalRadii c = canonical_radii(pu);
  if (!(du > 0 && du < c.r2))
    throw std::invalid_argument("csfuc: need 0 < delta < delta0(p)");

  AnnuliRadii deltaLeg;
  deltaLeg.eps = 1;
  deltaLeg.r1 = du / 2;
  deltaLeg.R1 = du;
  deltaLeg.r2 = c.r2;
  deltaLeg.R2 = c.R2;
  deltaLeg.r3 = c.r3;
  deltaLeg.R3 = c.R3;
  const ThreeAnnuliConstants tacDelta = three_annuli_constants(deltaLeg, pu, cal);

  CsfucResult out;
  out.gamma1 = log(c.r3 / (c.R2 * tacDelta.mu1 * pu.thetaE)) / log(2 * c.r3 / du);
  out.lnC1Delta =
      ln_chain_c1(out.gamma1, tacDelta.D1, tacDelta.D2, tacDelta.alphaStar, c.r3, deltaLeg.r1);

  AnnuliRadii fixedLeg = deltaLeg;
  fixedLeg.r1 = c.r2 / 2;
  fixedLeg.R1 = c.r2;
  out.fixedLeg = chain_constants(fixedLeg, pu, cal);

  out.lnExact = -(out.lnC1Delta + out.fixedLeg.lnC2) / out.gamma1 +
                (1 - 1 / out.gamma1) * log(out.fixedLeg.M);
  if (cube) {
    const xreal gpow = exp(xreal(1 - out.fixedLeg.m) * log(out.fixedLeg.gamma2));
    out.lnExact += xreal(p.d) * log(xreal(9)) * (1 - gpow) / out.gamma1;
  }
  out.exponentN = out.lnExact / log(du);
  return out;
}

ApplicationKappas application_kappas(const ModelParams& p, const CalibrationConstants& cal,
                                     const xreal& delta, double E0, double lambda1) {
  p.validate();
  ApplicationKappas out;

  // Short-interval threshold: the exact composed constant with the constant
  // potential E0 in the V slot.
  ModelParams pShort = p;
  pShort.normV = std::abs(E0);
  out.lnKappaShort = csfuc(delta, pShort, cal).lnExact;

  // Realized zero-norm exponent N at these (d, thetaE, thetaL, delta).
  ModelParams pZero = p;
  pZero.normV = pZero.normB = pZero.normC = 0;
  out.NrealZero = csfuc(delta, pZero, cal).exponentN;

  const xreal lnDeltaUnit = log(delta / p.G);
  const xreal twoThirds = xreal(2) / 3;
  const xreal shapeLow = 3 + pow(xreal(std::abs(lambda1)), twoThirds) +
                         pow(xreal(p.normC), twoThirds) + xreal(p.normB) * p.normB;
  out.lnKappaLow = log(xreal(1) / 4) + out.NrealZero * shapeLow * lnDeltaUnit;

  // Dimension-only surrogate exponent: realized at thetaE = 1, thetaL = 0.
  ModelParams pDim = pZero;
  pDim.thetaE = 1.0;
  pDim.thetaL = 0.0;
  out.Mreal = csfuc(delta, pDim, cal).exponentN;

  const xreal tEm = xreal(1) / p.thetaE;  // lower ellipticity from the two-sided bound
  const xreal shapeLip = 1 + pow(abs(xreal(lambda1) / tEm), twoThirds) +
                         pow(tEm, -twoThirds) + pow(xreal(p.normC) / tEm, twoThirds) +
                         pow(xreal(p.normB) / tEm, 2);
  out.lnKappaLip = log(xreal(1) / 2) + out.Mreal * shapeLip * lnDeltaUnit;
  return out;
}

xreal control_cost(double T, const xreal& delta, const ModelParams& p,
                   const CalibrationConstants& cal) {
  if (!(T > 0)) throw std::invalid_argument("control_cost: T must be > 0");
  ModelParams pZero = p;
  pZero.normV = pZero.normB = pZero.normC = 0;
  const xreal Nreal = csfuc(delta, pZero, cal).exponentN;
  const xreal twoThirds = xreal(2) / 3;
  const xreal shape = 3 + pow(xreal(p.normC), twoThirds) + xreal(p.normB) * p.normB;
  return log(sqrt(2 / xreal(T))) - (Nreal / 2) * shape * log(delta / p.G);
}

}  // namespace ucplab
