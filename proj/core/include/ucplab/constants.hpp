// ucplab: exact evaluation of the quantitative unique-continuation constants.
//
// Every operation evaluates a printed formula verbatim in extended precision.
// Values that overflow any linear float (the chained interpolation constants
// and the final sampling constant) are carried as natural logarithms; all
// such fields and returns are named ln*.
#pragma once

#include "ucplab/params.hpp"
#include "ucplab/xreal.hpp"

#include <utility>

namespace ucplab {

// Constants of the three-annuli inequality
//   alpha^3 |psi|^2_{Z2} <= D1 (R2 mu1 thetaE / r1)^{2 alpha} |psi|^2_{Z1}
//                         + D2 (R2 mu1 thetaE / r3)^{2 alpha} |psi|^2_{Z3}
//                         + D3 (R2 mu1 thetaE / r1)^{2 alpha} |zeta|^2_{B(R3)}
// valid for alpha >= alphaStar.
struct ThreeAnnuliConstants {
  xreal D1, D2, D3;
  xreal alphaStar;  // >= 1
  xreal mu, mu1;    // weight pair at (R3, eps)
};

// Constants of the chained interpolation inequality. C1 and C2 overflow any
// linear representation for small radii, so their logarithms are stored;
// gamma2 coincides with gamma here because the chaining runs over the same
// radii set that defines the one-step constant.
struct ChainConstants {
  xreal gamma;      // in (0,1)
  xreal lnC1;       // ln C1(gamma)
  xreal gamma2;     // == gamma
  xreal lnC2;       // ln C2(gamma2), astronomically large
  long long m = 0;  // chain length, even
  xreal N;          // covering count, exact integer (can exceed int64)
  xreal M;          // cube count (2 R3 + 2a + 1)^d
  xreal a;          // chain margin (R2 + 3 r2)/4
};

// The composed sampling constant C_sfUC = delta^exponentN, in log domain.
struct CsfucResult {
  xreal lnExact;    // ln C_sfUC < 0
  xreal exponentN;  // lnExact / ln(delta_unit); delta^exponentN == exact
  // diagnostics of the two interpolation legs
  xreal gamma1;     // delta-leg exponent, in (0,1)
  xreal lnC1Delta;  // ln C1^delta(gamma1)
  ChainConstants fixedLeg;
};

// Spectral-application thresholds, log domain (see application_kappas).
struct ApplicationKappas {
  xreal lnKappaShort;  // short-interval uncertainty threshold
  xreal lnKappaLow;    // low-lying lifting threshold, carries the 1/4 factor
  xreal lnKappaLip;    // Lipschitz-coefficient variant, carries the 1/2 factor
  xreal NrealZero;     // realized exponent at zero norms (shared base)
  xreal Mreal;         // realized dimension-only exponent for the Lip variant
};

enum class RadiiVariant { laplacian, interp_delta, chain_fixed };

// Critical sensing radius delta0 = (330 d e^2 thetaE^{11/2} (thetaE+1)^{5/2}
// (thetaL+1))^{-1}; for G != 1 the scaled version
// G * (330 d e^2 thetaE^{11/2} (thetaE+1)^{5/2} (G thetaL + 1))^{-1}.
xreal delta0(const ModelParams& p);

// Weight pair: mu = 33 d R3 thetaE^{11/2} thetaL + eps and
// mu1 = exp(mu sqrt(thetaE)) if mu sqrt(thetaE) <= 1, else e mu sqrt(thetaE).
std::pair<xreal, xreal> mu_pair(const xreal& R3, const xreal& eps, const ModelParams& p);

// Cacciopoli constant F_kappa = 1 + 2|V|^2 + 2|b|^2 + 2|c| + 8 thetaE^2 C'/kappa^2.
xreal cacciopoli_F(const xreal& kappa, const ModelParams& p, const CalibrationConstants& cal);

// Carleman constants (C, alpha0) for the general operator:
//   Ctilde = 2 d^2 thetaE^8 e^{4 mu sqrt(thetaE)} mu1^4
//            (3 mu^2 + (9 rho thetaL + 3) mu + 1) / Cmu,   C = 6 Ctilde,
//   alpha0 = max{alphaTilde0, C rho^2 |b|^2 thetaE^{3/2},
//                C^{1/3} rho^{4/3} |c|^{2/3} sqrt(thetaE)}
// with Cmu = mu - 33 d thetaE^{11/2} thetaL rho, required > 0.
std::pair<xreal, xreal> carleman_constants(const xreal& rho, const xreal& mu,
                                           const xreal& mu1, const ModelParams& p);

// D1, D2, D3, alphaStar, mu, mu1 for the given radii. Throws if the Carleman
// precondition Cmu > 0 fails at rho = R3.
ThreeAnnuliConstants three_annuli_constants(const AnnuliRadii& radii, const ModelParams& p,
                                            const CalibrationConstants& cal);

// Standard radii families (eps = 1 throughout):
//  - laplacian:   r1 = delta/2, R1 = delta, r2 = 1, R2 = 3 sqrt(d),
//                 r3 = 6 e sqrt(d), R3 = 9 e sqrt(d); requires 0 < delta <= 1.
//  - interp_delta: canonical R3 = (33 e d thetaE^{11/2}(thetaL+1))^{-1},
//                 R2 = R3/(2 e (thetaE+1)^{5/2}), r3 = R3/(thetaE+1),
//                 r2 = R2/5, r1 = delta/2, R1 = delta; requires
//                 0 < delta <= delta0(p).
//  - chain_fixed: canonical as above with r1 = r2/2, R1 = r2.
// For G != 1 the canonical radii are those of the unit-rescaled problem and
// the delta argument is interpreted on the original scale (divided by G).
AnnuliRadii standard_radii(const ModelParams& p, RadiiVariant variant, const xreal& delta = 0);

// True iff mu1 < r3/(R2 thetaE) (strict) and (mu1 R2 thetaE)^2 >= r1 r3,
// with mu1 from mu_pair(R3, eps, p).
bool check_assumption_radii(const AnnuliRadii& radii, const ModelParams& p);

// One-step interpolation constant C1(gamma) = 2 (D1~/D2~)^gamma
// max{D2~, (r3/r1)^{2 gamma alphaStar}} with gamma =
// ln(r3/(R2 mu1 thetaE)) / ln(r3/r1), and its chained composition
// C2 = C1^{gamma^{-1}+...+gamma^{-m+1}} M^{gamma^{1-m}-1} N^{gamma^{1-m}},
// m = 2 floor(2 sqrt(d)/(R2-r2)) + 2, N = ceil(4 sqrt(d)/(R2-r2))^d,
// M = (2 R3 + 2a + 1)^d, a = (R2 + 3 r2)/4.
// Requires check_assumption_radii(radii, p).
ChainConstants chain_constants(const AnnuliRadii& radii, const ModelParams& p,
                               const CalibrationConstants& cal);

// The exact composed sampling constant for sensing radius delta in (0, delta0):
//   exact = C1^delta(gamma1)^{-1/gamma1} C2(gamma2)^{-1/gamma1} M^{1-1/gamma1}
// with the delta-leg radii (r1 = delta/2, R1 = delta, canonical rest) and the
// fixed-leg composition from chain_constants. homogeneous = true treats the
// normV slot as |V - c| and drops the c term (eigenfunction form H psi = V psi).
// cube = true multiplies in the finite-cube reflection factor
// (9^{-d gamma2^{1-m}} 9^d)^{1/gamma1}. For G != 1 everything is evaluated on
// the unit-rescaled problem and exponentN is taken to base delta/G.
CsfucResult csfuc(const xreal& delta, const ModelParams& p, const CalibrationConstants& cal,
                  bool homogeneous = false, bool cube = false);

// Realized spectral-application thresholds at sensing radius delta:
//   kappaShort = exact composed constant with normV := |E0|
//                (threshold for the short-interval uncertainty relation),
//   kappaLow   = 1/4 * delta^{Nreal (3 + |lambda1|^{2/3} + |c|^{2/3} + |b|^2)},
//   kappaLip   = 1/2 * delta^{Mreal (1 + |lambda1/thetaEminus|^{2/3}
//                + thetaEminus^{-2/3} + |c/thetaEminus|^{2/3}
//                + |b/thetaEminus|^2)}
// where Nreal is the realized zero-norm exponent of csfuc at these (d, thetaE,
// thetaL, delta), Mreal the same at thetaE = 1, thetaL = 0 (dimension-only
// surrogate, realized not universal), and thetaEminus = 1/thetaE.
ApplicationKappas application_kappas(const ModelParams& p, const CalibrationConstants& cal,
                                     const xreal& delta, double E0, double lambda1);

// ln of the control-cost bound sqrt(2/T) * delta^{-(Nreal/2)(3 + |c|^{2/3} + |b|^2)}
// (ground energy 0 assumed by the caller). Log domain: the bound itself
// overflows any float.
xreal control_cost(double T, const xreal& delta, const ModelParams& p,
                   const CalibrationConstants& cal);

}  // namespace ucplab
