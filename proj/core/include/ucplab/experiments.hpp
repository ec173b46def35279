// ucplab: desk-scale verification harness.
//
// Each experiment checks inequalities whose theoretical side is recomputed
// from the constants module at run time. The composed bounds routinely
// overflow binary64 in both directions, so every case carries its observed
// quantity and bound in log domain alongside the linear value.
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ucplab/constants.hpp"
#include "ucplab/discrete.hpp"
#include "ucplab/fields.hpp"
#include "ucplab/geometry.hpp"
#include "ucplab/grid.hpp"
#include "ucplab/params.hpp"
#include "ucplab/xreal.hpp"

namespace ucplab {

// One checked inequality or identity. Sign convention: geq == true means the
// case passes iff observed >= bound, geq == false iff observed <= bound;
// marginLog10 is oriented so that it is >= 0 exactly on a pass. boundTag is a
// stable identifier of the bound family so reports can be grouped without
// re-deriving which estimate produced the number.
struct ExperimentCase {
  std::string id;
  std::vector<std::pair<std::string, double>> inputs;
  double observed = 0.0;
  xreal lnObserved = 0;
  xreal lnBound = 0;
  std::string boundTag;
  bool geq = true;
  bool pass = false;
  bool vacuous = false;  // hypothesis empty: auto-pass, flagged
  xreal marginLog10 = 0;
  // Sweep abscissa for plot-data emission; NaN keeps the case out of .dat.
  double datX = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

struct ExperimentReport {
  std::string name;
  std::vector<ExperimentCase> cases;
  std::vector<std::pair<std::string, std::string>> summary;
  // Raw per-draw table for external fitting (Monte Carlo sweeps).
  std::vector<std::string> rawHeader;
  std::vector<std::vector<double>> rawRows;

  bool all_pass() const;
  long long failures() const;
  const ExperimentCase* first_failure() const;
  // Deterministic merge order: lexicographic case id (stable).
  void sort_cases();
  void add(ExperimentCase c) { cases.push_back(std::move(c)); }
};

// Helper shared by the experiments: an inequality case in log domain.
// observedLinear may be 0 or negative; then lnObserved is pinned far below
// any bound and a geq case fails honestly.
ExperimentCase make_case(std::string id, double observedLinear, const xreal& lnBound,
                         std::string boundTag, bool geq);

// Shared configuration of the operator-based experiments. n == 0 resolves the
// grid to the default spacings h = 1/64 (d = 1) and h = 1/8 (d = 2, keeping
// the largest cube at 63 interior nodes per axis).
struct ExperimentConfig {
  int d = 1;
  double L = 8.0;
  int n = 0;
  std::string generator = "identity";  // identity | homogenization | crossterm | constant_offdiag
  double genParam = 0.0;
  std::vector<double> deltas{0.05, 0.1, 0.2};
  std::vector<double> ts{0.25, 0.5, 1.0};
  int k = 5;
  PlacementMode mode = PlacementMode::centered;
  std::uint64_t seed = 1;
  int threads = 1;
  int quadNodes = 41;  // trapezoid resolution of the lifting integral identity
  double tol = 1e-10;
  // The admissible sensing radius delta0 sits near 1e-4 for unit parameters,
  // far below any grid-resolvable delta. With capDelta the theoretical bound
  // is evaluated at delta0*(1 - 1e-6) instead of the configured delta (the
  // capped bound is weaker than the true one for nested sensing sets, so the
  // comparison stays sound); each affected case is flagged. Without it, a
  // configured delta >= delta0 is a precondition violation.
  bool capDelta = false;
  CalibrationConstants cal;

  GridSpec grid() const;
  FieldGenerator make_generator() const;
  ModelParams model_params() const;  // declared generator bounds, G = 1
};

// Sampling bound on eigenfunctions: for each computed pair (lambda_k, psi_k)
// the masked mass rho_k = |psi_k|^2_mask (unit normalization) is compared
// against the exact composed sampling constant, evaluated in the homogeneous
// eigenfunction form with the potential slot |lambda_k| + |c| + |V|. Also
// records rho_k + delta^2 |residual_k|^2 (the statement's left-hand side),
// nested-mask monotonicity in delta (centered placements), and the empirical
// delta-scaling exponent of rho.
ExperimentReport observability_experiment(const ExperimentConfig& cfg);

// Eigenvalue lifting under the sensing-mask perturbation t*W: checks
// lambda_1(t) - lambda_1(0) >= (3t/4)*kappa for every (delta, t), min-max
// monotonicity of lambda_1 along the t grid, the first-order perturbation
// pairing at h_t in {1e-2, 5e-3}, and the integral identity
// lambda_1(T) - lambda_1(0) = integral of <psi_1(r), W psi_1(r)> dr by
// trapezoid quadrature to 1e-4 relative.
ExperimentReport lifting_experiment(const ExperimentConfig& cfg);

// Uncertainty relation on the short interval [E0 - sqrt(kappa),
// E0 + sqrt(kappa)]: sampled states psi from the resolved spectral window
// must satisfy <psi, W psi> >= (3/4) kappa. A non-finite E0 selects the
// computed ground energy (guaranteeing a nonvacuous window); empty windows
// auto-pass and are flagged.
ExperimentReport short_interval_uncertainty(const ExperimentConfig& cfg, double E0);

// Dense brute force of the two abstract spectral lemmas on random n x n
// matrices (n <= 12): the bottom-shift bound lambda_1(A+B) >= lambda_1(A) +
// the smallest eigenvalue of the compression of B onto the spectral subspace
// of A+B near its bottom, and the projected-operator bound chi_I T3 chi_I >=
// ((gamma(t) - E0)/t) chi_I as PSD-ness at tolerance -1e-10.
ExperimentReport abstract_lemma_tests(int n, long long trials, std::uint64_t seed,
                                      int threads = 1);

// Random potential on the integer lattice: breather bumps chi_B(omega_j, j)
// or alloy bumps omega_j * chi_B(1/2, j), with omega_j iid uniform on
// [omegaMinus, omegaPlus].
struct RandomModelConfig {
  std::string model = "breather";  // breather | alloy
  int d = 1;
  double omegaMinus = 0.0;
  double omegaPlus = 0.25;
  // Bump-shape record (condition constants of the single-site profile).
  double Gu = 1.0, uMax = 1.0, alpha1 = 1.0, alpha2 = 0.0, beta1 = 0.5, beta2 = 1.0;
  int samples = 200;
  std::uint64_t seed = 1;
  int threads = 1;

  // Breather: G_u = u_max = alpha1 = beta2 = 1, alpha2 = 0, beta1 = 1/2.
  // Alloy: alpha1 = alpha2 = 1, beta2 = 0.
  void apply_model_defaults();
  void validate() const;
};

// Monte Carlo eigenvalue counting in [E - eps, E + eps]: per-sample
// eigenvalue monotonicity under a componentwise disorder increase (exact up
// to solver resolution), mean count nondecreasing in eps, and a positive
// log-log slope over the central eps decade (bootstrap CI excluding 0). The
// per-draw counts are kept as raw rows for external fitting. The quantitative
// Hoelder exponent of the reference estimate is out of reach at desk scale
// and is deliberately not checked; this validates the shape only.
ExperimentReport wegner_monte_carlo(const RandomModelConfig& rcfg, const std::vector<double>& Ls,
                                    const std::vector<double>& epsilons, double E);

// Three-annuli inequality for a computed eigenpair: discrete annulus norms
// around the given center, the residual vector standing in for the
// inhomogeneity, constants recomputed at the potential bound |lambda|.
// Checked at alpha = f * alphaStar for every factor f (the inequality is
// stated for all alpha >= alphaStar). Throws if B(center, R3) exits the cube.
ExperimentReport three_annuli_empirical(const CoefficientField& field, const Eigen::VectorXd& psi,
                                        double lambda, const Eigen::VectorXd& center,
                                        const AnnuliRadii& radii, const CalibrationConstants& cal,
                                        const std::vector<double>& alphaFactors = {1.0});

// Canned d = 1 driver: pure second-difference field on a cube wide enough to
// hold the reference radii scaled by 0.15, ground and first excited state,
// alpha factors {1, 2, 4}.
ExperimentReport three_annuli_suite(const CalibrationConstants& cal);

struct WeightEval {
  std::vector<double> w;      // weight values per point
  std::vector<double> sigma;  // sigma(x/rho) per point
  double worstSlack = 0.0;    // most negative slack across the bound chain
  bool chainOk = true;        // all slacks >= -1e-12
};

// Carleman weight w = phi(sigma(x/rho)) via the alternating series
// integral_0^r (1 - e^{-mu t})/t dt = sum_{k>=1} (-1)^{k+1} (mu r)^k/(k k!),
// truncated below 1e-14. Verifies the pointwise chain
//   thetaE^{-1/2} |x|/(rho mu1) <= sigma/mu1 <= w <= sigma <= thetaE^{1/2} |x|/rho
// (sigma meaning sigma(x/rho)) with thetaE read off the spectrum of A0.
// Throws std::invalid_argument if A0 is not symmetric positive definite or a
// point leaves the closed ball B(rho).
WeightEval carleman_weight_eval(double rho, double mu, const Eigen::MatrixXd& A0,
                                const std::vector<Eigen::VectorXd>& points);

// Report wrapper: seeded uniform points in B(rho), chain slack aggregated.
ExperimentReport carleman_weight_experiment(double rho, double mu, const Eigen::MatrixXd& A0,
                                            int numPoints, std::uint64_t seed);

}  // namespace ucplab
