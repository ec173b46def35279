#include "ucplab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ucplab {

namespace {

// ln for log-domain comparison; nonpositive values get -inf so that a geq
// case fails honestly instead of throwing. Finite sentinels are not safe
// here: legitimate logarithms in this pipeline reach past 1e10 digits.
xreal ln_pos(double v) {
  if (v > 0) return log(xreal(v));
  return -std::numeric_limits<xreal>::infinity();
}

std::string num(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

std::string num(long long v) { return std::to_string(v); }

template <class F>
void parallel_for(long long count, int threads, F&& body) {
  threads = std::max(1, threads);
  if (threads == 1 || count <= 1) {
    for (long long i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<long long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&]() {
      for (;;) {
        const long long i = next.fetch_add(1);
        if (i >= count) return;
        body(i);
      }
    });
  for (auto& th : pool) th.join();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1) + 0xBF58476D1CE4E5B9ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double masked_mass(const Eigen::MatrixXd& vecs, int col, const std::vector<std::uint8_t>& mask) {
  double m = 0;
  for (long long i = 0; i < vecs.rows(); ++i)
    if (mask[i]) m += vecs(i, col) * vecs(i, col);
  return m / vecs.col(col).squaredNorm();
}

double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / sxx;
}

// Slack case against an absolute floor: pass iff observed >= floor, with the
// margin measured relative to the floor's magnitude.
ExperimentCase slack_case(std::string id, double observed, double floor, std::string tag) {
  ExperimentCase c;
  c.id = std::move(id);
  c.observed = observed;
  c.boundTag = std::move(tag);
  c.geq = true;
  c.pass = observed >= floor;
  const double head = observed - floor;
  const double scale = std::max(std::abs(floor), 1e-12);
  c.lnObserved = ln_pos(head);
  c.lnBound = ln_pos(scale);
  c.marginLog10 = head > 0 ? (log(xreal(head)) - log(xreal(scale))) / ln10()
                           : (c.pass ? xreal(0) : xreal(-1));
  return c;
}

struct Bench {
  GridSpec grid;
  CoefficientField field;
  ModelParams p;
  xreal d0;
  bool dirOk = true;
};

Bench make_bench(const ExperimentConfig& cfg) {
  Bench b;
  b.grid = cfg.grid();
  b.field = sample_field(cfg.make_generator(), b.grid);
  b.p = cfg.model_params();
  b.d0 = delta0(b.p);
  b.dirOk = b.grid.d == 1 ? true : check_dir(b.field);
  return b;
}

// Effective radius for the theoretical bound; see ExperimentConfig::capDelta.
std::pair<double, bool> bound_delta(const ExperimentConfig& cfg, const xreal& d0, double delta,
                                    const char* what) {
  if (xreal(delta) < d0) return {delta, false};
  if (!cfg.capDelta) {
    std::ostringstream ss;
    ss << what << ": delta = " << delta << " is not below the admissible sensing radius delta0 = "
       << to_double(d0)
       << "; the sampling bound is stated only for delta < delta0. Set cap_delta to evaluate "
          "the bound at the capped radius instead.";
    throw std::invalid_argument(ss.str());
  }
  return {to_double(d0 * xreal(1.0 - 1e-6)), true};
}

ExperimentCase dir_case(const std::string& pfx, const Bench& b) {
  ExperimentCase c;
  c.id = pfx + "/dir-compliance";
  c.observed = b.dirOk ? 1.0 : 0.0;
  c.boundTag = "face-vanishing";
  c.pass = true;
  c.note = b.dirOk ? "off-diagonal entries vanish on the boundary sample"
                   : "face-vanishing assumption violated; results informational";
  return c;
}

}  // namespace

bool ExperimentReport::all_pass() const {
  for (const auto& c : cases)
    if (!c.pass) return false;
  return true;
}

long long ExperimentReport::failures() const {
  long long f = 0;
  for (const auto& c : cases)
    if (!c.pass) ++f;
  return f;
}

const ExperimentCase* ExperimentReport::first_failure() const {
  for (const auto& c : cases)
    if (!c.pass) return &c;
  return nullptr;
}

void ExperimentReport::sort_cases() {
  std::stable_sort(cases.begin(), cases.end(),
                   [](const ExperimentCase& a, const ExperimentCase& b) { return a.id < b.id; });
}

ExperimentCase make_case(std::string id, double observedLinear, const xreal& lnBound,
                         std::string boundTag, bool geq) {
  ExperimentCase c;
  c.id = std::move(id);
  c.observed = observedLinear;
  c.lnObserved = ln_pos(observedLinear);
  c.lnBound = lnBound;
  c.boundTag = std::move(boundTag);
  c.geq = geq;
  const xreal diff = geq ? c.lnObserved - c.lnBound : c.lnBound - c.lnObserved;
  c.pass = diff >= 0;
  c.marginLog10 = diff / ln10();
  return c;
}

GridSpec ExperimentConfig::grid() const {
  GridSpec g;
  g.d = d;
  g.L = L;
  if (n > 0) {
    g.n = n;
  } else {
    const int per = d == 1 ? 64 : d == 2 ? 8 : 4;
    g.n = static_cast<int>(std::lround(per * L)) - 1;
  }
  g.validate();
  return g;
}

FieldGenerator ExperimentConfig::make_generator() const {
  if (generator == "identity") return identity_generator(d);
  if (generator == "homogenization")
    return homogenization_generator(d, std::vector<double>(d, genParam));
  if (generator == "crossterm") {
    if (d != 2) throw std::invalid_argument("ExperimentConfig: crossterm generator requires d = 2");
    return crossterm_generator(L, genParam);
  }
  if (generator == "constant_offdiag") {
    if (d != 2)
      throw std::invalid_argument("ExperimentConfig: constant_offdiag generator requires d = 2");
    return constant_offdiag_generator(genParam);
  }
  throw std::invalid_argument("ExperimentConfig: unknown field generator '" + generator + "'");
}

ModelParams ExperimentConfig::model_params() const {
  const FieldGenerator g = make_generator();
  ModelParams p;
  p.d = d;
  p.thetaE = g.thetaE;
  p.thetaL = g.thetaL;
  p.normV = g.normV;
  p.normB = 0.0;
  p.normC = g.normC;
  p.G = 1.0;
  p.validate();
  return p;
}

ExperimentReport observability_experiment(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.name = "observe";
  Bench b = make_bench(cfg);
  const std::string pfx = "observe/d=" + num(static_cast<long long>(cfg.d)) + "/L=" + num(cfg.L);
  rep.add(dir_case(pfx, b));

  const DiscreteOperator op = assemble(b.field);
  const SpectralResult sr = eigs_lowest(op, cfg.k, cfg.tol, cfg.seed);

  std::vector<double> deltas = cfg.deltas;
  std::sort(deltas.begin(), deltas.end());
  std::vector<std::vector<double>> rho(cfg.k, std::vector<double>(deltas.size(), 0.0));

  for (std::size_t di = 0; di < deltas.size(); ++di) {
    const double delta = deltas[di];
    const EquidistributedSeq Z = make_equidistributed(cfg.d, 1.0, delta, cfg.L, cfg.mode, cfg.seed);
    const auto mask = sensing_mask(Z, b.grid);
    const auto [deltaB, capped] = bound_delta(cfg, b.d0, delta, "observability");
    for (int k = 0; k < cfg.k; ++k) {
      const double r = masked_mass(sr.eigenvectors, k, mask);
      rho[k][di] = r;
      ModelParams pe = b.p;
      pe.normV = std::abs(sr.eigenvalues[k]) + b.p.normV + b.p.normC;
      const CsfucResult cs = csfuc(xreal(deltaB), pe, cfg.cal, true, true);
      ExperimentCase c =
          make_case(pfx + "/delta=" + num(delta) + "/k=" + num(static_cast<long long>(k + 1)), r,
                    cs.lnExact, "sampling-bound", true);
      c.inputs = {{"delta", delta},
                  {"lambda", sr.eigenvalues[k]},
                  {"residual", sr.residuals[k]},
                  {"lhs_with_residual", r + delta * delta * sr.residuals[k] * sr.residuals[k]},
                  {"bound_delta", deltaB}};
      c.datX = delta;
      if (capped) c.note = "bound evaluated at capped delta (configured delta exceeds delta0)";
      rep.add(std::move(c));
    }
  }

  for (int k = 0; k < cfg.k; ++k) {
    const std::string kfx = pfx + "/k=" + num(static_cast<long long>(k + 1));
    double peak = 0;
    for (double v : rho[k]) peak = std::max(peak, v);
    rep.add(make_case(kfx + "/mass-cap", peak, log(xreal(1.0 + 1e-12)), "unit-mass", false));

    if (cfg.mode == PlacementMode::centered) {
      for (std::size_t di = 0; di + 1 < deltas.size(); ++di) {
        ExperimentCase c = make_case(kfx + "/monotone/" + num(deltas[di]) + "-" + num(deltas[di + 1]),
                                     rho[k][di + 1], ln_pos(rho[k][di] * (1.0 - 1e-12)),
                                     "nested-mask-monotonicity", true);
        c.inputs = {{"rho_lo", rho[k][di]}, {"rho_hi", rho[k][di + 1]}};
        rep.add(std::move(c));
      }
    }
    bool allPos = deltas.size() >= 2;
    for (double v : rho[k]) allPos = allPos && v > 0;
    if (allPos) {
      std::vector<double> lx, ly;
      for (std::size_t di = 0; di < deltas.size(); ++di) {
        lx.push_back(std::log(deltas[di]));
        ly.push_back(std::log(rho[k][di]));
      }
      ExperimentCase c;
      c.id = kfx + "/delta-scaling";
      c.observed = ols_slope(lx, ly);
      c.boundTag = "informational";
      c.pass = true;
      c.note = "empirical exponent of rho(delta), recorded only";
      rep.add(std::move(c));
    }
  }

  rep.summary.emplace_back("delta0", num(to_double(b.d0)));
  rep.summary.emplace_back("n", num(static_cast<long long>(b.grid.n)));
  rep.summary.emplace_back("eigenpairs", num(static_cast<long long>(cfg.k)));
  rep.sort_cases();
  return rep;
}

ExperimentReport lifting_experiment(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.name = "lift";
  Bench b = make_bench(cfg);
  const std::string pfx = "lift/d=" + num(static_cast<long long>(cfg.d)) + "/L=" + num(cfg.L);
  rep.add(dir_case(pfx, b));

  auto solve2 = [&](double t, const std::vector<std::uint8_t>* mask, bool preferIterative) {
    const DiscreteOperator op = assemble(b.field, t, mask);
    SpectralResult sr;
    if (preferIterative && op.M.rows() > 40) {
      try {
        sr = eigs_lowest_iterative(op, 2, cfg.tol, cfg.seed);
      } catch (const std::runtime_error&) {
        sr = eigs_lowest(op, 2, cfg.tol, cfg.seed);
      }
    } else {
      sr = eigs_lowest(op, 2, cfg.tol, cfg.seed);
    }
    if (sr.eigenvalues[1] - sr.eigenvalues[0] <=
        1e-6 * std::max(1.0, std::abs(sr.eigenvalues[0])))
      throw std::runtime_error("lifting: lowest eigenvalue degenerate at t = " + num(t));
    return sr;
  };

  const SpectralResult sr0 = solve2(0.0, nullptr, true);
  const double lam0 = sr0.eigenvalues[0];

  std::vector<double> deltas = cfg.deltas;
  std::sort(deltas.begin(), deltas.end());
  std::vector<double> ts = cfg.ts;
  std::sort(ts.begin(), ts.end());

  for (double delta : deltas) {
    const EquidistributedSeq Z = make_equidistributed(cfg.d, 1.0, delta, cfg.L, cfg.mode, cfg.seed);
    const auto mask = sensing_mask(Z, b.grid);
    const auto [deltaB, capped] = bound_delta(cfg, b.d0, delta, "lifting");
    const ApplicationKappas kap = application_kappas(b.p, cfg.cal, xreal(deltaB), lam0, lam0);
    const std::string dfx = pfx + "/delta=" + num(delta);

    std::vector<double> lams{lam0};
    for (double t : ts) {
      const SpectralResult sr = solve2(t, &mask, true);
      lams.push_back(sr.eigenvalues[0]);
      ExperimentCase c = make_case(dfx + "/t=" + num(t), sr.eigenvalues[0] - lam0,
                                   log(xreal(0.75 * t)) + kap.lnKappaLow, "lifting-bound", true);
      c.inputs = {{"delta", delta},
                  {"t", t},
                  {"lambda_0", lam0},
                  {"lambda_t", sr.eigenvalues[0]},
                  {"bound_delta", deltaB}};
      c.datX = t;
      if (capped) c.note = "bound evaluated at capped delta (configured delta exceeds delta0)";
      rep.add(std::move(c));
    }

    double minDiff = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < lams.size(); ++i) minDiff = std::min(minDiff, lams[i + 1] - lams[i]);
    ExperimentCase mono =
        slack_case(dfx + "/minmax-monotone", minDiff, -1e-11 * std::max(1.0, std::abs(lam0)),
                   "minmax-monotonicity");
    mono.note = "floor 1e-11 relative: eigensolver resolution";
    rep.add(std::move(mono));
  }

  // First-order perturbation pairing and the integral identity, once per
  // configuration at the middle delta of the sorted list.
  const double deltaMid = deltas[deltas.size() / 2];
  const EquidistributedSeq Zq =
      make_equidistributed(cfg.d, 1.0, deltaMid, cfg.L, cfg.mode, cfg.seed);
  const auto maskQ = sensing_mask(Zq, b.grid);
  for (double ht : {1e-2, 5e-3}) {
    const HellmannFeynman hf = hellmann_feynman(b.field, Zq, 0.5, ht, cfg.tol, cfg.seed);
    ExperimentCase c = make_case(pfx + "/hf/h=" + num(ht), std::abs(hf.numericDeriv - hf.pairing),
                                 log(xreal(1e-4)), "first-order-perturbation", false);
    c.inputs = {{"delta", deltaMid},
                {"t", 0.5},
                {"h_t", ht},
                {"numeric_deriv", hf.numericDeriv},
                {"pairing", hf.pairing}};
    rep.add(std::move(c));
  }

  const double T = ts.back();
  const int nq = std::max(cfg.quadNodes, 5);
  std::vector<double> f(nq);
  double lamEnd = 0, lamStart = 0;
  for (int j = 0; j < nq; ++j) {
    const double r = T * j / (nq - 1);
    SpectralResult sr;
    try {
      const DiscreteOperator op = assemble(b.field, r, &maskQ);
      sr = (op.M.rows() > 40) ? eigs_lowest_iterative(op, 2, cfg.tol, cfg.seed)
                              : eigs_lowest(op, 2, cfg.tol, cfg.seed);
    } catch (const std::runtime_error&) {
      sr = eigs_lowest(assemble(b.field, r, &maskQ), 2, cfg.tol, cfg.seed);
    }
    if (sr.eigenvalues[1] - sr.eigenvalues[0] <=
        1e-6 * std::max(1.0, std::abs(sr.eigenvalues[0])))
      throw std::runtime_error("lifting: lowest eigenvalue degenerate at t = " + num(r));
    f[j] = masked_mass(sr.eigenvectors, 0, maskQ);
    if (j == 0) lamStart = sr.eigenvalues[0];
    if (j == nq - 1) lamEnd = sr.eigenvalues[0];
  }
  double integral = 0;
  for (int j = 0; j + 1 < nq; ++j) integral += 0.5 * (f[j] + f[j + 1]) * (T / (nq - 1));
  const double dLam = lamEnd - lamStart;
  ExperimentCase ic = make_case(pfx + "/integral-identity",
                                std::abs(dLam - integral) / std::max(std::abs(dLam), 1e-300),
                                log(xreal(1e-4)), "integral-identity", false);
  ic.inputs = {{"delta", deltaMid},
               {"t_end", T},
               {"nodes", static_cast<double>(nq)},
               {"d_lambda", dLam},
               {"integral", integral}};
  rep.add(std::move(ic));

  rep.summary.emplace_back("lambda_0", num(lam0));
  rep.summary.emplace_back("n", num(static_cast<long long>(b.grid.n)));
  rep.sort_cases();
  return rep;
}

ExperimentReport short_interval_uncertainty(const ExperimentConfig& cfg, double E0) {
  ExperimentReport rep;
  rep.name = "uncertainty";
  Bench b = make_bench(cfg);
  const std::string pfx = "uncertainty/d=" + num(static_cast<long long>(cfg.d)) + "/L=" + num(cfg.L);
  rep.add(dir_case(pfx, b));

  const DiscreteOperator op = assemble(b.field);
  const SpectralResult sr = eigs_lowest(op, std::max(cfg.k, 4), cfg.tol, cfg.seed);
  const double e0 = std::isfinite(E0) ? E0 : sr.eigenvalues[0];

  std::vector<double> deltas = cfg.deltas;
  std::sort(deltas.begin(), deltas.end());
  for (double delta : deltas) {
    const EquidistributedSeq Z = make_equidistributed(cfg.d, 1.0, delta, cfg.L, cfg.mode, cfg.seed);
    const auto mask = sensing_mask(Z, b.grid);
    const auto [deltaB, capped] = bound_delta(cfg, b.d0, delta, "uncertainty");
    const ApplicationKappas kap =
        application_kappas(b.p, cfg.cal, xreal(deltaB), e0, sr.eigenvalues[0]);
    const double sqrtKappa = ln_to_linear_double(kap.lnKappaShort / 2);
    const double lo = e0 - sqrtKappa, hi = e0 + sqrtKappa;
    long long inWindow = 0;
    for (double ev : sr.eigenvalues)
      if (ev >= lo && ev <= hi) ++inWindow;
    const std::string dfx = pfx + "/delta=" + num(delta);

    if (inWindow == 0) {
      ExperimentCase c;
      c.id = dfx + "/window";
      c.observed = 0.0;
      c.boundTag = "uncertainty-bound";
      c.pass = true;
      c.vacuous = true;
      c.inputs = {{"delta", delta}, {"e0", e0}, {"sqrt_kappa", sqrtKappa}};
      c.note = "empty resolved spectral window: inequality vacuous on the zero subspace";
      rep.add(std::move(c));
      continue;
    }

    const int S = 100;
    double worst = std::numeric_limits<double>::infinity();
    for (int s = 0; s < S; ++s) {
      const Eigen::VectorXd psi = projector_sample(sr, lo, hi, mix_seed(cfg.seed, 17, s));
      double m = 0;
      for (long long i = 0; i < psi.size(); ++i)
        if (mask[i]) m += psi[i] * psi[i];
      worst = std::min(worst, m);
    }
    ExperimentCase c = make_case(dfx + "/min-over-samples", worst,
                                 log(xreal(0.75)) + kap.lnKappaShort, "uncertainty-bound", true);
    c.inputs = {{"delta", delta},
                {"e0", e0},
                {"window_count", static_cast<double>(inWindow)},
                {"samples", static_cast<double>(S)},
                {"bound_delta", deltaB}};
    c.datX = delta;
    if (capped) c.note = "bound evaluated at capped delta (configured delta exceeds delta0)";
    rep.add(std::move(c));
  }

  rep.summary.emplace_back("e0", num(e0));
  rep.summary.emplace_back("lambda_1", num(sr.eigenvalues[0]));
  rep.sort_cases();
  return rep;
}

ExperimentReport abstract_lemma_tests(int n, long long trials, std::uint64_t seed, int threads) {
  if (n < 1 || n > 12)
    throw std::invalid_argument("abstract_lemma_tests: n must be in 1..12 (dense brute force)");
  if (trials < 1) throw std::invalid_argument("abstract_lemma_tests: trials must be >= 1");
  ExperimentReport rep;
  rep.name = "lemmas";

  std::vector<double> slackShift(trials), slackProj(trials);
  std::vector<std::uint8_t> projVacuous(trials, 0);

  parallel_for(trials, threads, [&](long long i) {
    std::mt19937_64 rng(mix_seed(seed, 1, static_cast<std::uint64_t>(i)));
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto fill = [&](Eigen::MatrixXd& X) {
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) X(r, c) = g(rng);
    };
    auto sym = [&]() {
      Eigen::MatrixXd X(n, n);
      fill(X);
      return Eigen::MatrixXd(0.5 * (X + X.transpose()));
    };

    // Bottom shift: nu is the minimum of the compression of B onto the
    // spectral subspace of A + B within eps0 of its bottom; the hypothesis
    // holds for this nu by construction, so the conclusion must too.
    const Eigen::MatrixXd A = sym(), B = sym();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esA(A), esC(A + B);
    const double lam1A = esA.eigenvalues()[0];
    const double lam1C = esC.eigenvalues()[0];
    const double eps0 = u01(rng) * (esC.eigenvalues()[n - 1] - lam1C);
    int cnt = 0;
    while (cnt < n && esC.eigenvalues()[cnt] <= lam1C + eps0) ++cnt;
    cnt = std::max(cnt, 1);
    const Eigen::MatrixXd U = esC.eigenvectors().leftCols(cnt);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esBc(
        Eigen::MatrixXd(U.transpose() * B * U));
    const double nu = esBc.eigenvalues()[0];
    slackShift[i] = lam1C - (lam1A + nu);

    // Projected operator: chi_I T3 chi_I >= ((gamma(t) - E0)/t) chi_I as
    // PSD-ness, with gamma(t) the bottom of T1 + t T3 and I = (-inf, E0].
    const Eigen::MatrixXd T1 = sym();
    Eigen::MatrixXd G2(n, n), G3(n, n);
    fill(G2);
    fill(G3);
    const Eigen::MatrixXd T2 = (G2.transpose() * G2) / n;
    Eigen::MatrixXd T3 = G3.transpose() * G3;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esT3(T3);
    T3 /= std::max(esT3.eigenvalues()[n - 1], 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esH(T1 + T2);
    const double lam1H = esH.eigenvalues()[0];
    const double spread = std::max(esH.eigenvalues()[n - 1] - lam1H, 1.0);
    const double E0 = lam1H + (-0.5 + 1.5 * u01(rng)) * spread;
    const double t = 0.1 + 1.9 * u01(rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esG(T1 + t * T3);
    const double gammaT = esG.eigenvalues()[0];
    int cnt2 = 0;
    while (cnt2 < n && esH.eigenvalues()[cnt2] <= E0) ++cnt2;
    if (cnt2 == 0) {
      projVacuous[i] = 1;
      slackProj[i] = 0.0;
      return;
    }
    const Eigen::MatrixXd U2 = esH.eigenvectors().leftCols(cnt2);
    const Eigen::MatrixXd P = U2 * U2.transpose();
    const Eigen::MatrixXd X = P * T3 * P - ((gammaT - E0) / t) * P;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esX(Eigen::MatrixXd(0.5 * (X + X.transpose())));
    slackProj[i] = esX.eigenvalues()[0];
  });

  const double floor = -1e-10;
  auto aggregate = [&](const char* id, const std::vector<double>& slack, const char* tag,
                       long long vac) {
    long long viol = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (double s : slack) {
      if (s < floor) ++viol;
      worst = std::min(worst, s);
    }
    ExperimentCase c;
    c.id = id;
    c.observed = static_cast<double>(viol);
    c.boundTag = tag;
    c.geq = false;
    c.pass = viol == 0;
    c.inputs = {{"trials", static_cast<double>(trials)},
                {"n", static_cast<double>(n)},
                {"worst_slack", worst},
                {"vacuous_draws", static_cast<double>(vac)}};
    c.marginLog10 = worst > floor ? (log(xreal(worst - floor)) - log(xreal(-floor))) / ln10()
                                  : xreal(-1);
    c.note = "violation counted below the PSD floor -1e-10";
    rep.add(std::move(c));
  };
  long long vacCount = 0;
  for (auto v : projVacuous) vacCount += v;
  aggregate("lemmas/bottom-shift/violations", slackShift, "bottom-shift", 0);
  aggregate("lemmas/projection/violations", slackProj, "projected-psd", vacCount);

  // Deterministic designed cases: scalar shift attains equality, and the
  // identity perturbation reduces the projected bound to (gamma - E0)/t <= 1.
  {
    std::mt19937_64 rng(mix_seed(seed, 2, 0));
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd X(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) X(r, c) = g(rng);
    const Eigen::MatrixXd A = 0.5 * (X + X.transpose());
    const double beta = 0.7;
    const Eigen::MatrixXd B = beta * Eigen::MatrixXd::Identity(n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esA(A), esC(A + B);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esBc(Eigen::MatrixXd(
        esC.eigenvectors().leftCols(1).transpose() * B * esC.eigenvectors().leftCols(1)));
    const double err = std::max(std::abs(esC.eigenvalues()[0] - esA.eigenvalues()[0] - beta),
                                std::abs(esBc.eigenvalues()[0] - beta));
    ExperimentCase c = make_case("lemmas/scalar-shift-equality", err, log(xreal(1e-10)),
                                 "bottom-shift", false);
    c.inputs = {{"beta", beta}, {"n", static_cast<double>(n)}};
    rep.add(std::move(c));
  }
  {
    std::mt19937_64 rng(mix_seed(seed, 3, 0));
    std::normal_distribution<double> g(0.0, 1.0);
    auto fill = [&](Eigen::MatrixXd& X) {
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) X(r, c) = g(rng);
    };
    Eigen::MatrixXd X(n, n), G2(n, n);
    fill(X);
    fill(G2);
    const Eigen::MatrixXd T1 = 0.5 * (X + X.transpose());
    const Eigen::MatrixXd T2 = (G2.transpose() * G2) / n;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esT1(T1), esH(T1 + T2);
    const double t = 0.7;
    const double E0 = esH.eigenvalues()[(n - 1) / 2];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esG(
        Eigen::MatrixXd(T1 + t * Eigen::MatrixXd::Identity(n, n)));
    const double gammaT = esG.eigenvalues()[0];
    const double err = std::max((gammaT - E0) / t - 1.0,
                                std::abs(gammaT - esT1.eigenvalues()[0] - t));
    ExperimentCase c = make_case("lemmas/identity-reduction", err, log(xreal(1e-10)),
                                 "projected-psd", false);
    c.inputs = {{"t", t}, {"e0", E0}};
    rep.add(std::move(c));
  }

  rep.summary.emplace_back("trials", num(trials));
  rep.summary.emplace_back("n", num(static_cast<long long>(n)));
  rep.sort_cases();
  return rep;
}

void RandomModelConfig::apply_model_defaults() {
  if (model == "breather") {
    Gu = 1.0;
    uMax = 1.0;
    alpha1 = 1.0;
    alpha2 = 0.0;
    beta1 = 0.5;
    beta2 = 1.0;
  } else if (model == "alloy") {
    alpha1 = 1.0;
    alpha2 = 1.0;
    beta2 = 0.0;
  }
}

void RandomModelConfig::validate() const {
  if (model != "breather" && model != "alloy")
    throw std::invalid_argument("RandomModelConfig: model must be breather or alloy");
  if (d < 1 || d > 2)
    throw std::invalid_argument("RandomModelConfig: d must be 1 or 2 at desk scale");
  if (!(0.0 <= omegaMinus && omegaMinus < omegaPlus && omegaPlus < 1.0))
    throw std::invalid_argument("RandomModelConfig: need 0 <= omegaMinus < omegaPlus < 1");
  if (samples < 1) throw std::invalid_argument("RandomModelConfig: samples must be >= 1");
}

namespace {

// Realized random potential: breather bumps grow their radius with omega_j,
// alloy bumps scale a fixed radius-1/2 profile.
std::vector<double> disorder_spectrum(const GridSpec& grid,
                                      const std::vector<Eigen::VectorXd>& sites,
                                      const std::vector<double>& omega, bool breather,
                                      double uMax) {
  FieldGenerator gen = identity_generator(grid.d);
  gen.name = breather ? "breather" : "alloy";
  gen.normV = 0.0;
  gen.V = [&sites, &omega, breather, uMax](const Eigen::VectorXd& x) {
    double v = 0;
    for (std::size_t j = 0; j < sites.size(); ++j) {
      const double r = (x - sites[j]).norm();
      if (breather) {
        if (r <= omega[j]) v += uMax;
      } else {
        if (r <= 0.5) v += omega[j];
      }
    }
    return v;
  };
  CoefficientField field;
  field.grid = grid;
  field.gen = std::move(gen);
  return eigenvalues_dense(assemble(field));
}

}  // namespace

ExperimentReport wegner_monte_carlo(const RandomModelConfig& rcfg, const std::vector<double>& Ls,
                                    const std::vector<double>& epsilons, double E) {
  RandomModelConfig r = rcfg;
  r.apply_model_defaults();
  r.validate();
  if (Ls.empty() || epsilons.empty())
    throw std::invalid_argument("wegner_monte_carlo: need at least one L and one epsilon");
  const bool breather = r.model == "breather";

  ExperimentReport rep;
  rep.name = "wegner";
  rep.rawHeader = {"L", "sample", "epsilon", "count"};

  std::vector<double> eps = epsilons;
  std::sort(eps.begin(), eps.end());

  for (std::size_t li = 0; li < Ls.size(); ++li) {
    const double L = Ls[li];
    GridSpec grid;
    grid.d = r.d;
    grid.L = L;
    grid.n = static_cast<int>(std::lround((r.d == 1 ? 32.0 : 8.0) * L)) - 1;
    grid.validate();

    // One site per lattice point of Z^d inside the closed cube.
    std::vector<Eigen::VectorXd> sites;
    const int half = static_cast<int>(std::floor(L / 2));
    if (r.d == 1) {
      for (int j = -half; j <= half; ++j) {
        Eigen::VectorXd s(1);
        s << j;
        sites.push_back(s);
      }
    } else {
      for (int j0 = -half; j0 <= half; ++j0)
        for (int j1 = -half; j1 <= half; ++j1) {
          Eigen::VectorXd s(2);
          s << j0, j1;
          sites.push_back(s);
        }
    }

    std::vector<std::vector<long long>> counts(r.samples,
                                               std::vector<long long>(eps.size(), 0));
    std::vector<long long> monoViol(r.samples, 0);

    parallel_for(r.samples, r.threads, [&](long long s) {
      std::mt19937_64 rng(mix_seed(r.seed, 100 + li + (breather ? 0 : 1000), s));
      std::uniform_real_distribution<double> uo(r.omegaMinus, r.omegaPlus);
      std::vector<double> omega(sites.size());
      for (auto& o : omega) o = uo(rng);

      const std::vector<double> evs = disorder_spectrum(grid, sites, omega, breather, r.uMax);
      std::vector<double> omega2(omega);
      for (auto& o : omega2) o += 0.05 * (r.omegaPlus - o);
      const std::vector<double> evs2 = disorder_spectrum(grid, sites, omega2, breather, r.uMax);

      long long viol = 0;
      for (std::size_t i = 0; i < evs.size(); ++i)
        if (evs2[i] < evs[i] - 1e-11 * std::max(1.0, std::abs(evs[i]))) ++viol;
      monoViol[s] = viol;

      for (std::size_t e = 0; e < eps.size(); ++e) {
        const auto lo = std::lower_bound(evs.begin(), evs.end(), E - eps[e]);
        const auto hi = std::upper_bound(evs.begin(), evs.end(), E + eps[e]);
        counts[s][e] = hi - lo;
      }
    });

    for (int s = 0; s < r.samples; ++s)
      for (std::size_t e = 0; e < eps.size(); ++e)
        rep.rawRows.push_back({L, static_cast<double>(s), eps[e],
                               static_cast<double>(counts[s][e])});

    const std::string pfx = "wegner/" + r.model + "/L=" + num(L);

    long long violTotal = 0;
    for (auto v : monoViol) violTotal += v;
    {
      ExperimentCase c;
      c.id = pfx + "/mono-lifting";
      c.observed = static_cast<double>(violTotal);
      c.boundTag = "per-sample-lifting";
      c.geq = false;
      c.pass = violTotal == 0;
      c.inputs = {{"samples", static_cast<double>(r.samples)},
                  {"sites", static_cast<double>(sites.size())}};
      c.note = "eigenvalue monotonicity under componentwise disorder increase, floor 1e-11 relative";
      rep.add(std::move(c));
    }

    std::vector<double> Nhat(eps.size(), 0.0);
    for (std::size_t e = 0; e < eps.size(); ++e) {
      long long total = 0;
      for (int s = 0; s < r.samples; ++s) total += counts[s][e];
      Nhat[e] = static_cast<double>(total) / r.samples;
      ExperimentCase c;
      c.id = pfx + "/mean-count/eps=" + num(eps[e]);
      c.observed = Nhat[e];
      c.boundTag = "empirical-mean";
      c.pass = true;
      c.datX = eps[e];
      rep.add(std::move(c));
    }
    {
      double minDiff = std::numeric_limits<double>::infinity();
      for (std::size_t e = 0; e + 1 < eps.size(); ++e)
        minDiff = std::min(minDiff, Nhat[e + 1] - Nhat[e]);
      ExperimentCase c = slack_case(pfx + "/count-monotone", minDiff, 0.0, "window-nesting");
      c.note = "mean count nondecreasing in the window half-width, exact";
      c.pass = minDiff >= 0.0;
      rep.add(std::move(c));
    }

    // Hoelder-shape slope over the central decade [max eps / 10, max eps].
    const double decLo = eps.back() / 10.0 * (1.0 - 1e-12);
    std::vector<std::size_t> central;
    for (std::size_t e = 0; e < eps.size(); ++e)
      if (eps[e] >= decLo && Nhat[e] > 0) central.push_back(e);
    if (central.size() < 3) {
      ExperimentCase c;
      c.id = pfx + "/slope";
      c.boundTag = "hoelder-shape";
      c.pass = true;
      c.vacuous = true;
      c.note = "fewer than 3 resolved points in the central decade; flagged, not failed";
      rep.add(std::move(c));
    } else {
      std::vector<double> lx, ly;
      for (auto e : central) {
        lx.push_back(std::log(eps[e]));
        ly.push_back(std::log(Nhat[e]));
      }
      const double slope = ols_slope(lx, ly);

      const int B = 500;
      std::mt19937_64 bs(mix_seed(r.seed, 7000 + li + (breather ? 0 : 1), 0));
      std::uniform_int_distribution<int> pick(0, r.samples - 1);
      std::vector<double> slopes;
      slopes.reserve(B);
      for (int b2 = 0; b2 < B; ++b2) {
        std::vector<double> nb(eps.size(), 0.0);
        for (int s = 0; s < r.samples; ++s) {
          const int idx = pick(bs);
          for (std::size_t e = 0; e < eps.size(); ++e) nb[e] += counts[idx][e];
        }
        std::vector<double> bx, by;
        for (auto e : central)
          if (nb[e] > 0) {
            bx.push_back(std::log(eps[e]));
            by.push_back(std::log(nb[e] / r.samples));
          }
        if (bx.size() >= 2) slopes.push_back(ols_slope(bx, by));
      }
      std::sort(slopes.begin(), slopes.end());
      const double ciLo = slopes.empty() ? 0.0 : slopes[static_cast<std::size_t>(0.025 * slopes.size())];
      const double ciHi = slopes.empty()
                              ? 0.0
                              : slopes[std::min(slopes.size() - 1,
                                                static_cast<std::size_t>(0.975 * slopes.size()))];

      ExperimentCase c = make_case(pfx + "/slope", slope, log(xreal(0.2)), "hoelder-shape", true);
      c.pass = c.pass && ciLo > 0.0;
      c.inputs = {{"ci_low", ciLo},
                  {"ci_high", ciHi},
                  {"resamples", static_cast<double>(slopes.size())},
                  {"points", static_cast<double>(central.size())}};
      c.note = "shape check only; the composed exponent is out of desk-scale reach";
      rep.add(std::move(c));
    }
  }

  rep.summary.emplace_back("model", r.model);
  rep.summary.emplace_back("energy", num(E));
  rep.summary.emplace_back("samples", num(static_cast<long long>(r.samples)));
  rep.sort_cases();
  return rep;
}

ExperimentReport three_annuli_empirical(const CoefficientField& field, const Eigen::VectorXd& psi,
                                        double lambda, const Eigen::VectorXd& center,
                                        const AnnuliRadii& radii, const CalibrationConstants& cal,
                                        const std::vector<double>& alphaFactors) {
  radii.validate();
  const GridSpec& grid = field.grid;
  if (center.size() != grid.d)
    throw std::invalid_argument("three_annuli: center dimension mismatch");
  if (psi.size() != grid.size())
    throw std::invalid_argument("three_annuli: psi does not match the grid");
  const double R3 = to_double(radii.R3);
  for (int a = 0; a < grid.d; ++a)
    if (std::abs(center[a]) + R3 >= grid.L / 2)
      throw std::invalid_argument("three_annuli: B(center, R3) exits the cube");

  ModelParams p;
  p.d = grid.d;
  p.thetaE = field.gen.thetaE;
  p.thetaL = field.gen.thetaL;
  p.normV = std::abs(lambda) + field.gen.normV + field.gen.normC;
  p.normB = 0.0;
  p.normC = 0.0;
  p.validate();
  const ThreeAnnuliConstants tac = three_annuli_constants(radii, p, cal);

  const DiscreteOperator op = assemble(field);
  const Eigen::VectorXd zeta = op.M * psi - lambda * psi;

  const double r1 = to_double(radii.r1), R1 = to_double(radii.R1);
  const double r2 = to_double(radii.r2), R2 = to_double(radii.R2);
  const double r3 = to_double(radii.r3);
  double n1 = 0, n2 = 0, n3 = 0, nz = 0;
  for (long long i = 0; i < grid.size(); ++i) {
    const double rr = (grid.node(i) - center).norm();
    const double w = psi[i] * psi[i];
    if (rr >= r1 && rr <= R1) n1 += w;
    if (rr >= r2 && rr <= R2) n2 += w;
    if (rr >= r3 && rr <= R3) n3 += w;
    if (rr <= R3) nz += zeta[i] * zeta[i];
  }

  ExperimentReport rep;
  rep.name = "annuli";
  const xreal thetaE(p.thetaE);
  for (double f : alphaFactors) {
    const xreal alpha = xreal(f) * tac.alphaStar;
    const xreal fac1 = exp(2 * alpha * log(radii.R2 * tac.mu1 * thetaE / radii.r1));
    const xreal fac3 = exp(2 * alpha * log(radii.R2 * tac.mu1 * thetaE / radii.r3));
    const xreal lhs = alpha * alpha * alpha * xreal(n2);
    const xreal rhs = tac.D1 * fac1 * xreal(n1) + tac.D2 * fac3 * xreal(n3) +
                      tac.D3 * fac1 * xreal(nz);

    ExperimentCase c;
    c.id = "annuli/alpha=" + num(f) + "x";
    c.observed = to_double(lhs);
    c.lnObserved = lhs > 0 ? log(lhs) : -std::numeric_limits<xreal>::infinity();
    c.lnBound = rhs > 0 ? log(rhs) : -std::numeric_limits<xreal>::infinity();
    c.boundTag = "three-annuli";
    c.geq = false;
    const xreal diff = c.lnBound - c.lnObserved;
    c.pass = lhs == 0 || diff >= 0;
    c.marginLog10 = diff / ln10();
    c.inputs = {{"lambda", lambda},          {"alpha", to_double(alpha)},
                {"norm_inner", n1},          {"norm_middle", n2},
                {"norm_outer", n3},          {"norm_residual_ball", nz},
                {"alpha_factor", f}};
    c.datX = f;
    if (n2 == 0) c.note = "middle annulus mass negligible; trivially valid";
    rep.add(std::move(c));
  }

  rep.summary.emplace_back("alpha_star", num(to_double(tac.alphaStar)));
  rep.sort_cases();
  return rep;
}

ExperimentReport three_annuli_suite(const CalibrationConstants& cal) {
  GridSpec grid;
  grid.d = 1;
  grid.L = 12.0;
  grid.n = 383;
  const CoefficientField field = sample_field(identity_generator(1), grid);
  const SpectralResult sr = eigs_lowest(assemble(field), 2, 1e-10, 1);

  const double s = 0.15;
  AnnuliRadii radii;
  radii.r1 = xreal(0.2) * s;
  radii.R1 = xreal(0.4) * s;
  radii.r2 = xreal(1.0) * s;
  radii.R2 = xreal(3.0) * s;
  radii.r3 = xreal(6.0) * euler_e() * s;
  radii.R3 = xreal(9.0) * euler_e() * s;
  radii.validate();

  const Eigen::VectorXd center = Eigen::VectorXd::Zero(1);
  const std::vector<double> factors{1.0, 2.0, 4.0};
  ExperimentReport rep;
  rep.name = "annuli";
  const char* names[2] = {"ground", "excited"};
  for (int state = 0; state < 2; ++state) {
    ExperimentReport part = three_annuli_empirical(field, sr.eigenvectors.col(state),
                                                   sr.eigenvalues[state], center, radii, cal,
                                                   factors);
    for (auto& c : part.cases) {
      c.id = "annuli/" + std::string(names[state]) + c.id.substr(std::string("annuli").size());
      rep.add(std::move(c));
    }
    if (state == 0) rep.summary = std::move(part.summary);
  }
  rep.summary.emplace_back("lambda_ground", num(sr.eigenvalues[0]));
  rep.summary.emplace_back("lambda_excited", num(sr.eigenvalues[1]));
  rep.sort_cases();
  return rep;
}

WeightEval carleman_weight_eval(double rho, double mu, const Eigen::MatrixXd& A0,
                                const std::vector<Eigen::VectorXd>& points) {
  const int d = static_cast<int>(A0.rows());
  if (d < 1 || A0.cols() != d)
    throw std::invalid_argument("carleman_weight_eval: A0 must be square");
  if (!(rho > 0) || !(mu >= 0))
    throw std::invalid_argument("carleman_weight_eval: need rho > 0 and mu >= 0");
  if ((A0 - A0.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, A0.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("carleman_weight_eval: A0 must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A0);
  const double lamMin = es.eigenvalues()[0], lamMax = es.eigenvalues()[d - 1];
  if (!(lamMin > 0))
    throw std::invalid_argument("carleman_weight_eval: A0 must be positive definite");
  const double thetaE = std::max({lamMax, 1.0 / lamMin, 1.0});
  const double x1 = mu * std::sqrt(thetaE);
  const double mu1 = x1 <= 1.0 ? std::exp(x1) : std::exp(1.0) * x1;

  Eigen::LLT<Eigen::MatrixXd> llt(A0);
  WeightEval out;
  out.worstSlack = std::numeric_limits<double>::infinity();
  for (const auto& x : points) {
    if (x.size() != d)
      throw std::invalid_argument("carleman_weight_eval: point dimension mismatch");
    const double nx = x.norm();
    if (nx > rho * (1.0 + 1e-15))
      throw std::invalid_argument("carleman_weight_eval: point outside B(rho)");
    const Eigen::VectorXd y = x / rho;
    const double sig = std::sqrt(y.dot(llt.solve(y)));

    // Alternating series for the integral; the remainder is below the first
    // omitted term, kept under 1e-16 of the running value.
    const double mr = mu * sig;
    double I = 0;
    if (mr > 0) {
      double t = mr, sign = 1.0;
      for (int k = 1; k <= 400; ++k) {
        I += sign * t;
        sign = -sign;
        t = t * mr * k / (static_cast<double>(k + 1) * (k + 1));
        if (t <= 1e-16 * std::max(1.0, std::abs(I))) break;
      }
    }
    const double w = sig * std::exp(-I);
    out.w.push_back(w);
    out.sigma.push_back(sig);

    const double slacks[4] = {sig / mu1 - nx / (rho * std::sqrt(thetaE) * mu1),
                              w - sig / mu1, sig - w, std::sqrt(thetaE) * nx / rho - sig};
    for (double sl : slacks) out.worstSlack = std::min(out.worstSlack, sl);
  }
  out.chainOk = out.worstSlack >= -1e-12;
  return out;
}

ExperimentReport carleman_weight_experiment(double rho, double mu, const Eigen::MatrixXd& A0,
                                            int numPoints, std::uint64_t seed) {
  if (numPoints < 1) throw std::invalid_argument("carleman_weight_experiment: numPoints >= 1");
  const int d = static_cast<int>(A0.rows());
  std::mt19937_64 rng(mix_seed(seed, 31, 0));
  std::uniform_real_distribution<double> u(-rho, rho);
  std::vector<Eigen::VectorXd> points;
  points.reserve(numPoints);
  while (static_cast<int>(points.size()) < numPoints) {
    Eigen::VectorXd x(d);
    for (int a = 0; a < d; ++a) x[a] = u(rng);
    if (x.norm() <= rho) points.push_back(std::move(x));
  }

  const WeightEval we = carleman_weight_eval(rho, mu, A0, points);
  ExperimentReport rep;
  rep.name = "weight";
  ExperimentCase c = slack_case("weight/chain-slack", we.worstSlack, -1e-12, "weight-chain");
  c.inputs = {{"rho", rho}, {"mu", mu}, {"points", static_cast<double>(numPoints)}};
  c.pass = we.chainOk;
  rep.add(std::move(c));

  const int keep = std::min<int>(numPoints, 64);
  for (int i = 0; i < keep; ++i) {
    ExperimentCase pc = make_case("weight/point=" + num(static_cast<long long>(i)), we.w[i],
                                  ln_pos(we.sigma[i] * (1.0 + 1e-12)), "weight-upper", false);
    pc.datX = points[i].norm() / rho;
    rep.add(std::move(pc));
  }
  rep.summary.emplace_back("points", num(static_cast<long long>(numPoints)));
  rep.sort_cases();
  return rep;
}

}  // namespace ucplab
