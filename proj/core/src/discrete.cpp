#include "ucplab/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

namespace ucplab {

DiscreteOperator assemble(const CoefficientField& field, double t,
                          const std::vector<std::uint8_t>* mask) {
  const GridSpec& g = field.grid;
  g.validate();
  const long long N = g.size();
  if (mask && static_cast<long long>(mask->size()) != N)
    throw std::invalid_argument("assemble: mask does not match the grid");

  const double h = g.h();
  const double ih2 = 1.0 / (h * h);
  // Canonical half-node coordinate of the edge (j, j+1) along one axis, so
  // that both rows of a symmetric pair sample the generator at the bitwise
  // identical point.
  auto half = [&](int j) { return -g.L / 2 + (j + 1.5) * h; };

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(N) * (2 * g.d + 2 * g.d * (g.d - 1) + 1));

  Eigen::VectorXd xh(g.d);
  for (long long f = 0; f < N; ++f) {
    const auto idx = g.unflatten(f);
    const Eigen::VectorXd x = g.node(f);
    double diag = field.c(x) + field.V(x);
    if (mask && (*mask)[f]) diag += t;

    for (int k = 0; k < g.d; ++k) {
      // Edge to idx[k]+1 has canonical index idx[k]; edge to idx[k]-1 has
      // idx[k]-1 (boundary edges included: half(-1) and half(n-1) lie inside
      // the closed cube).
      for (int dir = -1; dir <= 1; dir += 2) {
        xh = x;
        xh[k] = half(dir > 0 ? idx[k] : idx[k] - 1);
        const double a = field.A(xh)(k, k);
        diag += a * ih2;
        const int jn = idx[k] + dir;
        if (jn >= 0 && jn < g.n) {
          auto nb = idx;
          nb[k] = jn;
          trip.emplace_back(f, g.flatten(nb), -a * ih2);
        }
      }
      // Corner half-nodes for the cross terms.
      for (int l = k + 1; l < g.d; ++l) {
        for (int sk = -1; sk <= 1; sk += 2)
          for (int sl = -1; sl <= 1; sl += 2) {
            xh = x;
            xh[k] = half(sk > 0 ? idx[k] : idx[k] - 1);
            xh[l] = half(sl > 0 ? idx[l] : idx[l] - 1);
            const double a = field.A(xh)(k, l);
            const double w = sk * sl * a / (2 * h * h);
            diag += w;
            const int jk = idx[k] + sk, jl = idx[l] + sl;
            if (jk >= 0 && jk < g.n && jl >= 0 && jl < g.n) {
              auto nb = idx;
              nb[k] = jk;
              nb[l] = jl;
              trip.emplace_back(f, g.flatten(nb), -w);
            }
          }
      }
    }
    trip.emplace_back(f, f, diag);
  }

  DiscreteOperator op;
  op.grid = g;
  op.M.resize(N, N);
  op.M.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseMatrix<double> Mt = op.M.transpose();
  op.M = 0.5 * (op.M + Mt);
  return op;
}

namespace {

void certify(const Eigen::SparseMatrix<double>& M, SpectralResult& sr) {
  sr.residuals.clear();
  for (int j = 0; j < sr.eigenvectors.cols(); ++j) {
    const Eigen::VectorXd v = sr.eigenvectors.col(j);
    sr.residuals.push_back((M * v - sr.eigenvalues[j] * v).norm());
  }
}

SpectralResult eigs_dense(const DiscreteOperator& op, int k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(op.M));
  if (es.info() != Eigen::Success) throw std::runtime_error("eigs_lowest: dense solve failed");
  SpectralResult sr;
  sr.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
  sr.eigenvectors = es.eigenvectors().leftCols(k);
  certify(op.M, sr);
  return sr;
}

SpectralResult eigs_shift_invert(const DiscreteOperator& op, int k, double tol,
                                 std::uint64_t seed) {
  const long long N = op.M.rows();
  // Gershgorin lower bound gives a shift strictly below the spectrum, so
  // M - sigma I is positive definite and the largest Ritz values of its
  // inverse correspond to the lowest eigenvalues of M.
  double gl = std::numeric_limits<double>::infinity();
  for (int col = 0; col < op.M.outerSize(); ++col) {
    double diag = 0, off = 0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(op.M, col); it; ++it) {
      if (it.row() == col)
        diag = it.value();
      else
        off += std::abs(it.value());
    }
    gl = std::min(gl, diag - off);
  }
  const double sigma = gl - 0.01 * std::max(1.0, std::abs(gl));

  Eigen::SparseMatrix<double> S = op.M;
  for (long long i = 0; i < N; ++i) S.coeffRef(i, i) -= sigma;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(S);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("eigs_lowest: factorization of the shifted matrix failed");

  const int maxit = static_cast<int>(std::min<long long>(N, std::max(200, 8 * k)));
  Eigen::MatrixXd Q(N, maxit + 1);
  Eigen::VectorXd alpha(maxit), beta(maxit);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(N);
  for (long long i = 0; i < N; ++i) v[i] = gauss(rng);
  v.normalize();
  Q.col(0) = v;

  SpectralResult best;
  double bestWorst = std::numeric_limits<double>::infinity();
  int m = 0;
  for (int it = 0; it < maxit; ++it) {
    Eigen::VectorXd w = ldlt.solve(Q.col(it));
    alpha[it] = Q.col(it).dot(w);
    // Full reorthogonalization, twice for stability.
    for (int pass = 0; pass < 2; ++pass)
      w -= Q.leftCols(it + 1) * (Q.leftCols(it + 1).transpose() * w);
    beta[it] = w.norm();
    m = it + 1;
    const bool breakdown = beta[it] < 1e-14;
    if (!breakdown) Q.col(it + 1) = w / beta[it];

    if (m >= k && (breakdown || m % 10 == 0 || it == maxit - 1)) {
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
      SpectralResult sr;
      sr.tol = tol;
      // Largest Ritz values of the inverse, mapped back and sorted ascending.
      for (int j = 0; j < k; ++j) {
        const int col = m - 1 - j;
        const double theta = es.eigenvalues()[col];
        if (!(theta > 0)) throw std::runtime_error("eigs_lowest: nonpositive Ritz value");
        sr.eigenvalues.push_back(sigma + 1.0 / theta);
      }
      sr.eigenvectors.resize(N, k);
      for (int j = 0; j < k; ++j) {
        Eigen::VectorXd y = Q.leftCols(m) * es.eigenvectors().col(m - 1 - j);
        y.normalize();
        sr.eigenvectors.col(j) = y;
      }
      std::vector<int> order(k);
      for (int j = 0; j < k; ++j) order[j] = j;
      std::sort(order.begin(), order.end(),
                [&](int a, int b) { return sr.eigenvalues[a] < sr.eigenvalues[b]; });
      SpectralResult sorted;
      sorted.tol = tol;
      sorted.eigenvectors.resize(N, k);
      for (int j = 0; j < k; ++j) {
        sorted.eigenvalues.push_back(sr.eigenvalues[order[j]]);
        sorted.eigenvectors.col(j) = sr.eigenvectors.col(order[j]);
      }
      certify(op.M, sorted);
      double worst = 0;
      for (int j = 0; j < k; ++j)
        worst = std::max(worst, sorted.residuals[j] /
                                    std::max(1.0, std::abs(sorted.eigenvalues[j])));
      if (worst < bestWorst) {
        bestWorst = worst;
        best = sorted;
      }
      if (worst <= tol) return sorted;
      if (breakdown) break;
    }
  }
  std::ostringstream msg;
  msg << "eigs_lowest: no convergence after " << m << " iterations; best residuals:";
  for (double r : best.residuals) msg << " " << r;
  throw std::runtime_error(msg.str());
}

}  // namespace

SpectralResult eigs_lowest(const DiscreteOperator& op, int k, double tol, std::uint64_t seed) {
  const long long N = op.M.rows();
  if (k < 1 || k > N) throw std::invalid_argument("eigs_lowest: k out of range");
  SpectralResult sr = (N <= 2000) ? eigs_dense(op, k) : eigs_shift_invert(op, k, tol, seed);
  sr.tol = tol;
  return sr;
}

SpectralResult eigs_lowest_iterative(const DiscreteOperator& op, int k, double tol,
                                     std::uint64_t seed) {
  const long long N = op.M.rows();
  if (k < 1 || k > N) throw std::invalid_argument("eigs_lowest_iterative: k out of range");
  SpectralResult sr = eigs_shift_invert(op, k, tol, seed);
  sr.tol = tol;
  return sr;
}

std::vector<double> eigenvalues_dense(const DiscreteOperator& op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(op.M),
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigenvalues_dense: dense solve failed");
  return std::vector<double>(es.eigenvalues().data(),
                             es.eigenvalues().data() + es.eigenvalues().size());
}

Eigen::VectorXd projector_sample(const SpectralResult& sr, double lo, double hi,
                                 const std::vector<double>& coeffs) {
  std::vector<int> in;
  for (std::size_t j = 0; j < sr.eigenvalues.size(); ++j)
    if (sr.eigenvalues[j] >= lo && sr.eigenvalues[j] <= hi) in.push_back(static_cast<int>(j));
  if (in.empty()) throw std::invalid_argument("projector_sample: empty spectral window");
  if (coeffs.size() != in.size())
    throw std::invalid_argument("projector_sample: coefficient count mismatch");
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(sr.eigenvectors.rows());
  for (std::size_t j = 0; j < in.size(); ++j) psi += coeffs[j] * sr.eigenvectors.col(in[j]);
  const double n = psi.norm();
  if (!(n > 0)) throw std::invalid_argument("projector_sample: zero combination");
  return psi / n;
}

Eigen::VectorXd projector_sample(const SpectralResult& sr, double lo, double hi,
                                 std::uint64_t seed) {
  std::size_t count = 0;
  for (double ev : sr.eigenvalues)
    if (ev >= lo && ev <= hi) ++count;
  if (count == 0) throw std::invalid_argument("projector_sample: empty spectral window");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> coeffs(count);
  for (auto& c : coeffs) c = gauss(rng);
  return projector_sample(sr, lo, hi, coeffs);
}

HellmannFeynman hellmann_feynman(const CoefficientField& field, const EquidistributedSeq& Z,
                                 double t, double h_t, double tol, std::uint64_t seed) {
  if (!(h_t > 0)) throw std::invalid_argument("hellmann_feynman: h_t must be > 0");
  const auto mask = sensing_mask(Z, field.grid);

  auto lowest = [&](double s, int k) {
    return eigs_lowest(assemble(field, s, &mask), k, tol, seed);
  };
  const SpectralResult mid = lowest(t, 2);
  const double gap = mid.eigenvalues[1] - mid.eigenvalues[0];
  if (gap <= 1e-6 * std::abs(mid.eigenvalues[0]))
    throw std::runtime_error("hellmann_feynman: lowest eigenvalue is degenerate");

  HellmannFeynman out;
  out.numericDeriv =
      (lowest(t + h_t, 1).eigenvalues[0] - lowest(t - h_t, 1).eigenvalues[0]) / (2 * h_t);
  double pairing = 0;
  for (long long i = 0; i < field.grid.size(); ++i)
    if (mask[i]) pairing += mid.eigenvectors(i, 0) * mid.eigenvectors(i, 0);
  out.pairing = pairing;
  return out;
}

void write_matrix_market(const DiscreteOperator& op, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_market: cannot open " + path);
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  std::vector<std::string> lines;
  for (int col = 0; col < op.M.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(op.M, col); it; ++it)
      if (it.row() >= it.col()) {
        std::ostringstream ss;
        ss.precision(17);
        ss << (it.row() + 1) << " " << (it.col() + 1) << " " << it.value();
        lines.push_back(ss.str());
      }
  out << op.M.rows() << " " << op.M.cols() << " " << lines.size() << "\n";
  for (const auto& l : lines) out << l << "\n";
}

}  // namespace ucplab
