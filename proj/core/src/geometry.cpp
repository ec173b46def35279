#include "ucplab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ucplab/constants.hpp"

namespace ucplab {

namespace {

// Cells per axis for a cube of side L tiled by cells of side G. L must be a
// positive integer multiple of G (up to rounding slack).
int cells_per_axis(double L, double G) {
  const double q = L / G;
  const int m = static_cast<int>(std::llround(q));
  if (m < 1 || std::abs(q - m) > 1e-9)
    throw std::invalid_argument("geometry: L must be a positive integer multiple of G");
  return m;
}

}  // namespace

EquidistributedSeq make_equidistributed(int d, double G, double delta, double L,
                                        PlacementMode mode, std::uint64_t seed) {
  if (d < 1 || d > 3) throw std::invalid_argument("make_equidistributed: d must be 1, 2, or 3");
  if (!(G > 0)) throw std::invalid_argument("make_equidistributed: G must be > 0");
  if (!(delta > 0 && delta < G / 2))
    throw std::invalid_argument("make_equidistributed: need 0 < delta < G/2");
  const int m = cells_per_axis(L, G);

  EquidistributedSeq Z;
  Z.d = d;
  Z.G = G;
  Z.delta = delta;
  Z.L = L;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-(G / 2 - delta), G / 2 - delta);

  long long total = 1;
  for (int k = 0; k < d; ++k) total *= m;
  Z.centers.reserve(total);
  Z.z.reserve(total);
  std::array<int, 3> idx{0, 0, 0};
  for (long long f = 0; f < total; ++f) {
    long long r = f;
    for (int k = d - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(r % m);
      r /= m;
    }
    Eigen::VectorXd c(d);
    for (int k = 0; k < d; ++k) c[k] = -L / 2 + (idx[k] + 0.5) * G;
    Eigen::VectorXd p = c;
    if (mode == PlacementMode::seeded_random)
      for (int k = 0; k < d; ++k) p[k] = c[k] + unif(rng);
    Z.centers.push_back(std::move(c));
    Z.z.push_back(std::move(p));
  }
  return Z;
}

bool validate_equidistributed(const EquidistributedSeq& Z) {
  if (Z.centers.size() != Z.z.size()) return false;
  const double slack = Z.G / 2 - Z.delta;
  for (std::size_t i = 0; i < Z.z.size(); ++i) {
    const Eigen::VectorXd dev = Z.z[i] - Z.centers[i];
    if (dev.lpNorm<Eigen::Infinity>() > slack + 1e-15 * Z.G) return false;
  }
  return true;
}

std::vector<std::uint8_t> sensing_mask(const EquidistributedSeq& Z, const GridSpec& grid) {
  grid.validate();
  if (grid.d != Z.d) throw std::invalid_argument("sensing_mask: dimension mismatch");
  if (std::abs(grid.L - Z.L) > 1e-9 * std::max(1.0, Z.L))
    throw std::invalid_argument("sensing_mask: grid cube does not match the sequence cube");

  const long long N = grid.size();
  std::vector<std::uint8_t> mask(N, 0);
  const double d2 = Z.delta * Z.delta * (1 + 1e-14);
  for (long long f = 0; f < N; ++f) {
    const Eigen::VectorXd x = grid.node(f);
    for (const auto& zj : Z.z) {
      if ((x - zj).squaredNorm() <= d2) {
        mask[f] = 1;
        break;
      }
    }
  }
  return mask;
}

ChainPath chain_path(const Eigen::VectorXd& z, const Eigen::VectorXd& y, double a, double b) {
  if (!(0 < a && a < b)) throw std::invalid_argument("chain_path: need 0 < a < b");
  const int d = static_cast<int>(z.size());
  if (y.size() != d) throw std::invalid_argument("chain_path: dimension mismatch");
  for (int k = 0; k < d; ++k)
    if (std::abs(z[k]) > 0.5 + 1e-12 || std::abs(y[k]) > 0.5 + 1e-12)
      throw std::invalid_argument("chain_path: endpoints must lie in the closed unit cube");

  const double D = (y - z).norm();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(d);
  if (D > 0)
    u = (y - z) / D;
  else
    u[0] = 1.0;

  const double band = b - a;
  const long long mu = 2 * static_cast<long long>(std::floor(D / band));
  const long long m = 2 * static_cast<long long>(std::floor(std::sqrt(double(d)) / band)) + 2;

  ChainPath path;
  path.a = a;
  path.b = b;
  path.m = m;
  path.points.reserve(m + 1);
  path.points.push_back(z);

  // Double steps: back a, forward b, each pair advancing b - a toward y.
  Eigen::VectorXd cur = z;
  for (long long s = 0; s < mu / 2; ++s) {
    path.points.push_back(cur - a * u);
    cur += band * u;
    path.points.push_back(cur);
  }
  // Landing pair: back a, then forward a + D' onto y exactly, with
  // D' = |y - cur| <= b - a the leftover distance.
  path.points.push_back(cur - a * u);
  path.points.push_back(y);
  // Oscillate until m steps are spent; m is even and mu + 2 <= m, so every
  // even index from mu + 2 on sits at y.
  while (static_cast<long long>(path.points.size()) < m + 1) {
    path.points.push_back(y - a * u);
    path.points.push_back(y);
  }
  return path;
}

bool validate_chain(const ChainPath& path, const Eigen::VectorXd& z, const Eigen::VectorXd& y,
                    double tol) {
  if (path.points.empty()) return false;
  const int d = static_cast<int>(z.size());
  const long long m = 2 * static_cast<long long>(std::floor(std::sqrt(double(d)) / (path.b - path.a))) + 2;
  if (path.m != m) return false;
  if (static_cast<long long>(path.points.size()) != m + 1) return false;
  if ((path.points.front() - z).norm() > tol) return false;
  if ((path.points.back() - y).norm() > tol) return false;
  const double half = (1 + 2 * path.a) / 2;
  for (const auto& pt : path.points)
    if (pt.lpNorm<Eigen::Infinity>() > half + tol) return false;
  for (std::size_t i = 1; i < path.points.size(); ++i) {
    const double step = (path.points[i] - path.points[i - 1]).norm();
    if (step < path.a - tol || step > path.b + tol) return false;
  }
  return true;
}

CoveringCounts covering_counts(const ModelParams& p, const AnnuliRadii& radii) {
  p.validate();
  radii.validate();
  CoveringCounts out;
  const xreal sd = sqrt(xreal(p.d));
  out.Kd = pow(18 * euler_e() * sd + 1, p.d);
  const xreal a = (radii.R2 + 3 * radii.r2) / 4;
  out.M = pow(2 * radii.R3 + 2 * a + 1, p.d);
  out.N = pow(ceil(4 * sd / (radii.R2 - radii.r2)), p.d);
  return out;
}

bool annuli_partition_check(const ModelParams& p, const AnnuliRadii& radii) {
  p.validate();
  radii.validate();
  const int d = p.d;
  const double r2 = to_double(radii.r2);
  const double R2 = to_double(radii.R2);
  const double sd = std::sqrt(double(d));
  const double lo = r2 + sd / 2;
  const double hi = R2 - sd / 2;
  if (hi < lo) return false;  // annulus too narrow to absorb a cell diameter

  // Candidate cells within reach, ordered by how centrally their worst-case
  // distance band sits; the first hit ends the scan for each sample point.
  const int nb = static_cast<int>(std::ceil(hi + sd / 2)) + 1;
  std::vector<std::array<int, 3>> cand;
  std::array<int, 3> j{0, 0, 0};
  const int lo3 = (d >= 3) ? -nb : 0, hi3 = (d >= 3) ? nb : 0;
  const int lo2 = (d >= 2) ? -nb : 0, hi2 = (d >= 2) ? nb : 0;
  for (j[0] = -nb; j[0] <= nb; ++j[0])
    for (j[1] = lo2; j[1] <= hi2; ++j[1])
      for (j[2] = lo3; j[2] <= hi3; ++j[2]) cand.push_back(j);
  const double mid = (lo + hi) / 2;
  std::sort(cand.begin(), cand.end(), [&](const auto& x, const auto& y) {
    auto score = [&](const std::array<int, 3>& c) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += double(c[k]) * c[k];
      return std::abs(std::sqrt(s) - mid);
    };
    return score(x) < score(y);
  });

  const double spacing = 0.01;
  const int ns = static_cast<int>(std::lround(1.0 / spacing));
  const double eps = 1e-12;
  std::array<int, 3> s{0, 0, 0};
  const int s2hi = (d >= 2) ? ns : 0, s3hi = (d >= 3) ? ns : 0;
  for (s[0] = 0; s[0] <= ns; ++s[0])
    for (s[1] = 0; s[1] <= s2hi; ++s[1])
      for (s[2] = 0; s[2] <= s3hi; ++s[2]) {
        double x[3] = {-0.5 + s[0] * spacing, -0.5 + s[1] * spacing, -0.5 + s[2] * spacing};
        bool covered = false;
        for (const auto& c : cand) {
          double q = 0;
          for (int k = 0; k < d; ++k) q += (x[k] - c[k]) * (x[k] - c[k]);
          const double dist = std::sqrt(q);
          if (dist >= lo - eps && dist <= hi + eps) {
            covered = true;
            break;
          }
        }
        if (!covered) return false;
      }
  return true;
}

bool annuli_partition_check(const ModelParams& p) {
  return annuli_partition_check(p, standard_radii(p, RadiiVariant::laplacian, xreal(1) / 4));
}

}  // namespace ucplab
