#pragma once

#include <array>
#include <stdexcept>

#include <Eigen/Dense>

namespace ucplab {

// Uniform Dirichlet grid on the cube (-L/2, L/2)^d. Boundary nodes are
// eliminated; the n interior nodes per axis sit at x_i = -L/2 + i*h with
// h = L/(n+1) and i = 1..n. Flattened indices are row-major with axis 0
// slowest.
struct GridSpec {
  int d = 1;
  double L = 1.0;
  int n = 2;

  double h() const { return L / (n + 1); }

  long long size() const {
    long long s = 1;
    for (int k = 0; k < d; ++k) s *= n;
    return s;
  }

  void validate() const {
    if (d < 1 || d > 3) throw std::invalid_argument("GridSpec: d must be 1, 2, or 3");
    if (!(L > 0)) throw std::invalid_argument("GridSpec: L must be > 0");
    if (n < 2) throw std::invalid_argument("GridSpec: n must be >= 2");
  }

  // Axis coordinate of interior index i in 0..n-1.
  double coord(int i) const { return -L / 2 + (i + 1) * h(); }

  long long flatten(const std::array<int, 3>& idx) const {
    long long f = 0;
    for (int k = 0; k < d; ++k) f = f * n + idx[k];
    return f;
  }

  std::array<int, 3> unflatten(long long f) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int k = d - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(f % n);
      f /= n;
    }
    return idx;
  }

  Eigen::VectorXd node(long long f) const {
    const auto idx = unflatten(f);
    Eigen::VectorXd x(d);
    for (int k = 0; k < d; ++k) x[k] = coord(idx[k]);
    return x;
  }
};

}  // namespace ucplab
