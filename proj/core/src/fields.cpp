#include "ucplab/fields.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace ucplab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

FieldGenerator identity_generator(int d) {
  FieldGenerator g;
  g.name = "identity";
  g.A = [d](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(d, d).eval(); };
  g.thetaE = 1.0;
  g.thetaL = 0.0;
  return g;
}

FieldGenerator homogenization_generator(int d, const std::vector<double>& s) {
  if (static_cast<int>(s.size()) != d)
    throw std::invalid_argument("homogenization_generator: need one frequency per axis");
  FieldGenerator g;
  g.name = "homogenization";
  g.A = [d, s](const Eigen::VectorXd& x) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < d; ++k) A(k, k) = 2 + std::cos(s[k] * x[k]);
    return A;
  };
  g.thetaE = 3.0;
  g.thetaL = 0.0;
  for (double sk : s) g.thetaL = std::max(g.thetaL, std::abs(sk));
  return g;
}

FieldGenerator crossterm_generator(double L, double q0) {
  if (!(L > 0)) throw std::invalid_argument("crossterm_generator: L must be > 0");
  FieldGenerator g;
  g.name = "crossterm";
  g.A = [L, q0](const Eigen::VectorXd& x) {
    Eigen::MatrixXd A(2, 2);
    const double q =
        q0 * std::sin(kPi * (x[0] + L / 2) / L) * std::sin(kPi * (x[1] + L / 2) / L);
    A(0, 0) = 2 + std::cos(x[0]);
    A(1, 1) = 2 + std::cos(x[1]);
    A(0, 1) = A(1, 0) = q;
    return A;
  };
  // Two-sided ellipticity of [[2+cos, q], [q, 2+cos]] with |q| <= q0:
  // eigenvalues within [1 - q0, 3 + q0].
  g.thetaE = 3 + std::abs(q0);
  g.thetaL = 1 + std::abs(q0) * kPi / L * 2;
  return g;
}

FieldGenerator constant_offdiag_generator(double q) {
  FieldGenerator g;
  g.name = "constant_offdiag";
  g.A = [q](const Eigen::VectorXd&) {
    Eigen::MatrixXd A(2, 2);
    A << 2, q, q, 2;
    return A;
  };
  g.thetaE = 2 + std::abs(q);
  g.thetaL = 0.0;
  return g;
}

CoefficientField sample_field(const FieldGenerator& gen, const GridSpec& grid) {
  grid.validate();
  if (!gen.A) throw std::invalid_argument("sample_field: generator has no A closure");
  CoefficientField f{grid, gen};
  const long long N = grid.size();
  for (long long i = 0; i < N; ++i) {
    const Eigen::MatrixXd A = gen.A(grid.node(i));
    if (A.rows() != grid.d || A.cols() != grid.d)
      throw std::invalid_argument("sample_field: generator dimension mismatch");
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw std::invalid_argument("sample_field: generator output is not symmetric");
  }
  return f;
}

ThetaMeasurement measure_theta(const CoefficientField& field) {
  const GridSpec& g = field.grid;
  const long long N = g.size();
  ThetaMeasurement out;
  out.thetaEminus = std::numeric_limits<double>::infinity();
  out.thetaEplus = -std::numeric_limits<double>::infinity();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  auto rowSumNorm = [](const Eigen::MatrixXd& M) {
    return M.cwiseAbs().rowwise().sum().maxCoeff();
  };
  for (long long i = 0; i < N; ++i) {
    const auto idx = g.unflatten(i);
    const Eigen::VectorXd x = g.node(i);
    const Eigen::MatrixXd A = field.A(x);
    es.computeDirect(A, Eigen::EigenvaluesOnly);
    out.thetaEminus = std::min(out.thetaEminus, es.eigenvalues().minCoeff());
    out.thetaEplus = std::max(out.thetaEplus, es.eigenvalues().maxCoeff());
    for (int k = 0; k < g.d; ++k) {
      if (idx[k] + 1 >= g.n) continue;
      auto jdx = idx;
      jdx[k] += 1;
      const Eigen::MatrixXd B = field.A(g.node(g.flatten(jdx)));
      out.thetaLhat = std::max(out.thetaLhat, rowSumNorm(A - B) / g.h());
    }
  }
  return out;
}

bool check_dir(const CoefficientField& field, bool weakVariant, double tol) {
  const GridSpec& g = field.grid;
  if (g.d == 1) return true;  // no off-diagonal entries
  const int nb = 33;          // boundary sample per axis
  // Walk every face x_k = +-L/2, sampling the remaining coordinates densely.
  for (int k = 0; k < g.d; ++k) {
    for (int side = -1; side <= 1; side += 2) {
      long long total = 1;
      for (int a = 0; a < g.d - 1; ++a) total *= nb;
      for (long long f = 0; f < total; ++f) {
        Eigen::VectorXd x(g.d);
        x[k] = side * g.L / 2;
        long long r = f;
        for (int a = 0; a < g.d; ++a) {
          if (a == k) continue;
          const int i = static_cast<int>(r % nb);
          r /= nb;
          x[a] = -g.L / 2 + i * g.L / (nb - 1);
        }
        const Eigen::MatrixXd A = field.A(x);
        for (int i = 0; i < g.d; ++i)
          for (int j = 0; j < g.d; ++j) {
            if (i == j) continue;
            if (weakVariant && i != k && j != k) continue;
            if (std::abs(A(i, j)) > tol) return false;
          }
      }
    }
  }
  return true;
}

namespace {

// Folds one coordinate into [-halfL, halfL] across the listed fold planes
// (outermost first), flipping parity once per reflection.
double fold_axis(double t, const std::vector<double>& halves, int& sign) {
  for (double w : halves) {
    if (t > w) {
      t = 2 * w - t;
      sign = -sign;
    } else if (t < -w) {
      t = -2 * w - t;
      sign = -sign;
    }
  }
  return t;
}

}  // namespace

std::pair<Extension, Eigen::VectorXd> reflect_extend(const CoefficientField& field,
                                                     const Eigen::VectorXd& psi, int factor) {
  if (factor != 3 && factor != 9)
    throw std::invalid_argument("reflect_extend: factor must be 3 or 9");
  if (psi.size() != field.grid.size())
    throw std::invalid_argument("reflect_extend: psi does not match the source grid");
  if (!check_dir(field))
    throw std::invalid_argument(
        "reflect_extend: off-diagonal coefficients do not vanish on the faces");

  const GridSpec src = field.grid;
  const double L = src.L;
  std::vector<double> halves;
  if (factor == 9) halves.push_back(3 * L / 2);
  halves.push_back(L / 2);

  const int d = src.d;
  const FieldGenerator inner = field.gen;
  auto fold_point = [halves, d](const Eigen::VectorXd& x, Eigen::VectorXd& y,
                                Eigen::VectorXi& s) {
    y.resize(d);
    s.resize(d);
    for (int k = 0; k < d; ++k) {
      int sg = 1;
      y[k] = fold_axis(x[k], halves, sg);
      s[k] = sg;
    }
  };

  FieldGenerator gext;
  gext.name = inner.name + "_extended";
  gext.thetaE = inner.thetaE;
  gext.thetaL = inner.thetaL;
  gext.normC = inner.normC;
  gext.normV = inner.normV;
  gext.A = [inner, fold_point](const Eigen::VectorXd& x) {
    Eigen::VectorXd y;
    Eigen::VectorXi s;
    fold_point(x, y, s);
    Eigen::MatrixXd A = inner.A(y);
    for (int i = 0; i < A.rows(); ++i)
      for (int j = 0; j < A.cols(); ++j) A(i, j) *= s[i] * s[j];
    return A;
  };
  if (inner.c)
    gext.c = [inner, fold_point](const Eigen::VectorXd& x) {
      Eigen::VectorXd y;
      Eigen::VectorXi s;
      fold_point(x, y, s);
      return inner.c(y);
    };
  if (inner.V)
    gext.V = [inner, fold_point](const Eigen::VectorXd& x) {
      Eigen::VectorXd y;
      Eigen::VectorXi s;
      fold_point(x, y, s);
      return inner.V(y);
    };

  Extension ext;
  ext.source = field;
  ext.factor = factor;
  ext.result.grid = GridSpec{d, factor * L, factor * (src.n + 1) - 1};
  ext.result.grid.validate();
  ext.result.gen = gext;

  // Odd extension of psi by node transport: fold each big node, flip the
  // accumulated parity, and read the source node value; fold images on a
  // cell interface carry the value 0.
  const GridSpec big = ext.result.grid;
  const double h = src.h();
  Eigen::VectorXd psiHat(big.size());
  for (long long f = 0; f < big.size(); ++f) {
    const Eigen::VectorXd x = big.node(f);
    Eigen::VectorXd y;
    Eigen::VectorXi s;
    fold_point(x, y, s);
    int sign = 1;
    std::array<int, 3> idx{0, 0, 0};
    bool interface = false;
    for (int k = 0; k < d; ++k) {
      sign *= s[k];
      const double pos = (y[k] + L / 2) / h;  // 0..n+1 on the closed cell
      const long long i = std::llround(pos);
      if (std::abs(pos - i) > 1e-6)
        throw std::logic_error("reflect_extend: fold image misses the source lattice");
      if (i <= 0 || i >= src.n + 1) {
        interface = true;
        break;
      }
      idx[k] = static_cast<int>(i - 1);
    }
    psiHat[f] = interface ? 0.0 : sign * psi[src.flatten(idx)];
  }
  return {std::move(ext), std::move(psiHat)};
}

CoefficientField rescale(const CoefficientField& field, double G) {
  if (!(G > 0)) throw std::invalid_argument("rescale: G must be > 0");
  CoefficientField out;
  out.grid = GridSpec{field.grid.d, field.grid.L / G, field.grid.n};
  out.grid.validate();
  const FieldGenerator inner = field.gen;
  out.gen.name = inner.name + "_rescaled";
  out.gen.thetaE = inner.thetaE;
  out.gen.thetaL = G * inner.thetaL;
  out.gen.normC = G * G * inner.normC;
  out.gen.normV = G * G * inner.normV;
  out.gen.A = [inner, G](const Eigen::VectorXd& x) { return inner.A((G * x).eval()); };
  if (inner.c)
    out.gen.c = [inner, G](const Eigen::VectorXd& x) { return G * G * inner.c((G * x).eval()); };
  if (inner.V)
    out.gen.V = [inner, G](const Eigen::VectorXd& x) { return G * G * inner.V((G * x).eval()); };
  return out;
}

}  // namespace ucplab
