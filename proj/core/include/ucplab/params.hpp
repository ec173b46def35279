// ucplab: model parameters, calibration constants, and annuli radii.
#pragma once

#include "ucplab/xreal.hpp"

#include <stdexcept>

namespace ucplab {

// Parameters of the elliptic operator H = -div(A grad) + b.grad + c (+V):
// dimension, two-sided ellipticity bound thetaE, Lipschitz modulus thetaL of
// the second-order coefficients (row-sum norm), sup norms of V, b, c, and the
// lattice cell side G of the equidistributed arrangement.
struct ModelParams {
  int d = 1;
  double thetaE = 1.0;  // >= 1
  double thetaL = 0.0;  // >= 0
  double normV = 0.0;
  double normB = 0.0;
  double normC = 0.0;
  double G = 1.0;  // > 0

  void validate() const {
    if (d < 1) throw std::invalid_argument("ModelParams: d must be >= 1");
    if (thetaE < 1.0) throw std::invalid_argument("ModelParams: thetaE must be >= 1");
    if (thetaL < 0.0) throw std::invalid_argument("ModelParams: thetaL must be >= 0");
    if (normV < 0.0 || normB < 0.0 || normC < 0.0)
      throw std::invalid_argument("ModelParams: norms must be >= 0");
    if (G <= 0.0) throw std::invalid_argument("ModelParams: G must be > 0");
  }
};

// Reduction of a G-cell problem to unit cells: x -> x/G pulls the operator
// back with thetaL -> G*thetaL, V -> G^2*V, b -> G*b, c -> G^2*c.
inline ModelParams scaled_params(const ModelParams& p) {
  ModelParams q = p;
  q.thetaL = p.G * p.thetaL;
  q.normV = p.G * p.G * p.normV;
  q.normB = p.G * p.normB;
  q.normC = p.G * p.G * p.normC;
  q.G = 1.0;
  return q;
}

// The two dimension-only constants the analysis leaves symbolic: the cutoff
// curvature bound Theta~ and the absolute Cacciopoli constant C'. Defaults:
// a mollified quadratic-spline cutoff on a transition band of width (R-r)/2
// has |eta'| <= 2/w and |eta''| <= 8/w^2, giving Theta~ <= 32 after the
// (R-r)^2 normalization; C' = 1 is the smallest admissible value.
struct CalibrationConstants {
  double cutoffTheta = 32.0;      // > 0
  double cacciopoliCPrime = 1.0;  // >= 1

  void validate() const {
    if (cutoffTheta <= 0.0)
      throw std::invalid_argument("CalibrationConstants: cutoffTheta must be > 0");
    if (cacciopoliCPrime < 1.0)
      throw std::invalid_argument("CalibrationConstants: cacciopoliCPrime must be >= 1");
  }
};

// Nested annuli radii 0 < r1 < R1 <= r2 < R2 <= r3 < R3 plus the mu offset
// eps used by the weight pair (mu, mu1).
struct AnnuliRadii {
  xreal r1, R1, r2, R2, r3, R3;
  xreal eps = 1;

  void validate() const {
    if (!(xreal(0) < r1 && r1 < R1 && R1 <= r2 && r2 < R2 && R2 <= r3 && r3 < R3))
      throw std::invalid_argument("AnnuliRadii: need 0 < r1 < R1 <= r2 < R2 <= r3 < R3");
    if (!(eps > 0)) throw std::invalid_argument("AnnuliRadii: eps must be > 0");
  }
};

}  // namespace ucplab
