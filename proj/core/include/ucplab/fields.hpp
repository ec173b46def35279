#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ucplab/grid.hpp"

namespace ucplab {

// Analytic closure generating the coefficients. The closure is retained for
// the lifetime of the field so that flux assembly can sample half-nodes and
// extensions can compose reflection maps, instead of interpolating node
// tables (which would cost a consistency order the continuum never pays).
struct FieldGenerator {
  std::string name = "identity";
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> A;
  std::function<double(const Eigen::VectorXd&)> c;
  std::function<double(const Eigen::VectorXd&)> V;
  // Declared bounds of the generating family (ellipticity, Lipschitz, norms).
  double thetaE = 1.0;
  double thetaL = 0.0;
  double normC = 0.0;
  double normV = 0.0;
};

// Built-in generators.
FieldGenerator identity_generator(int d);
// Diagonal entries 2 + cos(s_k x_k); lower ellipticity 1, upper 3, Lipschitz
// max |s_k|.
FieldGenerator homogenization_generator(int d, const std::vector<double>& s);
// d = 2 field with a cross term q0 sin(pi (x1 + L/2)/L) sin(pi (x2 + L/2)/L)
// that vanishes on all four faces of (-L/2, L/2)^2, on top of the diagonal
// homogenization entries. Compliant with the face-vanishing assumption that
// antisymmetric reflection requires.
FieldGenerator crossterm_generator(double L, double q0);
// d = 2 negative control: constant off-diagonal entry q, violating the
// face-vanishing assumption everywhere.
FieldGenerator constant_offdiag_generator(double q);

struct CoefficientField {
  GridSpec grid;
  FieldGenerator gen;

  Eigen::MatrixXd A(const Eigen::VectorXd& x) const { return gen.A(x); }
  double c(const Eigen::VectorXd& x) const { return gen.c ? gen.c(x) : 0.0; }
  double V(const Eigen::VectorXd& x) const { return gen.V ? gen.V(x) : 0.0; }
};

// Samples the generator on the grid, verifying symmetry of A at every node
// (tolerance 1e-12 relative); throws std::invalid_argument on an asymmetric
// generator.
CoefficientField sample_field(const FieldGenerator& gen, const GridSpec& grid);

struct ThetaMeasurement {
  double thetaEminus = 0;  // min eigenvalue of A over nodes
  double thetaEplus = 0;   // max eigenvalue of A over nodes
  double thetaLhat = 0;    // max row-sum-norm difference quotient over axis-adjacent nodes
};
ThetaMeasurement measure_theta(const CoefficientField& field);

// True iff the off-diagonal entries of A vanish (absolute tolerance) on a
// dense boundary sample. The weak variant checks, per face, only the row and
// column of the face normal.
bool check_dir(const CoefficientField& field, bool weakVariant = false, double tol = 1e-12);

// Antisymmetric reflection extension from (-L/2, L/2)^d to the cube enlarged
// by the given factor (3 or 9). Per axis fold across a face: the reflected
// row and column of A flip sign, diagonal entries and c, V extend evenly,
// and node functions extend oddly. The result keeps a composed generator, so
// the factor-9 extension is a reflection of the factor-3 one.
struct Extension {
  CoefficientField source;
  int factor = 3;
  CoefficientField result;
};

// Extends the field and a node function psi (given on the source grid's
// interior nodes). Requires check_dir(field); throws std::invalid_argument
// otherwise. The extended grid reuses the source spacing, so source nodes
// embed exactly. Fold images landing on a cell interface get psi = 0.
std::pair<Extension, Eigen::VectorXd> reflect_extend(const CoefficientField& field,
                                                     const Eigen::VectorXd& psi, int factor);

// Pullback x -> x/G onto unit cells: the rescaled field lives on
// (-L/(2G), L/(2G))^d with A'(x) = A(Gx), c' = G^2 c(Gx), V' = G^2 V(Gx).
// Eigenvalues of the associated operator scale by G^2.
CoefficientField rescale(const CoefficientField& field, double G);

}  // namespace ucplab
