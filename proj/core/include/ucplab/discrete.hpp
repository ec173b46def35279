#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "ucplab/fields.hpp"
#include "ucplab/geometry.hpp"
#include "ucplab/grid.hpp"

namespace ucplab {

// Sparse symmetric finite-difference realization of
//   H = -div(A grad) + c + V (+ t W)
// with Dirichlet conditions by node elimination.
struct DiscreteOperator {
  GridSpec grid;
  Eigen::SparseMatrix<double> M;
  double shift = 0.0;  // recorded spectral shift, if any was applied
};

// Conservative flux differencing. Diagonal second-order terms sample
// a^{kk} at the two half-nodes per axis (from the analytic generator);
// cross terms use the four corner half-nodes with the sign pattern
// -+/+- over (a^{kl}/(2 h^2)), which is symmetric by construction and
// second-order consistent with -d_k(a^{kl} d_l u) - d_l(a^{kl} d_k u).
// The optional perturbation adds t on the diagonal at masked nodes.
DiscreteOperator assemble(const CoefficientField& field, double t = 0.0,
                          const std::vector<std::uint8_t>* mask = nullptr);

struct SpectralResult {
  std::vector<double> eigenvalues;  // ascending
  Eigen::MatrixXd eigenvectors;     // unit-norm columns, matching order
  std::vector<double> residuals;    // ||M v - lambda v||_2 per pair
  double tol = 0.0;
};

// k smallest eigenpairs with residual certificates. Dense solve for
// N <= 2000; above that, shift-invert Lanczos with full
// reorthogonalization and a sparse LDLT factorization, deterministic for a
// fixed seed. Throws std::runtime_error on non-convergence, with the best
// residuals in the message.
SpectralResult eigs_lowest(const DiscreteOperator& op, int k, double tol = 1e-10,
                           std::uint64_t seed = 1);

// Same contract and certificates as eigs_lowest, but always the iterative
// path. Parameter sweeps that need only one or two pairs on mid-size grids
// use this to skip the dense solve; the residual check keeps it honest.
SpectralResult eigs_lowest_iterative(const DiscreteOperator& op, int k, double tol = 1e-10,
                                     std::uint64_t seed = 1);

// All eigenvalues, no vectors (dense path only); used by the Monte Carlo
// sweeps where N stays small.
std::vector<double> eigenvalues_dense(const DiscreteOperator& op);

// Unit-norm element of the span of the computed eigenvectors with
// eigenvalue in [lo, hi]. Throws std::invalid_argument when the window
// contains no resolved eigenvalue. The random overload draws the
// coefficients from a seeded normal distribution.
Eigen::VectorXd projector_sample(const SpectralResult& sr, double lo, double hi,
                                 const std::vector<double>& coeffs);
Eigen::VectorXd projector_sample(const SpectralResult& sr, double lo, double hi,
                                 std::uint64_t seed);

struct HellmannFeynman {
  double numericDeriv = 0.0;  // (lambda_1(t + h_t) - lambda_1(t - h_t)) / (2 h_t)
  double pairing = 0.0;       // <psi_1(t), W psi_1(t)>
};

// First-order perturbation check for the lowest eigenvalue of H + tW with
// W the sensing-mask indicator. Requires lambda_1 simple with relative gap
// above 1e-6; throws std::runtime_error on a degenerate pair.
HellmannFeynman hellmann_feynman(const CoefficientField& field, const EquidistributedSeq& Z,
                                 double t, double h_t, double tol = 1e-10,
                                 std::uint64_t seed = 1);

// MatrixMarket coordinate export (symmetric, lower triangle, 1-based).
void write_matrix_market(const DiscreteOperator& op, const std::string& path);

}  // namespace ucplab
