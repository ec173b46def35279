#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ucplab/grid.hpp"
#include "ucplab/params.hpp"
#include "ucplab/xreal.hpp"

namespace ucplab {

// One perturbed lattice point per unit cell of the G-lattice tiling of the
// cube (-L/2, L/2)^d. The defining property is that the closed ball of radius
// delta around z_j stays inside the cell around j, i.e. |z_j - j|_inf <=
// G/2 - delta componentwise.
struct EquidistributedSeq {
  int d = 1;
  double G = 1.0;
  double delta = 0.1;
  double L = 1.0;
  std::vector<Eigen::VectorXd> centers;  // cell centers j, one per cell
  std::vector<Eigen::VectorXd> z;        // perturbed point of each cell
};

enum class PlacementMode { centered, seeded_random };

// Builds a (G, delta)-equidistributed sequence on the cells tiling (-L/2,
// L/2)^d. Centered mode puts z_j = j; random mode samples z_j uniformly in
// the admissible sub-cube [j - (G/2 - delta), j + (G/2 - delta)]^d.
// Requires 0 < delta < G/2 and L a positive integer multiple of G.
EquidistributedSeq make_equidistributed(int d, double G, double delta, double L,
                                        PlacementMode mode, std::uint64_t seed = 0);

// True iff every stored point satisfies the closed containment
// |z_j - j|_inf <= G/2 - delta.
bool validate_equidistributed(const EquidistributedSeq& Z);

// Boolean mask over grid nodes: node included iff it lies in some closed ball
// B(delta, z_j). The grid must cover the same cube (-L/2, L/2)^d.
std::vector<std::uint8_t> sensing_mask(const EquidistributedSeq& Z, const GridSpec& grid);

// Bounded-step path from z to y inside the unit cell, used to chain smallness
// estimates between distant balls. Steps have length in [a, b]; all points
// stay in the enlarged cube (-(1+2a)/2, (1+2a)/2)^d; the step count is
// m = 2 floor(sqrt(d)/(b-a)) + 2, and the path sits at y from index
// mu + 2 onward for even indices, with mu = 2 floor(|y-z|/(b-a)).
struct ChainPath {
  std::vector<Eigen::VectorXd> points;
  double a = 0;
  double b = 0;
  long long m = 0;
};

// Deterministic witness construction: walk toward y in net increments of
// b - a (step back a, step forward b), land on y exactly, then oscillate
// y -> y - a*u -> y until m steps are spent. Requires 0 < a < b and
// z, y in the closed unit cube [-1/2, 1/2]^d.
ChainPath chain_path(const Eigen::VectorXd& z, const Eigen::VectorXd& y, double a, double b);

// Checks every ChainPath invariant (step band, endpoints, containment,
// count); the property tests and the CLI demo share this as the oracle.
bool validate_chain(const ChainPath& path, const Eigen::VectorXd& z, const Eigen::VectorXd& y,
                    double tol = 1e-12);

struct Annulus {
  Eigen::VectorXd center;
  double rInner = 0;
  double rOuter = 0;

  void validate() const {
    if (!(0 < rInner && rInner < rOuter))
      throw std::invalid_argument("Annulus: need 0 < rInner < rOuter");
  }
  bool contains(const Eigen::VectorXd& x) const {
    const double r = (x - center).norm();
    return rInner < r && r < rOuter;
  }
};

// Combinatorial covering counts:
//   Kd = (18 e sqrt(d) + 1)^d,
//   M  = (2 R3 + 2 a + 1)^d with a = (R2 + 3 r2)/4,
//   N  = ceil(4 sqrt(d)/(R2 - r2))^d.
struct CoveringCounts {
  xreal Kd, M, N;
};
CoveringCounts covering_counts(const ModelParams& p, const AnnuliRadii& radii);

// Sampled verification that the translated middle annuli Z2 + z_j cover
// space for worst-case admissible placements z_j. For each x in a dense
// sample (spacing <= 0.01) of the central unit cell it looks for a lattice
// cell j whose every admissible point z_j has r2 <= |x - z_j| <= R2, via the
// deterministic band bound r2 + sqrt(d)/2 <= |x - j| <= R2 - sqrt(d)/2.
// True for the wide reference radii (r2 = 1, R2 = 3 sqrt(d)); false for the
// narrow fixed-leg radii, whose R2 is far below the cell diameter.
bool annuli_partition_check(const ModelParams& p, const AnnuliRadii& radii);

// Convenience overload using the wide reference radii.
bool annuli_partition_check(const ModelParams& p);

}  // namespace ucplab
