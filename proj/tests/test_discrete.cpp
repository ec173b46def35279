#include <catch2/catch.hpp>

#include "ucplab/discrete.hpp"
#include "ucplab/fields.hpp"
#include "ucplab/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

using namespace ucplab;

namespace {

CoefficientField laplace_field(int d, double L, int n) {
  return sample_field(identity_generator(d), GridSpec{d, L, n});
}

}  // namespace

TEST_CASE("FD dispersion oracle in one dimension", "[discrete]") {
  const CoefficientField f = laplace_field(1, 1.0, 99);
  const SpectralResult sr = eigs_lowest(assemble(f), 2);

  // Frozen dispersion values for h = 1/100.
  CHECK(sr.eigenvalues[0] == Approx(9.868792685368859986183266).margin(1e-10));
  CHECK(sr.eigenvalues[1] == Approx(39.46543143456876095326386).margin(1e-9));

  // Closed form recomputed in place.
  const double h = f.grid.h();
  const double disp = (2.0 / (h * h)) * (1.0 - std::cos(M_PI * h / f.grid.L));
  CHECK(sr.eigenvalues[0] == Approx(disp).epsilon(1e-12));

  // Continuum limit within a tenth of a percent at this resolution.
  const double pi2 = M_PI * M_PI;
  CHECK(std::abs(sr.eigenvalues[0] - pi2) / pi2 < 1e-3);

  for (double r : sr.residuals) CHECK(r <= sr.tol);
}

TEST_CASE("iterative path reproduces the dispersion oracle at d = 2", "[discrete]") {
  // 63 interior nodes per axis puts the operator above the dense cutoff.
  const CoefficientField f = laplace_field(2, 8.0, 63);
  const SpectralResult sr = eigs_lowest(assemble(f), 1);
  CHECK(sr.eigenvalues[0] == Approx(0.3083632114758674650184692).margin(1e-9));
  CHECK(sr.residuals[0] <= sr.tol);
}

TEST_CASE("dense and iterative solvers agree", "[discrete]") {
  const CoefficientField f = laplace_field(1, 4.0, 255);
  const DiscreteOperator op = assemble(f);
  const SpectralResult dense = eigs_lowest(op, 3);
  const SpectralResult iter = eigs_lowest_iterative(op, 3);
  for (int j = 0; j < 3; ++j) {
    CHECK(iter.eigenvalues[j] == Approx(dense.eigenvalues[j]).margin(1e-8));
    CHECK(iter.residuals[j] <= iter.tol);
  }

  const auto all = eigenvalues_dense(op);
  REQUIRE(all.size() == static_cast<std::size_t>(op.grid.size()));
  for (int j = 0; j < 3; ++j) CHECK(all[j] == Approx(dense.eigenvalues[j]).margin(1e-10));
}

TEST_CASE("assembly is symmetric and the mask enters as a diagonal", "[discrete]") {
  GridSpec grid{2, 2.0, 15};
  const CoefficientField f = sample_field(crossterm_generator(2.0, 0.5), grid);
  const DiscreteOperator op = assemble(f);

  Eigen::SparseMatrix<double> diff = Eigen::SparseMatrix<double>(op.M.transpose()) - op.M;
  double asym = 0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
      asym = std::max(asym, std::abs(it.value()));
  CHECK(asym == 0.0);

  const auto Z = make_equidistributed(2, 1.0, 0.2, 2.0, PlacementMode::centered);
  const auto mask = sensing_mask(Z, grid);
  const double t = 0.7;
  const DiscreteOperator opT = assemble(f, t, &mask);

  Eigen::VectorXd u = Eigen::VectorXd::Random(grid.size());
  Eigen::VectorXd masked = u;
  for (long long i = 0; i < grid.size(); ++i)
    if (!mask[i]) masked[i] = 0.0;
  const Eigen::VectorXd lhs = opT.M * u;
  const Eigen::VectorXd rhs = op.M * u + t * masked;
  // Entries scale like 1/h^2, so the two summation orders differ at ~1e-13.
  CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() == Approx(0.0).margin(1e-10));
}

TEST_CASE("projector samples live in the requested spectral window", "[discrete]") {
  const CoefficientField f = laplace_field(1, 1.0, 31);
  const SpectralResult sr = eigs_lowest(assemble(f), 3);
  const double l1 = sr.eigenvalues[0], l2 = sr.eigenvalues[1];

  // Single-eigenvalue window returns the eigenvector regardless of scaling.
  const Eigen::VectorXd g =
      projector_sample(sr, l1 - 1.0, (l1 + l2) / 2, std::vector<double>{2.5});
  CHECK(g.norm() == Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(g.dot(sr.eigenvectors.col(0))) == Approx(1.0).epsilon(1e-12));

  // Two-eigenvalue window: expansion coefficients are the normalized inputs.
  const Eigen::VectorXd mix = projector_sample(sr, l1 - 1.0, l2 + 1e-9, {3.0, 4.0});
  CHECK(mix.norm() == Approx(1.0).epsilon(1e-12));
  CHECK(mix.dot(sr.eigenvectors.col(0)) == Approx(0.6).epsilon(1e-10));
  CHECK(mix.dot(sr.eigenvectors.col(1)) == Approx(0.8).epsilon(1e-10));

  // Seeded draws are deterministic.
  const Eigen::VectorXd s1 = projector_sample(sr, l1 - 1.0, l2 + 1e-9, std::uint64_t{11});
  const Eigen::VectorXd s2 = projector_sample(sr, l1 - 1.0, l2 + 1e-9, std::uint64_t{11});
  CHECK((s1 - s2).norm() == 0.0);

  CHECK_THROWS_AS(projector_sample(sr, l1 - 2.0, l1 - 1.0, std::uint64_t{1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(projector_sample(sr, l1 - 1.0, l2 + 1e-9, std::vector<double>{1.0}),
                  std::invalid_argument);
}

TEST_CASE("first-order perturbation pairing matches the numeric derivative", "[discrete]") {
  const CoefficientField f = laplace_field(1, 4.0, 127);
  const auto Z = make_equidistributed(1, 1.0, 0.2, 4.0, PlacementMode::centered);
  const HellmannFeynman hf = hellmann_feynman(f, Z, 0.5, 1e-2);
  CHECK(std::abs(hf.numericDeriv - hf.pairing) <= 1e-4);
  CHECK(hf.pairing > 0.0);
  CHECK(hf.pairing < 1.0);
}

TEST_CASE("MatrixMarket export writes the lower triangle", "[discrete]") {
  const CoefficientField f = laplace_field(1, 1.0, 4);
  const DiscreteOperator op = assemble(f);

  const auto path =
      (std::filesystem::temp_directory_path() / "ucplab_mm_test.mtx").string();
  write_matrix_market(op, path);

  std::ifstream in(path);
  REQUIRE(in.good());
  std::string banner;
  std::getline(in, banner);
  CHECK(banner.find("%%MatrixMarket") == 0);
  CHECK(banner.find("symmetric") != std::string::npos);

  long long rows = 0, cols = 0, nnz = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  REQUIRE(sscanf(line.c_str(), "%lld %lld %lld", &rows, &cols, &nnz) == 3);
  CHECK(rows == 4);
  CHECK(cols == 4);
  CHECK(nnz == 7);  // tridiagonal: 4 diagonal + 3 subdiagonal entries

  long long seen = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++seen;
  CHECK(seen == nnz);

  std::filesystem::remove(path);
}
