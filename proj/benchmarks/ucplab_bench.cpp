// Microbenchmarks for the hot paths: operator assembly, the two eigensolver
// routes, extended-precision constant evaluation, and the weight series.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "ucplab/constants.hpp"
#include "ucplab/discrete.hpp"
#include "ucplab/experiments.hpp"
#include "ucplab/fields.hpp"
#include "ucplab/grid.hpp"
#include "ucplab/params.hpp"

using namespace ucplab;

namespace {

CoefficientField make_field(int d, int n) {
  const double L = 4.0;
  std::vector<double> shifts(d);
  for (int k = 0; k < d; ++k) shifts[k] = k + 1.0;
  return sample_field(homogenization_generator(d, shifts), GridSpec{d, L, n});
}

void BM_assemble_d2(benchmark::State& state) {
  const CoefficientField f = make_field(2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(f).M.nonZeros());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_assemble_d2)->Arg(31)->Arg(63)->Arg(127)->Complexity();

void BM_eigs_dense_d1(benchmark::State& state) {
  const DiscreteOperator op = assemble(make_field(1, static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(eigs_lowest(op, 3).eigenvalues[0]);
}
BENCHMARK(BM_eigs_dense_d1)->Arg(255)->Arg(511)->Unit(benchmark::kMillisecond);

void BM_eigs_iterative_d2(benchmark::State& state) {
  const DiscreteOperator op = assemble(make_field(2, static_cast<int>(state.range(0))));
  for (auto _ : state)
    benchmark::DoNotOptimize(eigs_lowest_iterative(op, 3).eigenvalues[0]);
}
BENCHMARK(BM_eigs_iterative_d2)->Arg(63)->Arg(95)->Unit(benchmark::kMillisecond);

void BM_csfuc(benchmark::State& state) {
  const ModelParams p{2, 2.0, 1.0, 1.0, 0.5, 0.25, 1.0};
  const CalibrationConstants cal;
  const xreal delta = delta0(p) / 2;
  for (auto _ : state) benchmark::DoNotOptimize(csfuc(delta, p, cal).lnExact);
}
BENCHMARK(BM_csfuc)->Unit(benchmark::kMillisecond);

void BM_weight_eval(benchmark::State& state) {
  Eigen::MatrixXd A0(2, 2);
  A0 << 2.0, 0.5, 0.5, 1.0;
  std::vector<Eigen::VectorXd> pts;
  for (int j = 0; j < 1000; ++j) {
    Eigen::VectorXd x(2);
    x << 0.6 * std::cos(0.01 * j), 0.6 * std::sin(0.01 * j);
    pts.push_back(x);
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(carleman_weight_eval(1.0, 1.5, A0, pts).worstSlack);
}
BENCHMARK(BM_weight_eval)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
