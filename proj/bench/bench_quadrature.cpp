#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "tqt/instances.hpp"
#include "tqt/quadrature.hpp"
#include "tqt/tqm.hpp"

using namespace tqt;

namespace {

// Smooth vector-valued integrand with a sharp off-centre peak, so adaptive refinement has work to do.
QuadratureResult run_synthetic(int dim, bool parallel) {
  const Integrand f = [dim](std::span<const double> x) {
    std::vector<Complex> out(16);
    double s = 0.0, r2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      s += x[i];
      r2 += (x[i] - 0.3) * (x[i] - 0.3);
    }
    const double peak = 1.0 / (1.0 + 200.0 * r2);
    for (std::size_t j = 0; j < out.size(); ++j)
      out[j] = Complex(std::exp(-s * static_cast<double>(j + 1) / 4.0), peak * static_cast<double>(j + 1));
    return out;
  };
  QuadratureSpec spec;
  spec.tolerance = 1e-8;
  spec.parallel = parallel;
  return integrate_cube(f, dim, 16, spec);
}

void BM_Synthetic(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const bool parallel = state.range(1) != 0;
  long evals = 0;
  for (auto _ : state) {
    auto r = run_synthetic(dim, parallel);
    evals = r.evaluations;
    benchmark::DoNotOptimize(r.value.data());
  }
  state.counters["evaluations"] = static_cast<double>(evals);
}
BENCHMARK(BM_Synthetic)->ArgsProduct({{2, 3}, {0, 1}})->ArgNames({"dim", "parallel"})->Unit(benchmark::kMillisecond);

// F_4 by quadrature on a random float instance: a 3-dimensional operator-valued integral.
void BM_TransferQuadrature(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const Session session;
  const auto b = to_complex(gen_random_instance(9, {{0, 2}, {1, 2}, {2, 1}}));
  const auto s = build_splitting_hodge(b.Q, session);
  std::mt19937_64 rng(3);
  std::vector<AlgElem<Complex>> in;
  for (int l = 0; l < 4; ++l) in.push_back(basis_element(b.algebra, rng() % b.algebra.size()));
  QuadratureSpec spec;
  spec.tolerance = 1e-9;
  spec.parallel = parallel;
  for (auto _ : state) {
    auto r = transfer_quadrature(in, s, b, spec);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_TransferQuadrature)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
