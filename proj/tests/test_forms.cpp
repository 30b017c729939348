#include <doctest.h>

#include <random>

#include "tqt/instances.hpp"
#include "tqt/tqm.hpp"

using namespace tqt;

namespace {

struct Fixture {
  DgModuleBundle<Complex> b;
  Splitting<Complex> s;
};

Fixture random_float(std::uint64_t seed) {
  const Session session;
  const auto br = gen_random_instance(seed, {{0, 2}, {1, 2}, {2, 1}}, 2);
  auto b = to_complex(br);
  auto s = build_splitting_hodge(b.Q, session);
  return {std::move(b), std::move(s)};
}

std::vector<AlgElem<Complex>> tuple(const FiniteAlgebra<Complex>& a, std::mt19937_64& rng, int k) {
  std::vector<AlgElem<Complex>> out;
  for (int l = 0; l < k; ++l) out.push_back(basis_element(a, rng() % a.size()));
  return out;
}

}  // namespace

TEST_CASE("quadrature of the top component reproduces the closed form") {
  const Session session;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto [b, s] = random_float(seed);
    std::mt19937_64 rng(seed);
    for (int k = 1; k <= 3; ++k)
      for (int t = 0; t < 6; ++t) {
        const auto in = tuple(b.algebra, rng, k);
        const auto exact = transfer_closed(in, s, b);
        QuadratureSpec spec;
        spec.tolerance = 1e-10;
        const auto q = transfer_quadrature(in, s, b, spec);
        CAPTURE(seed);
        CAPTURE(k);
        CHECK((q.value - exact).matrix().max_abs() <= 1e-8 * (1.0 + exact.matrix().max_abs()));
      }
  }
}

TEST_CASE("Omega is almost closed: dΩ equals Ω on d of the inputs") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto [b, s] = random_float(seed);
    std::mt19937_64 rng(seed + 7);
    for (int k = 2; k <= 4; ++k)
      for (int t = 0; t < 4; ++t) {
        const auto in = tuple(b.algebra, rng, k);
        std::vector<double> gaps;
        for (int g = 0; g < k - 1; ++g) gaps.push_back(0.2 + 0.3 * g);
        CAPTURE(seed);
        CAPTURE(k);
        CHECK(almost_closed_check(in, gaps, s, b, 1e-4) < 1e-6);
      }
  }
}

TEST_CASE("boundary faces: t_i = 0 merges neighbours, t_i → ∞ factorizes") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto [b, s] = random_float(seed);
    std::mt19937_64 rng(seed + 3);
    for (int k = 2; k <= 3; ++k) {
      const auto in = tuple(b.algebra, rng, k);
      for (int gap = 1; gap < k; ++gap) {
        std::vector<double> gaps(k - 1, 0.4);
        gaps[gap - 1] = 0.0;
        const auto face = restrict_face(omega_eval(in, gaps, s, b), gap);
        CHECK(form_distance(face, omega_merged(in, gap, gaps, s, b), s.m0) < 1e-12);
        gaps[gap - 1] = 1e9;
        const auto far = omega_eval(in, gaps, s, b);
        CHECK(form_distance(restrict_face(far, gap), omega_factorized(in, gap, gaps, s, b), s.m0) < 1e-6);
      }
    }
  }
}
