#include <doctest.h>

#include "tqt/instances.hpp"
#include "tqt/traces.hpp"

using namespace tqt;

TEST_CASE("T1: valid dg module with χ = 1") {
  const auto b = t1_instance();
  CHECK(all_pass(validate_dg(b, Session{})));
  CHECK(b.module->size() == 3);
  CHECK(b.algebra.size() == 9);
  CHECK(euler_characteristic(b.Q, Session{}) == 1);
  CHECK(euler_characteristic(*b.module) == 1);
  const auto h = cohomology(b.Q, Session{});
  CHECK(h.dims.at(0) == 1);
  CHECK(h.dims.at(1) == 0);
}

TEST_CASE("matrix instances: dims (1|0) and (0|n)") {
  const auto one = gen_matrix_instance({{0, 1}});
  CHECK(all_pass(validate_dg(one, Session{})));
  const auto s = build_splitting_projector(one.Q, Session{});
  AInfinityMorphism<Rational> f(one, s, 1);
  CHECK(upsilon(HochschildChain<Rational>{{{0}, Rational(-5, 2)}}, f) == Rational(-5, 2));

  for (std::size_t n = 1; n <= 3; ++n) {
    const auto odd = gen_matrix_instance({{1, n}});
    CHECK(all_pass(validate_dg(odd, Session{})));
    CHECK(euler_characteristic(odd.Q, Session{}) == -static_cast<long>(n));
    CHECK(odd.algebra.size() == n * n);
  }
}

TEST_CASE("matrix instances: labels and named Id") {
  const auto b = t1_instance();
  CHECK(b.algebra.index_of("f<-e1").has_value());
  CHECK(b.algebra.named.count("Id") == 1);
  const auto id = element_by_name(b.algebra, "Id");
  CHECK(b.act(id) == GradedMap<Rational>::identity(b.module));
  CHECK_THROWS_AS(element_by_name(b.algebra, "nope"), InputError);
}

TEST_CASE("torus: mode count, χ = 0, valid") {
  for (int n : {1, 2}) {
    const auto t = gen_torus_dolbeault(n, {0.3, 1.2});
    const std::size_t modes = static_cast<std::size_t>((2 * n + 1) * (2 * n + 1));
    CHECK(t.module->dim(0) == modes);
    CHECK(t.module->dim(1) == modes);
    CHECK(all_pass(validate_dg(t, Session{})));
    CHECK(euler_characteristic(t.Q, Session{}) == 0);
    const auto h = cohomology(t.Q, Session{});
    CHECK(h.dims.at(0) == 1);
    CHECK(h.dims.at(1) == 1);
  }
  CHECK_THROWS_AS(gen_torus_dolbeault(0), InputError);
  CHECK_THROWS_AS(gen_torus_dolbeault(1, {0.0, -1.0}), InputError);
  CHECK_THROWS_AS(gen_torus_dolbeault(5), InputError);  // 2·121 > 64
}

TEST_CASE("random instances: deterministic per seed and valid") {
  for (std::uint64_t seed : {1u, 2u, 3u, 17u}) {
    const auto a = gen_random_instance(seed, {{0, 2}, {1, 2}, {2, 1}});
    const auto b = gen_random_instance(seed, {{0, 2}, {1, 2}, {2, 1}});
    CHECK(all_pass(validate_dg(a, Session{})));
    CHECK(a.Q == b.Q);
    REQUIRE(a.rho.size() == b.rho.size());
    for (std::size_t i = 0; i < a.rho.size(); ++i) CHECK(a.rho[i] == b.rho[i]);
    CHECK(a.algebra.degree == b.algebra.degree);
  }
  const auto x = gen_random_instance(1, {{0, 2}, {1, 2}, {2, 1}});
  const auto y = gen_random_instance(2, {{0, 2}, {1, 2}, {2, 1}});
  bool differs = !(x.Q == y.Q) || x.rho.size() != y.rho.size();
  for (std::size_t i = 0; !differs && i < x.rho.size(); ++i) differs = !(x.rho[i] == y.rho[i]);
  CHECK(differs);
}

TEST_CASE("instance bounds") {
  CHECK_THROWS_AS(gen_matrix_instance({{0, 40}, {1, 25}}), InputError);
  CHECK_THROWS_AS(gen_random_instance(1, {{0, 65}}), InputError);
  CHECK_THROWS_AS(gen_random_instance(1, {{0, 3}, {1, 3}}, 6, 2), StructuralError);
  CHECK_THROWS_AS(gen_random_instance(1, {}), InputError);
}
