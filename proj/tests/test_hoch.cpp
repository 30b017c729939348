#include <doctest.h>

#include <random>

#include "tqt/hoch.hpp"
#include "tqt/instances.hpp"

using namespace tqt;

namespace {

HochschildChain<Rational> single(const Slots& x, Rational c = 1) { return {{x, c}}; }

HochschildChain<Rational> sum(HochschildChain<Rational> a, const HochschildChain<Rational>& b, Rational s = 1) {
  for (const auto& [x, c] : b) a[x] += s * c;
  for (auto it = a.begin(); it != a.end();) it = sgn(it->second) == 0 ? a.erase(it) : std::next(it);
  return a;
}

Slots random_slots(std::mt19937_64& rng, std::size_t n, int k) {
  Slots x;
  for (int l = 0; l < k; ++l) x.push_back(rng() % n);
  return x;
}

}  // namespace

TEST_CASE("hoch_diff: a⊗b in degree 0 gives ab − ba; a single slot gives d a") {
  const auto v = make_space({{0, 2}});
  const auto e = endomorphism_algebra<Rational>(*v);
  const std::size_t a = 0 * 2 + 1, b = 1 * 2 + 0;  // E[0←1], E[1←0]
  const auto d = hoch_diff(single({a, b}), e);
  // ab = E[0←0], ba = E[1←1]
  CHECK(d == HochschildChain<Rational>{{{0}, 1}, {{3}, -1}});

  const auto t1 = t1_instance();
  const auto i = *t1.algebra.index_of("e1<-e2");
  const auto di = hoch_diff(single({i}), t1.algebra);
  HochschildChain<Rational> expected;
  add_tensor(expected, {differentiate(t1.algebra, basis_element(t1.algebra, i))}, Rational(1));
  CHECK(di == expected);
  CHECK_FALSE(di.empty());
}

TEST_CASE("hoch_diff squares to zero on graded endomorphism algebras") {
  const auto v = make_space({{0, 1}, {1, 1}, {2, 1}});
  const auto e = endomorphism_algebra<Rational>(*v);
  std::mt19937_64 rng(4);
  for (int k = 1; k <= 5; ++k)
    for (int t = 0; t < 30; ++t) {
      const auto dd = hoch_diff(hoch_diff(single(random_slots(rng, e.size(), k)), e), e);
      CHECK(dd.empty());
    }
}

TEST_CASE("cyclic shift: signs and orbits") {
  const auto v = make_space({{0, 2}});
  const auto e = endomorphism_algebra<Rational>(*v);
  {
    auto [p, y] = cyclic_shift(Slots{1, 2}, e);
    CHECK(p == 1);
    CHECK(y == Slots{2, 1});
    auto [q, z] = cyclic_shift(Slots{3}, e);
    CHECK(q == 0);
    CHECK(z == Slots{3});
  }
  // C^k on degree-0 tensors is the identity
  std::mt19937_64 rng(1);
  for (int k = 1; k <= 4; ++k) {
    const Slots x = random_slots(rng, e.size(), k);
    Slots y = x;
    long parity = 0;
    for (int s = 0; s < k; ++s) {
      auto [p, next] = cyclic_shift(y, e);
      parity += p;
      y = next;
    }
    CHECK(y == x);
    CHECK(parity % 2 == 0);
  }
  // graded: C^k = ±id, the same sign for every tensor of the same degree profile up to rotation
  const auto w = make_space({{0, 1}, {1, 1}});
  const auto g = endomorphism_algebra<Rational>(*w);
  for (int k = 1; k <= 4; ++k)
    for (int t = 0; t < 20; ++t) {
      const Slots x = random_slots(rng, g.size(), k);
      HochschildChain<Rational> c = single(x);
      for (int s = 0; s < k; ++s) c = cyclic_shift(c, g);
      REQUIRE(c.size() == 1);
      CHECK(c.begin()->first == x);
      CHECK(abs(c.begin()->second) == 1);
    }
}

TEST_CASE("cyclic_project: quotient by the image of 1 − C") {
  const auto v = make_space({{0, 1}, {1, 1}});
  const auto e = endomorphism_algebra<Rational>(*v);
  const auto even = make_space({{0, 2}});
  const auto ee = endomorphism_algebra<Rational>(*even);
  // a⊗b + b⊗a ≡ 0 in degree 0
  CHECK(cyclic_project(HochschildChain<Rational>{{{1, 2}, 1}, {{2, 1}, 1}}, ee).empty());
  CHECK(cyclic_project(single({2}), ee) == single({2}));
  std::mt19937_64 rng(8);
  for (int k = 1; k <= 4; ++k)
    for (int t = 0; t < 20; ++t) {
      const auto x = single(random_slots(rng, e.size(), k), Rational(static_cast<long>(rng() % 5) + 1));
      const auto p = cyclic_project(x, e);
      CHECK(cyclic_project(p, e) == p);
      CHECK(cyclic_project(sum(x, cyclic_shift(x, e), -1), e).empty());
      // the total differential preserves im(1 − C)
      CHECK(cyclic_project(hoch_diff(sum(x, cyclic_shift(x, e), -1), e), e).empty());
    }
  const auto t1 = t1_instance();
  for (int k = 1; k <= 4; ++k)
    for (int t = 0; t < 20; ++t) {
      const auto x = single(random_slots(rng, t1.algebra.size(), k));
      CHECK(cyclic_project(hoch_diff(sum(x, cyclic_shift(x, t1.algebra), -1), t1.algebra), t1.algebra).empty());
    }
}

TEST_CASE("fhoch_push: single slot and the k = 2 expansion") {
  const Session session;
  const auto b = gen_random_instance(9, {{0, 2}, {1, 2}, {2, 1}});
  const auto s = build_splitting_projector(b.Q, session);
  AInfinityMorphism<Rational> f(b, s, 4);
  const auto end = endomorphism_algebra<Rational>(*s.m0);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const std::size_t i = rng() % b.algebra.size(), j = rng() % b.algebra.size();
    HochschildChain<Rational> f1;
    add_tensor(f1, {endomorphism_element(f.on_basis({i}))}, Rational(1));
    CHECK(fhoch_push(single({i}), f) == f1);

    // a⊗b ↦ F2(a,b) + F1(a)⊗F1(b) + (rotation sign) F2(b,a)
    HochschildChain<Rational> expected;
    add_tensor(expected, {endomorphism_element(f.on_basis({i, j}))}, Rational(1));
    add_tensor(expected, {endomorphism_element(f.on_basis({i})), endomorphism_element(f.on_basis({j}))}, Rational(1));
    const long ei = b.algebra.degree[i] - 1, ej = b.algebra.degree[j] - 1;
    add_tensor(expected, {endomorphism_element(f.on_basis({j, i}))}, parity_sign<Rational>(ei * ej));
    prune(expected, session);
    CHECK(fhoch_push(single({i, j}), f) == expected);
  }
}

TEST_CASE("fhoch_push: adding a rotated F1(b)⊗F1(a) term breaks the chain-map property for every sign") {
  const Session session;
  // 0: always +, 1: always −, 2: Koszul sign of the rotation
  for (int rule = 0; rule < 3; ++rule) {
    int broken = 0;
    for (std::uint64_t seed : {1, 4, 9}) {
      const auto b = gen_random_instance(seed, {{0, 2}, {1, 2}, {2, 1}});
      const auto s = build_splitting_projector(b.Q, session);
      AInfinityMorphism<Rational> f(b, s, 4);
      const auto end = endomorphism_algebra<Rational>(*s.m0);
      auto variant = [&](const HochschildChain<Rational>& x) {
        auto out = fhoch_push(x, f);
        for (const auto& [slots, c] : x) {
          if (slots.size() != 2) continue;
          const long e0 = b.algebra.degree[slots[0]] - 1, e1 = b.algebra.degree[slots[1]] - 1;
          const Rational sign = rule == 0 ? Rational(1) : rule == 1 ? Rational(-1) : parity_sign<Rational>(e0 * e1);
          HochschildChain<Rational> extra;
          add_tensor(extra, {endomorphism_element(f.on_basis({slots[1]})), endomorphism_element(f.on_basis({slots[0]}))},
                     Rational(sign * c));
          out = sum(out, extra);
        }
        return out;
      };
      std::mt19937_64 rng(seed);
      for (int t = 0; t < 30; ++t) {
        const auto x = single(random_slots(rng, b.algebra.size(), 3));
        if (!sum(hoch_diff(variant(x), end), variant(hoch_diff(x, b.algebra)), -1).empty()) ++broken;
      }
    }
    CAPTURE(rule);
    CHECK(broken > 0);
  }
}

TEST_CASE("chain_map_defect: zero chain, random chains on T1 and the torus") {
  const Session session;
  const auto b = t1_instance();
  const auto s = build_splitting_projector(b.Q, session);
  AInfinityMorphism<Rational> f(b, s, 4);
  CHECK(chain_map_defect(HochschildChain<Rational>{}, f, session).pass);
  std::mt19937_64 rng(12);
  for (int k = 1; k <= 4; ++k)
    for (int t = 0; t < 25; ++t) {
      HochschildChain<Rational> x;
      for (int term = 0; term < 3; ++term) x[random_slots(rng, b.algebra.size(), k)] += Rational(term + 1, 2);
      CHECK(chain_map_defect(x, f, session).pass);
    }

  const auto tb = gen_torus_dolbeault(1);
  const auto ts = build_splitting_hodge(tb.Q, session);
  AInfinityMorphism<Complex> tf(tb, ts, 3);
  for (int k = 1; k <= 3; ++k)
    for (int t = 0; t < 15; ++t) {
      HochschildChain<Complex> x{{random_slots(rng, tb.algebra.size(), k), Complex(0.5, -1.0)}};
      const auto r = chain_map_defect(x, tf, session);
      CHECK(r.pass);
      CHECK(r.max_coefficient <= 1e-8);
    }
}

TEST_CASE("fhoch_push of a Q-closed degree-0 slot is a Hochschild cycle") {
  const Session session;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto b = gen_random_instance(seed, {{0, 2}, {1, 2}, {2, 1}});
    const auto s = build_splitting_projector(b.Q, session);
    AInfinityMorphism<Rational> f(b, s, 2);
    const auto end = endomorphism_algebra<Rational>(*s.m0);
    for (std::size_t i = 0; i < b.algebra.size(); ++i) {
      const auto a = basis_element(b.algebra, i);
      if (a.degree != 0 || !differentiate(b.algebra, a).is_zero()) continue;
      CHECK(hoch_diff(fhoch_push(single({i}), f), end).empty());
    }
  }
}

TEST_CASE("chain degree bookkeeping") {
  const auto b = t1_instance();
  const auto i = *b.algebra.index_of("f<-e1"), j = *b.algebra.index_of("e1<-e1");
  CHECK(chain_degree(Slots{i}, b.algebra) == 1);
  CHECK(chain_degree(Slots{i, j}, b.algebra) == 0);
  CHECK(chain_degree(Slots{j, j, j}, b.algebra) == -2);
}
