#include <doctest.h>

#include "tqt/instances.hpp"
#include "tqt/io.hpp"

using namespace tqt;

namespace {

template <class T>
void check_same_bundle(const DgModuleBundle<T>& a, const DgModuleBundle<T>& b) {
  CHECK(a.module->same_shape(*b.module));
  CHECK(a.Q == b.Q);
  REQUIRE(a.rho.size() == b.rho.size());
  for (std::size_t i = 0; i < a.rho.size(); ++i) CHECK(a.rho[i] == b.rho[i]);
  CHECK(a.algebra.label == b.algebra.label);
  CHECK(a.algebra.degree == b.algebra.degree);
  CHECK(a.algebra.named == b.algebra.named);
}

}  // namespace

TEST_CASE("scalars round trip") {
  for (const Rational& x : {Rational(0), Rational(-7, 3), Rational(5), Rational(1, 1000)})
    CHECK(scalar_from_json<Rational>(scalar_to_json(x)) == x);
  CHECK(scalar_from_json<Rational>(Json(4)) == 4);
  CHECK(scalar_from_json<Rational>(Json("6/4")) == Rational(3, 2));
  CHECK_THROWS_AS(scalar_from_json<Rational>(Json("1/0")), InputError);
  CHECK_THROWS_AS(scalar_from_json<Rational>(Json("abc")), InputError);
  CHECK_THROWS_AS(scalar_from_json<Rational>(Json(0.5)), InputError);
  const Complex z(0.25, -1.5);
  CHECK(scalar_from_json<Complex>(scalar_to_json(z)) == z);
  CHECK(scalar_from_json<Complex>(Json(2.0)) == Complex(2.0, 0.0));
  CHECK(scalar_from_json<Complex>(Json("1/4")) == Complex(0.25, 0.0));
  CHECK_THROWS_AS(scalar_from_json<Complex>(Json::array({1.0})), InputError);
}

TEST_CASE("exact instance round trip, with and without splitting") {
  Instance<Rational> inst{t1_instance(), std::nullopt, Json{{"generator", "matrix"}}};
  const Json j = instance_to_json(inst);
  CHECK(j.at("format") == kInstanceFormat);
  CHECK(j.at("scalar") == "exact");
  const auto back = std::get<Instance<Rational>>(instance_from_json(j, Session{}));
  check_same_bundle(inst.bundle, back.bundle);
  CHECK(back.meta == inst.meta);
  CHECK(!back.splitting);
  CHECK(instance_to_json(back).dump() == j.dump());

  const auto s = build_splitting_projector(inst.bundle.Q, Session{}, 3);
  inst.splitting = SplittingData<Rational>{s.pi0, s.kappa};
  const auto back2 = std::get<Instance<Rational>>(instance_from_json(instance_to_json(inst), Session{}));
  REQUIRE(back2.splitting);
  CHECK(back2.splitting->pi0 == s.pi0);
  CHECK(back2.splitting->kappa == s.kappa);
}

TEST_CASE("random and float instances round trip") {
  Instance<Rational> r{gen_random_instance(5, {{0, 2}, {1, 2}, {2, 1}}), std::nullopt, Json::object()};
  check_same_bundle(r.bundle, std::get<Instance<Rational>>(instance_from_json(instance_to_json(r), Session{})).bundle);

  Instance<Complex> t{gen_torus_dolbeault(1, {0.5, 0.75}), std::nullopt, Json::object()};
  const Json j = instance_to_json(t);
  CHECK(j.at("scalar") == "float");
  const auto back = std::get<Instance<Complex>>(instance_from_json(j, Session{}));
  check_same_bundle(t.bundle, back.bundle);
}

TEST_CASE("malformed instances raise InputError") {
  const Json good = instance_to_json(Instance<Rational>{t1_instance(), std::nullopt, Json::object()});
  CHECK_THROWS_AS(instance_from_json(Json::array(), Session{}), InputError);
  Json j = good;
  j["format"] = "other/9";
  CHECK_THROWS_AS(instance_from_json(j, Session{}), InputError);
  j = good;
  j["scalar"] = "quaternion";
  CHECK_THROWS_AS(instance_from_json(j, Session{}), InputError);
  j = good;
  j.erase("Q");
  CHECK_THROWS_AS(instance_from_json(j, Session{}), InputError);
  j = good;
  j["Q"] = Json::array({Json::array({"e1", "zz", 1})});
  CHECK_THROWS_AS(instance_from_json(j, Session{}), InputError);
  j = good;
  j["Q"] = Json::array({Json::array({"e1", "f"})});
  CHECK_THROWS_AS(instance_from_json(j, Session{}), InputError);
  CHECK_THROWS_AS(load_instance("/nonexistent/instance.json", Session{}), InputError);
}

TEST_CASE("chains: names, products, degree checks") {
  const auto b = t1_instance();
  const auto& a = b.algebra;
  const Json terms = Json::array({Json{{"coefficient", "1/2"}, {"slots", {"f<-e1", "e1<-f"}}},
                                  Json{{"slots", {"Id"}}}});
  // f<-e1 ⊗ e1<-f has degree 1 + (−1) + 1 − 2 = −1, Id has degree 0
  CHECK_THROWS_WITH_AS(chain_from_json(terms, a), doctest::Contains("degree mismatch"), InputError);

  const Json ok = Json{{"terms", Json::array({Json{{"coefficient", 3}, {"slots", {"e1<-f*f<-e1"}}}})}};
  const auto c = chain_from_json(ok, a);
  REQUIRE(c.size() == 1);
  CHECK(c.begin()->first == Slots{*a.index_of("e1<-e1")});
  CHECK(c.begin()->second == 3);

  const auto round = chain_from_json(chain_to_json(c, a), a);
  CHECK(round == c);

  CHECK_THROWS_AS(chain_from_json(Json::array({Json{{"slots", {"nope"}}}}), a), InputError);
  CHECK_THROWS_AS(chain_from_json(Json::array({Json{{"slots", Json::array()}}}), a), InputError);
  CHECK_THROWS_AS(chain_from_json(Json{{"x", 1}}, a), InputError);
}
