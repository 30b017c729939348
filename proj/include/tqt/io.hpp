#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <variant>

#include "tqt/dg.hpp"
#include "tqt/hoch.hpp"

namespace tqt {

using Json = nlohmann::ordered_json;

inline constexpr const char* kInstanceFormat = "tqt-instance/1";

/// Explicit projector-mode splitting data stored with an instance.
template <class T>
struct SplittingData {
  GradedMap<T> pi0;
  GradedMap<T> kappa;
};

template <class T>
struct Instance {
  DgModuleBundle<T> bundle;
  std::optional<SplittingData<T>> splitting;
  Json meta = Json::object();
};

using AnyInstance = std::variant<Instance<Rational>, Instance<Complex>>;

/// Exact scalars are written as "n/d" strings (integers as "n"), float scalars as [re, im].
Json scalar_to_json(const Rational& x);
Json scalar_to_json(const Complex& x);
template <class T>
T scalar_from_json(const Json& j);

/// Sparse operator as [from-label, to-label, value] triplets (value = coefficient of
/// `to` in the image of `from`).
template <class T>
Json map_to_json(const GradedMap<T>& m);
template <class T>
GradedMap<T> map_from_json(const Json& j, const SpacePtr& source, const SpacePtr& target, int degree);

template <class T>
Json instance_to_json(const Instance<T>& inst);

/// Parses and rebuilds the bundle (algebra structure is recomputed from the operators).
/// Malformed input raises InputError; shape violations raise ShapeError.
AnyInstance instance_from_json(const Json& j, const Session& session);

AnyInstance load_instance(const std::string& path, const Session& session);
Json load_json(const std::string& path);

/// One chain: a list of {"coefficient": c, "slots": [name, ...]} terms, or an object
/// with such a list under "terms". A slot is a basis label, a named element, or a
/// product "x*y*…" of those. All terms must have the same degree (InputError).
template <class T>
HochschildChain<T> chain_from_json(const Json& j, const FiniteAlgebra<T>& a);

template <class T>
Json chain_to_json(const HochschildChain<T>& chain, const FiniteAlgebra<T>& a);

}  // namespace tqt
