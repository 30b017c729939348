#include "tqt/io.hpp"

#include <fstream>
#include <sstream>

namespace tqt {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::map<int, std::size_t> dims_from_json(const Json& j) {
  std::map<int, std::size_t> dims;
  for (const auto& [k, v] : j.items()) {
    const int d = std::stoi(k);
    if (!v.is_number_integer() || v.get<long>() < 0) throw InputError("module dimension must be a natural number");
    if (v.get<long>() > 0) dims[d] = v.get<std::size_t>();
  }
  return dims;
}

SpacePtr space_from_json(const Json& j) {
  const auto dims = dims_from_json(field(j, "dims"));
  std::map<int, std::vector<std::string>> labels;
  if (j.contains("labels"))
    for (const auto& [k, v] : j.at("labels").items()) labels[std::stoi(k)] = v.get<std::vector<std::string>>();
  for (const auto& [d, l] : labels) {
    const auto it = dims.find(d);
    if (it == dims.end() ? !l.empty() : l.size() != it->second) {
      throw InputError("module labels in degree " + std::to_string(d) + " do not match the dimension");
    }
  }
  auto space = make_space(dims, labels);
  for (std::size_t i = 0; i < space->size(); ++i)
    if (space->index_of(space->label(i)) != i) throw InputError("duplicate module label \"" + space->label(i) + "\"");
  return space;
}

Json space_to_json(const GradedVectorSpace& v) {
  Json dims = Json::object(), labels = Json::object();
  for (const auto& [d, n] : v.dims()) {
    dims[std::to_string(d)] = n;
    Json l = Json::array();
    for (std::size_t i = 0; i < n; ++i) l.push_back(v.label(v.offset(d) + i));
    labels[std::to_string(d)] = l;
  }
  return Json{{"dims", dims}, {"labels", labels}};
}

template <class T>
constexpr const char* scalar_name() {
  return is_exact_v<T> ? "exact" : "float";
}

template <class T>
Instance<T> parse_instance(const Json& j, const Session& session) {
  Instance<T> inst;
  if (j.contains("meta")) inst.meta = j.at("meta");
  const SpacePtr m = space_from_json(field(j, "module"));
  const GradedMap<T> q = map_from_json<T>(field(j, "Q"), m, m, 1);
  const Json& alg = field(j, "algebra");
  std::vector<GradedMap<T>> ops;
  std::vector<std::string> labels;
  for (const auto& e : field(alg, "basis")) {
    labels.push_back(field(e, "label").template get<std::string>());
    ops.push_back(map_from_json<T>(field(e, "entries"), m, m, field(e, "degree").template get<int>()));
  }
  std::map<std::string, GradedMap<T>> named;
  if (alg.contains("named")) {
    for (const auto& [name, e] : alg.at("named").items())
      named.emplace(name, map_from_json<T>(field(e, "entries"), m, m, field(e, "degree").template get<int>()));
  }
  inst.bundle = bundle_from_operators(m, q, std::move(ops), std::move(labels), named, session);
  if (j.contains("splitting") && !j.at("splitting").is_null()) {
    const Json& s = j.at("splitting");
    inst.splitting = SplittingData<T>{map_from_json<T>(field(s, "pi0"), m, m, 0),
                                      map_from_json<T>(field(s, "kappa"), m, m, -1)};
  }
  return inst;
}

template <class T>
std::size_t label_index(const GradedVectorSpace& v, const Json& label) {
  if (!label.is_string()) throw InputError("operator entry labels must be strings");
  const auto i = v.index_of(label.get<std::string>());
  if (!i) throw InputError("unknown module label \"" + label.get<std::string>() + "\"");
  return *i;
}

template <class T>
AlgElem<T> slot_from_string(const std::string& s, const FiniteAlgebra<T>& a) {
  std::optional<AlgElem<T>> acc;
  std::size_t start = 0;
  while (true) {
    const auto star = s.find('*', start);
    const std::string name = s.substr(start, star == std::string::npos ? std::string::npos : star - start);
    auto x = element_by_name(a, name);
    acc = acc ? multiply(a, *acc, x) : x;
    if (star == std::string::npos) break;
    start = star + 1;
  }
  return *acc;
}

}  // namespace

Json scalar_to_json(const Rational& x) { return x.get_str(); }

Json scalar_to_json(const Complex& x) { return Json::array({x.real(), x.imag()}); }

template <>
Rational scalar_from_json<Rational>(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw InputError("exact scalars must be integers or \"n/d\" strings");
  Rational r;
  if (r.set_str(j.get<std::string>(), 10) != 0) throw InputError("malformed rational \"" + j.get<std::string>() + "\"");
  if (sgn(r.get_den()) == 0) throw InputError("rational with zero denominator");
  r.canonicalize();
  return r;
}

template <>
Complex scalar_from_json<Complex>(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_string()) return to_complex(scalar_from_json<Rational>(j));
  throw InputError("float scalars must be numbers or [re, im] pairs");
}

template <class T>
Json map_to_json(const GradedMap<T>& m) {
  Json out = Json::array();
  for (std::size_t c = 0; c < m.source().size(); ++c)
    for (std::size_t r = 0; r < m.target().size(); ++r)
      if (!ScalarTraits<T>::is_zero(m(r, c)))
        out.push_back(Json::array({m.source().label(c), m.target().label(r), scalar_to_json(m(r, c))}));
  return out;
}

template <class T>
GradedMap<T> map_from_json(const Json& j, const SpacePtr& source, const SpacePtr& target, int degree) {
  if (!j.is_array()) throw InputError("operators must be lists of [from, to, value] triplets");
  Matrix<T> mat(target->size(), source->size());
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3) throw InputError("operator entries must be [from, to, value] triplets");
    const std::size_t c = label_index<T>(*source, e[0]), r = label_index<T>(*target, e[1]);
    mat(r, c) += scalar_from_json<T>(e[2]);
  }
  return GradedMap<T>(source, target, degree, std::move(mat));
}

template <class T>
Json instance_to_json(const Instance<T>& inst) {
  const auto& b = inst.bundle;
  Json basis = Json::array();
  for (std::size_t i = 0; i < b.algebra.size(); ++i)
    basis.push_back(Json{{"label", b.algebra.label[i]}, {"degree", b.algebra.degree[i]}, {"entries", map_to_json(b.rho[i])}});
  Json named = Json::object();
  for (const auto& [name, coords] : b.algebra.named) {
    int degree = 0;
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (!ScalarTraits<T>::is_zero(coords[i])) degree = b.algebra.degree[i];
    named[name] = Json{{"degree", degree}, {"entries", map_to_json(b.act(AlgElem<T>{degree, coords}))}};
  }
  Json j{{"format", kInstanceFormat},
         {"scalar", scalar_name<T>()},
         {"meta", inst.meta},
         {"module", space_to_json(*b.module)},
         {"Q", map_to_json(b.Q)},
         {"algebra", Json{{"basis", basis}, {"named", named}}}};
  if (inst.splitting) j["splitting"] = Json{{"pi0", map_to_json(inst.splitting->pi0)}, {"kappa", map_to_json(inst.splitting->kappa)}};
  return j;
}

AnyInstance instance_from_json(const Json& j, const Session& session) {
  try {
    if (!j.is_object()) throw InputError("instance must be a JSON object");
    if (field(j, "format") != kInstanceFormat) throw InputError("unsupported instance format");
    const std::string scalar = field(j, "scalar").get<std::string>();
    if (scalar == "exact") return parse_instance<Rational>(j, session);
    if (scalar == "float") return parse_instance<Complex>(j, session);
    throw InputError("scalar must be \"exact\" or \"float\"");
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed instance: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw InputError("malformed instance: degrees must be integers");
  }
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open \"" + path + "\"");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("\"" + path + "\" is not valid JSON: " + e.what());
  }
}

AnyInstance load_instance(const std::string& path, const Session& session) {
  return instance_from_json(load_json(path), session);
}

template <class T>
HochschildChain<T> chain_from_json(const Json& j, const FiniteAlgebra<T>& a) {
  const Json& terms = j.is_object() ? field(j, "terms") : j;
  if (!terms.is_array()) throw InputError("a chain is a list of {coefficient, slots} terms");
  HochschildChain<T> chain;
  std::optional<int> degree;
  try {
    for (const auto& t : terms) {
      const T c = t.contains("coefficient") ? scalar_from_json<T>(t.at("coefficient")) : T(1);
      const Json& slots = field(t, "slots");
      if (!slots.is_array() || slots.empty()) throw InputError("chain terms need at least one slot");
      std::vector<AlgElem<T>> x;
      int d = 1 - static_cast<int>(slots.size());
      for (const auto& s : slots) {
        if (!s.is_string()) throw InputError("chain slots must be strings");
        x.push_back(slot_from_string(s.template get<std::string>(), a));
        d += x.back().degree;
      }
      if (degree && *degree != d) {
        throw InputError("degree mismatch: chain terms of degree " + std::to_string(*degree) + " and " +
                         std::to_string(d));
      }
      degree = d;
      add_tensor(chain, x, c);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed chain: ") + e.what());
  }
  return chain;
}

template <class T>
Json chain_to_json(const HochschildChain<T>& chain, const FiniteAlgebra<T>& a) {
  Json out = Json::array();
  for (const auto& [x, c] : chain) {
    Json slots = Json::array();
    for (auto i : x) slots.push_back(a.label[i]);
    out.push_back(Json{{"coefficient", scalar_to_json(c)}, {"slots", slots}});
  }
  return out;
}

#define TQT_INSTANTIATE(T)                                                                                  \
  template Json map_to_json(const GradedMap<T>&);                                                          \
  template GradedMap<T> map_from_json(const Json&, const SpacePtr&, const SpacePtr&, int);                 \
  template Json instance_to_json(const Instance<T>&);                                                       \
  template HochschildChain<T> chain_from_json(const Json&, const FiniteAlgebra<T>&);                        \
  template Json chain_to_json(const HochschildChain<T>&, const FiniteAlgebra<T>&);

TQT_INSTANTIATE(Rational)
TQT_INSTANTIATE(Complex)

}  // namespace tqt
