#include "commands.hpp"

#include <random>
#include <sstream>

#include "tqt/hoch.hpp"
#include "tqt/instances.hpp"
#include "tqt/io.hpp"
#include "tqt/tqm.hpp"
#include "tqt/traces.hpp"

namespace tqt::cli {

namespace {

std::vector<std::size_t> parse_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw InputError("expected a comma-separated list of natural numbers, got \"" + s + "\"");
    }
  }
  if (out.empty()) throw InputError("empty dimension list");
  return out;
}

std::map<int, std::size_t> parse_dims(const std::string& s) {
  std::map<int, std::size_t> dims;
  const auto v = parse_list(s);
  for (std::size_t d = 0; d < v.size(); ++d)
    if (v[d] > 0) dims[static_cast<int>(d)] = v[d];
  return dims;
}

std::complex<double> parse_tau(const std::string& s) {
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw InputError("--tau expects re,im");
  }
}

Json dims_json(const std::map<int, std::size_t>& dims) {
  Json j = Json::object();
  for (const auto& [d, n] : dims) j[std::to_string(d)] = n;
  return j;
}

Json value_json(const Rational& x) { return scalar_to_json(x); }
Json value_json(const Complex& x) { return scalar_to_json(x); }

std::string value_text(const Rational& x) { return x.get_str(); }
std::string value_text(const Complex& x) {
  std::ostringstream o;
  o.precision(12);
  o << x.real() << (x.imag() < 0 ? " - " : " + ") << std::abs(x.imag()) << "i";
  return o.str();
}

// ---------------------------------------------------------------------------
// verification

struct Check {
  std::string name;
  bool pass = true;
  double residual = 0.0;
  std::string witness;
  long samples = 0;
};

template <class T>
struct Prepared {
  DgModuleBundle<T> bundle;
  std::optional<Splitting<T>> splitting;
  std::string splitting_source;
};

template <class T>
std::string tuple_text(const FiniteAlgebra<T>& a, const std::vector<std::size_t>& idx) {
  std::string s = "(";
  for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + a.label[idx[i]];
  return s + ")";
}

/// All tuples when there are at most `limit`, else `limit` seeded samples.
std::vector<std::vector<std::size_t>> sample_tuples(std::size_t n, int k, std::size_t limit, std::mt19937_64& rng) {
  std::vector<std::vector<std::size_t>> out;
  double total = 1.0;
  for (int l = 0; l < k; ++l) total *= static_cast<double>(n);
  if (total <= static_cast<double>(limit)) {
    std::vector<std::size_t> cur(static_cast<std::size_t>(k), 0);
    for (std::size_t c = 0; c < static_cast<std::size_t>(total); ++c) {
      out.push_back(cur);
      for (int l = k - 1; l >= 0; --l) {
        if (++cur[static_cast<std::size_t>(l)] < n) break;
        cur[static_cast<std::size_t>(l)] = 0;
      }
    }
    return out;
  }
  for (std::size_t s = 0; s < limit; ++s) {
    std::vector<std::size_t> t;
    for (int l = 0; l < k; ++l) t.push_back(static_cast<std::size_t>(rng() % n));
    out.push_back(t);
  }
  return out;
}

template <class T>
bool small(const T& x, double threshold) {
  if constexpr (is_exact_v<T>) return sgn(x) == 0;
  else return std::abs(x) <= threshold;
}

template <class T>
double residual_of(const GradedMap<T>& m) {
  return m.matrix().max_abs();
}

template <class T>
std::vector<Check> run_checks(const Prepared<T>& p, const Config& cfg, const Session& session) {
  std::vector<Check> checks;
  auto add_report = [&](const Report& r) {
    bool ok = true;
    for (const auto& c : r) {
      checks.push_back({c.name, c.pass, c.residual, c.witness, 1});
      ok = ok && c.pass;
    }
    return ok;
  };
  const auto& b = p.bundle;
  if (!add_report(validate_dg(b, session))) return checks;
  if (!add_report(validate_splitting(b.Q, *p.splitting, session))) return checks;

  const double thr = 100.0 * cfg.tolerance;
  std::mt19937_64 rng(cfg.seed);
  const AInfinityMorphism<T> f(b, *p.splitting, cfg.max_arity);
  const auto& a = b.algebra;
  const std::size_t n = a.size();

  for (int k = 1; k <= cfg.max_arity; ++k) {
    Check c;
    c.name = "ainfinity-k" + std::to_string(k);
    for (const auto& idx : sample_tuples(n, k, 200, rng)) {
      std::vector<AlgElem<T>> in;
      for (auto i : idx) in.push_back(basis_element(a, i));
      const double r = residual_of(ainfinity_defect(f, in));
      ++c.samples;
      c.residual = std::max(c.residual, r);
      const bool ok = is_exact_v<T> ? r == 0.0 && ainfinity_defect(f, in).is_zero(session) : r <= thr;
      if (!ok && c.pass) {
        c.pass = false;
        c.witness = tuple_text(a, idx);
      }
    }
    checks.push_back(c);
  }

  const int chain_len = std::min(cfg.max_arity, is_exact_v<T> ? 4 : 3);
  for (int len = 1; len <= chain_len; ++len) {
    Check c;
    c.name = "chain-map-len" + std::to_string(len);
    for (const auto& idx : sample_tuples(n, len, 20, rng)) {
      const HochschildChain<T> x{{idx, T(1)}};
      const auto rep = chain_map_defect(x, f, session);
      ++c.samples;
      c.residual = std::max(c.residual, rep.max_coefficient);
      if (!rep.pass && c.pass) {
        c.pass = false;
        c.witness = tuple_text(a, idx);
      }
    }
    checks.push_back(c);
  }

  for (int len = 1; len <= std::min(cfg.max_arity, 4); ++len) {
    Check c;
    c.name = "trace-defect-len" + std::to_string(len);
    for (const auto& idx : sample_tuples(n, len, 20, rng)) {
      const HochschildChain<T> x{{idx, T(1)}};
      const T d = trace_defect(x, f);
      ++c.samples;
      c.residual = std::max(c.residual, magnitude(d));
      if (!small(d, thr) && c.pass) {
        c.pass = false;
        c.witness = tuple_text(a, idx);
      }
    }
    checks.push_back(c);
  }

  {
    Check c;
    c.name = "upsilon-equals-str-cohomology";
    auto probe = [&](const std::string& name, const AlgElem<T>& x) {
      if (x.degree != 0 || !differentiate(a, x).is_zero()) return;
      HochschildChain<T> chain;
      add_tensor(chain, {x}, T(1));
      const T diff = upsilon(chain, f) - str_cohomology(b.act(x), b.Q, session);
      ++c.samples;
      c.residual = std::max(c.residual, magnitude(diff));
      if (!small(diff, thr) && c.pass) {
        c.pass = false;
        c.witness = name;
      }
    };
    for (std::size_t i = 0; i < n; ++i) probe(a.label[i], basis_element(a, i));
    for (const auto& [name, coords] : a.named) probe(name, element_by_name(a, name));
    checks.push_back(c);
  }

  if constexpr (!is_exact_v<T>) {
    QuadratureSpec spec;
    spec.tolerance = std::max(cfg.tolerance, 1e-12);
    spec.budget = cfg.quad_budget;
    for (int k = 2; k <= std::min(cfg.max_arity, 3); ++k) {
      Check c;
    c.name = "quadrature-k" + std::to_string(k);
      // prefer tuples with a nonzero closed form so the comparison is not vacuous
      std::vector<std::vector<std::size_t>> picked, zero;
      for (const auto& idx : sample_tuples(n, k, 200, rng)) {
        std::vector<AlgElem<T>> in;
        for (auto i : idx) in.push_back(basis_element(a, i));
        (transfer_closed(in, *p.splitting, b).matrix().max_abs() > thr ? picked : zero).push_back(idx);
        if (picked.size() == 3) break;
      }
      for (std::size_t z = 0; picked.size() < 3 && z < zero.size(); ++z) picked.push_back(zero[z]);
      for (const auto& idx : picked) {
        std::vector<AlgElem<T>> in;
        for (auto i : idx) in.push_back(basis_element(a, i));
        const auto closed = transfer_closed(in, *p.splitting, b);
        double r = 0.0;
        try {
          const auto q = transfer_quadrature(in, *p.splitting, b, spec);
          r = (q.value - closed).matrix().max_abs() / (1.0 + closed.matrix().max_abs());
        } catch (const QuadratureError&) {
          r = std::numeric_limits<double>::infinity();
        }
        ++c.samples;
        c.residual = std::max(c.residual, r);
        if (!(r <= 1e-6) && c.pass) {
          c.pass = false;
          c.witness = tuple_text(a, idx);
        }
      }
      checks.push_back(c);
    }
  }
  return checks;
}

struct Loaded {
  std::variant<Prepared<Rational>, Prepared<Complex>> prepared;
  std::string scalar;
  Json meta;
};

/// Loads the instance and builds the splitting for the requested mode.
Loaded prepare(const std::string& path, const Config& cfg, const Session& session) {
  AnyInstance any;
  try {
    any = load_instance(path, session);
  } catch (const StructuralError& e) {
    throw InputError(std::string("invalid instance: ") + e.what());
  }
  Loaded out;
  if (auto* ex = std::get_if<Instance<Rational>>(&any)) {
    out.scalar = "exact";
    out.meta = ex->meta;
    const std::string mode = cfg.mode.value_or("exact");
    auto make_exact = [&]() -> std::optional<Splitting<Rational>> {
      if (!compose(ex->bundle.Q, ex->bundle.Q).is_zero(session)) return std::nullopt;
      if (ex->splitting) return splitting_from_projector(ex->bundle.Q, ex->splitting->pi0, ex->splitting->kappa, session);
      return build_splitting_projector(ex->bundle.Q, session, cfg.seed);
    };
    if (mode == "exact") {
      out.prepared = Prepared<Rational>{ex->bundle, make_exact(), ex->splitting ? "instance" : "projector"};
    } else {
      Prepared<Complex> p{to_complex(ex->bundle), std::nullopt, ex->splitting ? "instance" : "hodge"};
      if (ex->splitting) {
        if (auto s = make_exact()) p.splitting = to_complex(*s);
      } else if (compose(p.bundle.Q, p.bundle.Q).is_zero(session)) {
        p.splitting = build_splitting_hodge(p.bundle.Q, session);
      }
      out.prepared = std::move(p);
    }
  } else {
    auto& fl = std::get<Instance<Complex>>(any);
    out.scalar = "float";
    out.meta = fl.meta;
    if (cfg.mode.value_or("float") != "float") throw InputError("a float instance cannot be verified in exact mode");
    if (fl.splitting) throw InputError("explicit splittings are supported for exact instances only");
    Prepared<Complex> p{fl.bundle, std::nullopt, "hodge"};
    if (compose(p.bundle.Q, p.bundle.Q).is_zero(session)) p.splitting = build_splitting_hodge(p.bundle.Q, session);
    out.prepared = std::move(p);
  }
  return out;
}

template <class T>
Json instance_summary(const Prepared<T>& p, const Loaded& l) {
  Json j{{"scalar", l.scalar},
         {"module_dims", dims_json(p.bundle.module->dims())},
         {"algebra_dim", p.bundle.algebra.size()},
         {"meta", l.meta}};
  if (p.splitting) {
    j["splitting"] = p.splitting_source;
    j["cohomology_dims"] = dims_json(p.splitting->m0->dims());
  }
  return j;
}

Json config_json(const Config& cfg, const std::string& mode) {
  return Json{{"mode", mode},
              {"tolerance", cfg.tolerance},
              {"max_arity", cfg.max_arity},
              {"quad_budget", cfg.quad_budget},
              {"seed", cfg.seed}};
}

void emit(const Json& report, const std::string& format, std::ostream& out, const std::function<void()>& text) {
  if (format == "json") out << report.dump(2) << "\n";
  else text();
}

// ---------------------------------------------------------------------------
// traces

template <class T>
struct TraceValue {
  T value{};
  double error = 0.0;
};

/// Υ with F_k (k ≥ 2) evaluated by quadrature; the error bar sums |c|·err·dim M0.
TraceValue<Complex> upsilon_by_quadrature(const HochschildChain<Complex>& chain, const Prepared<Complex>& p,
                                          const Config& cfg) {
  QuadratureSpec spec;
  spec.tolerance = std::max(cfg.tolerance, 1e-12);
  spec.budget = cfg.quad_budget;
  const auto& a = p.bundle.algebra;
  const double dim = static_cast<double>(p.splitting->m0->size());
  TraceValue<Complex> out;
  for (const auto& [x, c] : chain) {
    if (static_cast<int>(x.size()) > cfg.max_arity) {
      throw InputError("arity " + std::to_string(x.size()) + " exceeds --max-arity " + std::to_string(cfg.max_arity));
    }
    Slots y = x;
    long parity = 0;
    for (std::size_t s = 0; s < x.size(); ++s) {
      std::vector<AlgElem<Complex>> in;
      for (auto i : y) in.push_back(basis_element(a, i));
      const Complex sign = parity_sign<Complex>(parity);
      if (y.size() == 1) {
        out.value += sign * c * supertrace(transfer_closed(in, *p.splitting, p.bundle));
      } else {
        const auto q = transfer_quadrature(in, *p.splitting, p.bundle, spec);
        out.value += sign * c * supertrace(q.value);
        out.error += std::abs(c) * q.error * dim;
      }
      auto [pp, next] = cyclic_shift(y, a);
      parity += pp;
      y = std::move(next);
    }
  }
  return out;
}

template <class T>
int trace_impl(const Prepared<T>& p, const Loaded& l, const Json& chains, const Config& cfg, const std::string& mode,
               std::ostream& out) {
  if (!p.splitting) throw InputError("the instance has Q-squared nonzero; run verify for details");
  const AInfinityMorphism<T> f(p.bundle, *p.splitting, cfg.max_arity);
  const auto& a = p.bundle.algebra;

  std::vector<std::pair<std::string, HochschildChain<T>>> parsed;
  if (chains.is_object() && chains.contains("chains")) {
    std::size_t i = 0;
    for (const auto& c : chains.at("chains")) {
      const std::string name = c.is_object() && c.contains("name") ? c.at("name").get<std::string>() : "chain" + std::to_string(i);
      parsed.emplace_back(name, chain_from_json(c, a));
      ++i;
    }
  } else {
    parsed.emplace_back("chain0", chain_from_json(chains, a));
  }

  Json results = Json::array();
  std::vector<std::string> lines;
  for (const auto& [name, chain] : parsed) {
    for (const auto& [x, c] : chain) {
      if (static_cast<int>(x.size()) > cfg.max_arity) {
        throw InputError("chain \"" + name + "\" has a term of length " + std::to_string(x.size()) +
                         " beyond --max-arity " + std::to_string(cfg.max_arity));
      }
    }
    Json r{{"name", name}, {"terms", chain.size()}};
    std::string line = name + ": upsilon = ";
    if constexpr (!is_exact_v<T>) {
      if (cfg.quadrature) {
        const auto v = upsilon_by_quadrature(chain, p, cfg);
        r["upsilon"] = value_json(v.value);
        r["provenance"] = "quadrature";
        r["error"] = v.error;
        line += value_text(v.value) + " ± " + std::to_string(v.error) + " (quadrature)";
      }
    }
    if (!r.contains("upsilon")) {
      const T v = upsilon(chain, f);
      r["upsilon"] = value_json(v);
      r["provenance"] = "closed-form";
      if constexpr (!is_exact_v<T>) r["error"] = 0.0;
      line += value_text(v) + " (closed-form)";
    }
    if (cfg.cyclic) {
      const T v = upsilon_cyclic(chain, f, *cfg.cyclic);
      r["cyclic"] = Json{{"level", *cfg.cyclic}, {"value", value_json(v)}};
      line += "; cyclic level " + std::to_string(*cfg.cyclic) + " = " + value_text(v);
    }
    results.push_back(r);
    lines.push_back(line);
  }
  Json report{{"command", "trace"},
              {"instance", instance_summary(p, l)},
              {"config", config_json(cfg, mode)},
              {"results", results}};
  emit(report, cfg.output, out, [&] {
    for (const auto& s : lines) out << s << "\n";
  });
  return kExitOk;
}

}  // namespace

int cmd_gen(const GenOptions& opts, std::ostream& out) {
  const Session session;
  Json j;
  if (opts.kind == "torus") {
    if (opts.with_splitting) throw InputError("--with-splitting applies to exact instances only");
    const auto tau = parse_tau(opts.tau);
    Instance<Complex> inst{gen_torus_dolbeault(opts.n_trunc, tau, session), std::nullopt,
                           Json{{"generator", "torus"}, {"N", opts.n_trunc}, {"tau", Json::array({tau.real(), tau.imag()})}}};
    j = instance_to_json(inst);
  } else {
    Instance<Rational> inst;
    if (opts.kind == "matrix") {
      if (opts.preset == "T1") {
        inst.bundle = t1_instance();
        inst.meta = Json{{"generator", "matrix"}, {"preset", "T1"}};
      } else if (opts.preset.empty()) {
        if (opts.dims.empty()) throw InputError("gen --kind matrix needs --preset or --dims");
        const auto dims = parse_dims(opts.dims);
        inst.bundle = gen_matrix_instance(dims);
        inst.meta = Json{{"generator", "matrix"}, {"dims", dims_json(dims)}};
      } else {
        throw InputError("unknown preset \"" + opts.preset + "\"");
      }
    } else {
      const auto dims = parse_dims(opts.dims.empty() ? "2,2" : opts.dims);
      try {
        inst.bundle = gen_random_instance(opts.seed, dims, opts.budget);
      } catch (const StructuralError& e) {
        throw InputError(e.what());
      }
      inst.meta = Json{{"generator", "random"}, {"seed", opts.seed}, {"dims", dims_json(dims)}, {"budget", opts.budget}};
    }
    if (opts.with_splitting) {
      const auto s = build_splitting_projector(inst.bundle.Q, session, opts.seed);
      inst.splitting = SplittingData<Rational>{s.pi0, s.kappa};
    }
    j = instance_to_json(inst);
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& instance, const Config& cfg, std::ostream& out) {
  const Session session{cfg.tolerance};
  const Loaded l = prepare(instance, cfg, session);
  std::vector<Check> checks;
  Json summary;
  std::string mode;
  std::visit(
      [&](const auto& p) {
        using T = typename std::decay_t<decltype(p.bundle.algebra.unit)>::value_type;
        mode = is_exact_v<T> ? "exact" : "float";
        summary = instance_summary(p, l);
        if (p.splitting) {
          checks = run_checks(p, cfg, session);
        } else {
          for (const auto& c : validate_dg(p.bundle, session)) checks.push_back({c.name, c.pass, c.residual, c.witness, 1});
        }
      },
      l.prepared);
  Json cj = Json::array();
  std::size_t failed = 0;
  for (const auto& c : checks) {
    Json e{{"name", c.name}, {"pass", c.pass}, {"residual", c.residual}, {"samples", c.samples}};
    if (!c.witness.empty()) e["witness"] = c.witness;
    cj.push_back(e);
    if (!c.pass) ++failed;
  }
  const bool pass = failed == 0 && !checks.empty();
  Json report{{"command", "verify"},
              {"instance", summary},
              {"config", config_json(cfg, mode)},
              {"checks", cj},
              {"summary", Json{{"checks", checks.size()}, {"failed", failed}, {"pass", pass}}}};
  emit(report, cfg.output, out, [&] {
    for (const auto& c : checks) {
      out << (c.pass ? "PASS  " : "FAIL  ") << c.name << "  residual=" << c.residual;
      if (c.samples > 1) out << "  samples=" << c.samples;
      if (!c.witness.empty()) out << "  witness=" << c.witness;
      out << "\n";
    }
    out << (pass ? "all " : "") << checks.size() << " checks, " << failed << " failed\n";
  });
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_trace(const std::string& instance, const std::string& chain, const Config& cfg, std::ostream& out) {
  const Session session{cfg.tolerance};
  const Loaded l = prepare(instance, cfg, session);
  const Json chains = load_json(chain);
  return std::visit(
      [&](const auto& p) {
        using T = typename std::decay_t<decltype(p.bundle.algebra.unit)>::value_type;
        return trace_impl(p, l, chains, cfg, is_exact_v<T> ? "exact" : "float", out);
      },
      l.prepared);
}

}  // namespace tqt::cli
