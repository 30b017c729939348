#include "tqt/tqm.hpp"

#include <bit>
#include <cmath>
#include <limits>

namespace tqt {

long transfer_sign_parity(const std::vector<int>& degrees) {
  long parity = 0, prefix = 0;
  for (int d : degrees) {
    const long e = d - 1;
    parity += prefix * e;
    prefix += e;
  }
  return parity & 1;
}

long top_sign_parity(const std::vector<int>& degrees) {
  long parity = static_cast<long>(degrees.size()) - 1;
  for (std::size_t l = 0; l < degrees.size(); ++l) parity += static_cast<long>(l) * degrees[l];
  return parity & 1;
}

namespace {

template <class T>
std::vector<int> degrees_of(const std::vector<AlgElem<T>>& inputs) {
  std::vector<int> d;
  for (const auto& x : inputs) d.push_back(x.degree);
  return d;
}

template <class T>
GradedMap<T> zero_on(const SpacePtr& m0, int degree) {
  return GradedMap<T>(m0, m0, degree);
}

int total_degree(const std::vector<int>& d) {
  int s = 0;
  for (int x : d) s += x;
  return s;
}

}  // namespace

template <class T>
GradedMap<T> transfer_closed(const std::vector<AlgElem<T>>& inputs, const Splitting<T>& s,
                             const DgModuleBundle<T>& b) {
  if (inputs.empty()) throw InputError("transfer_closed: at least one input is required");
  GradedMap<T> acc = compose(b.act(inputs[0]), s.iota);
  for (std::size_t i = 1; i < inputs.size(); ++i) acc = compose(b.act(inputs[i]), compose(s.h, acc));
  acc = compose(s.pi, acc);
  return parity_sign<T>(transfer_sign_parity(degrees_of(inputs))) * acc;
}

template <class T>
void AInfinityMorphism<T>::check_arity(std::size_t k) const {
  if (k == 0 || static_cast<int>(k) > max_arity_) {
    throw InputError("A-infinity component of arity " + std::to_string(k) + " is not available (max arity " +
                     std::to_string(max_arity_) + ")");
  }
}

template <class T>
GradedMap<T> AInfinityMorphism<T>::operator()(const std::vector<AlgElem<T>>& inputs) const {
  check_arity(inputs.size());
  return transfer_closed(inputs, splitting_, bundle_);
}

template <class T>
GradedMap<T> AInfinityMorphism<T>::on_basis(const std::vector<std::size_t>& indices) const {
  check_arity(indices.size());
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(indices);
    if (it != cache_.end()) return it->second;
  }
  std::vector<AlgElem<T>> inputs;
  for (auto i : indices) inputs.push_back(basis_element(bundle_.algebra, i));
  auto value = transfer_closed(inputs, splitting_, bundle_);
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.emplace(indices, std::move(value)).first->second;
}

template <class T>
GradedMap<T> ainfinity_defect(const AInfinityMorphism<T>& f, const std::vector<AlgElem<T>>& inputs) {
  const auto& a = f.bundle().algebra;
  const SpacePtr& m0 = f.splitting().m0;
  const std::size_t k = inputs.size();
  const auto d = degrees_of(inputs);
  GradedMap<T> defect = zero_on<T>(m0, total_degree(d) + 2 - static_cast<int>(k));

  long e_before = 0;  // Σ_{l<i} (d_l − 1)
  for (std::size_t i = 0; i < k; ++i) {
    auto args = inputs;
    args[i] = differentiate(a, inputs[i]);
    if (!args[i].is_zero()) defect -= parity_sign<T>(e_before) * f(args);
    if (i + 1 < k) {
      // a_i ·op a_{i+1} = (−1)^{d_i d_{i+1}} a_{i+1} a_i
      AlgElem<T> merged = multiply(a, inputs[i + 1], inputs[i]);
      merged.degree = d[i] + d[i + 1];
      if (!merged.is_zero()) {
        std::vector<AlgElem<T>> margs(inputs.begin(), inputs.begin() + static_cast<long>(i));
        margs.push_back(merged);
        margs.insert(margs.end(), inputs.begin() + static_cast<long>(i) + 2, inputs.end());
        const T sign = parity_sign<T>(e_before + d[i] + static_cast<long>(d[i]) * d[i + 1]);
        defect += sign * f(margs);
      }
    }
    e_before += d[i] - 1;
  }
  for (std::size_t r = 1; r < k; ++r) {
    std::vector<AlgElem<T>> lo(inputs.begin(), inputs.begin() + static_cast<long>(r));
    std::vector<AlgElem<T>> hi(inputs.begin() + static_cast<long>(r), inputs.end());
    const auto x = f(lo);
    const auto y = f(hi);
    // −(−1)^{|x|} x ·op y with x ·op y = (−1)^{|x||y|} y∘x
    const long parity = x.degree() + static_cast<long>(x.degree()) * y.degree();
    defect -= parity_sign<T>(parity) * compose(y, x);
  }
  return defect;
}

// ---------------------------------------------------------------------------

std::pair<GradedMap<Complex>, GradedMap<Complex>> propagator(double t, const Splitting<Complex>& s) {
  if (!(t >= 0.0)) throw InputError("propagator: t must be non-negative");
  if (std::isinf(t)) return {s.pi0, GradedMap<Complex>(s.pi0.source_ptr(), s.pi0.target_ptr(), -1)};
  const std::size_t n = s.eigenvalues.size();
  Matrix<Complex> diag(n, n);
  for (std::size_t i = 0; i < n; ++i) diag(i, i) = Complex(std::exp(-t * s.eigenvalues[i]), 0.0);
  GradedMap<Complex> even(s.pi0.source_ptr(), s.pi0.target_ptr(), 0,
                          s.eigenvectors * diag * s.eigenvectors_inverse);
  GradedMap<Complex> odd = Complex(-1.0) * compose(even, s.kappa);
  return {std::move(even), std::move(odd)};
}

GradedMap<Complex> OperatorForm::component(unsigned mask, const SpacePtr& m0) const {
  auto it = components.find(mask);
  if (it != components.end()) return it->second;
  return GradedMap<Complex>(m0, m0, 0);
}

OperatorForm omega_of_operators(const std::vector<GradedMap<Complex>>& ops, const std::vector<double>& gaps,
                                const Splitting<Complex>& s) {
  const std::size_t k = ops.size();
  if (k == 0) throw InputError("omega: at least one operator is required");
  if (gaps.size() + 1 != k) {
    throw InputError("omega: " + std::to_string(k) + " operators need " + std::to_string(k - 1) + " gaps");
  }
  std::map<unsigned, GradedMap<Complex>> acc;
  acc.emplace(0u, compose(s.pi, ops[k - 1]));
  for (std::size_t j = k - 1; j >= 1; --j) {
    const auto [even, odd] = propagator(gaps[j - 1], s);
    const unsigned bit = 1u << (j - 1);
    std::map<unsigned, GradedMap<Complex>> next;
    for (const auto& [mask, a] : acc) {
      auto add = [&](unsigned m, GradedMap<Complex> v) {
        auto it = next.find(m);
        if (it == next.end()) next.emplace(m, std::move(v));
        else it->second += v;
      };
      add(mask, compose(compose(a, even), ops[j - 1]));
      // moving dt_j to the left past A and past the dt's of higher gaps already in mask
      const long parity = a.degree() + std::popcount(mask);
      add(mask | bit, parity_sign<Complex>(parity) * compose(compose(a, odd), ops[j - 1]));
    }
    acc = std::move(next);
  }
  OperatorForm w;
  w.gaps = static_cast<int>(k) - 1;
  for (auto& [mask, a] : acc) w.components.emplace(mask, compose(a, s.iota));
  return w;
}

OperatorForm omega_eval(const std::vector<AlgElem<Complex>>& inputs, const std::vector<double>& gaps,
                        const Splitting<Complex>& s, const DgModuleBundle<Complex>& b) {
  std::vector<GradedMap<Complex>> ops;
  for (const auto& x : inputs) ops.push_back(b.act(x));
  return omega_of_operators(ops, gaps, s);
}

TransferQuadrature transfer_quadrature(const std::vector<AlgElem<Complex>>& inputs, const Splitting<Complex>& s,
                                       const DgModuleBundle<Complex>& b, const QuadratureSpec& spec) {
  const std::size_t k = inputs.size();
  if (k == 0) throw InputError("transfer_quadrature: at least one input is required");
  const auto d = degrees_of(inputs);
  if (k == 1) return {compose(s.pi, compose(b.act(inputs[0]), s.iota)), 0.0, 0, 0};

  std::vector<GradedMap<Complex>> ops;
  for (const auto& x : inputs) ops.push_back(b.act(x));
  const std::size_t n0 = s.m0->size();
  const unsigned top = (1u << (k - 1)) - 1u;
  const Integrand integrand = [&](std::span<const double> sigma) {
    std::vector<double> t(sigma.size());
    double jac = 1.0;
    for (std::size_t j = 0; j < sigma.size(); ++j) {
      const double r = 1.0 - sigma[j];
      t[j] = sigma[j] / r;
      jac /= r * r;
    }
    const auto w = omega_of_operators(ops, t, s);
    std::vector<Complex> out(n0 * n0, Complex(0.0, 0.0));
    auto it = w.components.find(top);
    if (it != w.components.end()) {
      const auto data = it->second.matrix().data();
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = jac * data[i];
    }
    return out;
  };
  const auto r = integrate_cube(integrand, static_cast<int>(k) - 1, n0 * n0, spec);
  Matrix<Complex> m(n0, n0);
  const Complex sign = parity_sign<Complex>(transfer_sign_parity(d) + top_sign_parity(d));
  for (std::size_t i = 0; i < n0 * n0; ++i) m.data()[i] = sign * r.value[i];
  const int degree = total_degree(d) + 1 - static_cast<int>(k);
  // entries off the degree blocks carry quadrature noise only at the level of exact zeros
  return {GradedMap<Complex>(s.m0, s.m0, degree, std::move(m)), r.error, r.evaluations, r.cells};
}

OperatorForm restrict_face(const OperatorForm& w, int gap) {
  OperatorForm out;
  out.gaps = w.gaps - 1;
  const unsigned bit = 1u << (gap - 1);
  const unsigned low = bit - 1u;
  for (const auto& [mask, a] : w.components) {
    if (mask & bit) continue;
    const unsigned m = (mask & low) | ((mask >> 1) & ~low);
    out.components.emplace(m, a);
  }
  return out;
}

OperatorForm omega_merged(const std::vector<AlgElem<Complex>>& inputs, int gap, const std::vector<double>& gaps,
                          const Splitting<Complex>& s, const DgModuleBundle<Complex>& b) {
  std::vector<GradedMap<Complex>> ops;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (static_cast<int>(i) == gap - 1) {
      ops.push_back(compose(b.act(inputs[i + 1]), b.act(inputs[i])));
      ++i;
    } else {
      ops.push_back(b.act(inputs[i]));
    }
  }
  std::vector<double> g;
  for (std::size_t j = 0; j < gaps.size(); ++j)
    if (static_cast<int>(j) != gap - 1) g.push_back(gaps[j]);
  return omega_of_operators(ops, g, s);
}

OperatorForm omega_factorized(const std::vector<AlgElem<Complex>>& inputs, int gap,
                              const std::vector<double>& gaps, const Splitting<Complex>& s,
                              const DgModuleBundle<Complex>& b) {
  const auto split = static_cast<std::size_t>(gap);
  std::vector<AlgElem<Complex>> lo_in(inputs.begin(), inputs.begin() + static_cast<long>(split));
  std::vector<AlgElem<Complex>> hi_in(inputs.begin() + static_cast<long>(split), inputs.end());
  std::vector<double> lo_g(gaps.begin(), gaps.begin() + static_cast<long>(split) - 1);
  std::vector<double> hi_g(gaps.begin() + static_cast<long>(split), gaps.end());
  const auto lo = omega_eval(lo_in, lo_g, s, b);
  const auto hi = omega_eval(hi_in, hi_g, s, b);
  OperatorForm out;
  out.gaps = static_cast<int>(gaps.size()) - 1;
  const int lo_gaps = lo.gaps;
  for (const auto& [mh, a] : hi.components)
    for (const auto& [ml, c] : lo.components) {
      const long nl = std::popcount(ml), nh = std::popcount(mh);
      // (dt_H⊗A)(dt_L⊗C) = (−1)^{|A||L|} dt_H∧dt_L ⊗ AC, then dt_H∧dt_L = (−1)^{|H||L|} dt_L∧dt_H
      const long parity = a.degree() * nl + nh * nl;
      const unsigned mask = ml | (mh << lo_gaps);
      auto v = parity_sign<Complex>(parity) * compose(a, c);
      auto it = out.components.find(mask);
      if (it == out.components.end()) out.components.emplace(mask, std::move(v));
      else it->second += v;
    }
  return out;
}

double form_distance(const OperatorForm& a, const OperatorForm& b, const SpacePtr& m0) {
  double dist = 0.0;
  const unsigned masks = 1u << std::max(a.gaps, b.gaps);
  for (unsigned m = 0; m < masks; ++m) {
    const auto x = a.component(m, m0).matrix();
    const auto y = b.component(m, m0).matrix();
    if (x.rows() != y.rows() || x.cols() != y.cols()) continue;
    dist = std::max(dist, (x - y).max_abs());
  }
  return dist;
}

double almost_closed_check(const std::vector<AlgElem<Complex>>& inputs, const std::vector<double>& gaps,
                           const Splitting<Complex>& s, const DgModuleBundle<Complex>& b, double step) {
  if (!(step > 0.0)) throw InputError("almost_closed_check: step must be positive");
  for (double t : gaps)
    if (!(t > step)) throw InputError("almost_closed_check: gaps must exceed the step");
  const SpacePtr& m0 = s.m0;
  const int g = static_cast<int>(gaps.size());
  std::map<unsigned, Matrix<Complex>> d_tau;
  auto accumulate = [&](std::map<unsigned, Matrix<Complex>>& acc, unsigned mask, const Matrix<Complex>& v) {
    auto it = acc.find(mask);
    if (it == acc.end()) acc.emplace(mask, v);
    else it->second += v;
  };
  for (int j = 0; j < g; ++j) {
    auto plus = gaps, minus = gaps;
    plus[j] += step;
    minus[j] -= step;
    const auto wp = omega_eval(inputs, plus, s, b);
    const auto wm = omega_eval(inputs, minus, s, b);
    const unsigned bit = 1u << j;
    for (unsigned mask = 0; mask < (1u << g); ++mask) {
      if (mask & bit) continue;
      auto diff = wp.component(mask, m0).matrix() - wm.component(mask, m0).matrix();
      if (diff.rows() == 0) continue;
      // dt_j ∧ dt_S reordered: passes the dt's in S below j
      const long parity = std::popcount(mask & (bit - 1u));
      accumulate(d_tau, mask | bit, Complex(parity & 1 ? -1.0 : 1.0) * (Complex(1.0 / (2.0 * step)) * diff));
    }
  }
  std::map<unsigned, Matrix<Complex>> d_alg;
  const auto& a = b.algebra;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    long parity = 0;
    for (std::size_t l = i + 1; l < inputs.size(); ++l) parity += inputs[l].degree;
    auto args = inputs;
    args[i] = differentiate(a, inputs[i]);
    if (args[i].is_zero()) continue;
    const auto w = omega_eval(args, gaps, s, b);
    for (const auto& [mask, v] : w.components) accumulate(d_alg, mask, parity_sign<Complex>(parity) * v.matrix());
  }
  double residual = 0.0;
  for (unsigned mask = 0; mask < (1u << g); ++mask) {
    auto x = d_tau.find(mask);
    auto y = d_alg.find(mask);
    if (x != d_tau.end() && y != d_alg.end()) residual = std::max(residual, (x->second - y->second).max_abs());
    else if (x != d_tau.end()) residual = std::max(residual, x->second.max_abs());
    else if (y != d_alg.end()) residual = std::max(residual, y->second.max_abs());
  }
  return residual;
}

template GradedMap<Rational> transfer_closed(const std::vector<AlgElem<Rational>>&, const Splitting<Rational>&,
                                             const DgModuleBundle<Rational>&);
template GradedMap<Complex> transfer_closed(const std::vector<AlgElem<Complex>>&, const Splitting<Complex>&,
                                            const DgModuleBundle<Complex>&);
template class AInfinityMorphism<Rational>;
template class AInfinityMorphism<Complex>;
template GradedMap<Rational> ainfinity_defect(const AInfinityMorphism<Rational>&,
                                              const std::vector<AlgElem<Rational>>&);
template GradedMap<Complex> ainfinity_defect(const AInfinityMorphism<Complex>&,
                                             const std::vector<AlgElem<Complex>>&);

}  // namespace tqt
