#include "tqt/traces.hpp"

#include <algorithm>
#include <numeric>

namespace tqt {

namespace {

/// ±str(x_k ⋯ x_2 x_1) on V for x = E[i1←j1] ⊗ ⋯ ⊗ E[ik←jk]: the product order in
/// which the Hochschild merges x_{i+1} x_i compose.
template <class T>
T str_of_product(const Slots& x, const GradedVectorSpace& v) {
  const std::size_t n = v.size();
  for (std::size_t l = 0; l + 1 < x.size(); ++l)
    if (x[l + 1] % n != x[l] / n) return T(0);
  const std::size_t first = x.back() / n, last = x.front() % n;
  if (first != last) return T(0);
  // Koszul correction for reading the slots in reverse
  long parity = v.degree_of(first);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long di = v.degree_of(x[i] / n) - v.degree_of(x[i] % n);
    parity += static_cast<long>(i) * di;
    for (std::size_t j = i + 1; j < x.size(); ++j) parity += di * (v.degree_of(x[j] / n) - v.degree_of(x[j] % n));
  }
  return parity_sign<T>(parity);
}

long factorial(long n) { return n <= 1 ? 1 : n * factorial(n - 1); }

void check_level(const Slots& x, int level) {
  if (level < 0) throw InputError("cyclic trace: level must be non-negative");
  if (x.size() != static_cast<std::size_t>(2 * level + 1)) {
    throw InputError("cyclic trace of level " + std::to_string(level) + " needs tensors of length " +
                     std::to_string(2 * level + 1) + ", got " + std::to_string(x.size()));
  }
}

}  // namespace

template <class T>
T supertrace(const GradedMap<T>& m) {
  if (m.degree() != 0) return T(0);
  T s(0);
  for (std::size_t i = 0; i < m.source().size(); ++i) s += parity_sign<T>(m.source().degree_of(i)) * m(i, i);
  return s;
}

template <class T>
T str_cohomology(const GradedMap<T>& op, const GradedMap<T>& q, const Session& session) {
  if (!supercommutator(q, op).is_zero(session)) {
    throw StructuralError("str_cohomology: operator does not commute with Q");
  }
  if (op.degree() != 0) return T(0);
  const auto h = cohomology(q, session);
  T total(0);
  for (const auto& [d, reps] : h.representatives) {
    if (reps.cols() == 0) continue;
    const auto& b = h.boundaries.at(d);
    const Matrix<T> basis = hconcat(b, reps);
    const Matrix<T> image = op.block(d) * reps;
    T tr(0);
    for (std::size_t j = 0; j < reps.cols(); ++j) {
      const auto col = image.column(j);
      const auto x = solve(basis, std::span<const T>(col), session);
      if (!x) throw StructuralError("str_cohomology: image of a cocycle is not a cocycle");
      tr += (*x)[b.cols() + j];
    }
    total += parity_sign<T>(d) * tr;
  }
  return total;
}

template <class T>
T str_can(const HochschildChain<T>& chain, const GradedVectorSpace& v) {
  const std::size_t n = v.size();
  T s(0);
  for (const auto& [x, c] : chain) {
    if (x.size() != 1 || x[0] / n != x[0] % n) continue;
    s += parity_sign<T>(v.degree_of(x[0] / n)) * c;
  }
  return s;
}

template <class T>
T theta1(const GradedMap<T>& op, const Splitting<T>& s) {
  return supertrace(compose(s.pi, compose(op, s.iota)));
}

template <class T>
T upsilon(const HochschildChain<T>& chain, const AInfinityMorphism<T>& f) {
  const auto& a = f.bundle().algebra;
  T total(0);
  for (const auto& [x, c] : chain) {
    Slots y = x;
    long parity = 0;
    for (std::size_t s = 0; s < x.size(); ++s) {
      total += parity_sign<T>(parity) * c * supertrace(f.on_basis(y));
      auto [p, next] = cyclic_shift(y, a);
      parity += p;
      y = std::move(next);
    }
  }
  return total;
}

template <class T>
T trace_defect(const HochschildChain<T>& alpha, const AInfinityMorphism<T>& f) {
  return upsilon(hoch_diff(alpha, f.bundle().algebra), f);
}

template <class T>
T cyclic_trace(const HochschildChain<T>& chain, const GradedVectorSpace& v, int level) {
  const auto end_alg = endomorphism_algebra<T>(v);
  T total(0);
  for (const auto& [x, c] : chain) {
    check_level(x, level);
    Slots y = x;
    long parity = 0;
    T sum(0);
    for (std::size_t s = 0; s < x.size(); ++s) {
      sum += parity_sign<T>(parity) * str_of_product<T>(y, v);
      auto [p, next] = cyclic_shift(y, end_alg);
      parity += p;
      y = std::move(next);
    }
    total += c * sum;
  }
  return T(factorial(2 * level)) * total;
}

template <class T>
T cyclic_trace_full_permutation(const HochschildChain<T>& chain, const GradedVectorSpace& v, int level) {
  const std::size_t n = v.size();
  T total(0);
  for (const auto& [x, c] : chain) {
    check_level(x, level);
    std::vector<std::size_t> perm(x.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      long parity = 0;
      for (std::size_t p = 0; p < perm.size(); ++p)
        for (std::size_t q = p + 1; q < perm.size(); ++q)
          if (perm[p] > perm[q]) {
            const long dp = v.degree_of(x[perm[p]] / n) - v.degree_of(x[perm[p]] % n);
            const long dq = v.degree_of(x[perm[q]] / n) - v.degree_of(x[perm[q]] % n);
            parity += 1 + dp * dq;  // sign of σ times the Koszul sign
          }
      Slots y;
      for (auto p : perm) y.push_back(x[p]);
      total += parity_sign<T>(parity) * c * str_of_product<T>(y, v);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return total;
}

template <class T>
T upsilon_cyclic(const HochschildChain<T>& chain, const AInfinityMorphism<T>& f, int level) {
  HochschildChain<T> part;
  for (const auto& [x, c] : fhoch_push(chain, f))
    if (x.size() == static_cast<std::size_t>(2 * level + 1)) part.emplace(x, c);
  return cyclic_trace(part, *f.splitting().m0, level);
}

template <class T>
T antisym_str(const GradedMap<T>& d1, const GradedMap<T>& d2, const GradedMap<T>& d3, const GradedMap<T>& q,
              const Session& session) {
  for (const auto* d : {&d1, &d2, &d3})
    if (!supercommutator(q, *d).is_zero(session)) throw StructuralError("antisym_str: operator is not Q-closed");
  const std::vector<const GradedMap<T>*> ops{&d1, &d2, &d3};
  std::vector<std::size_t> perm{0, 1, 2};
  GradedMap<T> sum(q.source_ptr(), q.source_ptr(), d1.degree() + d2.degree() + d3.degree());
  do {
    long parity = 0;
    for (std::size_t p = 0; p < 3; ++p)
      for (std::size_t r = p + 1; r < 3; ++r)
        if (perm[p] > perm[r]) parity += static_cast<long>(ops[perm[p]]->degree()) * ops[perm[r]]->degree();
    sum += parity_sign<T>(parity) * compose(*ops[perm[0]], compose(*ops[perm[1]], *ops[perm[2]]));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return str_cohomology(sum, q, session);
}

#define TQT_INSTANTIATE(T)                                                                                   \
  template T supertrace(const GradedMap<T>&);                                                                \
  template T str_cohomology(const GradedMap<T>&, const GradedMap<T>&, const Session&);                       \
  template T str_can(const HochschildChain<T>&, const GradedVectorSpace&);                                   \
  template T theta1(const GradedMap<T>&, const Splitting<T>&);                                               \
  template T upsilon(const HochschildChain<T>&, const AInfinityMorphism<T>&);                                \
  template T trace_defect(const HochschildChain<T>&, const AInfinityMorphism<T>&);                           \
  template T cyclic_trace(const HochschildChain<T>&, const GradedVectorSpace&, int);                         \
  template T cyclic_trace_full_permutation(const HochschildChain<T>&, const GradedVectorSpace&, int);        \
  template T upsilon_cyclic(const HochschildChain<T>&, const AInfinityMorphism<T>&, int);                    \
  template T antisym_str(const GradedMap<T>&, const GradedMap<T>&, const GradedMap<T>&, const GradedMap<T>&, \
                         const Session&);

TQT_INSTANTIATE(Rational)
TQT_INSTANTIATE(Complex)

}  // namespace tqt
