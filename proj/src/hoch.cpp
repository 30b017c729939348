#include "tqt/hoch.hpp"

#include <algorithm>

namespace tqt {

namespace {

template <class T>
void add_to(HochschildChain<T>& chain, const Slots& x, const T& c) {
  if (ScalarTraits<T>::is_zero(c)) return;
  auto it = chain.find(x);
  if (it == chain.end()) chain.emplace(x, c);
  else it->second += c;
}

template <class T>
void drop_exact_zeros(HochschildChain<T>& chain) {
  for (auto it = chain.begin(); it != chain.end();) {
    if (ScalarTraits<T>::is_zero(it->second)) it = chain.erase(it);
    else ++it;
  }
}

/// All compositions of k into positive parts with the first part ≥ first_min.
void compositions(std::size_t k, std::size_t first_min, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t remaining) -> void {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    const std::size_t lo = cur.empty() ? first_min : 1;
    for (std::size_t q = lo; q <= remaining; ++q) {
      cur.push_back(q);
      self(self, remaining - q);
      cur.pop_back();
    }
  };
  rec(rec, k);
}

}  // namespace

template <class T>
int chain_degree(const Slots& x, const FiniteAlgebra<T>& a) {
  int d = 0;
  for (auto i : x) d += a.degree[i];
  return d - (static_cast<int>(x.size()) - 1);
}

template <class T>
void add_tensor(HochschildChain<T>& chain, const std::vector<AlgElem<T>>& x, const T& coeff) {
  Slots cur;
  auto rec = [&](auto&& self, std::size_t slot, const T& c) -> void {
    if (slot == x.size()) {
      add_to(chain, cur, c);
      return;
    }
    for (std::size_t i = 0; i < x[slot].coords.size(); ++i) {
      if (ScalarTraits<T>::is_zero(x[slot].coords[i])) continue;
      cur.push_back(i);
      self(self, slot + 1, T(c * x[slot].coords[i]));
      cur.pop_back();
    }
  };
  if (!x.empty()) rec(rec, 0, coeff);
  drop_exact_zeros(chain);
}

template <class T>
void prune(HochschildChain<T>& chain, const Session& session) {
  for (auto it = chain.begin(); it != chain.end();) {
    if (near_zero(it->second, session)) it = chain.erase(it);
    else ++it;
  }
}

template <class T>
double max_coefficient(const HochschildChain<T>& chain) {
  double m = 0.0;
  for (const auto& [x, c] : chain) m = std::max(m, magnitude(c));
  return m;
}

template <class T>
HochschildChain<T> hoch_diff_internal(const HochschildChain<T>& chain, const FiniteAlgebra<T>& a) {
  HochschildChain<T> out;
  for (const auto& [x, c] : chain) {
    long e_before = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (const auto& [p, v] : a.diff[x[i]]) {
        Slots y = x;
        y[i] = p;
        add_to(out, y, T(parity_sign<T>(e_before) * c * v));
      }
      e_before += a.degree[x[i]] - 1;
    }
  }
  drop_exact_zeros(out);
  return out;
}

template <class T>
HochschildChain<T> hoch_diff_bar(const HochschildChain<T>& chain, const FiniteAlgebra<T>& a) {
  HochschildChain<T> out;
  for (const auto& [x, c] : chain) {
    const std::size_t k = x.size();
    if (k < 2) continue;
    long e_before = 0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      const long di = a.degree[x[i]], dn = a.degree[x[i + 1]];
      const T sign = -parity_sign<T>(e_before + di + di * dn);
      for (const auto& [p, v] : a.mult[x[i + 1]][x[i]]) {
        Slots y(x.begin(), x.begin() + static_cast<long>(i));
        y.push_back(p);
        y.insert(y.end(), x.begin() + static_cast<long>(i) + 2, x.end());
        add_to(out, y, T(sign * c * v));
      }
      e_before += di - 1;
    }
    // wrap-around: x_1 x_k in the first slot; e_before is now Σ_{l<k} e_l
    const long dk = a.degree[x[k - 1]], d1 = a.degree[x[0]];
    const T sign = -parity_sign<T>((dk - 1) * e_before + dk + dk * d1);
    for (const auto& [p, v] : a.mult[x[0]][x[k - 1]]) {
      Slots y{p};
      y.insert(y.end(), x.begin() + 1, x.end() - 1);
      add_to(out, y, T(sign * c * v));
    }
  }
  drop_exact_zeros(out);
  return out;
}

template <class T>
HochschildChain<T> hoch_diff(const HochschildChain<T>& chain, const FiniteAlgebra<T>& a) {
  auto out = hoch_diff_internal(chain, a);
  for (const auto& [x, c] : hoch_diff_bar(chain, a)) add_to(out, x, c);
  drop_exact_zeros(out);
  return out;
}

template <class T>
std::pair<long, Slots> cyclic_shift(const Slots& x, const FiniteAlgebra<T>& a) {
  const std::size_t k = x.size();
  long rest = static_cast<long>(k) - 1;
  for (std::size_t l = 0; l + 1 < k; ++l) rest += a.degree[x[l]];
  const long parity = ((a.degree[x[k - 1]] + 1) * rest) & 1;
  Slots y{x[k - 1]};
  y.insert(y.end(), x.begin(), x.end() - 1);
  return {parity, y};
}

template <class T>
HochschildChain<T> cyclic_shift(const HochschildChain<T>& chain, const FiniteAlgebra<T>& a) {
  HochschildChain<T> out;
  for (const auto& [x, c] : chain) {
    auto [parity, y] = cyclic_shift(x, a);
    add_to(out, y, T(parity_sign<T>(parity) * c));
  }
  drop_exact_zeros(out);
  return out;
}

template <class T>
HochschildChain<T> cyclic_project(const HochschildChain<T>& chain, const FiniteAlgebra<T>& a) {
  HochschildChain<T> out;
  for (const auto& [x, c] : chain) {
    // walk the orbit, tracking the sign of C^r x relative to x
    std::vector<std::pair<Slots, long>> orbit{{x, 0}};
    for (std::size_t r = 1; r < x.size(); ++r) {
      auto [p, y] = cyclic_shift(orbit.back().first, a);
      orbit.push_back({y, (orbit.back().second + p) & 1});
    }
    auto [p_full, back] = cyclic_shift(orbit.back().first, a);
    const long full = (orbit.back().second + p_full) & 1;  // C^k x = (−1)^full x
    if (full == 1) continue;                                // x ≡ −x
    const auto best = std::min_element(orbit.begin(), orbit.end(),
                                       [](const auto& u, const auto& v) { return u.first < v.first; });
    // a tensor fixed by a shorter rotation with sign −1 also vanishes
    bool vanishes = false;
    for (const auto& [y, s] : orbit)
      if (y == best->first && s != best->second) vanishes = true;
    if (vanishes) continue;
    add_to(out, best->first, T(parity_sign<T>(best->second) * c));
  }
  drop_exact_zeros(out);
  return out;
}

template <class T>
FiniteAlgebra<T> endomorphism_algebra(const GradedVectorSpace& v) {
  const std::size_t n = v.size();
  FiniteAlgebra<T> a;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      a.degree.push_back(v.degree_of(i) - v.degree_of(j));
      a.label.push_back("E[" + v.label(i) + "<-" + v.label(j) + "]");
    }
  a.mult.assign(n * n, std::vector<SparseVec<T>>(n * n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) a.mult[i * n + j][j * n + l] = {{i * n + l, T(1)}};
  a.diff.assign(n * n, {});
  a.unit.assign(n * n, T(0));
  for (std::size_t i = 0; i < n; ++i) a.unit[i * n + i] = T(1);
  a.named["Id"] = a.unit;
  return a;
}

template <class T>
AlgElem<T> endomorphism_element(const GradedMap<T>& m) {
  const auto data = m.matrix().data();
  return {m.degree(), std::vector<T>(data.begin(), data.end())};
}

template <class T>
HochschildChain<T> fhoch_push(const HochschildChain<T>& chain, const AInfinityMorphism<T>& f) {
  const auto& a = f.bundle().algebra;
  const std::size_t n0 = f.splitting().m0->size();
  HochschildChain<T> out;
  for (const auto& [x, c] : chain) {
    const std::size_t k = x.size();
    if (static_cast<int>(k) > f.max_arity()) {
      throw InputError("fhoch_push: chain of length " + std::to_string(k) + " needs F of arity " +
                       std::to_string(k) + " (max arity " + std::to_string(f.max_arity()) + ")");
    }
    std::vector<long> e(k);
    for (std::size_t l = 0; l < k; ++l) e[l] = a.degree[x[l]] - 1;
    for (std::size_t m = 0; m < k; ++m) {
      // rotation y = (x_m, …, x_k, x_1, …, x_{m−1}) (0-based start m)
      long moved = 0, stayed = 0;
      for (std::size_t l = m; l < k; ++l) moved += e[l];
      for (std::size_t l = 0; l < m; ++l) stayed += e[l];
      const T rot = parity_sign<T>(moved * stayed);
      Slots y(x.begin() + static_cast<long>(m), x.end());
      y.insert(y.end(), x.begin(), x.begin() + static_cast<long>(m));
      const std::size_t first_min = m == 0 ? 1 : k - m + 1;
      std::vector<std::vector<std::size_t>> comps;
      compositions(k, first_min, comps);
      for (const auto& q : comps) {
        std::vector<GradedMap<T>> values;
        std::size_t pos = 0;
        bool zero = false;
        for (auto len : q) {
          Slots block(y.begin() + static_cast<long>(pos), y.begin() + static_cast<long>(pos + len));
          pos += len;
          values.push_back(f.on_basis(block));
          const auto data = values.back().matrix().data();
          if (std::all_of(data.begin(), data.end(), [](const T& v) { return ScalarTraits<T>::is_zero(v); })) {
            zero = true;
            break;
          }
        }
        if (zero) continue;
        // expand the tensor of F-values in the elementary basis
        Slots cur;
        auto rec = [&](auto&& self, std::size_t slot, const T& coeff) -> void {
          if (slot == values.size()) {
            add_to(out, cur, coeff);
            return;
          }
          const auto& mat = values[slot].matrix();
          for (std::size_t i = 0; i < n0; ++i)
            for (std::size_t j = 0; j < n0; ++j) {
              if (ScalarTraits<T>::is_zero(mat(i, j))) continue;
              cur.push_back(i * n0 + j);
              self(self, slot + 1, T(coeff * mat(i, j)));
              cur.pop_back();
            }
        };
        rec(rec, 0, T(rot * c));
      }
    }
  }
  drop_exact_zeros(out);
  return out;
}

template <class T>
ChainMapReport<T> chain_map_defect(const HochschildChain<T>& chain, const AInfinityMorphism<T>& f,
                                   const Session& session) {
  const auto end_alg = endomorphism_algebra<T>(*f.splitting().m0);
  const auto& a = f.bundle().algebra;
  ChainMapReport<T> r;
  r.defect = hoch_diff(fhoch_push(chain, f), end_alg);
  for (const auto& [x, c] : fhoch_push(hoch_diff(chain, a), f)) add_to(r.defect, x, T(-c));
  drop_exact_zeros(r.defect);
  r.max_coefficient = max_coefficient(r.defect);
  prune(r.defect, session);
  r.pass = r.defect.empty();
  return r;
}

#define TQT_INSTANTIATE(T)                                                                           \
  template int chain_degree(const Slots&, const FiniteAlgebra<T>&);                                  \
  template void add_tensor(HochschildChain<T>&, const std::vector<AlgElem<T>>&, const T&);           \
  template void prune(HochschildChain<T>&, const Session&);                                          \
  template double max_coefficient(const HochschildChain<T>&);                                        \
  template HochschildChain<T> hoch_diff_internal(const HochschildChain<T>&, const FiniteAlgebra<T>&); \
  template HochschildChain<T> hoch_diff_bar(const HochschildChain<T>&, const FiniteAlgebra<T>&);     \
  template HochschildChain<T> hoch_diff(const HochschildChain<T>&, const FiniteAlgebra<T>&);         \
  template std::pair<long, Slots> cyclic_shift(const Slots&, const FiniteAlgebra<T>&);               \
  template HochschildChain<T> cyclic_shift(const HochschildChain<T>&, const FiniteAlgebra<T>&);      \
  template HochschildChain<T> cyclic_project(const HochschildChain<T>&, const FiniteAlgebra<T>&);    \
  template FiniteAlgebra<T> endomorphism_algebra(const GradedVectorSpace&);                          \
  template AlgElem<T> endomorphism_element(const GradedMap<T>&);                                     \
  template HochschildChain<T> fhoch_push(const HochschildChain<T>&, const AInfinityMorphism<T>&);    \
  template ChainMapReport<T> chain_map_defect(const HochschildChain<T>&, const AInfinityMorphism<T>&, \
                                              const Session&);

TQT_INSTANTIATE(Rational)
TQT_INSTANTIATE(Complex)

}  // namespace tqt
