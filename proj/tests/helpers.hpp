#pragma once

#include <random>

#include "tqt/dg.hpp"
#include "tqt/hoch.hpp"
#include "tqt/linalg.hpp"

namespace tqt::testing {

inline Matrix<Rational> qmat(std::size_t r, std::size_t c, std::initializer_list<long> v) {
  Matrix<Rational> m(r, c);
  auto it = v.begin();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = Rational(*it++);
  return m;
}

/// Random homogeneous map with small integer entries.
inline GradedMap<Rational> random_map(std::mt19937_64& rng, const SpacePtr& s, const SpacePtr& t, int degree) {
  Matrix<Rational> m(t->size(), s->size());
  for (std::size_t i = 0; i < t->size(); ++i)
    for (std::size_t j = 0; j < s->size(); ++j)
      if (t->degree_of(i) == s->degree_of(j) + degree) m(i, j) = Rational(static_cast<long>(rng() % 7) - 3);
  return GradedMap<Rational>(s, t, degree, std::move(m));
}

/// All tensors of length ≤ max_len and the given chain degree.
template <class T>
std::vector<Slots> tensors_of_degree(const FiniteAlgebra<T>& a, int max_len, int degree) {
  std::vector<Slots> out;
  Slots cur;
  auto rec = [&](auto&& self, int len) -> void {
    if (static_cast<int>(cur.size()) == len) {
      if (chain_degree(cur, a) == degree) out.push_back(cur);
      return;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      cur.push_back(i);
      self(self, len);
      cur.pop_back();
    }
  };
  for (int len = 1; len <= max_len; ++len) rec(rec, len);
  return out;
}

/// Random closed chains (exact): integer combinations of a basis of ker(hoch_diff)
/// on tensors of length ≤ max_len and the given degree.
inline std::vector<HochschildChain<Rational>> closed_chains(const FiniteAlgebra<Rational>& a, int max_len, int degree,
                                                            std::size_t count, std::mt19937_64& rng) {
  const Session session;
  const auto cols = tensors_of_degree(a, max_len, degree);
  std::map<Slots, std::size_t> row_of;
  std::vector<HochschildChain<Rational>> images;
  for (const auto& x : cols) {
    images.push_back(hoch_diff(HochschildChain<Rational>{{x, Rational(1)}}, a));
    for (const auto& [y, c] : images.back()) row_of.emplace(y, row_of.size());
  }
  Matrix<Rational> d(std::max<std::size_t>(row_of.size(), 1), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [y, c] : images[j]) d(row_of.at(y), j) = c;
  const Matrix<Rational> z = nullspace(d, session);
  std::vector<HochschildChain<Rational>> out;
  if (z.cols() == 0) return out;
  for (std::size_t n = 0; n < count; ++n) {
    HochschildChain<Rational> chain;
    for (std::size_t k = 0; k < z.cols(); ++k) {
      if (rng() % 3 != 0) continue;
      const Rational w(static_cast<long>(rng() % 7) - 3);
      for (std::size_t j = 0; j < cols.size(); ++j)
        if (sgn(z(j, k)) != 0) chain[cols[j]] += w * z(j, k);
    }
    for (auto it = chain.begin(); it != chain.end();) it = sgn(it->second) == 0 ? chain.erase(it) : std::next(it);
    if (!chain.empty()) out.push_back(std::move(chain));
  }
  return out;
}

}  // namespace tqt::testing
