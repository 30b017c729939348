#include "tqt/instances.hpp"

#include <numbers>
#include <random>

namespace tqt {

namespace {

void check_dims(const std::map<int, std::size_t>& dims) {
  std::size_t total = 0;
  for (const auto& [d, n] : dims) total += n;
  if (total > kMaxInstanceDimension) {
    throw InputError("instance dimension " + std::to_string(total) + " exceeds the bound " +
                     std::to_string(kMaxInstanceDimension));
  }
}

/// Incremental echelon basis for exact span-membership tests.
class EchelonSpan {
 public:
  /// Adds v if it is independent of the current span; returns whether it was added.
  bool insert(std::vector<Rational> v) {
    for (const auto& [p, row] : rows_) {
      if (sgn(v[p]) == 0) continue;
      const Rational f = v[p];
      for (std::size_t i = 0; i < v.size(); ++i)
        if (sgn(row[i]) != 0) v[i] -= f * row[i];
    }
    std::size_t p = 0;
    while (p < v.size() && sgn(v[p]) == 0) ++p;
    if (p == v.size()) return false;
    const Rational inv = Rational(1) / v[p];
    for (auto& x : v) x *= inv;
    // keep rows fully reduced against the new pivot
    for (auto& [q, row] : rows_) {
      if (sgn(row[p]) == 0) continue;
      const Rational f = row[p];
      for (std::size_t i = 0; i < v.size(); ++i)
        if (sgn(v[i]) != 0) row[i] -= f * v[i];
    }
    rows_.push_back({p, std::move(v)});
    return true;
  }
  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<std::pair<std::size_t, std::vector<Rational>>> rows_;
};

}  // namespace

DgModuleBundle<Rational> gen_matrix_instance(const std::map<int, std::size_t>& dims,
                                             const std::map<int, std::vector<std::string>>& labels,
                                             const std::optional<GradedMap<Rational>>& q) {
  check_dims(dims);
  const Session session;
  const SpacePtr m = make_space(dims, labels);
  GradedMap<Rational> qq = q ? *q : GradedMap<Rational>(m, m, 1);
  if (!qq.source().same_shape(*m) || qq.degree() != 1) throw ShapeError("Q must be a degree-1 endomorphism of M");
  qq = GradedMap<Rational>(m, m, 1, qq.matrix());
  std::vector<GradedMap<Rational>> ops;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m->size(); ++i)
    for (std::size_t j = 0; j < m->size(); ++j) {
      Matrix<Rational> e(m->size(), m->size());
      e(i, j) = 1;
      ops.emplace_back(m, m, m->degree_of(i) - m->degree_of(j), std::move(e));
      names.push_back(m->label(i) + "<-" + m->label(j));
    }
  return bundle_from_operators(m, qq, std::move(ops), std::move(names),
                               {{"Id", GradedMap<Rational>::identity(m)}, {"Q", qq}}, session);
}

DgModuleBundle<Rational> t1_instance() {
  const std::map<int, std::size_t> dims{{0, 2}, {1, 1}};
  const std::map<int, std::vector<std::string>> labels{{0, {"e1", "e2"}}, {1, {"f"}}};
  const SpacePtr m = make_space(dims, labels);
  Matrix<Rational> q(3, 3);
  q(2, 0) = 1;
  return gen_matrix_instance(dims, labels, GradedMap<Rational>(m, m, 1, std::move(q)));
}

DgModuleBundle<Complex> gen_torus_dolbeault(int n_trunc, std::complex<double> tau, const Session& session) {
  using C = Complex;
  if (n_trunc < 1) throw InputError("torus truncation N must be at least 1");
  if (!(tau.imag() > 0.0)) throw InputError("torus modulus must have positive imaginary part");
  const int side = 2 * n_trunc + 1;
  const std::size_t modes = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
  check_dims({{0, modes}, {1, modes}});
  std::vector<std::pair<int, int>> mn;
  std::vector<std::string> l0, l1;
  for (int a = -n_trunc; a <= n_trunc; ++a)
    for (int b = -n_trunc; b <= n_trunc; ++b) {
      mn.push_back({a, b});
      const std::string tag = "(" + std::to_string(a) + "," + std::to_string(b) + ")";
      l0.push_back("u" + tag);
      l1.push_back("v" + tag);
    }
  const SpacePtr m = make_space({{0, modes}, {1, modes}}, {{0, l0}, {1, l1}});
  const double pi = std::numbers::pi, t2 = tau.imag();
  // ∂̄ and ∂ eigenvalues on the mode exp(π/τ2 · (z̄ (n − mτ) − z (n − mτ̄)))
  auto dbar = [&](int a, int b) { return -pi * (C(b) - C(a) * tau) / t2; };
  auto del = [&](int a, int b) { return pi * (C(b) - C(a) * std::conj(tau)) / t2; };

  const std::size_t n = 2 * modes;
  Matrix<C> q(n, n), id(n, n), dz(n, n), dz2(n, n);
  std::vector<GradedMap<C>> ops;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < modes; ++i) {
    const auto [a, b] = mn[i];
    q(modes + i, i) = dbar(a, b);
    const std::string tag = "[" + std::to_string(a) + "," + std::to_string(b) + "]";
    Matrix<C> p(n, n), s(n, n);
    p(i, i) = 1.0;
    p(modes + i, modes + i) = 1.0;
    s(modes + i, i) = 1.0;
    ops.emplace_back(m, m, 0, std::move(p));
    names.push_back("P" + tag);
    ops.emplace_back(m, m, 1, std::move(s));
    names.push_back("dzbar*P" + tag);
    for (std::size_t k : {i, modes + i}) {
      id(k, k) = 1.0;
      dz(k, k) = del(a, b);
      dz2(k, k) = del(a, b) * del(a, b);
    }
  }
  GradedMap<C> qm(m, m, 1, q);
  std::map<std::string, GradedMap<C>> named{{"Id", GradedMap<C>(m, m, 0, id)},
                                             {"dz", GradedMap<C>(m, m, 0, dz)},
                                             {"dz2", GradedMap<C>(m, m, 0, dz2)},
                                             {"dzbar", qm}};
  return bundle_from_operators(m, qm, std::move(ops), std::move(names), named, session);
}

DgModuleBundle<Rational> gen_random_instance(std::uint64_t seed, const std::map<int, std::size_t>& dims,
                                             int budget, std::size_t max_algebra_dim) {
  using R = Rational;
  check_dims(dims);
  const Session session;
  std::mt19937_64 rng(seed);
  // modular reduction keeps the stream portable across standard libraries
  auto pick = [&](long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };

  const SpacePtr m = make_space(dims);
  const std::size_t n = m->size();
  if (n == 0) throw InputError("random instance needs a nonzero dimension");

  // Q0: random partial matching between consecutive degrees, each vector used once
  Matrix<R> q0(n, n);
  std::vector<bool> used(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (used[i] || pick(0, 2) == 0) continue;
    const int d = m->degree_of(i);
    std::vector<std::size_t> free;
    for (std::size_t j = m->offset(d + 1); j < m->offset(d + 1) + m->dim(d + 1); ++j)
      if (!used[j]) free.push_back(j);
    if (free.empty()) continue;
    const std::size_t j = free[static_cast<std::size_t>(pick(0, static_cast<long>(free.size()) - 1))];
    q0(j, i) = 1;
    used[i] = used[j] = true;
  }

  // P = L U per degree, unit triangular with entries in {−1, 0, 1}
  Matrix<R> lower = Matrix<R>::identity(n), upper = Matrix<R>::identity(n);
  for (int d : m->degrees()) {
    const std::size_t off = m->offset(d), nd = m->dim(d);
    for (std::size_t i = 0; i < nd; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        lower(off + i, off + j) = R(pick(-1, 1));
        upper(off + j, off + i) = R(pick(-1, 1));
      }
  }
  const Matrix<R> p = lower * upper;
  const Matrix<R> p_inv = inverse(p, session);
  auto conj = [&](const Matrix<R>& x) { return p * x * p_inv; };

  // generators: homogeneous and lower triangular in the Q0 basis
  std::vector<GradedMap<R>> frontier{GradedMap<R>::identity(m)};
  for (int g = 0; g < budget; ++g) {
    const int deg = static_cast<int>(pick(0, 2));
    Matrix<R> x(n, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = j; i < n; ++i) {
        if (m->degree_of(i) != m->degree_of(j) + deg) continue;
        if (pick(0, 2) == 0) continue;
        x(i, j) = R(pick(-2, 2));
      }
    frontier.emplace_back(m, m, deg, std::move(x));
  }

  // closure under products and [Q0, ·], working in the Q0 basis
  const GradedMap<R> q0m(m, m, 1, q0);
  std::map<int, EchelonSpan> spans;
  std::vector<GradedMap<R>> basis;
  auto try_add = [&](const GradedMap<R>& x) {
    const auto data = x.matrix().data();
    if (!spans[x.degree()].insert(std::vector<R>(data.begin(), data.end()))) return false;
    basis.push_back(x);
    if (basis.size() > max_algebra_dim) {
      throw StructuralError("random instance: algebra closure exceeds dimension bound " +
                            std::to_string(max_algebra_dim));
    }
    return true;
  };
  std::vector<GradedMap<R>> pending;
  for (const auto& x : frontier)
    if (!x.is_zero(session) && try_add(x)) pending.push_back(x);
  while (!pending.empty()) {
    const GradedMap<R> x = pending.front();
    pending.erase(pending.begin());
    std::vector<GradedMap<R>> candidates{supercommutator(q0m, x)};
    const std::size_t current = basis.size();
    for (std::size_t i = 0; i < current; ++i) {
      candidates.push_back(compose(x, basis[i]));
      candidates.push_back(compose(basis[i], x));
    }
    for (const auto& c : candidates)
      if (!c.is_zero(session) && try_add(c)) pending.push_back(c);
  }

  std::stable_sort(basis.begin(), basis.end(),
                   [](const GradedMap<R>& a, const GradedMap<R>& b) { return a.degree() < b.degree(); });
  std::vector<GradedMap<R>> ops;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    ops.emplace_back(m, m, basis[i].degree(), conj(basis[i].matrix()));
    names.push_back("a" + std::to_string(i));
  }
  const GradedMap<R> q(m, m, 1, conj(q0));
  return bundle_from_operators(m, q, std::move(ops), std::move(names), {{"Id", GradedMap<R>::identity(m)}},
                               session);
}

}  // namespace tqt
