#include "tqt/dg.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "eigen_bridge.hpp"

namespace tqt {

namespace {

template <class T>
bool negligible(const Matrix<T>& m, const Session& session) {
  return m.is_zero(session);
}

template <class T>
bool negligible(const std::vector<T>& v, const Session& session) {
  for (const auto& x : v)
    if (!near_zero(x, session)) return false;
  return true;
}

template <class T>
double max_abs(const std::vector<T>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, magnitude(x));
  return m;
}

template <class T>
void axpy(std::vector<T>& y, const T& a, const SparseVec<T>& x) {
  for (const auto& [i, c] : x) y[i] += a * c;
}

template <class T>
std::vector<T> operator_minus(std::vector<T> a, const std::vector<T>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

template <class T>
SparseVec<T> to_sparse(const std::vector<T>& v, const Session& session) {
  SparseVec<T> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!near_zero(v[i], session)) out.push_back({i, v[i]});
  return out;
}

/// Records a check; `residual_of` is evaluated per witness until the first failure.
struct CheckBuilder {
  CheckResult result;
  explicit CheckBuilder(std::string name) { result.name = std::move(name); }
  void observe(bool ok, double residual, const std::string& witness) {
    result.residual = std::max(result.residual, residual);
    if (!ok && result.pass) {
      result.pass = false;
      result.witness = witness;
    }
  }
};

template <class T>
void observe(CheckBuilder& c, const Matrix<T>& m, const Session& session, const std::string& witness) {
  c.observe(negligible(m, session), m.max_abs(), witness);
}

template <class T>
void observe(CheckBuilder& c, const std::vector<T>& v, const Session& session, const std::string& witness) {
  c.observe(negligible(v, session), max_abs(v), witness);
}

}  // namespace

template <class T>
std::optional<std::size_t> FiniteAlgebra<T>::index_of(const std::string& name) const {
  auto it = std::find(label.begin(), label.end(), name);
  if (it == label.end()) return std::nullopt;
  return static_cast<std::size_t>(it - label.begin());
}

template <class T>
AlgElem<T> basis_element(const FiniteAlgebra<T>& a, std::size_t i) {
  AlgElem<T> e{a.degree.at(i), std::vector<T>(a.size(), T(0))};
  e.coords[i] = T(1);
  return e;
}

template <class T>
AlgElem<T> multiply(const FiniteAlgebra<T>& a, const AlgElem<T>& x, const AlgElem<T>& y) {
  AlgElem<T> out{x.degree + y.degree, std::vector<T>(a.size(), T(0))};
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (ScalarTraits<T>::is_zero(x.coords[i])) continue;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (ScalarTraits<T>::is_zero(y.coords[j])) continue;
      axpy(out.coords, T(x.coords[i] * y.coords[j]), a.mult[i][j]);
    }
  }
  return out;
}

template <class T>
AlgElem<T> differentiate(const FiniteAlgebra<T>& a, const AlgElem<T>& x) {
  AlgElem<T> out{x.degree + 1, std::vector<T>(a.size(), T(0))};
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!ScalarTraits<T>::is_zero(x.coords[i])) axpy(out.coords, x.coords[i], a.diff[i]);
  return out;
}

template <class T>
AlgElem<T> element_by_name(const FiniteAlgebra<T>& a, const std::string& name) {
  if (auto i = a.index_of(name)) return basis_element(a, *i);
  auto it = a.named.find(name);
  if (it == a.named.end()) throw InputError("unknown algebra element '" + name + "'");
  // named elements are homogeneous; read the degree off any nonzero coordinate
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!ScalarTraits<T>::is_zero(it->second[i])) return {a.degree[i], it->second};
  return {0, it->second};
}

template <class T>
SpanCoordinates<T>::SpanCoordinates(const std::vector<Matrix<T>>& basis, const Session& session)
    : basis_(basis), session_(session) {
  if (basis_.empty()) return;
  const std::size_t n = basis_[0].data().size();
  Matrix<T> vt(basis_.size(), n);  // one row per basis matrix
  for (std::size_t i = 0; i < basis_.size(); ++i)
    for (std::size_t e = 0; e < n; ++e) vt(i, e) = basis_[i].data()[e];
  const auto ech = row_reduce(vt, session);
  if (ech.pivots.size() != basis_.size()) throw StructuralError("operators are linearly dependent");
  rows_ = ech.pivots;
  Matrix<T> sub(basis_.size(), basis_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (std::size_t i = 0; i < basis_.size(); ++i) sub(r, i) = vt(i, rows_[r]);
  solve_ = inverse(sub, session);
}

template <class T>
std::optional<std::vector<T>> SpanCoordinates<T>::coords(const Matrix<T>& m) const {
  std::vector<T> rhs(rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) rhs[r] = m.data()[rows_[r]];
  std::vector<T> c = rows_.empty() ? std::vector<T>{} : solve_.apply(rhs);
  Matrix<T> recon(m.rows(), m.cols());
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!ScalarTraits<T>::is_zero(c[i])) recon += c[i] * basis_[i];
  recon -= m;
  if constexpr (is_exact_v<T>) {
    if (!recon.is_zero(session_)) return std::nullopt;
  } else {
    if (recon.max_abs() > session_.tolerance * kAmbiguityBand * std::max(1.0, m.max_abs())) return std::nullopt;
    for (auto& x : c)
      if (near_zero(x, session_)) x = T(0);
  }
  return c;
}

template <class T>
GradedMap<T> DgModuleBundle<T>::act(const AlgElem<T>& x) const {
  Matrix<T> m(module->size(), module->size());
  for (std::size_t i = 0; i < x.coords.size(); ++i)
    if (!ScalarTraits<T>::is_zero(x.coords[i])) m += x.coords[i] * rho[i].matrix();
  return GradedMap<T>(module, module, x.degree, std::move(m));
}

template <class T>
DgModuleBundle<T> bundle_from_operators(SpacePtr module, GradedMap<T> q, std::vector<GradedMap<T>> ops,
                                        std::vector<std::string> labels,
                                        const std::map<std::string, GradedMap<T>>& named, const Session& session) {
  if (labels.size() != ops.size()) throw InputError("operator label count does not match operator count");
  std::vector<Matrix<T>> mats;
  for (const auto& o : ops) mats.push_back(o.matrix());
  SpanCoordinates<T> span(mats, session);
  auto coords_of = [&](const GradedMap<T>& m, const std::string& what) {
    auto c = span.coords(m.matrix());
    if (!c) throw StructuralError("operator algebra is not closed: " + what + " is outside the span");
    return *c;
  };

  DgModuleBundle<T> b;
  b.module = module;
  b.Q = std::move(q);
  FiniteAlgebra<T>& a = b.algebra;
  const std::size_t n = ops.size();
  a.label = std::move(labels);
  for (const auto& o : ops) a.degree.push_back(o.degree());
  a.mult.assign(n, std::vector<SparseVec<T>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a.mult[i][j] = to_sparse(coords_of(compose(ops[i], ops[j]), a.label[i] + "*" + a.label[j]), session);
  for (std::size_t i = 0; i < n; ++i)
    a.diff.push_back(to_sparse(coords_of(supercommutator(b.Q, ops[i]), "[Q," + a.label[i] + "]"), session));
  a.unit = coords_of(GradedMap<T>::identity(module), "the identity");
  for (const auto& [name, op] : named) a.named[name] = coords_of(op, name);
  b.rho = std::move(ops);
  return b;
}

template <class T>
Report validate_dg(const DgModuleBundle<T>& bundle, const Session& session) {
  const auto& a = bundle.algebra;
  const std::size_t n = a.size();
  Report report;

  {
    CheckBuilder c("Q-squared");
    const auto q2 = compose(bundle.Q, bundle.Q);
    for (std::size_t j = 0; j < bundle.module->size(); ++j)
      observe(c, Matrix<T>::from_columns(q2.matrix().rows(), {q2.matrix().column(j)}), session,
              bundle.module->label(j));
    report.push_back(c.result);
  }
  {
    CheckBuilder c("d-squared");
    for (std::size_t i = 0; i < n; ++i)
      observe(c, differentiate(a, differentiate(a, basis_element(a, i))).coords, session, a.label[i]);
    report.push_back(c.result);
  }
  {
    CheckBuilder lb("Leibniz"), as("associativity");
    for (std::size_t i = 0; i < n; ++i) {
      const auto ei = basis_element(a, i);
      for (std::size_t j = 0; j < n; ++j) {
        const auto ej = basis_element(a, j);
        const auto eij = multiply(a, ei, ej);
        auto lhs = differentiate(a, eij).coords;
        auto r1 = multiply(a, differentiate(a, ei), ej).coords;
        auto r2 = multiply(a, ei, differentiate(a, ej)).coords;
        const T s = parity_sign<T>(a.degree[i]);
        for (std::size_t p = 0; p < n; ++p) lhs[p] -= r1[p] + s * r2[p];
        observe(lb, lhs, session, a.label[i] + "," + a.label[j]);
        for (std::size_t k = 0; k < n; ++k) {
          const auto ek = basis_element(a, k);
          observe(as, operator_minus(multiply(a, eij, ek).coords, multiply(a, ei, multiply(a, ej, ek)).coords),
                  session, a.label[i] + "," + a.label[j] + "," + a.label[k]);
        }
      }
    }
    report.push_back(lb.result);
    report.push_back(as.result);
  }
  {
    CheckBuilder c("unit");
    const AlgElem<T> u{0, a.unit};
    for (std::size_t i = 0; i < n; ++i) {
      const auto ei = basis_element(a, i);
      observe(c, operator_minus(multiply(a, u, ei).coords, ei.coords), session, a.label[i]);
      observe(c, operator_minus(multiply(a, ei, u).coords, ei.coords), session, a.label[i]);
    }
    observe(c, (bundle.act(u) - GradedMap<T>::identity(bundle.module)).matrix(), session, "rho(unit)");
    report.push_back(c.result);
  }
  {
    CheckBuilder ch("action-chain"), mu("action-multiplicative");
    for (std::size_t i = 0; i < n; ++i) {
      const auto ei = basis_element(a, i);
      observe(ch, (bundle.act(differentiate(a, ei)) - supercommutator(bundle.Q, bundle.rho[i])).matrix(), session,
              a.label[i]);
      for (std::size_t j = 0; j < n; ++j) {
        const auto prod = multiply(a, ei, basis_element(a, j));
        observe(mu, bundle.act(prod).matrix() - (bundle.rho[i].matrix() * bundle.rho[j].matrix()), session,
                a.label[i] + "," + a.label[j]);
      }
    }
    report.push_back(ch.result);
    report.push_back(mu.result);
  }
  return report;
}

template <class T>
Cohomology<T> cohomology(const GradedMap<T>& q, const Session& session) {
  if (!compose(q, q).is_zero(session)) throw StructuralError("cohomology: Q-squared is nonzero");
  const auto split = kernel_image_split(q, session);
  Cohomology<T> h;
  for (int d : q.source().degrees()) {
    const std::size_t n = q.source().dim(d);
    const Matrix<T> z = split.at(d).kernel;
    auto prev = split.find(d - 1);
    Matrix<T> b = prev != split.end() ? prev->second.image : Matrix<T>(n, 0);
    if (b.cols() == 0) b = Matrix<T>(n, 0);
    auto reps = greedy_extend(b, z.cols() == 0 ? Matrix<T>(n, 0) : z, session);
    if (reps.cols() == 0) reps = Matrix<T>(n, 0);
    h.dims[d] = reps.cols();
    h.euler += (d % 2 == 0 ? 1 : -1) * static_cast<long>(reps.cols());
    h.representatives[d] = std::move(reps);
    h.boundaries[d] = std::move(b);
  }
  return h;
}

namespace {

/// Assembles M0, ι, π, Π0, Π1 from a change of basis U (columns) and the mask of
/// columns spanning M0.
template <class T>
void assemble_m0(Splitting<T>& s, const SpacePtr& m, const Matrix<T>& u, const Matrix<T>& u_inv,
                 const std::vector<bool>& harmonic) {
  std::map<int, std::size_t> dims;
  std::map<int, std::vector<std::string>> labels;
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < u.cols(); ++c) {
    if (!harmonic[c]) continue;
    const int d = m->degree_of(c);
    labels[d].push_back("h" + std::to_string(d) + "_" + std::to_string(dims[d]));
    ++dims[d];
    cols.push_back(c);
  }
  s.m0 = make_space(dims, labels);
  Matrix<T> iota(m->size(), cols.size()), pi(cols.size(), m->size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < m->size(); ++i) {
      iota(i, j) = u(i, cols[j]);
      pi(j, i) = u_inv(cols[j], i);
    }
  s.iota = GradedMap<T>(s.m0, m, 0, std::move(iota));
  s.pi = GradedMap<T>(m, s.m0, 0, std::move(pi));
  s.pi0 = compose(s.iota, s.pi);
  s.pi1 = GradedMap<T>::identity(m) - s.pi0;
  s.eigenvectors = u;
  s.eigenvectors_inverse = u_inv;
}

}  // namespace

Splitting<Rational> build_splitting_projector(const GradedMap<Rational>& q, const Session& session,
                                              std::uint64_t seed) {
  using R = Rational;
  if (!compose(q, q).is_zero(session)) throw StructuralError("splitting: Q-squared is nonzero");
  const SpacePtr& m = q.source_ptr();
  const auto split = kernel_image_split(q, session);
  std::mt19937_64 rng(seed);
  auto small = [&]() { return R(static_cast<long>(rng() % 5) - 2); };

  // complements of the cycles, optionally shifted by cycles
  std::map<int, Matrix<R>> c_of, z_of;
  for (int d : m->degrees()) {
    z_of[d] = split.at(d).kernel;
    Matrix<R> c = split.at(d).kernel_complement;
    if (seed != 0 && z_of[d].cols() > 0) {
      Matrix<R> r(z_of[d].cols(), c.cols());
      for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) = small();
      if (c.cols() > 0) c += z_of[d] * r;
    }
    c_of[d] = std::move(c);
  }

  const std::size_t n = m->size();
  Matrix<R> u(n, n), k_new(n, n);
  std::vector<bool> harmonic(n, false);
  std::vector<double> lambda(n, 1.0);
  for (int d : m->degrees()) {
    const std::size_t nd = m->dim(d), off = m->offset(d);
    Matrix<R> bb(nd, 0);
    if (m->dim(d - 1) > 0 && c_of[d - 1].cols() > 0) bb = q.block(d - 1) * c_of[d - 1];
    Matrix<R> hh = greedy_extend(bb, z_of[d].cols() == 0 ? Matrix<R>(nd, 0) : z_of[d], session);
    if (hh.cols() == 0) hh = Matrix<R>(nd, 0);
    if (seed != 0 && bb.cols() > 0 && hh.cols() > 0) {
      Matrix<R> r(bb.cols(), hh.cols());
      for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) = small();
      hh += bb * r;
    }
    const Matrix<R>& cc = c_of[d];
    if (bb.cols() + hh.cols() + cc.cols() != nd) throw StructuralError("splitting: dimension count mismatch");
    u.set_block(off, off, bb);
    u.set_block(off, off + bb.cols(), hh);
    u.set_block(off, off + bb.cols() + hh.cols(), cc);
    for (std::size_t j = 0; j < hh.cols(); ++j) {
      harmonic[off + bb.cols() + j] = true;
      lambda[off + bb.cols() + j] = 0.0;
    }
    // κ sends the j-th boundary vector Q c_j (degree d) to c_j (degree d-1)
    if (bb.cols() > 0) {
      const std::size_t prev_off = m->offset(d - 1);
      const std::size_t prev_c = prev_off + m->dim(d - 1) - c_of[d - 1].cols();
      for (std::size_t j = 0; j < bb.cols(); ++j) k_new(prev_c + j, off + j) = R(1);
    }
  }
  const Matrix<R> u_inv = inverse(u, session);

  Splitting<R> s;
  s.mode = SplitMode::projector;
  assemble_m0(s, m, u, u_inv, harmonic);
  s.kappa = GradedMap<R>(m, m, -1, u * k_new * u_inv);
  s.h = s.kappa;
  s.delta = s.pi1;
  s.eigenvalues = lambda;
  s.lambda1 = std::count(harmonic.begin(), harmonic.end(), false) > 0 ? 1.0 : 0.0;
  return s;
}

Splitting<Rational> splitting_from_projector(const GradedMap<Rational>& q, const GradedMap<Rational>& pi0,
                                             const GradedMap<Rational>& kappa, const Session& session) {
  using R = Rational;
  const SpacePtr& m = q.source_ptr();
  if (!pi0.source().same_shape(*m) || pi0.degree() != 0) throw ShapeError("splitting: pi0 must be a degree-0 endomorphism");
  if (!kappa.source().same_shape(*m) || kappa.degree() != -1) {
    throw ShapeError("splitting: kappa must be a degree -1 endomorphism");
  }
  const GradedMap<R> p0(m, m, 0, pi0.matrix()), k(m, m, -1, kappa.matrix());
  if (!(compose(p0, p0) == p0)) throw StructuralError("splitting: pi0 is not idempotent");
  const GradedMap<R> p1 = GradedMap<R>::identity(m) - p0;
  const std::size_t n = m->size();
  Matrix<R> u(n, n);
  std::vector<bool> harmonic(n, false);
  auto pivot_columns = [&](const Matrix<R>& x) {
    const auto piv = row_reduce(x, session).pivots;
    Matrix<R> out(x.rows(), piv.size());
    for (std::size_t j = 0; j < piv.size(); ++j)
      for (std::size_t i = 0; i < x.rows(); ++i) out(i, j) = x(i, piv[j]);
    return out;
  };
  for (int d : m->degrees()) {
    const std::size_t off = m->offset(d);
    const Matrix<R> a = pivot_columns(p0.block(d)), b = pivot_columns(p1.block(d));
    u.set_block(off, off, a);
    u.set_block(off, off + a.cols(), b);
    for (std::size_t j = 0; j < a.cols(); ++j) harmonic[off + j] = true;
  }
  Splitting<R> s;
  s.mode = SplitMode::projector;
  assemble_m0(s, m, u, inverse(u, session), harmonic);
  s.kappa = k;
  s.h = k;
  s.delta = s.pi1;
  s.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.eigenvalues[i] = harmonic[i] ? 0.0 : 1.0;
  s.lambda1 = std::count(harmonic.begin(), harmonic.end(), false) > 0 ? 1.0 : 0.0;
  return s;
}

Splitting<Complex> build_splitting_hodge(const GradedMap<Complex>& q, const Session& session,
                                         const std::optional<GradedMap<Complex>>& inner_product) {
  using C = Complex;
  using detail::EMatrix;
  if (!compose(q, q).is_zero(session)) throw StructuralError("splitting: Q-squared is nonzero");
  const SpacePtr& m = q.source_ptr();
  const std::size_t n = m->size();
  if (inner_product && (!inner_product->source().same_shape(*m) || inner_product->degree() != 0)) {
    throw ShapeError("inner product must be a degree-0 form on the module");
  }

  // per-degree Cholesky factors L_d (G_d = L_d L_d^H) and G⁻¹
  std::map<int, EMatrix> chol, chol_inv;
  Matrix<C> g_inv(n, n), g(n, n);
  for (int d : m->degrees()) {
    const auto nd = static_cast<Eigen::Index>(m->dim(d));
    EMatrix gd = inner_product ? detail::to_eigen(inner_product->block(d)) : EMatrix::Identity(nd, nd);
    if ((gd - gd.adjoint()).norm() > session.tolerance * std::max(1.0, gd.norm())) {
      throw InputError("inner product is not Hermitian in degree " + std::to_string(d));
    }
    Eigen::LLT<EMatrix> llt(gd);
    if (llt.info() != Eigen::Success) {
      throw InputError("inner product is not positive definite in degree " + std::to_string(d));
    }
    chol[d] = llt.matrixL();
    chol_inv[d] = chol[d].inverse();
    g.set_block(m->offset(d), m->offset(d), detail::from_eigen(gd));
    g_inv.set_block(m->offset(d), m->offset(d), detail::from_eigen(gd.inverse()));
  }
  const GradedMap<C> q_adj(m, m, -1, g_inv * q.matrix().adjoint() * g);
  const GradedMap<C> delta = compose(q, q_adj) + compose(q_adj, q);

  Matrix<C> u(n, n), u_inv(n, n);
  std::vector<double> lambda(n, 0.0);
  double scale = 1.0;
  std::map<int, Eigen::VectorXd> evals;
  std::map<int, EMatrix> evecs;
  for (int d : m->degrees()) {
    const EMatrix dd = detail::to_eigen(delta.block(d));
    EMatrix tilde = chol[d].adjoint() * dd * chol_inv[d].adjoint();
    tilde = (0.5 * (tilde + tilde.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<EMatrix> es(tilde);
    evals[d] = es.eigenvalues();
    evecs[d] = es.eigenvectors();
    if (evals[d].size() > 0) scale = std::max(scale, evals[d].maxCoeff());
  }
  std::vector<bool> harmonic(n, false);
  double lambda1 = std::numeric_limits<double>::infinity();
  for (int d : m->degrees()) {
    const std::size_t off = m->offset(d);
    for (Eigen::Index i = 0; i < evals[d].size(); ++i) {
      const double l = evals[d](i);
      const std::size_t pos = off + static_cast<std::size_t>(i);
      if (l <= session.tolerance * scale) {
        harmonic[pos] = true;
      } else if (l <= session.tolerance * kAmbiguityBand * scale) {
        throw SpectralGapError("spectral-gap ambiguous: Laplacian eigenvalue " + std::to_string(l) +
                               " in degree " + std::to_string(d) + " is within the tolerance band of zero");
      } else {
        lambda[pos] = l;
        lambda1 = std::min(lambda1, l);
      }
    }
    u.set_block(off, off, detail::from_eigen(chol_inv[d].adjoint() * evecs[d]));
    u_inv.set_block(off, off, detail::from_eigen(evecs[d].adjoint() * chol[d].adjoint()));
  }

  Splitting<C> s;
  s.mode = SplitMode::laplacian;
  assemble_m0(s, m, u, u_inv, harmonic);
  s.kappa = q_adj;
  s.delta = delta;
  s.eigenvalues = lambda;
  s.lambda1 = std::isinf(lambda1) ? 0.0 : lambda1;
  Matrix<C> green_diag(n, n);
  for (std::size_t i = 0; i < n; ++i)
    if (!harmonic[i]) green_diag(i, i) = C(1.0 / lambda[i]);
  const GradedMap<C> green(m, m, 0, u * green_diag * u_inv);
  s.h = compose(green, q_adj);
  return s;
}

template <class T>
Report validate_splitting(const GradedMap<T>& q, const Splitting<T>& s, const Session& session) {
  Report report;
  const auto id = GradedMap<T>::identity(q.source_ptr());
  auto add = [&](const std::string& name, const GradedMap<T>& defect) {
    CheckBuilder c(name);
    observe(c, defect.matrix(), session, name);
    report.push_back(c.result);
  };
  add("projector-sum", s.pi0 + s.pi1 - id);
  add("pi0-idempotent", compose(s.pi0, s.pi0) - s.pi0);
  add("pi1-idempotent", compose(s.pi1, s.pi1) - s.pi1);
  add("pi0-pi1-orthogonal", compose(s.pi0, s.pi1));
  add("Q-pi0", compose(q, s.pi0));
  add("pi0-Q", compose(s.pi0, q));
  add("pi1-commutes-Q", supercommutator(q, s.pi1));
  add("iota-pi", compose(s.pi, s.iota) - GradedMap<T>::identity(s.m0));
  {
    CheckBuilder c("pi0-rank");
    const auto h = cohomology(q, session);
    for (int d : q.source().degrees()) {
      const std::size_t r = rank(s.pi0.block(d), session);
      c.observe(r == h.dims.at(d), std::abs(static_cast<double>(r) - static_cast<double>(h.dims.at(d))),
                "degree " + std::to_string(d));
    }
    report.push_back(c.result);
  }
  if (s.mode == SplitMode::projector) {
    add("homotopy", supercommutator(q, s.kappa) - s.pi1);
  } else {
    add("homotopy-laplacian", supercommutator(q, s.kappa) - s.delta);
    add("delta-M0", compose(s.delta, s.pi0));
    add("delta-M1", compose(s.pi0, s.delta));
    CheckBuilder c("delta-decay");
    const bool m1_empty = s.pi1.is_zero(session);
    c.observe(m1_empty || s.lambda1 > 0.0, 0.0, "lambda1");
    report.push_back(c.result);
  }
  add("kappa-pi0", compose(s.kappa, s.pi0));
  add("pi0-kappa", compose(s.pi0, s.kappa));
  add("kappa-squared", compose(s.kappa, s.kappa));
  add("h-homotopy", supercommutator(q, s.h) - s.pi1);
  add("h-pi0", compose(s.h, s.pi0));
  add("pi0-h", compose(s.pi0, s.h));
  add("h-squared", compose(s.h, s.h));
  return report;
}

DgModuleBundle<Complex> to_complex(const DgModuleBundle<Rational>& b) {
  DgModuleBundle<Complex> out;
  const auto& a = b.algebra;
  auto& o = out.algebra;
  o.degree = a.degree;
  o.label = a.label;
  o.mult.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (const auto& row : a.mult[i]) {
      SparseVec<Complex> v;
      for (const auto& [k, c] : row) v.push_back({k, to_complex(c)});
      o.mult[i].push_back(std::move(v));
    }
  for (const auto& row : a.diff) {
    SparseVec<Complex> v;
    for (const auto& [k, c] : row) v.push_back({k, to_complex(c)});
    o.diff.push_back(std::move(v));
  }
  for (const auto& c : a.unit) o.unit.push_back(to_complex(c));
  for (const auto& [name, coords] : a.named) {
    std::vector<Complex> v;
    for (const auto& c : coords) v.push_back(to_complex(c));
    o.named[name] = std::move(v);
  }
  out.module = b.module;
  out.Q = to_complex(b.Q);
  for (const auto& r : b.rho) out.rho.push_back(to_complex(r));
  return out;
}

Splitting<Complex> to_complex(const Splitting<Rational>& s) {
  Splitting<Complex> o;
  o.mode = s.mode;
  o.m0 = s.m0;
  o.pi0 = to_complex(s.pi0);
  o.pi1 = to_complex(s.pi1);
  o.kappa = to_complex(s.kappa);
  o.h = to_complex(s.h);
  o.iota = to_complex(s.iota);
  o.pi = to_complex(s.pi);
  o.delta = to_complex(s.delta);
  o.lambda1 = s.lambda1;
  o.eigenvectors = to_complex(s.eigenvectors);
  o.eigenvectors_inverse = to_complex(s.eigenvectors_inverse);
  o.eigenvalues = s.eigenvalues;
  return o;
}

#define TQT_INSTANTIATE(T)                                                                                   \
  template struct FiniteAlgebra<T>;                                                                          \
  template class SpanCoordinates<T>;                                                                         \
  template struct DgModuleBundle<T>;                                                                         \
  template AlgElem<T> basis_element(const FiniteAlgebra<T>&, std::size_t);                                   \
  template AlgElem<T> multiply(const FiniteAlgebra<T>&, const AlgElem<T>&, const AlgElem<T>&);               \
  template AlgElem<T> differentiate(const FiniteAlgebra<T>&, const AlgElem<T>&);                             \
  template AlgElem<T> element_by_name(const FiniteAlgebra<T>&, const std::string&);                          \
  template DgModuleBundle<T> bundle_from_operators(SpacePtr, GradedMap<T>, std::vector<GradedMap<T>>,        \
                                                   std::vector<std::string>,                                 \
                                                   const std::map<std::string, GradedMap<T>>&, const Session&); \
  template Report validate_dg(const DgModuleBundle<T>&, const Session&);                                     \
  template Cohomology<T> cohomology(const GradedMap<T>&, const Session&);                                    \
  template Report validate_splitting(const GradedMap<T>&, const Splitting<T>&, const Session&);

TQT_INSTANTIATE(Rational)
TQT_INSTANTIATE(Complex)

}  // namespace tqt
