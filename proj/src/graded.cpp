#include "tqt/graded.hpp"

#include <algorithm>
#include <set>

#include "eigen_bridge.hpp"

namespace tqt {

GradedVectorSpace::GradedVectorSpace(const std::map<int, std::size_t>& dims,
                                     const std::map<int, std::vector<std::string>>& labels) {
  std::size_t off = 0;
  for (const auto& [d, n] : dims) {
    if (n == 0) continue;
    dims_[d] = n;
    offsets_[d] = off;
    auto it = labels.find(d);
    if (it != labels.end() && it->second.size() != n) {
      throw ShapeError("graded space: label count does not match dimension", d);
    }
    for (std::size_t i = 0; i < n; ++i) {
      degree_.push_back(d);
      label_.push_back(it != labels.end() ? it->second[i]
                                          : "v" + std::to_string(d) + "_" + std::to_string(i));
    }
    off += n;
  }
}

std::size_t GradedVectorSpace::dim(int degree) const {
  auto it = dims_.find(degree);
  return it == dims_.end() ? 0 : it->second;
}

std::size_t GradedVectorSpace::offset(int degree) const {
  auto it = offsets_.lower_bound(degree);
  if (it == offsets_.end()) return size();
  return it->second;
}

std::optional<std::size_t> GradedVectorSpace::index_of(const std::string& label) const {
  auto it = std::find(label_.begin(), label_.end(), label);
  if (it == label_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - label_.begin());
}

std::vector<int> GradedVectorSpace::degrees() const {
  std::vector<int> out;
  for (const auto& [d, n] : dims_) out.push_back(d);
  return out;
}

long GradedVectorSpace::euler_characteristic() const {
  long chi = 0;
  for (const auto& [d, n] : dims_) chi += (d % 2 == 0 ? 1 : -1) * static_cast<long>(n);
  return chi;
}

TensorSpace::TensorSpace(const GradedVectorSpace& v, const GradedVectorSpace& w) {
  // group pairs by total degree, keeping (i, j) lexicographic inside a degree
  std::map<int, std::vector<std::pair<std::size_t, std::size_t>>> by_degree;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) by_degree[v.degree_of(i) + w.degree_of(j)].push_back({i, j});
  std::map<int, std::size_t> dims;
  std::map<int, std::vector<std::string>> labels;
  index.assign(v.size(), std::vector<std::size_t>(w.size(), 0));
  std::size_t pos = 0;
  for (const auto& [d, pairs] : by_degree) {
    dims[d] = pairs.size();
    for (const auto& [i, j] : pairs) {
      labels[d].push_back(v.label(i) + "(x)" + w.label(j));
      index[i][j] = pos++;
    }
  }
  space = make_space(dims, labels);
}

namespace {

template <class T>
Matrix<T> standard_columns(std::size_t n, const std::vector<std::size_t>& which) {
  Matrix<T> m(n, which.size());
  for (std::size_t j = 0; j < which.size(); ++j) m(which[j], j) = T(1);
  return m;
}

DegreeSplit<Rational> split_block(const Matrix<Rational>& b, const Session& session) {
  DegreeSplit<Rational> s;
  const auto ech = row_reduce(b, session);
  s.kernel = nullspace(b, session);
  s.kernel_complement = standard_columns<Rational>(b.cols(), ech.pivots);
  std::vector<std::vector<Rational>> img;
  for (auto p : ech.pivots) img.push_back(b.column(p));
  s.image = Matrix<Rational>::from_columns(b.rows(), img);
  s.image_complement = greedy_extend(s.image, Matrix<Rational>::identity(b.rows()), session);
  s.source_basis = hconcat(s.kernel, s.kernel_complement);
  s.target_basis = hconcat(s.image, s.image_complement);
  if (s.source_basis.cols() == 0) s.source_basis = Matrix<Rational>(b.cols(), b.cols());
  if (s.target_basis.cols() == 0) s.target_basis = Matrix<Rational>(b.rows(), b.rows());
  s.source_basis_inverse = inverse(s.source_basis, session);
  s.target_basis_inverse = inverse(s.target_basis, session);
  return s;
}

DegreeSplit<Complex> split_block(const Matrix<Complex>& b, const Session& session) {
  using detail::EMatrix;
  DegreeSplit<Complex> s;
  const auto m = static_cast<Eigen::Index>(b.rows());
  const auto n = static_cast<Eigen::Index>(b.cols());
  EMatrix u = EMatrix::Identity(m, m);
  EMatrix v = EMatrix::Identity(n, n);
  Eigen::Index r = 0;
  if (m > 0 && n > 0) {
    Eigen::JacobiSVD<EMatrix> svd(detail::to_eigen(b), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > session.tolerance * kAmbiguityBand) {
        ++r;
      } else if (sv(i) > session.tolerance) {
        throw RankAmbiguousError("rank-ambiguous: singular value " + std::to_string(sv(i)) +
                                 " lies within the tolerance band");
      }
    }
    u = svd.matrixU();
    v = svd.matrixV();
  }
  s.kernel = detail::from_eigen(v.rightCols(n - r));
  s.kernel_complement = detail::from_eigen(v.leftCols(r));
  s.image = detail::from_eigen(u.leftCols(r));
  s.image_complement = detail::from_eigen(u.rightCols(m - r));
  EMatrix vs(n, n), us(m, m);
  vs.leftCols(n - r) = v.rightCols(n - r);
  vs.rightCols(r) = v.leftCols(r);
  us = u;
  s.source_basis = detail::from_eigen(vs);
  s.target_basis = detail::from_eigen(us);
  s.source_basis_inverse = detail::from_eigen(vs.adjoint());
  s.target_basis_inverse = detail::from_eigen(us.adjoint());
  return s;
}

}  // namespace

template <class T>
KernelImageSplit<T> kernel_image_split(const GradedMap<T>& f, const Session& session) {
  std::set<int> degrees;
  for (int d : f.source().degrees()) degrees.insert(d);
  for (int d : f.target().degrees()) degrees.insert(d - f.degree());
  KernelImageSplit<T> out;
  for (int d : degrees) out.emplace(d, split_block(f.block(d), session));
  return out;
}

template KernelImageSplit<Rational> kernel_image_split(const GradedMap<Rational>&, const Session&);
template KernelImageSplit<Complex> kernel_image_split(const GradedMap<Complex>&, const Session&);

GradedMap<Complex> to_complex(const GradedMap<Rational>& f) {
  return GradedMap<Complex>(f.source_ptr(), f.target_ptr(), f.degree(), to_complex(f.matrix()));
}

}  // namespace tqt
