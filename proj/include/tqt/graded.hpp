#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tqt/errors.hpp"
#include "tqt/linalg.hpp"

namespace tqt {

/// Finite graded vector space. Basis vectors are ordered by degree, then by
/// position within the degree.
class GradedVectorSpace {
 public:
  GradedVectorSpace() = default;
  explicit GradedVectorSpace(const std::map<int, std::size_t>& dims,
                             const std::map<int, std::vector<std::string>>& labels = {});

  std::size_t size() const { return degree_.size(); }
  std::size_t dim(int degree) const;
  std::size_t offset(int degree) const;
  int degree_of(std::size_t index) const { return degree_.at(index); }
  const std::string& label(std::size_t index) const { return label_.at(index); }
  std::optional<std::size_t> index_of(const std::string& label) const;

  /// Degrees with nonzero dimension, increasing.
  std::vector<int> degrees() const;
  const std::map<int, std::size_t>& dims() const { return dims_; }

  /// Same dimension in every degree (labels are ignored).
  bool same_shape(const GradedVectorSpace& other) const { return dims_ == other.dims_; }

  /// Alternating sum of dimensions.
  long euler_characteristic() const;

 private:
  std::map<int, std::size_t> dims_;  // only nonzero entries
  std::map<int, std::size_t> offsets_;
  std::vector<int> degree_;
  std::vector<std::string> label_;
};

using SpacePtr = std::shared_ptr<const GradedVectorSpace>;

inline SpacePtr make_space(const std::map<int, std::size_t>& dims,
                           const std::map<int, std::vector<std::string>>& labels = {}) {
  return std::make_shared<const GradedVectorSpace>(dims, labels);
}

/// Tensor product V ⊗ W with basis ordered by total degree; pair (i, j) ↦ index.
struct TensorSpace {
  SpacePtr space;
  std::vector<std::vector<std::size_t>> index;  // index[i][j]

  TensorSpace(const GradedVectorSpace& v, const GradedVectorSpace& w);
};

/// Degree-homogeneous linear map. Stored as one dense matrix over the full bases;
/// entries outside the blocks source_d → target_{d+degree} are zero by construction.
template <class T>
class GradedMap {
 public:
  GradedMap() = default;
  GradedMap(SpacePtr source, SpacePtr target, int degree)
      : source_(std::move(source)), target_(std::move(target)), degree_(degree),
        matrix_(target_->size(), source_->size()) {}

  /// Throws ShapeError if the matrix has the wrong shape or a nonzero entry off
  /// the degree blocks.
  GradedMap(SpacePtr source, SpacePtr target, int degree, Matrix<T> matrix)
      : source_(std::move(source)), target_(std::move(target)), degree_(degree), matrix_(std::move(matrix)) {
    if (matrix_.rows() != target_->size() || matrix_.cols() != source_->size()) {
      throw ShapeError("graded map: matrix shape does not match spaces");
    }
    for (std::size_t i = 0; i < matrix_.rows(); ++i)
      for (std::size_t j = 0; j < matrix_.cols(); ++j)
        if (!ScalarTraits<T>::is_zero(matrix_(i, j)) &&
            target_->degree_of(i) != source_->degree_of(j) + degree_) {
          throw ShapeError("graded map: entry " + target_->label(i) + "<-" + source_->label(j) +
                               " is off the declared degree",
                           source_->degree_of(j));
        }
  }

  static GradedMap identity(const SpacePtr& space) {
    return GradedMap(space, space, 0, Matrix<T>::identity(space->size()));
  }

  const SpacePtr& source_ptr() const { return source_; }
  const SpacePtr& target_ptr() const { return target_; }
  const GradedVectorSpace& source() const { return *source_; }
  const GradedVectorSpace& target() const { return *target_; }
  int degree() const { return degree_; }
  const Matrix<T>& matrix() const { return matrix_; }
  const T& operator()(std::size_t i, std::size_t j) const { return matrix_(i, j); }

  /// Block from source degree d to target degree d + degree (possibly empty).
  Matrix<T> block(int source_degree) const {
    return matrix_.block(target_->offset(source_degree + degree_), source_->offset(source_degree),
                         target_->dim(source_degree + degree_), source_->dim(source_degree));
  }

  bool is_zero(const Session& session) const { return matrix_.is_zero(session); }
  double max_abs() const { return matrix_.max_abs(); }

  GradedMap& operator+=(const GradedMap& o) {
    check_compatible(o, "+");
    matrix_ += o.matrix_;
    return *this;
  }
  GradedMap& operator-=(const GradedMap& o) {
    check_compatible(o, "-");
    matrix_ -= o.matrix_;
    return *this;
  }
  GradedMap& operator*=(const T& s) {
    matrix_ *= s;
    return *this;
  }
  friend GradedMap operator+(GradedMap a, const GradedMap& b) { return a += b; }
  friend GradedMap operator-(GradedMap a, const GradedMap& b) { return a -= b; }
  friend GradedMap operator*(const T& s, GradedMap a) { return a *= s; }

  friend bool operator==(const GradedMap& a, const GradedMap& b) {
    return a.degree_ == b.degree_ && a.source_->same_shape(*b.source_) &&
           a.target_->same_shape(*b.target_) && a.matrix_ == b.matrix_;
  }

 private:
  void check_compatible(const GradedMap& o, const char* op) const {
    if (!source_->same_shape(*o.source_) || !target_->same_shape(*o.target_)) {
      throw ShapeError(std::string("graded map ") + op + ": spaces differ");
    }
    if (degree_ != o.degree_) {
      throw ShapeError(std::string("graded map ") + op + ": degrees " + std::to_string(degree_) + " and " +
                           std::to_string(o.degree_) + " differ",
                       o.degree_);
    }
  }

  SpacePtr source_;
  SpacePtr target_;
  int degree_ = 0;
  Matrix<T> matrix_;
};

/// f ∘ g, degree deg f + deg g.
template <class T>
GradedMap<T> compose(const GradedMap<T>& f, const GradedMap<T>& g) {
  if (!g.target().same_shape(f.source())) {
    // name the first degree where the shapes disagree
    int bad = 0;
    for (const auto& [d, n] : g.target().dims())
      if (f.source().dim(d) != n) {
        bad = d;
        break;
      }
    for (const auto& [d, n] : f.source().dims())
      if (g.target().dim(d) != n) {
        bad = d;
        break;
      }
    throw ShapeError("compose: target of g does not match source of f", bad);
  }
  return GradedMap<T>(g.source_ptr(), f.target_ptr(), f.degree() + g.degree(), f.matrix() * g.matrix());
}

/// Koszul tensor product: (f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y).
template <class T>
GradedMap<T> tensor(const GradedMap<T>& f, const GradedMap<T>& g) {
  TensorSpace src(f.source(), g.source());
  TensorSpace tgt(f.target(), g.target());
  Matrix<T> m(tgt.space->size(), src.space->size());
  for (std::size_t i = 0; i < f.source().size(); ++i) {
    const T sign = parity_sign<T>(static_cast<long>(g.degree()) * f.source().degree_of(i));
    for (std::size_t j = 0; j < g.source().size(); ++j)
      for (std::size_t p = 0; p < f.target().size(); ++p) {
        if (ScalarTraits<T>::is_zero(f(p, i))) continue;
        for (std::size_t q = 0; q < g.target().size(); ++q) {
          if (ScalarTraits<T>::is_zero(g(q, j))) continue;
          m(tgt.index[p][q], src.index[i][j]) = sign * f(p, i) * g(q, j);
        }
      }
  }
  return GradedMap<T>(src.space, tgt.space, f.degree() + g.degree(), std::move(m));
}

/// Graded commutator f∘g − (−1)^{|f||g|} g∘f of two endomorphisms.
template <class T>
GradedMap<T> supercommutator(const GradedMap<T>& f, const GradedMap<T>& g) {
  if (!f.source().same_shape(f.target()) || !g.source().same_shape(g.target()) ||
      !f.source().same_shape(g.source())) {
    throw ShapeError("supercommutator: arguments must be endomorphisms of one space");
  }
  auto fg = compose(f, g);
  fg -= parity_sign<T>(static_cast<long>(f.degree()) * g.degree()) * compose(g, f);
  return fg;
}

/// Per source degree: kernel, a complement of the kernel on which f is injective,
/// the image, a complement of the image, and the change-of-basis matrices
/// [kernel | complement] and [image | complement] together with their inverses.
/// Vectors are columns in the coordinates of the degree block.
template <class T>
struct DegreeSplit {
  Matrix<T> kernel;
  Matrix<T> kernel_complement;
  Matrix<T> image;
  Matrix<T> image_complement;
  Matrix<T> source_basis;  // [kernel | kernel_complement]
  Matrix<T> source_basis_inverse;
  Matrix<T> target_basis;  // [image | image_complement]
  Matrix<T> target_basis_inverse;
};

template <class T>
using KernelImageSplit = std::map<int, DegreeSplit<T>>;

/// Exact mode: pivot columns in order (deterministic). Float mode: singular value
/// decomposition with the session tolerance; throws RankAmbiguousError if a
/// singular value sits in (tol, kAmbiguityBand·tol].
template <class T>
KernelImageSplit<T> kernel_image_split(const GradedMap<T>& f, const Session& session);

extern template KernelImageSplit<Rational> kernel_image_split(const GradedMap<Rational>&, const Session&);
extern template KernelImageSplit<Complex> kernel_image_split(const GradedMap<Complex>&, const Session&);

/// Entrywise conversion of an exact map to float.
GradedMap<Complex> to_complex(const GradedMap<Rational>& f);

}  // namespace tqt
