#pragma once

#include <stdexcept>
#include <string>

namespace tqt {

/// Shape or degree mismatch between graded objects; names the offending degree.
class ShapeError : public std::invalid_argument {
 public:
  ShapeError(const std::string& what, int degree)
      : std::invalid_argument(what + " (degree " + std::to_string(degree) + ")"), degree_(degree) {}
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
  int degree() const { return degree_; }

 private:
  int degree_ = 0;
};

/// Float rank decision fell inside the ambiguity band above the session tolerance.
class RankAmbiguousError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Laplacian eigenvalue is neither clearly zero nor clearly positive.
class SpectralGapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a structural precondition (e.g. Q^2 != 0, op not a chain map).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed instance/chain files, unknown labels, bad parameters.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Float decisions whose magnitude lies in (tol, kAmbiguityBand * tol] are rejected.
inline constexpr double kAmbiguityBand = 100.0;

}  // namespace tqt
