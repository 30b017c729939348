#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tqt/graded.hpp"
#include "tqt/report.hpp"

namespace tqt {

template <class T>
using SparseVec = std::vector<std::pair<std::size_t, T>>;

/// Finite-dimensional dg algebra in a fixed homogeneous basis: structure constants,
/// differential and unit in coordinates.
template <class T>
struct FiniteAlgebra {
  std::vector<int> degree;
  std::vector<std::string> label;
  std::vector<std::vector<SparseVec<T>>> mult;  // mult[i][j] = e_i · e_j
  std::vector<SparseVec<T>> diff;               // d e_i
  std::vector<T> unit;
  std::map<std::string, std::vector<T>> named;  // extra named elements (e.g. "Id")

  std::size_t size() const { return degree.size(); }
  std::optional<std::size_t> index_of(const std::string& name) const;
};

/// Homogeneous algebra element in basis coordinates.
template <class T>
struct AlgElem {
  int degree = 0;
  std::vector<T> coords;

  bool is_zero() const {
    for (const auto& c : coords)
      if (!ScalarTraits<T>::is_zero(c)) return false;
    return true;
  }
};

template <class T>
AlgElem<T> basis_element(const FiniteAlgebra<T>& a, std::size_t i);

/// x · y (structure constants).
template <class T>
AlgElem<T> multiply(const FiniteAlgebra<T>& a, const AlgElem<T>& x, const AlgElem<T>& y);

/// d_A x.
template <class T>
AlgElem<T> differentiate(const FiniteAlgebra<T>& a, const AlgElem<T>& x);

/// Resolves a basis label or a named element; throws InputError otherwise.
template <class T>
AlgElem<T> element_by_name(const FiniteAlgebra<T>& a, const std::string& name);

/// Coordinates of matrices in the span of a fixed list of linearly independent matrices.
template <class T>
class SpanCoordinates {
 public:
  SpanCoordinates(const std::vector<Matrix<T>>& basis, const Session& session);
  /// nullopt when m is not in the span.
  std::optional<std::vector<T>> coords(const Matrix<T>& m) const;
  std::size_t size() const { return basis_.size(); }

 private:
  std::vector<Matrix<T>> basis_;
  std::vector<std::size_t> rows_;  // entries (flattened) used to read coordinates
  Matrix<T> solve_;                // inverse of the selected square submatrix
  Session session_;
};

/// Dg algebra A together with a dg module M, module differential Q and action ρ.
template <class T>
struct DgModuleBundle {
  FiniteAlgebra<T> algebra;
  SpacePtr module;
  GradedMap<T> Q;
  std::vector<GradedMap<T>> rho;  // ρ(e_i)

  /// ρ(x) = Σ x_i ρ(e_i).
  GradedMap<T> act(const AlgElem<T>& x) const;
};

/// Builds the bundle whose algebra is the span of the given homogeneous operators
/// (ρ is the inclusion, products are compositions, d = [Q, ·]). Throws
/// StructuralError if the operators are dependent or their span is not closed.
template <class T>
DgModuleBundle<T> bundle_from_operators(SpacePtr module, GradedMap<T> q, std::vector<GradedMap<T>> ops,
                                        std::vector<std::string> labels,
                                        const std::map<std::string, GradedMap<T>>& named, const Session& session);

/// Checks Q², d², Leibniz, associativity, unit, the action-chain identity
/// ρ(da) = [Q, ρ(a)] and multiplicativity ρ(ab) = ρ(a)ρ(b).
template <class T>
Report validate_dg(const DgModuleBundle<T>& bundle, const Session& session);

template <class T>
struct Cohomology {
  std::map<int, Matrix<T>> representatives;  // per degree, cocycle columns in M_d coordinates
  std::map<int, Matrix<T>> boundaries;       // per degree, basis of im Q
  std::map<int, std::size_t> dims;
  long euler = 0;
};

/// Throws StructuralError if Q² ≠ 0.
template <class T>
Cohomology<T> cohomology(const GradedMap<T>& q, const Session& session);

enum class SplitMode { projector, laplacian };

/// M = M0 ⊕ M1 with projectors, homotopy κ, inclusion ι: M0 → M and projection
/// π: M → M0 (Π0 = ι∘π), the normalized homotopy h ({Q, h} = Π1), and a spectral
/// description Δ = U diag(λ) U⁻¹ of the Laplacian (projector mode: Δ = Π1).
template <class T>
struct Splitting {
  SplitMode mode = SplitMode::projector;
  SpacePtr m0;
  GradedMap<T> pi0, pi1, kappa, h, iota, pi;
  GradedMap<T> delta;
  double lambda1 = 0.0;  // smallest positive eigenvalue of Δ (0 when M1 = 0)
  Matrix<T> eigenvectors, eigenvectors_inverse;
  std::vector<double> eigenvalues;
};

/// Exact, deterministic (pivot columns in order). A nonzero seed perturbs the
/// harmonic and kernel complements by seeded integer combinations, yielding a
/// different valid splitting of the same complex.
Splitting<Rational> build_splitting_projector(const GradedMap<Rational>& q, const Session& session,
                                              std::uint64_t seed = 0);

/// Projector-mode splitting from explicit data Π0 and κ (exact). The identities are
/// not checked here (use validate_splitting); throws StructuralError when Π0 is not
/// idempotent.
Splitting<Rational> splitting_from_projector(const GradedMap<Rational>& q, const GradedMap<Rational>& pi0,
                                             const GradedMap<Rational>& kappa, const Session& session);

/// Float Hodge splitting: Q* = G⁻¹ Q^H G, Δ = [Q, Q*], Π0 = projector onto ker Δ,
/// κ = Q*, h = Δ⁻¹|_{M1} Q*. `inner_product` is block-diagonal Hermitian positive
/// definite (identity when absent). Throws SpectralGapError on ambiguous eigenvalues.
Splitting<Complex> build_splitting_hodge(const GradedMap<Complex>& q, const Session& session,
                                         const std::optional<GradedMap<Complex>>& inner_product = std::nullopt);

/// Checks every splitting identity, including the side conditions κΠ0 = Π0κ = κ² = 0.
template <class T>
Report validate_splitting(const GradedMap<T>& q, const Splitting<T>& s, const Session& session);

/// χ of the graded space, and the cohomological variant.
inline long euler_characteristic(const GradedVectorSpace& v) { return v.euler_characteristic(); }

template <class T>
long euler_characteristic(const GradedMap<T>& q, const Session& session) {
  return cohomology(q, session).euler;
}

/// Entrywise conversion of an exact bundle/splitting to float.
DgModuleBundle<Complex> to_complex(const DgModuleBundle<Rational>& b);
Splitting<Complex> to_complex(const Splitting<Rational>& s);

}  // namespace tqt
