#pragma once

#include <complex>
#include <cstdint>
#include <map>

#include "tqt/dg.hpp"

namespace tqt {

/// Largest module dimension the generators accept.
inline constexpr std::size_t kMaxInstanceDimension = 64;

/// A = End(M) with d = [Q, ·] acting tautologically. Basis labels "x<-y" for the
/// elementary map sending basis vector y to x; named element "Id". Q is zero when
/// absent.
DgModuleBundle<Rational> gen_matrix_instance(const std::map<int, std::size_t>& dims,
                                             const std::map<int, std::vector<std::string>>& labels = {},
                                             const std::optional<GradedMap<Rational>>& q = std::nullopt);

/// M⁰ = {e1, e2}, M¹ = {f}, Q e1 = f.
DgModuleBundle<Rational> t1_instance();

/// Fourier truncation |m|, |n| ≤ N of the Dolbeault complex of the torus with modulus
/// τ (Im τ > 0): Q = ∂̄ acting diagonally on modes, algebra spanned by the mode
/// projectors P[m,n] and dzbar·P[m,n] (named elements Id, dz, dz2, dzbar).
DgModuleBundle<Complex> gen_torus_dolbeault(int n_trunc, std::complex<double> tau = {0.0, 1.0},
                                            const Session& session = {});

/// Seeded exact instance: Q = P Q0 P⁻¹ for a random matching Q0 between consecutive
/// degrees and a random unimodular P; A is the dg subalgebra generated by Id and
/// `budget` random homogeneous maps that are lower triangular in the Q0 basis.
/// Throws StructuralError if the closure exceeds `max_algebra_dim`.
DgModuleBundle<Rational> gen_random_instance(std::uint64_t seed, const std::map<int, std::size_t>& dims,
                                             int budget = 2, std::size_t max_algebra_dim = 64);

}  // namespace tqt
