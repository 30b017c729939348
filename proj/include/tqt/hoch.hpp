#pragma once

#include <map>
#include <utility>
#include <vector>

#include "tqt/dg.hpp"
#include "tqt/tqm.hpp"

namespace tqt {

/// Elementary tensor of algebra basis indices (k ≥ 1 slots).
using Slots = std::vector<std::size_t>;

/// Formal combination of elementary tensors. Degree of a term: Σ deg − (k − 1).
template <class T>
using HochschildChain = std::map<Slots, T>;

template <class T>
int chain_degree(const Slots& x, const FiniteAlgebra<T>& a);

/// Adds coeff · x_1 ⊗ … ⊗ x_k, expanded multilinearly in basis coordinates.
template <class T>
void add_tensor(HochschildChain<T>& chain, const std::vector<AlgElem<T>>& x, const T& coeff);

/// Drops zero (exact) / sub-tolerance (float) coefficients.
template <class T>
void prune(HochschildChain<T>& chain, const Session& session);

template <class T>
double max_coefficient(const HochschildChain<T>& chain);

/// Σ_i ± (…, d x_i, …): the internal part of the total differential.
template <class T>
HochschildChain<T> hoch_diff_internal(const HochschildChain<T>& chain, const FiniteAlgebra<T>& a);

/// Neighbour merges and the wrap-around merge: the Hochschild part.
template <class T>
HochschildChain<T> hoch_diff_bar(const HochschildChain<T>& chain, const FiniteAlgebra<T>& a);

/// Total differential (internal + Hochschild); squares to zero. On degree-0 slots
/// a⊗b ↦ ab − ba, and a single slot a ↦ d a.
template <class T>
HochschildChain<T> hoch_diff(const HochschildChain<T>& chain, const FiniteAlgebra<T>& a);

/// C(x_1…x_k) = (−1)^{(d_k+1)(d_1+…+d_{k−1}+k−1)} x_k ⊗ x_1 ⊗ … ⊗ x_{k−1}; returns the
/// sign parity and the rotated tensor.
template <class T>
std::pair<long, Slots> cyclic_shift(const Slots& x, const FiniteAlgebra<T>& a);

template <class T>
HochschildChain<T> cyclic_shift(const HochschildChain<T>& chain, const FiniteAlgebra<T>& a);

/// Normal form in the quotient by the image of 1 − C: each orbit is represented by
/// its lexicographically smallest tensor; orbits on which C acts by −1 vanish.
template <class T>
HochschildChain<T> cyclic_project(const HochschildChain<T>& chain, const FiniteAlgebra<T>& a);

/// End(V) with elementary basis E[i←j] (index i·n + j), degree deg i − deg j and
/// zero differential.
template <class T>
FiniteAlgebra<T> endomorphism_algebra(const GradedVectorSpace& v);

/// Coordinates of an endomorphism in the elementary basis of endomorphism_algebra.
template <class T>
AlgElem<T> endomorphism_element(const GradedMap<T>& m);

/// Push-forward of Hochschild chains along F: for every rotation that keeps x_1 in the
/// first block and every composition into consecutive blocks, the tensor of the
/// F-values of the blocks, with the Koszul sign of the rotation.
template <class T>
HochschildChain<T> fhoch_push(const HochschildChain<T>& chain, const AInfinityMorphism<T>& f);

template <class T>
struct ChainMapReport {
  HochschildChain<T> defect;
  double max_coefficient = 0.0;
  bool pass = true;
};

/// hoch_diff(F_Hoch x) − F_Hoch(hoch_diff x) over End(M0).
template <class T>
ChainMapReport<T> chain_map_defect(const HochschildChain<T>& chain, const AInfinityMorphism<T>& f,
                                   const Session& session);

}  // namespace tqt
