#pragma once

#include "tqt/hoch.hpp"

namespace tqt {

/// Σ_d (−1)^d tr(op on H^d), computed from explicit cohomology representatives.
/// Throws StructuralError if op does not commute with Q; maps of nonzero degree
/// have supertrace 0.
template <class T>
T str_cohomology(const GradedMap<T>& op, const GradedMap<T>& q, const Session& session);

/// Supertrace of an endomorphism of a graded space (0 for nonzero degree).
template <class T>
T supertrace(const GradedMap<T>& m);

/// Canonical supertrace on chains over End(V): only single-slot terms contribute,
/// with tr|_{V even} − tr|_{V odd}.
template <class T>
T str_can(const HochschildChain<T>& chain, const GradedVectorSpace& v);

/// Supertrace of π∘op∘ι on M0.
template <class T>
T theta1(const GradedMap<T>& op, const Splitting<T>& s);

/// Υ(x) = Σ_s str_can(F_k(C^s x)) summed over the terms of the chain.
template <class T>
T upsilon(const HochschildChain<T>& chain, const AInfinityMorphism<T>& f);

/// Θ_{k−1}(d_Hoch α) + Θ_k(d_int α) for Θ = Υ.
template <class T>
T trace_defect(const HochschildChain<T>& alpha, const AInfinityMorphism<T>& f);

/// Tr_{2i+1} on chains over End(V) of tensor length 2i+1:
/// (2i)! Σ_{s} (sign of C^s) κ str(A_{s(2i+1)} ⋯ A_{s(1)}) over the cyclic rotations,
/// κ = (−1)^{Σ_{l<m} |A_l||A_m| + Σ_l (l−1)|A_l|} for the rotated slots,
/// which is invariant under C and vanishes on Hochschild boundaries. Throws
/// InputError for a term of another length.
template <class T>
T cyclic_trace(const HochschildChain<T>& chain, const GradedVectorSpace& v, int level);

/// The same functional summed over all of Σ_{2i+1} with the sign of the permutation
/// times the Koszul sign. Kept for comparison: it does not vanish on boundaries.
template <class T>
T cyclic_trace_full_permutation(const HochschildChain<T>& chain, const GradedVectorSpace& v, int level);

/// cyclic_trace of the length-(2i+1) part of fhoch_push(chain).
template <class T>
T upsilon_cyclic(const HochschildChain<T>& chain, const AInfinityMorphism<T>& f, int level);

/// str_cohomology(Σ_{σ∈Σ3} κ(σ) D_σ(1) D_σ(2) D_σ(3)) with κ the Koszul sign of the
/// permutation on the operator degrees (all + for degree-0 operators).
template <class T>
T antisym_str(const GradedMap<T>& d1, const GradedMap<T>& d2, const GradedMap<T>& d3, const GradedMap<T>& q,
              const Session& session);

}  // namespace tqt
