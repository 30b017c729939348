#pragma once

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "tqt/dg.hpp"
#include "tqt/quadrature.hpp"

namespace tqt {

/// (-1)^{Σ_{l<m} e_l e_m} with shifted degrees e = d − 1: the global sign of F_k.
long transfer_sign_parity(const std::vector<int>& degrees);

/// F_k(a_1, …, a_k) = ε · π ρ(a_k) h ρ(a_{k−1}) h … h ρ(a_1) ι on M0.
template <class T>
GradedMap<T> transfer_closed(const std::vector<AlgElem<T>>& inputs, const Splitting<T>& s,
                             const DgModuleBundle<T>& b);

/// The components F_k of the transferred A∞-morphism A → End(M0), with values on
/// basis tuples cached.
template <class T>
class AInfinityMorphism {
 public:
  AInfinityMorphism(DgModuleBundle<T> bundle, Splitting<T> splitting, int max_arity = 4)
      : bundle_(std::move(bundle)), splitting_(std::move(splitting)), max_arity_(max_arity) {}
  AInfinityMorphism(const AInfinityMorphism& o)
      : bundle_(o.bundle_), splitting_(o.splitting_), max_arity_(o.max_arity_) {}

  const DgModuleBundle<T>& bundle() const { return bundle_; }
  const Splitting<T>& splitting() const { return splitting_; }
  int max_arity() const { return max_arity_; }

  /// Throws InputError naming the arity when it exceeds max_arity.
  GradedMap<T> operator()(const std::vector<AlgElem<T>>& inputs) const;
  GradedMap<T> on_basis(const std::vector<std::size_t>& indices) const;

 private:
  void check_arity(std::size_t k) const;

  DgModuleBundle<T> bundle_;
  Splitting<T> splitting_;
  int max_arity_;
  mutable std::mutex mutex_;
  mutable std::map<std::vector<std::size_t>, GradedMap<T>> cache_;
};

/// Left side of the A∞-morphism relations at the given inputs; zero iff they hold.
/// Terms: F_k applied to d of each slot, F_{k−1} on merged neighbours, and the
/// compositions of F_r and F_{k−r}.
template <class T>
GradedMap<T> ainfinity_defect(const AInfinityMorphism<T>& f, const std::vector<AlgElem<T>>& inputs);

// ---------------------------------------------------------------------------
// Operator-valued forms on the configuration space (float mode).

/// Even part and dt-coefficient of exp(−dt κ − tΔ): (E(t), −E(t)κ); t = ∞ gives (Π0, 0).
std::pair<GradedMap<Complex>, GradedMap<Complex>> propagator(double t, const Splitting<Complex>& s);

/// Non-homogeneous form on the gaps t_1 … t_{k−1}: bit j−1 of a mask stands for dt_j,
/// wedge factors in increasing order.
struct OperatorForm {
  int gaps = 0;
  std::map<unsigned, GradedMap<Complex>> components;

  unsigned top_mask() const { return (1u << gaps) - 1u; }
  /// Missing components are zero maps on M0.
  GradedMap<Complex> component(unsigned mask, const SpacePtr& m0) const;
};

/// Ω = π φ_k P(t_{k−1}) φ_{k−1} … P(t_1) φ_1 ι for operators φ_i with the Koszul rule
/// (α⊗A)(β⊗B) = (−1)^{|A||β|} (α∧β)⊗AB.
OperatorForm omega_of_operators(const std::vector<GradedMap<Complex>>& ops, const std::vector<double>& gaps,
                                const Splitting<Complex>& s);

OperatorForm omega_eval(const std::vector<AlgElem<Complex>>& inputs, const std::vector<double>& gaps,
                        const Splitting<Complex>& s, const DgModuleBundle<Complex>& b);

/// (−1)^{k−1+Σ(l−1)d_l}: relates the top component to π φ_k Eκ φ_{k−1} … Eκ φ_1 ι.
long top_sign_parity(const std::vector<int>& degrees);

struct TransferQuadrature {
  GradedMap<Complex> value;
  double error = 0.0;
  long evaluations = 0;
  std::size_t cells = 0;
};

/// Integrates the top component of Ω over σ ∈ (0,1)^{k−1}, t = σ/(1−σ), and applies
/// the sign that matches transfer_closed. Throws QuadratureError on budget exhaustion.
TransferQuadrature transfer_quadrature(const std::vector<AlgElem<Complex>>& inputs, const Splitting<Complex>& s,
                                       const DgModuleBundle<Complex>& b, const QuadratureSpec& spec);

/// Restriction of Ω to the face t_i = 0 (i in 1..k−1): the components without dt_i,
/// re-indexed to the k−1 remaining gaps.
OperatorForm restrict_face(const OperatorForm& w, int gap);

/// Ω for the merged input list (ρ(a_{i+1})ρ(a_i) in slot i).
OperatorForm omega_merged(const std::vector<AlgElem<Complex>>& inputs, int gap, const std::vector<double>& gaps,
                          const Splitting<Complex>& s, const DgModuleBundle<Complex>& b);

/// Wedge-composition of Ω_{a_{i+1..k}} with Ω_{a_{1..i}} (the factorized face t_i = ∞).
OperatorForm omega_factorized(const std::vector<AlgElem<Complex>>& inputs, int gap,
                              const std::vector<double>& gaps, const Splitting<Complex>& s,
                              const DgModuleBundle<Complex>& b);

/// max over components of |A − B|.
double form_distance(const OperatorForm& a, const OperatorForm& b, const SpacePtr& m0);

/// Max-abs residual between the central-difference de Rham differential of Ω at the
/// given gaps and Ω evaluated on d_A of the inputs (Koszul-signed sum over slots).
double almost_closed_check(const std::vector<AlgElem<Complex>>& inputs, const std::vector<double>& gaps,
                           const Splitting<Complex>& s, const DgModuleBundle<Complex>& b, double step);

}  // namespace tqt
