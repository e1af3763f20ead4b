#ifndef KLAT_MEASURE_OPERATOR_HPP
#define KLAT_MEASURE_OPERATOR_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "klat/kernel.hpp"
#include "klat/measure.hpp"
#include "klat/state_space.hpp"

namespace klat {

// Carrier cap for the brute-force positive-part oracle (2^n patterns).
inline constexpr int kDefaultOracleCap = 12;

/// Operator on measures induced by a transition kernel:
/// (T mu)(A) = sum_x k(x, A) mu({x}), with adjoint action on bounded
/// functions (T* f)(x) = <f, k(x,.)>.
class MeasureOperator {
 public:
  explicit MeasureOperator(TransitionKernel kernel);

  const TransitionKernel& kernel() const { return kernel_; }
  const SpacePtr& space() const { return kernel_.space(); }
  double norm_bound() const { return kernel_.bound(); }

  SignedMeasure apply(const SignedMeasure& mu) const;
  BoundedFunction adjoint(const BoundedFunction& f) const;

 private:
  TransitionKernel kernel_;
};

/// Positive part of T evaluated at a positive measure, computed from the
/// defining supremum: per target state, the best value of
/// sum_x g(x) k(x, {j}) mu({x}) over indicator functions g.  Exhaustive over
/// all 2^n indicators and independent of the kernel positive-part code.
SignedMeasure positive_part_oracle(const MeasureOperator& op, const SignedMeasure& mu,
                                   int carrier_cap = kDefaultOracleCap);

/// Constructive lower bound for (T+ mu_A)(Omega): builds the superlevel
/// pieces E_n = A intersect {k(.,B_n) > alpha}, disjointifies them,
/// truncates once the retained mass reaches mu(A) - eps/alpha, refines the
/// involved basis sets to disjoint pieces, and sums the retained integrals.
/// The result lies between alpha mu(A) - eps and (T+ mu_A)(Omega).
double keylemma_lower_bound(const MeasureOperator& op, const SignedMeasure& mu,
                            const StateSubset& a_set, double alpha,
                            const std::vector<BasisSet>& basis, double eps);

/// Opaque linear map on measures; models operators that are not given by a
/// kernel.  Linearity is only spot-checked on probe sets.
class BlackBoxOperator {
 public:
  using Map = std::function<SignedMeasure(const SignedMeasure&)>;
  BlackBoxOperator(SpacePtr space, Map map, std::string name = "");

  const SpacePtr& space() const { return space_; }
  const std::string& name() const { return name_; }
  SignedMeasure operator()(const SignedMeasure& mu) const;

  /// Max additivity/homogeneity defect over the probe pairs.
  double linearity_defect(
      const std::vector<std::pair<SignedMeasure, SignedMeasure>>& probes) const;

 private:
  SpacePtr space_;
  Map map_;
  std::string name_;
};

/// Rows are B(delta_x): inverts the kernel-to-operator construction for
/// weakly continuous operators.
TransitionKernel reconstruct_kernel(const BlackBoxOperator& op);

struct WeakContinuityReport {
  bool weakly_continuous = false;
  double max_deviation = 0.0;
  std::optional<int> witness_index;        // index into the test set
  std::optional<SignedMeasure> witness;    // the measure exposing the failure
};

/// Kernel round trip: B is weakly continuous on the test set iff applying
/// the reconstructed kernel reproduces B on every test measure.
WeakContinuityReport weak_continuity_check(const BlackBoxOperator& op,
                                           const std::vector<SignedMeasure>& tests,
                                           double tol = 1e-10);

struct CbInvarianceReport {
  bool invariant = false;
  std::vector<std::pair<std::string, bool>> probe_results;
  std::string failing_probe;  // empty when invariant
};

/// Does T* map continuous functions to continuous functions?  Probes a
/// fixed family (constants, inverse tails, clipped ramps) on a two-sided
/// sequence space.
CbInvarianceReport cb_invariance_check(const MeasureOperator& op,
                                       double tau = kDefaultContinuityTol);

/// Rank-one fixtures.  mass_rank_one_kernel is the kernel of 1 (x) nu,
/// mu |-> mu(Omega) nu.  rank_one_ac_operator realizes the pathological
/// phi (x) nu with phi the atomless-band mass functional: point masses map
/// to zero (a scaled Dirac is atomic no matter which state carries it)
/// while spread-out measures map to their absolutely continuous mass times
/// nu.  It is linear on the cone of multi-state measures, dominated by
/// 1 (x) nu, and not induced by any kernel.
TransitionKernel mass_rank_one_kernel(const SpacePtr& space, const SignedMeasure& nu);
BlackBoxOperator rank_one_ac_operator(const SpacePtr& space, const SignedMeasure& nu);

}  // namespace klat

#endif
