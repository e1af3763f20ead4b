#ifndef KLAT_KERNEL_HPP
#define KLAT_KERNEL_HPP

#include <cstdint>
#include <vector>

#include "klat/measure.hpp"
#include "klat/state_space.hpp"

namespace klat {

/// Transition kernel on a finite carrier: one signed measure per source
/// state, stored as a dense row-major matrix.  The bound sup_x |k|(x,Omega)
/// is computed once at construction.
class TransitionKernel {
 public:
  TransitionKernel(SpacePtr space, std::vector<double> row_major);
  static TransitionKernel zero(const SpacePtr& space);
  static TransitionKernel identity(const SpacePtr& space);
  static TransitionKernel from_rows(const SpacePtr& space,
                                    const std::vector<std::vector<double>>& rows);
  static TransitionKernel from_rows(const std::vector<SignedMeasure>& rows);

  const SpacePtr& space() const { return space_; }
  int size() const { return n_; }
  double entry(StateId x, StateId j) const { return entries_.at(index(x, j)); }
  SignedMeasure row(StateId x) const;
  double row_mass(StateId x, const StateSubset& set) const;  // k(x, A)
  double row_total_variation(StateId x) const;               // |k|(x, Omega)
  const std::vector<double>& entries() const { return entries_; }

  /// sup over x of |k|(x, Omega); cached.
  double bound() const { return bound_; }

  TransitionKernel operator+(const TransitionKernel& other) const;
  TransitionKernel operator-(const TransitionKernel& other) const;
  TransitionKernel operator*(double scalar) const;
  bool operator==(const TransitionKernel& other) const;

 private:
  std::size_t index(StateId x, StateId j) const {
    return static_cast<std::size_t>(x) * n_ + j;
  }
  SpacePtr space_;
  int n_ = 0;
  std::vector<double> entries_;
  double bound_ = 0.0;
};

/// |k|: rowwise total variation measure.  The least kernel dominating both
/// k and -k.
TransitionKernel modulus(const TransitionKernel& k);

/// k+ = (|k| + k) / 2 and k- = (|k| - k) / 2; both positive, rowwise
/// disjoint supports, k = k+ - k-.
TransitionKernel positive_part(const TransitionKernel& k);
TransitionKernel negative_part(const TransitionKernel& k);

TransitionKernel kernel_meet(const TransitionKernel& a, const TransitionKernel& b);
TransitionKernel kernel_join(const TransitionKernel& a, const TransitionKernel& b);

double bound(const TransitionKernel& k);

/// Supremum of |<f, k(x,.)>| over a deterministic family of test functions:
/// signed indicator combinations of basis sets (singletons first), clipped
/// to [-1, 1].  Monotone in family_size and exactly |k|(x, Omega) once the
/// family exhausts the sign patterns of the carrier.
double tv_via_test_functions(const TransitionKernel& k, StateId x,
                             std::uint64_t family_size);

/// Union over basis sets B of {x : k(x, B) > alpha}.  With the full
/// generated basis this is exactly {x : k+(x, Omega) > alpha}.
StateSubset superlevel_union(const TransitionKernel& k, double alpha,
                             const std::vector<BasisSet>& basis);

/// Supremum of an order-bounded kernel sequence.  Terms are first replaced
/// by their running joins, so any sequence below the mass bound is
/// accepted; rows of the result must stay below sup_norm in TV mass.
TransitionKernel kernel_sequence_sup(const std::vector<TransitionKernel>& terms,
                                     double sup_norm);

/// Chapman-Kolmogorov composition: row x of the result is the a-average of
/// the rows of b, i.e. the matrix product in row-stochastic orientation.
TransitionKernel compose(const TransitionKernel& a, const TransitionKernel& b);

/// Pointwise kernel order: k1(x, A) <= k2(x, A) for all x and A, checked
/// entrywise (equivalent on finite carriers).
bool kernel_leq(const TransitionKernel& a, const TransitionKernel& b);

/// Signed shift-difference kernel on a two-sided sequence space: positive
/// index rows carry point mass at n minus point mass at n + 1 (the last
/// positive row spills onto the limit state), all other rows vanish.  Its
/// modulus has constant adjoint mass 2 on the positive indices, which is
/// what breaks continuous-function invariance.
TransitionKernel sequence_example_kernel(const SpacePtr& space);

}  // namespace klat

#endif
