#ifndef KLAT_STATE_SPACE_HPP
#define KLAT_STATE_SPACE_HPP

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace klat {

/// Finite carriers standing in for a Polish state space.
///
/// A space is an ordered list of tagged states.  Atom states model point
/// masses, Cell states model discretization cells of a continuum and carry
/// the cell width as reference weight.  Three topologies are supported:
/// plain discrete sets, uniform partitions of an interval, and a two-sided
/// sequence -N..-1, 1..N with an attached limit point (the truncation of
/// the classical two-sided sequence space with infinity).

using StateId = int;

enum class StateTag { atom, cell };

enum class TopologyKind { discrete, interval, two_sided_sequence };

struct StateInfo {
  StateTag tag = StateTag::atom;
  double ref_weight = 1.0;  // cell width for Cell states, 1 for atoms
  double coord = 0.0;       // position label; +inf marks the sequence limit point
};

class StateSpace {
 public:
  StateSpace(TopologyKind kind, std::vector<StateInfo> states, double a, double b,
             int truncation);

  TopologyKind kind() const { return kind_; }
  int size() const { return static_cast<int>(states_.size()); }
  const std::vector<StateInfo>& states() const { return states_; }
  StateTag tag(StateId i) const { return states_.at(i).tag; }
  double ref_weight(StateId i) const { return states_.at(i).ref_weight; }
  double coord(StateId i) const { return states_.at(i).coord; }
  bool contains(StateId i) const { return i >= 0 && i < size(); }

  // Interval parameters; meaningful only for TopologyKind::interval.
  double lower() const { return a_; }
  double upper() const { return b_; }

  // Two-sided sequence accessors.  States are ordered -N..-1, 1..N, inf.
  int truncation() const { return truncation_; }
  StateId infinity_id() const { return size() - 1; }
  bool is_infinity(StateId i) const;
  int sequence_index(StateId i) const;      // signed index; throws for the limit point
  StateId id_of_sequence_index(int n) const;

  bool operator==(const StateSpace& other) const;

 private:
  TopologyKind kind_;
  std::vector<StateInfo> states_;
  double a_ = 0.0, b_ = 0.0;  // interval bounds
  int truncation_ = 0;        // N for two-sided sequences
};

using SpacePtr = std::shared_ptr<const StateSpace>;

SpacePtr make_discrete_space(int n);
SpacePtr make_interval_space(double a, double b, int cells);
SpacePtr make_sequence_space(int truncation);
// Discrete-topology space with caller-chosen Atom/Cell tags (mixed spaces).
SpacePtr make_tagged_space(std::vector<StateInfo> states);

bool same_space(const SpacePtr& lhs, const SpacePtr& rhs);
void require_same_space(const SpacePtr& lhs, const SpacePtr& rhs, const char* where);

/// Subset of the states of a space, stored as a bitset.
class StateSubset {
 public:
  StateSubset() = default;
  explicit StateSubset(int universe);
  static StateSubset of(int universe, std::initializer_list<StateId> ids);
  static StateSubset from_ids(int universe, const std::vector<StateId>& ids);
  static StateSubset full(int universe);

  int universe_size() const { return universe_; }
  bool contains(StateId i) const;
  void add(StateId i);
  void remove(StateId i);
  int count() const;
  bool empty() const { return count() == 0; }

  bool is_subset_of(const StateSubset& other) const;
  bool intersects(const StateSubset& other) const;
  StateSubset unioned(const StateSubset& other) const;
  StateSubset intersected(const StateSubset& other) const;
  StateSubset minus(const StateSubset& other) const;
  StateSubset complement() const;

  std::vector<StateId> ids() const;
  std::string to_string() const;

  bool operator==(const StateSubset& other) const = default;

 private:
  void check_universe(const StateSubset& other) const;
  int universe_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct StateSubsetHash {
  std::size_t operator()(const StateSubset& s) const;
};

/// One member of a countable basis family of "open" sets.
struct BasisSet {
  SpacePtr space;
  StateSubset members;
  int generation = 0;
};

/// Basis of the (surrogate) topology: singletons/dyadic blocks and their
/// unions up to the requested depth.  Every state is covered; unions of two
/// family members are either present or can be appended with union_of.
std::vector<BasisSet> generate_basis(const SpacePtr& space, int depth);

/// The full generated algebra: every nonempty subset.  Guarded by carrier
/// size since the family has 2^n - 1 members.
std::vector<BasisSet> full_basis(const SpacePtr& space);

/// Index of the union of family[i] and family[j]; appends it when missing.
std::size_t union_of(std::vector<BasisSet>& family, std::size_t i, std::size_t j);

struct Refinement {
  // Pairwise disjoint sets partitioning the union of the inputs.
  std::vector<BasisSet> parts;
  // owners[m] lists the input indices n with parts[m] contained in inputs[n].
  std::vector<std::vector<int>> owners;
};

/// Disjointification of a finite set family: each part is contained in or
/// disjoint from every input, and the parts cover exactly the input union.
Refinement refine_to_disjoint(const std::vector<BasisSet>& sets);

/// Bounded real-valued function on a space, with cached sup norm.
class BoundedFunction {
 public:
  BoundedFunction(SpacePtr space, std::vector<double> values);
  static BoundedFunction constant(const SpacePtr& space, double value);
  static BoundedFunction indicator(const SpacePtr& space, const StateSubset& set);

  const SpacePtr& space() const { return space_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator()(StateId i) const { return values_.at(i); }
  const std::vector<double>& values() const { return values_; }
  double sup_norm() const { return sup_norm_; }

 private:
  SpacePtr space_;
  std::vector<double> values_;
  double sup_norm_ = 0.0;
};

inline constexpr double kDefaultContinuityTol = 0.05;

/// Continuity surrogate.  Discrete spaces: always true.  Interval spaces:
/// cell-to-cell oscillation below tau.  Two-sided sequences: the function
/// must settle to its value at the limit point over the outer quarter of
/// indices, |f(+-n) - f(inf)| < tau for n >= 3N/4.
bool is_continuous(const BoundedFunction& f, const SpacePtr& space,
                   double tau = kDefaultContinuityTol);

}  // namespace klat

#endif
