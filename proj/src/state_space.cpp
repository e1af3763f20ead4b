#include "klat/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_set>

#include "klat/errors.hpp"

namespace klat {

namespace {

void check_states(const std::vector<StateInfo>& states) {
  if (states.empty()) {
    throw PreconditionError("state space must contain at least one state");
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    const StateInfo& s = states[i];
    if (s.tag == StateTag::cell && !(s.ref_weight > 0.0)) {
      throw PreconditionError("cell state " + std::to_string(i) +
                              " must have a strictly positive reference weight");
    }
    if (std::isnan(s.ref_weight) || std::isnan(s.coord)) {
      throw PreconditionError("state " + std::to_string(i) + " has NaN data");
    }
  }
}

}  // namespace

StateSpace::StateSpace(TopologyKind kind, std::vector<StateInfo> states, double a,
                       double b, int truncation)
    : kind_(kind), states_(std::move(states)), a_(a), b_(b), truncation_(truncation) {
  check_states(states_);
}

bool StateSpace::is_infinity(StateId i) const {
  return kind_ == TopologyKind::two_sided_sequence && i == infinity_id();
}

int StateSpace::sequence_index(StateId i) const {
  if (kind_ != TopologyKind::two_sided_sequence) {
    throw PreconditionError("sequence_index requires a two-sided sequence space");
  }
  if (!contains(i) || is_infinity(i)) {
    throw PreconditionError("state " + std::to_string(i) +
                            " has no finite sequence index");
  }
  const int n = truncation_;
  return i < n ? i - n : i - n + 1;
}

StateId StateSpace::id_of_sequence_index(int idx) const {
  if (kind_ != TopologyKind::two_sided_sequence) {
    throw PreconditionError("id_of_sequence_index requires a two-sided sequence space");
  }
  const int n = truncation_;
  if (idx == 0 || idx < -n || idx > n) {
    throw PreconditionError("sequence index " + std::to_string(idx) + " out of range");
  }
  return idx < 0 ? idx + n : n + idx - 1;
}

bool StateSpace::operator==(const StateSpace& other) const {
  if (kind_ != other.kind_ || states_.size() != other.states_.size()) return false;
  if (kind_ == TopologyKind::interval && (a_ != other.a_ || b_ != other.b_)) return false;
  if (kind_ == TopologyKind::two_sided_sequence && truncation_ != other.truncation_) {
    return false;
  }
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const StateInfo& x = states_[i];
    const StateInfo& y = other.states_[i];
    const bool coords_match =
        x.coord == y.coord || (std::isinf(x.coord) && std::isinf(y.coord));
    if (x.tag != y.tag || x.ref_weight != y.ref_weight || !coords_match) return false;
  }
  return true;
}

SpacePtr make_discrete_space(int n) {
  if (n < 1) throw PreconditionError("discrete space needs n >= 1");
  std::vector<StateInfo> states(n);
  for (int i = 0; i < n; ++i) {
    states[i] = {StateTag::atom, 1.0, static_cast<double>(i)};
  }
  return std::make_shared<StateSpace>(TopologyKind::discrete, std::move(states), 0.0,
                                      0.0, 0);
}

SpacePtr make_interval_space(double a, double b, int cells) {
  if (cells < 1) throw PreconditionError("interval space needs cells >= 1");
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw PreconditionError("interval space needs finite bounds with a < b");
  }
  const double width = (b - a) / cells;
  std::vector<StateInfo> states(cells);
  for (int i = 0; i < cells; ++i) {
    states[i] = {StateTag::cell, width, a + (i + 0.5) * width};
  }
  return std::make_shared<StateSpace>(TopologyKind::interval, std::move(states), a, b,
                                      0);
}

SpacePtr make_sequence_space(int truncation) {
  if (truncation < 1) throw PreconditionError("sequence space needs truncation >= 1");
  const int n = truncation;
  std::vector<StateInfo> states(2 * n + 1);
  for (int i = 0; i < n; ++i) {
    states[i] = {StateTag::atom, 1.0, static_cast<double>(i - n)};
  }
  for (int i = n; i < 2 * n; ++i) {
    states[i] = {StateTag::atom, 1.0, static_cast<double>(i - n + 1)};
  }
  states[2 * n] = {StateTag::atom, 1.0, std::numeric_limits<double>::infinity()};
  return std::make_shared<StateSpace>(TopologyKind::two_sided_sequence,
                                      std::move(states), 0.0, 0.0, n);
}

SpacePtr make_tagged_space(std::vector<StateInfo> states) {
  return std::make_shared<StateSpace>(TopologyKind::discrete, std::move(states), 0.0,
                                      0.0, 0);
}

bool same_space(const SpacePtr& lhs, const SpacePtr& rhs) {
  if (!lhs || !rhs) return false;
  if (lhs == rhs) return true;
  return *lhs == *rhs;
}

void require_same_space(const SpacePtr& lhs, const SpacePtr& rhs, const char* where) {
  if (!same_space(lhs, rhs)) {
    throw SpaceMismatchError(std::string(where) + ": operands on different spaces");
  }
}

// --- StateSubset ---------------------------------------------------------

StateSubset::StateSubset(int universe) : universe_(universe) {
  if (universe < 0) throw PreconditionError("subset universe must be nonnegative");
  bits_.assign((universe + 63) / 64, 0);
}

StateSubset StateSubset::of(int universe, std::initializer_list<StateId> ids) {
  StateSubset s(universe);
  for (StateId i : ids) s.add(i);
  return s;
}

StateSubset StateSubset::from_ids(int universe, const std::vector<StateId>& ids) {
  StateSubset s(universe);
  for (StateId i : ids) s.add(i);
  return s;
}

StateSubset StateSubset::full(int universe) {
  StateSubset s(universe);
  for (int i = 0; i < universe; ++i) s.add(i);
  return s;
}

bool StateSubset::contains(StateId i) const {
  if (i < 0 || i >= universe_) return false;
  return (bits_[i / 64] >> (i % 64)) & 1u;
}

void StateSubset::add(StateId i) {
  if (i < 0 || i >= universe_) {
    throw PreconditionError("state id " + std::to_string(i) + " outside universe of " +
                            std::to_string(universe_));
  }
  bits_[i / 64] |= std::uint64_t{1} << (i % 64);
}

void StateSubset::remove(StateId i) {
  if (i < 0 || i >= universe_) return;
  bits_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
}

int StateSubset::count() const {
  int c = 0;
  for (std::uint64_t w : bits_) c += __builtin_popcountll(w);
  return c;
}

void StateSubset::check_universe(const StateSubset& other) const {
  if (universe_ != other.universe_) {
    throw SpaceMismatchError("subsets over different universes");
  }
}

bool StateSubset::is_subset_of(const StateSubset& other) const {
  check_universe(other);
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    if (bits_[w] & ~other.bits_[w]) return false;
  }
  return true;
}

bool StateSubset::intersects(const StateSubset& other) const {
  check_universe(other);
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    if (bits_[w] & other.bits_[w]) return true;
  }
  return false;
}

StateSubset StateSubset::unioned(const StateSubset& other) const {
  check_universe(other);
  StateSubset out(universe_);
  for (std::size_t w = 0; w < bits_.size(); ++w) out.bits_[w] = bits_[w] | other.bits_[w];
  return out;
}

StateSubset StateSubset::intersected(const StateSubset& other) const {
  check_universe(other);
  StateSubset out(universe_);
  for (std::size_t w = 0; w < bits_.size(); ++w) out.bits_[w] = bits_[w] & other.bits_[w];
  return out;
}

StateSubset StateSubset::minus(const StateSubset& other) const {
  check_universe(other);
  StateSubset out(universe_);
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    out.bits_[w] = bits_[w] & ~other.bits_[w];
  }
  return out;
}

StateSubset StateSubset::complement() const { return full(universe_).minus(*this); }

std::vector<StateId> StateSubset::ids() const {
  std::vector<StateId> out;
  out.reserve(count());
  for (int i = 0; i < universe_; ++i) {
    if (contains(i)) out.push_back(i);
  }
  return out;
}

std::string StateSubset::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (StateId i : ids()) {
    if (!first) os << ',';
    os << i;
    first = false;
  }
  os << '}';
  return os.str();
}

std::size_t StateSubsetHash::operator()(const StateSubset& s) const {
  std::size_t h = std::hash<int>{}(s.universe_size());
  for (StateId i : s.ids()) h = h * 1099511628211ULL + static_cast<std::size_t>(i);
  return h;
}

// --- Basis families ------------------------------------------------------

namespace {

std::vector<BasisSet> discrete_style_basis(const SpacePtr& space, int depth) {
  const int n = space->size();
  std::vector<BasisSet> family;
  std::unordered_set<StateSubset, StateSubsetHash> seen;
  auto push = [&](const StateSubset& set, int generation) {
    if (seen.insert(set).second) family.push_back({space, set, generation});
  };

  const bool sequence = space->kind() == TopologyKind::two_sided_sequence;
  for (int i = 0; i < n; ++i) {
    if (sequence && space->is_infinity(i)) continue;  // the limit point is not isolated
    push(StateSubset::of(n, {i}), 0);
  }
  if (sequence) {
    // Basic neighborhoods of the limit point: {inf} with both tails |m| >= j.
    const int N = space->truncation();
    for (int j = 1; j <= N; ++j) {
      StateSubset tail(n);
      tail.add(space->infinity_id());
      for (int m = j; m <= N; ++m) {
        tail.add(space->id_of_sequence_index(m));
        tail.add(space->id_of_sequence_index(-m));
      }
      push(tail, 0);
    }
  }

  for (int level = 1; level <= depth; ++level) {
    const std::size_t level_end = family.size();
    for (std::size_t i = 0; i < level_end; ++i) {
      for (std::size_t j = i + 1; j < level_end; ++j) {
        push(family[i].members.unioned(family[j].members), level);
      }
    }
    if (family.size() == level_end) break;  // closed already
  }
  return family;
}

std::vector<BasisSet> interval_basis(const SpacePtr& space, int depth) {
  const int n = space->size();
  std::vector<BasisSet> family;
  std::unordered_set<StateSubset, StateSubsetHash> seen;
  auto push = [&](const StateSubset& set, int generation) {
    if (seen.insert(set).second) family.push_back({space, set, generation});
  };

  // Dyadic cell blocks of width 2^j, clipped at the right edge.
  for (int j = 0; j <= depth; ++j) {
    const int block = 1 << j;
    if (block > n && j > 0) break;
    for (int start = 0; start < n; start += block) {
      StateSubset set(n);
      for (int i = start; i < std::min(start + block, n); ++i) set.add(i);
      push(set, j);
    }
  }
  const std::size_t blocks = family.size();
  for (std::size_t i = 0; i < blocks; ++i) {
    for (std::size_t j = i + 1; j < blocks; ++j) {
      push(family[i].members.unioned(family[j].members),
           std::max(family[i].generation, family[j].generation) + 1);
    }
  }
  return family;
}

}  // namespace

std::vector<BasisSet> generate_basis(const SpacePtr& space, int depth) {
  if (!space) throw PreconditionError("generate_basis: null space");
  if (depth < 0) throw PreconditionError("generate_basis: depth must be >= 0");
  if (space->kind() == TopologyKind::interval) return interval_basis(space, depth);
  return discrete_style_basis(space, depth);
}

std::vector<BasisSet> full_basis(const SpacePtr& space) {
  if (!space) throw PreconditionError("full_basis: null space");
  const int n = space->size();
  if (n > 16) {
    throw CarrierTooLargeError("full_basis: carrier of " + std::to_string(n) +
                               " states exceeds the 16-state cap");
  }
  std::vector<BasisSet> family;
  family.reserve((std::size_t{1} << n) - 1);
  // Singletons first so generation-0 sets lead, then by size.
  for (int size = 1; size <= n; ++size) {
    const int generation = size == 1 ? 0 : 32 - __builtin_clz(size - 1);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
      if (__builtin_popcountll(mask) != size) continue;
      StateSubset set(n);
      for (int i = 0; i < n; ++i) {
        if ((mask >> i) & 1u) set.add(i);
      }
      family.push_back({space, set, generation});
    }
  }
  return family;
}

std::size_t union_of(std::vector<BasisSet>& family, std::size_t i, std::size_t j) {
  if (i >= family.size() || j >= family.size()) {
    throw PreconditionError("union_of: index outside family");
  }
  require_same_space(family[i].space, family[j].space, "union_of");
  const StateSubset u = family[i].members.unioned(family[j].members);
  for (std::size_t m = 0; m < family.size(); ++m) {
    if (family[m].members == u) return m;
  }
  family.push_back(
      {family[i].space, u, std::max(family[i].generation, family[j].generation) + 1});
  return family.size() - 1;
}

Refinement refine_to_disjoint(const std::vector<BasisSet>& sets) {
  if (sets.empty()) throw PreconditionError("refine_to_disjoint: empty input");
  for (const BasisSet& s : sets) {
    require_same_space(sets.front().space, s.space, "refine_to_disjoint");
  }
  const SpacePtr& space = sets.front().space;
  const int n = space->size();
  const std::size_t words = (sets.size() + 63) / 64;

  // Group states of the union by their membership signature: states sharing a
  // signature form one atom of the generated algebra.
  std::map<std::vector<std::uint64_t>, int> part_of_signature;
  Refinement out;
  for (int state = 0; state < n; ++state) {
    std::vector<std::uint64_t> signature(words, 0);
    bool member = false;
    for (std::size_t s = 0; s < sets.size(); ++s) {
      if (sets[s].members.contains(state)) {
        signature[s / 64] |= std::uint64_t{1} << (s % 64);
        member = true;
      }
    }
    if (!member) continue;
    auto [it, inserted] = part_of_signature.try_emplace(
        signature, static_cast<int>(out.parts.size()));
    if (inserted) {
      out.parts.push_back({space, StateSubset(n), 0});
      std::vector<int> owners;
      for (std::size_t s = 0; s < sets.size(); ++s) {
        if ((signature[s / 64] >> (s % 64)) & 1u) owners.push_back(static_cast<int>(s));
      }
      out.owners.push_back(std::move(owners));
    }
    out.parts[it->second].members.add(state);
  }
  return out;
}

// --- BoundedFunction ------------------------------------------------------

BoundedFunction::BoundedFunction(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw PreconditionError("bounded function: null space");
  if (static_cast<int>(values_.size()) != space_->size()) {
    throw SpaceMismatchError("bounded function: value count does not match space");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw PreconditionError("bounded function: values must be finite");
    }
    sup_norm_ = std::max(sup_norm_, std::abs(v));
  }
}

BoundedFunction BoundedFunction::constant(const SpacePtr& space, double value) {
  return BoundedFunction(space, std::vector<double>(space ? space->size() : 0, value));
}

BoundedFunction BoundedFunction::indicator(const SpacePtr& space,
                                           const StateSubset& set) {
  if (!space) throw PreconditionError("indicator: null space");
  if (set.universe_size() != space->size()) {
    throw SpaceMismatchError("indicator: subset universe does not match space");
  }
  std::vector<double> values(space->size(), 0.0);
  for (StateId i : set.ids()) values[i] = 1.0;
  return BoundedFunction(space, std::move(values));
}

bool is_continuous(const BoundedFunction& f, const SpacePtr& space, double tau) {
  if (!space) throw PreconditionError("is_continuous: null space");
  require_same_space(f.space(), space, "is_continuous");
  switch (space->kind()) {
    case TopologyKind::discrete:
      return true;
    case TopologyKind::interval: {
      for (int i = 0; i + 1 < space->size(); ++i) {
        if (std::abs(f(i + 1) - f(i)) >= tau) return false;
      }
      return true;
    }
    case TopologyKind::two_sided_sequence: {
      const int N = space->truncation();
      const double limit = f(space->infinity_id());
      const int band_start = std::max(1, (3 * N) / 4);
      for (int m = band_start; m <= N; ++m) {
        if (std::abs(f(space->id_of_sequence_index(m)) - limit) >= tau) return false;
        if (std::abs(f(space->id_of_sequence_index(-m)) - limit) >= tau) return false;
      }
      return true;
    }
  }
  return true;
}

}  // namespace klat
