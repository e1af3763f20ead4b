#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "klat/errors.hpp"
#include "klat/state_space.hpp"
#include "support.hpp"

using namespace klat;

TEST_CASE("discrete space factory") {
  const SpacePtr space = make_discrete_space(2);
  CHECK(space->size() == 2);
  CHECK(space->kind() == TopologyKind::discrete);
  for (int i = 0; i < 2; ++i) CHECK(space->tag(i) == StateTag::atom);
  CHECK_THROWS_AS(make_discrete_space(0), PreconditionError);
}

TEST_CASE("interval space factory") {
  const SpacePtr space = make_interval_space(0.0, 1.0, 4);
  CHECK(space->size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(space->tag(i) == StateTag::cell);
    CHECK(space->ref_weight(i) == doctest::Approx(0.25));
  }
  CHECK(space->coord(0) == doctest::Approx(0.125));
  CHECK_THROWS_AS(make_interval_space(1.0, 0.0, 4), PreconditionError);
  CHECK_THROWS_AS(make_interval_space(0.0, 1.0, 0), PreconditionError);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(make_interval_space(0.0, inf, 4), PreconditionError);
}

TEST_CASE("two-sided sequence space") {
  const SpacePtr space = make_sequence_space(3);
  REQUIRE(space->size() == 7);  // -3..-1, 1..3, inf
  CHECK(space->sequence_index(0) == -3);
  CHECK(space->sequence_index(2) == -1);
  CHECK(space->sequence_index(3) == 1);
  CHECK(space->sequence_index(5) == 3);
  CHECK(space->is_infinity(6));
  CHECK(space->id_of_sequence_index(-3) == 0);
  CHECK(space->id_of_sequence_index(3) == 5);
  CHECK_THROWS_AS(space->id_of_sequence_index(0), PreconditionError);
  CHECK_THROWS_AS(space->sequence_index(6), PreconditionError);
  CHECK_THROWS_AS(make_sequence_space(0), PreconditionError);
}

TEST_CASE("tagged space validates cell weights") {
  std::vector<StateInfo> states{{StateTag::atom, 1.0, 0.0}, {StateTag::cell, 0.5, 1.0}};
  const SpacePtr space = make_tagged_space(states);
  CHECK(space->tag(1) == StateTag::cell);
  states[1].ref_weight = 0.0;
  CHECK_THROWS_AS(make_tagged_space(states), PreconditionError);
}

namespace {

bool family_contains(const std::vector<BasisSet>& family, const StateSubset& set) {
  return std::any_of(family.begin(), family.end(),
                     [&](const BasisSet& b) { return b.members == set; });
}

}  // namespace

TEST_CASE("basis of a two-state discrete space at depth one") {
  const SpacePtr space = make_discrete_space(2);
  const std::vector<BasisSet> family = generate_basis(space, 1);
  REQUIRE(family.size() == 3);
  CHECK(family_contains(family, StateSubset::of(2, {0})));
  CHECK(family_contains(family, StateSubset::of(2, {1})));
  CHECK(family_contains(family, StateSubset::of(2, {0, 1})));
}

TEST_CASE("interval basis holds the dyadic blocks") {
  const SpacePtr space = make_interval_space(0.0, 1.0, 4);
  const std::vector<BasisSet> family = generate_basis(space, 2);
  for (const StateSubset& expected :
       {StateSubset::of(4, {0}), StateSubset::of(4, {1}), StateSubset::of(4, {2}),
        StateSubset::of(4, {3}), StateSubset::of(4, {0, 1}), StateSubset::of(4, {2, 3}),
        StateSubset::of(4, {0, 1, 2, 3})}) {
    CHECK(family_contains(family, expected));
  }
}

TEST_CASE("basis families cover the space and close under union_of") {
  for (const SpacePtr& space :
       {make_discrete_space(5), make_interval_space(-1.0, 2.0, 6), make_sequence_space(4)}) {
    std::vector<BasisSet> family = generate_basis(space, 2);
    StateSubset covered(space->size());
    for (const BasisSet& b : family) covered = covered.unioned(b.members);
    CHECK(covered == StateSubset::full(space->size()));

    const std::size_t initial = family.size();
    for (std::size_t i = 0; i < std::min<std::size_t>(initial, 12); ++i) {
      for (std::size_t j = i + 1; j < std::min<std::size_t>(initial, 12); ++j) {
        const std::size_t u = union_of(family, i, j);
        CHECK(family[u].members == family[i].members.unioned(family[j].members));
      }
    }
  }
}

TEST_CASE("full basis enumerates the whole algebra") {
  const SpacePtr space = make_discrete_space(4);
  const std::vector<BasisSet> family = full_basis(space);
  CHECK(family.size() == 15);
  // Same contents as the generated basis at the closing depth.
  std::vector<BasisSet> generated = generate_basis(space, 2);
  CHECK(generated.size() == 15);
  for (const BasisSet& b : generated) CHECK(family_contains(family, b.members));
  CHECK_THROWS_AS(full_basis(make_discrete_space(17)), CarrierTooLargeError);
}

TEST_CASE("refinement of overlapping pair") {
  const SpacePtr space = make_discrete_space(3);
  const std::vector<BasisSet> sets{{space, StateSubset::of(3, {0, 1}), 0},
                                   {space, StateSubset::of(3, {1, 2}), 0}};
  const Refinement r = refine_to_disjoint(sets);
  REQUIRE(r.parts.size() == 3);
  // Atoms {0}, {1}, {2} with owners first / both / second.
  for (std::size_t m = 0; m < r.parts.size(); ++m) {
    const std::vector<StateId> ids = r.parts[m].members.ids();
    REQUIRE(ids.size() == 1);
    if (ids[0] == 0) CHECK(r.owners[m] == std::vector<int>{0});
    if (ids[0] == 1) CHECK(r.owners[m] == std::vector<int>{0, 1});
    if (ids[0] == 2) CHECK(r.owners[m] == std::vector<int>{1});
  }
}

TEST_CASE("refinement identity and nested cases") {
  const SpacePtr space = make_discrete_space(4);
  SUBCASE("single input") {
    const std::vector<BasisSet> sets{{space, StateSubset::of(4, {1, 2}), 0}};
    const Refinement r = refine_to_disjoint(sets);
    REQUIRE(r.parts.size() == 1);
    CHECK(r.parts[0].members == StateSubset::of(4, {1, 2}));
    CHECK(r.owners[0] == std::vector<int>{0});
  }
  SUBCASE("nested inputs split into signature atoms") {
    const std::vector<BasisSet> sets{{space, StateSubset::of(4, {0, 1, 2, 3}), 0},
                                     {space, StateSubset::of(4, {2, 3}), 0}};
    const Refinement r = refine_to_disjoint(sets);
    REQUIRE(r.parts.size() == 2);
    CHECK(family_contains(r.parts, StateSubset::of(4, {0, 1})));
    CHECK(family_contains(r.parts, StateSubset::of(4, {2, 3})));
    for (std::size_t m = 0; m < r.parts.size(); ++m) {
      if (r.parts[m].members == StateSubset::of(4, {0, 1})) {
        CHECK(r.owners[m] == std::vector<int>{0});
      } else {
        CHECK(r.owners[m] == std::vector<int>{0, 1});
      }
    }
  }
  SUBCASE("mixed spaces rejected") {
    const SpacePtr other = make_discrete_space(5);
    const std::vector<BasisSet> sets{{space, StateSubset::of(4, {0}), 0},
                                     {other, StateSubset::of(5, {0}), 0}};
    CHECK_THROWS_AS(refine_to_disjoint(sets), SpaceMismatchError);
  }
}

TEST_CASE("refinement properties on random families") {
  auto rng = klat_tests::make_rng(2024);
  std::uniform_int_distribution<int> coin(0, 1);
  const SpacePtr space = make_discrete_space(9);
  for (int round = 0; round < 50; ++round) {
    std::vector<BasisSet> sets;
    const int count = 2 + round % 4;
    for (int s = 0; s < count; ++s) {
      StateSubset set(9);
      for (int i = 0; i < 9; ++i) {
        if (coin(rng)) set.add(i);
      }
      if (set.empty()) set.add(round % 9);
      sets.push_back({space, set, 0});
    }
    const Refinement r = refine_to_disjoint(sets);

    StateSubset input_union(9), part_union(9);
    for (const BasisSet& s : sets) input_union = input_union.unioned(s.members);
    for (std::size_t m = 0; m < r.parts.size(); ++m) {
      part_union = part_union.unioned(r.parts[m].members);
      // Contained-or-disjoint against every input, owners exact.
      for (std::size_t n = 0; n < sets.size(); ++n) {
        const bool inside = r.parts[m].members.is_subset_of(sets[n].members);
        const bool touches = r.parts[m].members.intersects(sets[n].members);
        CHECK(inside == touches);
        const bool owned = std::find(r.owners[m].begin(), r.owners[m].end(),
                                     static_cast<int>(n)) != r.owners[m].end();
        CHECK(owned == inside);
      }
      for (std::size_t m2 = m + 1; m2 < r.parts.size(); ++m2) {
        CHECK(!r.parts[m].members.intersects(r.parts[m2].members));
      }
    }
    CHECK(part_union == input_union);
  }
}

TEST_CASE("continuity on the sequence space") {
  const SpacePtr space = make_sequence_space(16);
  const int n = space->size();
  SUBCASE("constants are continuous") {
    CHECK(is_continuous(BoundedFunction::constant(space, 1.0), space));
  }
  SUBCASE("twice the positive indicator is not continuous") {
    std::vector<double> v(n, 0.0);
    for (int m = 1; m <= 16; ++m) v[space->id_of_sequence_index(m)] = 2.0;
    CHECK_FALSE(is_continuous(BoundedFunction(space, v), space));
  }
  SUBCASE("inverse tail at N = 64 settles below the default tolerance") {
    const SpacePtr big = make_sequence_space(64);
    std::vector<double> v(big->size(), 0.0);
    for (int m = 1; m <= 64; ++m) {
      v[big->id_of_sequence_index(m)] = 1.0 / m;
      v[big->id_of_sequence_index(-m)] = 1.0 / m;
    }
    const BoundedFunction f(big, v);
    CHECK(is_continuous(f, big));
    // The outer-quarter band starts at 48, so the worst tail value is 1/48.
    CHECK(1.0 / 48.0 < kDefaultContinuityTol);
    CHECK_FALSE(is_continuous(f, big, 1.0 / 50.0));
  }
}

TEST_CASE("continuity on discrete and interval spaces") {
  const SpacePtr discrete = make_discrete_space(3);
  CHECK(is_continuous(BoundedFunction(discrete, {5.0, -7.0, 2.0}), discrete));

  const SpacePtr interval = make_interval_space(0.0, 1.0, 8);
  std::vector<double> smooth(8), jumpy(8);
  for (int i = 0; i < 8; ++i) {
    smooth[i] = 0.01 * i;
    jumpy[i] = i < 4 ? 0.0 : 1.0;
  }
  CHECK(is_continuous(BoundedFunction(interval, smooth), interval));
  CHECK_FALSE(is_continuous(BoundedFunction(interval, jumpy), interval));
}

TEST_CASE("bounded function invariants") {
  const SpacePtr space = make_discrete_space(3);
  const BoundedFunction f(space, {1.0, -4.0, 2.0});
  CHECK(f.sup_norm() == doctest::Approx(4.0));
  CHECK_THROWS_AS(BoundedFunction(space, {1.0, std::nan(""), 0.0}), PreconditionError);
  CHECK_THROWS_AS(BoundedFunction(space, {1.0, 2.0}), SpaceMismatchError);
}
