#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "klat/errors.hpp"
#include "klat/measure.hpp"
#include "support.hpp"

using namespace klat;
using namespace klat_tests;

TEST_CASE("dirac point masses") {
  const SpacePtr space = make_discrete_space(2);
  const SignedMeasure d0 = dirac(space, 0);
  CHECK(d0.weights() == std::vector<double>{1.0, 0.0});
  CHECK(d0.total_variation() == 1.0);
  CHECK_THROWS_AS(dirac(space, 2), PreconditionError);

  auto rng = make_rng(7);
  for (int round = 0; round < 20; ++round) {
    const SpacePtr big = make_discrete_space(6);
    const SignedMeasure f_weights = random_measure(rng, big, -3.0, 3.0);
    const BoundedFunction f(big, f_weights.weights());
    const int x = round % 6;
    CHECK(integrate(f, dirac(big, x)) == doctest::Approx(f(x)).epsilon(1e-14));
  }
}

TEST_CASE("total variation") {
  const SpacePtr space = make_discrete_space(2);
  CHECK(SignedMeasure(space, {2.0, -3.0}).total_variation() == 5.0);
  CHECK(SignedMeasure::zero(space).total_variation() == 0.0);
}

TEST_CASE("jordan decomposition") {
  const SpacePtr space = make_discrete_space(2);
  const JordanDecomposition jd = jordan_decomposition(SignedMeasure(space, {2.0, -3.0}));
  CHECK(jd.positive.weights() == std::vector<double>{2.0, 0.0});
  CHECK(jd.negative.weights() == std::vector<double>{0.0, 3.0});

  const SignedMeasure positive(space, {0.5, 0.25});
  const JordanDecomposition id = jordan_decomposition(positive);
  CHECK(id.positive == positive);
  CHECK(id.negative == SignedMeasure::zero(space));

  auto rng = make_rng(11);
  const SpacePtr big = make_discrete_space(7);
  for (int round = 0; round < 1000; ++round) {
    const SignedMeasure mu = random_measure(rng, big, -2.0, 2.0);
    const JordanDecomposition d = jordan_decomposition(mu);
    CHECK(d.positive.is_positive());
    CHECK(d.negative.is_positive());
    CHECK(d.positive - d.negative == mu);
    CHECK(mu.total_variation() == doctest::Approx(d.positive.mass() + d.negative.mass())
                                      .epsilon(1e-15));
    CHECK_FALSE(d.positive.support().intersects(d.negative.support()));
  }
}

TEST_CASE("hahn sets with the zero tie rule") {
  const SpacePtr space = make_discrete_space(2);
  const HahnSets h = hahn_sets(SignedMeasure(space, {2.0, -3.0}));
  CHECK(h.positive == StateSubset::of(2, {0}));
  CHECK(h.negative == StateSubset::of(2, {1}));

  const HahnSets zero = hahn_sets(SignedMeasure::zero(space));
  CHECK(zero.positive.empty());
  CHECK(zero.negative == StateSubset::full(2));
}

TEST_CASE("hahn positive set attains the subset supremum") {
  auto rng = make_rng(13);
  for (const int n : {4, 8, 12}) {
    const SpacePtr space = make_discrete_space(n);
    for (int round = 0; round < (n == 12 ? 5 : 100); ++round) {
      const SignedMeasure mu = random_measure(rng, space, -1.0, 1.0);
      const HahnSets h = hahn_sets(mu);
      // Brute force over all subsets.
      double best = 0.0;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        best = std::max(best, mask_mass(mu.weights(), mask));
      }
      CHECK(mu.mass_on(h.positive) == doctest::Approx(best).epsilon(1e-13));
      // Sign conditions on every subset of each side.
      const std::vector<StateId> pos_ids = h.positive.ids();
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pos_ids.size()); ++mask) {
        double m = 0.0;
        for (std::size_t i = 0; i < pos_ids.size(); ++i) {
          if ((mask >> i) & 1u) m += mu.weight(pos_ids[i]);
        }
        CHECK(m >= 0.0);
      }
      const std::vector<StateId> neg_ids = h.negative.ids();
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << neg_ids.size()); ++mask) {
        double m = 0.0;
        for (std::size_t i = 0; i < neg_ids.size(); ++i) {
          if ((mask >> i) & 1u) m += mu.weight(neg_ids[i]);
        }
        CHECK(m <= 0.0);
      }
    }
  }
}

TEST_CASE("integration duality") {
  const SpacePtr space = make_discrete_space(5);
  auto rng = make_rng(17);
  const SignedMeasure mu = random_measure(rng, space, -1.0, 1.0);
  CHECK(integrate(BoundedFunction::constant(space, 1.0), mu) ==
        doctest::Approx(mu.mass()).epsilon(1e-15));

  for (int round = 0; round < 1000; ++round) {
    const SignedMeasure nu = random_measure(rng, space, -2.0, 2.0);
    const SignedMeasure fw = random_measure(rng, space, -3.0, 3.0);
    const BoundedFunction f(space, fw.weights());
    CHECK(std::abs(integrate(f, nu)) <= f.sup_norm() * nu.total_variation() + 1e-12);
  }

  const SpacePtr other = make_discrete_space(4);
  CHECK_THROWS_AS(integrate(BoundedFunction::constant(other, 1.0), mu),
                  SpaceMismatchError);
}

TEST_CASE("measure lattice operations") {
  const SpacePtr space = make_discrete_space(2);
  CHECK(measure_sup(SignedMeasure(space, {1.0, 0.0}), SignedMeasure(space, {0.0, 1.0}))
            .weights() == std::vector<double>{1.0, 1.0});

  // inf(delta_n - delta_{n+1}, 0) = -delta_{n+1} rowwise on the sequence space.
  const SpacePtr seq = make_sequence_space(4);
  const SignedMeasure row = dirac(seq, seq->id_of_sequence_index(1)) -
                            dirac(seq, seq->id_of_sequence_index(2));
  const SignedMeasure negative_part =
      measure_inf(row, SignedMeasure::zero(seq));
  CHECK(negative_part == dirac(seq, seq->id_of_sequence_index(2)) * -1.0);

  auto rng = make_rng(19);
  const SpacePtr big = make_discrete_space(6);
  for (int round = 0; round < 1000; ++round) {
    const SignedMeasure a = random_measure(rng, big, -2.0, 2.0);
    const SignedMeasure b = random_measure(rng, big, -2.0, 2.0);
    const SignedMeasure sup = measure_sup(a, b);
    const SignedMeasure inf = measure_inf(a, b);
    CHECK(tv_distance(sup + inf, a + b) <= 1e-12);          // modular law
    CHECK(measure_sup(a, a) == a);                          // idempotence
    CHECK(measure_sup(b, a) == sup);                        // commutativity
    CHECK(measure_sup(a, inf) == a);                        // absorption
    CHECK(measure_inf(a, sup) == a);
  }
}

TEST_CASE("sequence supremum") {
  const SpacePtr space = make_discrete_space(3);
  const SignedMeasure target = dirac(space, 0);

  SUBCASE("converged monotone tail reaches its limit to 1e-12") {
    std::vector<SignedMeasure> terms;
    for (const double f : {0.5, 0.9, 0.99, 1.0 - 1e-13}) terms.push_back(target * f);
    const SignedMeasure sup = sequence_sup(terms, target);
    CHECK(tv_distance(sup, target) <= 1e-12);
  }
  SUBCASE("constant sequence returns its value") {
    const SignedMeasure value(space, {0.2, 0.3, 0.1});
    const std::vector<SignedMeasure> terms(4, value);
    CHECK(sequence_sup(terms, value) == value);
  }
  SUBCASE("setwise supremum matches subset-wise brute force") {
    auto rng = make_rng(23);
    const SpacePtr big = make_discrete_space(8);
    for (int round = 0; round < 50; ++round) {
      std::vector<SignedMeasure> terms;
      SignedMeasure acc = random_positive_measure(rng, big, 0.2);
      terms.push_back(acc);
      for (int k = 0; k < 20; ++k) {
        acc = acc + random_positive_measure(rng, big, 0.05);
        terms.push_back(acc);
      }
      const SignedMeasure bound = acc + SignedMeasure(big, std::vector<double>(8, 1.0));
      const SignedMeasure sup = sequence_sup(terms, bound);
      for (const SignedMeasure& term : terms) {
        for (int i = 0; i < 8; ++i) CHECK(sup.weight(i) >= term.weight(i));
      }
      for (int i = 0; i < 8; ++i) CHECK(sup.weight(i) <= bound.weight(i));
      for (std::uint64_t mask = 0; mask < (1u << 8); ++mask) {
        double best = -1e300;
        for (const SignedMeasure& term : terms) {
          best = std::max(best, mask_mass(term.weights(), mask));
        }
        CHECK(mask_mass(sup.weights(), mask) == doctest::Approx(best).epsilon(1e-13));
      }
    }
  }
  SUBCASE("non-monotone and unbounded input rejected") {
    const std::vector<SignedMeasure> wiggle{target, target * 0.5};
    CHECK_THROWS_AS(sequence_sup(wiggle, target), PreconditionError);
    const std::vector<SignedMeasure> rising{target * 0.5, target * 2.0};
    CHECK_THROWS_AS(sequence_sup(rising, target), PreconditionError);
  }
}

TEST_CASE("absolute continuity and equivalence") {
  const SpacePtr space = make_discrete_space(2);
  const SignedMeasure half(space, {0.5, 0.5});
  const SignedMeasure skewed(space, {0.1, 0.9});
  const SignedMeasure point(space, {1.0, 0.0});
  CHECK(absolutely_continuous(half, skewed));
  CHECK(equivalent(half, skewed));
  CHECK_FALSE(absolutely_continuous(half, point));
  CHECK(absolutely_continuous(point, half));
  CHECK_FALSE(equivalent(half, point));
}

TEST_CASE("tv distance is a metric") {
  const SpacePtr space = make_discrete_space(2);
  const SignedMeasure mu(space, {0.3, 0.7});
  CHECK(tv_distance(mu, mu) == 0.0);
  CHECK(tv_distance(dirac(space, 0), dirac(space, 1)) == 2.0);

  auto rng = make_rng(29);
  const SpacePtr big = make_discrete_space(5);
  for (int round = 0; round < 1000; ++round) {
    const SignedMeasure a = random_measure(rng, big, -1.0, 1.0);
    const SignedMeasure b = random_measure(rng, big, -1.0, 1.0);
    const SignedMeasure c = random_measure(rng, big, -1.0, 1.0);
    CHECK(tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c) + 1e-12);
    CHECK(tv_distance(a, b) == doctest::Approx(tv_distance(b, a)));
  }
}

TEST_CASE("band projection onto the atomless band") {
  const SpacePtr atoms = make_discrete_space(3);
  auto rng = make_rng(31);
  CHECK(band_projection_ac(random_measure(rng, atoms, -1.0, 1.0)) ==
        SignedMeasure::zero(atoms));

  const SpacePtr cells = make_interval_space(0.0, 1.0, 3);
  const SignedMeasure density = random_positive_measure(rng, cells);
  CHECK(band_projection_ac(density) == density);

  // Mixed space: one atom plus two cells carrying a density.
  const SpacePtr mixed = make_tagged_space({{StateTag::atom, 1.0, 0.0},
                                            {StateTag::cell, 0.5, 1.0},
                                            {StateTag::cell, 0.5, 2.0}});
  const SignedMeasure combined(mixed, {1.0, 0.25, 0.25});
  const SignedMeasure lebesgue_part(mixed, {0.0, 0.25, 0.25});
  CHECK(band_projection_ac(combined) == lebesgue_part);

  for (int round = 0; round < 100; ++round) {
    const SignedMeasure mu = random_measure(rng, mixed, -1.0, 1.0);
    const SignedMeasure once = band_projection_ac(mu);
    CHECK(band_projection_ac(once) == once);  // idempotent
    CHECK(once.total_variation() <= mu.total_variation() + 1e-15);
  }
}
