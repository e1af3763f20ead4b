#include "klat/measure_operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "klat/errors.hpp"

namespace klat {

MeasureOperator::MeasureOperator(TransitionKernel kernel) : kernel_(std::move(kernel)) {}

SignedMeasure MeasureOperator::apply(const SignedMeasure& mu) const {
  require_same_space(space(), mu.space(), "operator apply");
  const int n = kernel_.size();
  std::vector<double> out(n, 0.0);
  for (int x = 0; x < n; ++x) {
    const double w = mu.weight(x);
    if (w == 0.0) continue;
    for (int j = 0; j < n; ++j) out[j] += w * kernel_.entry(x, j);
  }
  return SignedMeasure(space(), std::move(out));
}

BoundedFunction MeasureOperator::adjoint(const BoundedFunction& f) const {
  require_same_space(space(), f.space(), "operator adjoint");
  const int n = kernel_.size();
  std::vector<double> out(n, 0.0);
  for (int x = 0; x < n; ++x) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += kernel_.entry(x, j) * f(j);
    out[x] = acc;
  }
  return BoundedFunction(space(), std::move(out));
}

SignedMeasure positive_part_oracle(const MeasureOperator& op, const SignedMeasure& mu,
                                   int carrier_cap) {
  require_same_space(op.space(), mu.space(), "positive_part_oracle");
  if (!mu.is_positive()) {
    throw PreconditionError("positive_part_oracle: measure must be positive");
  }
  const int n = mu.size();
  if (n > carrier_cap) {
    throw CarrierTooLargeError("positive_part_oracle: carrier of " + std::to_string(n) +
                               " states exceeds the cap of " +
                               std::to_string(carrier_cap));
  }
  // c[x][j] = k(x, {j}) mu({x}); the supremum over 0 <= g <= 1 of a linear
  // functional is attained at an indicator, so enumerating indicators is
  // exhaustive.
  const TransitionKernel& k = op.kernel();
  std::vector<double> c(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x) {
    for (int j = 0; j < n; ++j) {
      c[static_cast<std::size_t>(x) * n + j] = k.entry(x, j) * mu.weight(x);
    }
  }
  std::vector<double> best(n, 0.0);  // g = 0 contributes 0 to every target
  std::vector<double> acc(n);
  for (std::uint64_t g = 1; g < (std::uint64_t{1} << n); ++g) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int x = 0; x < n; ++x) {
      if (!((g >> x) & 1u)) continue;
      const double* row = &c[static_cast<std::size_t>(x) * n];
      for (int j = 0; j < n; ++j) acc[j] += row[j];
    }
    for (int j = 0; j < n; ++j) best[j] = std::max(best[j], acc[j]);
  }
  return SignedMeasure(mu.space(), std::move(best));
}

double keylemma_lower_bound(const MeasureOperator& op, const SignedMeasure& mu,
                            const StateSubset& a_set, double alpha,
                            const std::vector<BasisSet>& basis, double eps) {
  require_same_space(op.space(), mu.space(), "keylemma_lower_bound");
  if (!(alpha > 0.0)) throw PreconditionError("keylemma: alpha must be > 0");
  if (eps < 0.0) throw PreconditionError("keylemma: eps must be >= 0");
  if (basis.empty()) throw PreconditionError("keylemma: empty basis");
  if (!mu.is_positive()) throw PreconditionError("keylemma: measure must be positive");
  const TransitionKernel& k = op.kernel();
  const int n = k.size();
  if (a_set.universe_size() != n) {
    throw SpaceMismatchError("keylemma: set universe does not match carrier");
  }

  // Precondition alpha 1_A < k+(., Omega) on A.
  for (StateId x : a_set.ids()) {
    double pos_mass = 0.0;
    for (int j = 0; j < n; ++j) pos_mass += std::max(k.entry(x, j), 0.0);
    if (!(pos_mass > alpha)) {
      throw PreconditionError("keylemma: alpha is not strictly below k+(x, Omega) at state " +
                              std::to_string(x));
    }
  }

  // E_n = A intersect {k(., B_n) > alpha}, disjointified in basis order.
  std::vector<StateSubset> pieces;
  StateSubset covered(n);
  for (const BasisSet& b : basis) {
    StateSubset level(n);
    for (StateId x : a_set.ids()) {
      if (k.row_mass(x, b.members) > alpha) level.add(x);
    }
    pieces.push_back(level.minus(covered));
    covered = covered.unioned(level);
  }

  // Truncate once the retained mass reaches mu(A) - eps/alpha.
  const double target = mu.mass_on(a_set) - eps / alpha;
  std::size_t cutoff = 0;
  StateSubset retained(n);
  bool reached = false;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    retained = retained.unioned(pieces[i]);
    if (mu.mass_on(retained) >= target) {
      cutoff = i + 1;
      reached = true;
      break;
    }
  }
  if (!reached) {
    throw PreconditionError(
        "keylemma: basis does not resolve the set at this level; "
        "retained mass stays below mu(A) - eps/alpha");
  }

  // Refine B_1..B_N to disjoint pieces; each retained B_n is the disjoint
  // union of the refined sets it owns, so summing k over the refined sets
  // reproduces k(., B_n) exactly.
  const std::vector<BasisSet> used(basis.begin(), basis.begin() + cutoff);
  const Refinement refinement = refine_to_disjoint(used);

  double sum = 0.0;
  for (std::size_t m = 0; m < refinement.parts.size(); ++m) {
    for (int owner : refinement.owners[m]) {
      for (StateId x : pieces[owner].ids()) {
        sum += k.row_mass(x, refinement.parts[m].members) * mu.weight(x);
      }
    }
  }
  return sum;
}

BlackBoxOperator::BlackBoxOperator(SpacePtr space, Map map, std::string name)
    : space_(std::move(space)), map_(std::move(map)), name_(std::move(name)) {
  if (!space_) throw PreconditionError("black box operator: null space");
  if (!map_) throw PreconditionError("black box operator: empty map");
}

SignedMeasure BlackBoxOperator::operator()(const SignedMeasure& mu) const {
  require_same_space(space_, mu.space(), "black box operator");
  SignedMeasure out = map_(mu);
  require_same_space(space_, out.space(), "black box operator result");
  return out;
}

double BlackBoxOperator::linearity_defect(
    const std::vector<std::pair<SignedMeasure, SignedMeasure>>& probes) const {
  double defect = 0.0;
  for (const auto& [mu, nu] : probes) {
    const SignedMeasure additive = (*this)(mu + nu);
    defect = std::max(defect, tv_distance(additive, (*this)(mu) + (*this)(nu)));
    const SignedMeasure scaled = (*this)(mu * 2.0);
    defect = std::max(defect, tv_distance(scaled, (*this)(mu) * 2.0));
  }
  return defect;
}

TransitionKernel reconstruct_kernel(const BlackBoxOperator& op) {
  const SpacePtr& space = op.space();
  std::vector<SignedMeasure> rows;
  rows.reserve(space->size());
  for (int x = 0; x < space->size(); ++x) rows.push_back(op(dirac(space, x)));
  return TransitionKernel::from_rows(rows);
}

WeakContinuityReport weak_continuity_check(const BlackBoxOperator& op,
                                           const std::vector<SignedMeasure>& tests,
                                           double tol) {
  if (tests.empty()) throw PreconditionError("weak_continuity_check: no test measures");
  const MeasureOperator reconstructed(reconstruct_kernel(op));
  WeakContinuityReport report;
  report.weakly_continuous = true;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const double dev = tv_distance(reconstructed.apply(tests[i]), op(tests[i]));
    report.max_deviation = std::max(report.max_deviation, dev);
    if (dev > tol && report.weakly_continuous) {
      report.weakly_continuous = false;
      report.witness_index = static_cast<int>(i);
      report.witness = tests[i];
    }
  }
  return report;
}

namespace {

std::vector<std::pair<std::string, BoundedFunction>> continuity_probes(
    const SpacePtr& space, double tau) {
  const int N = space->truncation();
  const int n = space->size();
  auto ramp = [&](double cutoff) {
    std::vector<double> v(n, 0.0);
    for (int m = 1; m <= N; ++m) {
      const double value = std::max(0.0, 1.0 - m / cutoff);
      v[space->id_of_sequence_index(m)] = value;
      v[space->id_of_sequence_index(-m)] = value;
    }
    return BoundedFunction(space, std::move(v));
  };
  std::vector<double> inverse(n, 0.0);
  for (int m = 1; m <= N; ++m) {
    inverse[space->id_of_sequence_index(m)] = 1.0 / (m * double(m));
    inverse[space->id_of_sequence_index(-m)] = 1.0 / (m * double(m));
  }
  std::vector<std::pair<std::string, BoundedFunction>> probes;
  probes.emplace_back("constant_one", BoundedFunction::constant(space, 1.0));
  probes.emplace_back("constant_negative_half", BoundedFunction::constant(space, -0.5));
  probes.emplace_back("inverse_square_tail", BoundedFunction(space, std::move(inverse)));
  probes.emplace_back("ramp_half", ramp(N / 2.0));
  probes.emplace_back("ramp_quarter", ramp(N / 4.0));
  // Keep only probes that are themselves continuous at this truncation and
  // tolerance; on very short sequences the decaying tails may not be.
  std::erase_if(probes, [&](const auto& entry) {
    return !is_continuous(entry.second, space, tau);
  });
  return probes;
}

}  // namespace

CbInvarianceReport cb_invariance_check(const MeasureOperator& op, double tau) {
  const SpacePtr& space = op.space();
  if (space->kind() != TopologyKind::two_sided_sequence) {
    throw PreconditionError("cb_invariance_check needs a two-sided sequence space");
  }
  CbInvarianceReport report;
  report.invariant = true;
  for (const auto& [name, probe] : continuity_probes(space, tau)) {
    const bool ok = is_continuous(op.adjoint(probe), space, tau);
    report.probe_results.emplace_back(name, ok);
    if (!ok && report.invariant) {
      report.invariant = false;
      report.failing_probe = name;
    }
  }
  return report;
}

TransitionKernel mass_rank_one_kernel(const SpacePtr& space, const SignedMeasure& nu) {
  if (!space) throw PreconditionError("mass_rank_one_kernel: null space");
  require_same_space(space, nu.space(), "mass_rank_one_kernel");
  std::vector<SignedMeasure> rows(space->size(), nu);
  return TransitionKernel::from_rows(rows);
}

BlackBoxOperator rank_one_ac_operator(const SpacePtr& space, const SignedMeasure& nu) {
  if (!space) throw PreconditionError("rank_one_ac_operator: null space");
  require_same_space(space, nu.space(), "rank_one_ac_operator");
  auto map = [nu](const SignedMeasure& mu) {
    if (mu.support().count() <= 1) {
      // Presented as a scaled point mass: purely atomic, no AC part.
      return SignedMeasure::zero(mu.space());
    }
    return nu * band_projection_ac(mu).mass();
  };
  return BlackBoxOperator(space, std::move(map), "phi_tensor_nu");
}

}  // namespace klat
