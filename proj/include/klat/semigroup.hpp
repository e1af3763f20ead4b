#ifndef KLAT_SEMIGROUP_HPP
#define KLAT_SEMIGROUP_HPP

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "klat/kernel.hpp"
#include "klat/measure.hpp"
#include "klat/state_space.hpp"

namespace klat {

inline constexpr double kDefaultStochContTol = 1e-6;
inline constexpr double kDefaultConvergenceTol = 1e-8;

struct InvariantMeasureResult {
  SignedMeasure measure;
  bool converged = false;
  bool unique = false;
  long iterations = 0;
  double residual = 0.0;     // tv(T(1) mu, mu)
  double restart_gap = 0.0;  // tv between the fixed points of the two starts
};

/// Markov semigroup model: either a discrete-time chain given by its step
/// kernel or a continuous-time chain given by a conservative rate matrix.
/// evaluate(t) yields the time-t transition kernel; the invariant measure
/// is computed once by damped power iteration and cached.
class SemigroupModel {
 public:
  enum class Variant { discrete, continuous };

  static SemigroupModel discrete(const SpacePtr& space, std::vector<double> row_major);
  static SemigroupModel discrete(const TransitionKernel& step);
  static SemigroupModel continuous(const SpacePtr& space, std::vector<double> rates);

  Variant variant() const { return variant_; }
  const SpacePtr& space() const { return space_; }
  int size() const { return space_->size(); }
  const std::vector<double>& matrix() const { return matrix_; }

  /// Time-t kernel.  Discrete models need integer t (number of steps);
  /// continuous models use exp(tQ) via scaled Pade with a uniformization
  /// fallback that restores row positivity.
  TransitionKernel evaluate(double t) const;

  InvariantMeasureResult invariant_measure() const;

  SemigroupModel(const SemigroupModel&) = default;
  SemigroupModel& operator=(const SemigroupModel&) = default;

 private:
  SemigroupModel(Variant variant, SpacePtr space, std::vector<double> matrix);
  struct Cache;
  Variant variant_;
  SpacePtr space_;
  std::vector<double> matrix_;  // row-major P or Q
  std::shared_ptr<Cache> cache_;
};

/// exp(tQ) summed as Poisson-weighted powers of the uniformized chain;
/// independent route used to cross-check the Pade core.
TransitionKernel evaluate_uniformized(const SemigroupModel& model, double t);

/// Every row a probability measure: nonnegative entries, mass within
/// mass_tol of one.
bool is_markovian(const TransitionKernel& k, double mass_tol = 1e-9);

struct StochasticContinuityReport {
  struct Probe {
    std::string name;
    StateId state = 0;
    std::vector<std::pair<double, double>> deviations;  // (t, |T(t)f(x) - f(x)|)
    double final_deviation = 0.0;
    bool pass = false;
  };
  std::vector<Probe> probes;
  bool pass = false;
};

/// (T(t)f)(x) -> f(x) as t -> 0 along the grid, per probe pair.
StochasticContinuityReport stochastic_continuity_check(
    const SemigroupModel& model, const std::vector<BoundedFunction>& functions,
    const std::vector<StateId>& states, const std::vector<double>& t_grid,
    double tau = kDefaultStochContTol);

struct RegularityReport {
  bool pass = false;
  std::optional<std::pair<StateId, StateId>> witness_states;
  std::optional<StateId> witness_set_state;  // a state charged by one row only
};

/// All rows of the time-t0 kernel mutually absolutely continuous.
RegularityReport regularity_check(const SemigroupModel& model, double t0,
                                  double tau = kDefaultSupportTol);

struct PropagationReport {
  struct Entry {
    double r = 0.0;
    double compose_error = 0.0;  // max |k_{t0+r} - k_r k_{t0}|
    bool rows_equivalent = false;
    bool pass = false;
  };
  std::vector<Entry> entries;
  bool pass = false;
};

/// Chapman-Kolmogorov propagation of regularity: k_{t0+r} = k_r k_{t0} and
/// the propagated rows stay equivalent to the time-t0 rows.
PropagationReport regularity_propagation_check(const SemigroupModel& model, double t0,
                                               const std::vector<double>& r_grid,
                                               double tol = 1e-10,
                                               double tau = kDefaultSupportTol);

struct OverlapReport {
  bool pass = false;
  double min_mass = 0.0;  // min_x (k_s(x,.) ^ k_r(x,.))(Omega)
};

/// T(s) ^ T(r) > 0: the meet kernel keeps positive mass in every row.
OverlapReport overlap_check(const SemigroupModel& model, double s, double r,
                            double tau = kDefaultSupportTol);

struct ExpandingReport {
  bool pass = false;
  std::optional<std::pair<StateId, StateId>> witness;  // (row, uncharged state)
};

/// Every row of the time-t kernel charges every state in the support of
/// the reference measure.
ExpandingReport expanding_check(const SemigroupModel& model, double t,
                                const SignedMeasure& mu_ref,
                                double tau = kDefaultSupportTol);

struct ConvergencePoint {
  double t = 0.0;
  double tv = 0.0;
};

struct ConvergenceTrace {
  std::vector<ConvergencePoint> points;  // geometric time grid, t_max last
  double terminal_distance = 0.0;
  std::optional<double> fitted_rate;  // geometric decay per unit time
  bool reached_tol = false;
  bool diverged = false;  // distance never decreased and stayed above tol
};

/// Distance of T(t) nu to nu(Omega) mu along a geometric time grid, with a
/// least-squares geometric rate fit over the trailing points.
ConvergenceTrace doob_convergence(const SemigroupModel& model, const SignedMeasure& nu,
                                  double t_max, double tol = kDefaultConvergenceTol);

struct DoobCheck {
  std::string name;
  bool pass = false;
  std::optional<double> value;
  std::string witness;  // empty when passing
};

struct DoobReport {
  std::vector<DoobCheck> checks;
  bool all_pass = false;
  std::string note;
};

/// Full hypothesis checklist for convergence to the invariant measure:
/// Markovianity, stochastic continuity (continuous models), t0-regularity
/// and its propagation, overlap positivity, expansion, the invariant
/// measure with uniqueness, and equivalence of the invariant measure with
/// the time-t0 rows.
DoobReport doob_hypothesis_report(const SemigroupModel& model, double t0,
                                  double tau = kDefaultSupportTol);

}  // namespace klat

#endif
