#include "klat/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <sstream>

#include "klat/errors.hpp"
#include "klat/measure_operator.hpp"

namespace klat {

namespace {

// Small dense row-major matrix helpers for the exponential core.

std::vector<double> mat_mul(int n, const std::vector<double>& a,
                            const std::vector<double>& b) {
  std::vector<double> c(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const double aik = a[static_cast<std::size_t>(i) * n + k];
      if (aik == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        c[static_cast<std::size_t>(i) * n + j] +=
            aik * b[static_cast<std::size_t>(k) * n + j];
      }
    }
  }
  return c;
}

std::vector<double> mat_identity(int n) {
  std::vector<double> e(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i) * n + i] = 1.0;
  return e;
}

double inf_norm(int n, const std::vector<double>& a) {
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += std::abs(a[static_cast<std::size_t>(i) * n + j]);
    norm = std::max(norm, row);
  }
  return norm;
}

// Solve A X = B by Gauss-Jordan elimination with partial pivoting; X
// overwrites B.
void solve_inplace(int n, std::vector<double> a, std::vector<double>& b) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[static_cast<std::size_t>(r) * n + col]) >
          std::abs(a[static_cast<std::size_t>(pivot) * n + col])) {
        pivot = r;
      }
    }
    if (a[static_cast<std::size_t>(pivot) * n + col] == 0.0) {
      throw Error("matrix exponential: singular Pade denominator");
    }
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a[static_cast<std::size_t>(col) * n + j],
                  a[static_cast<std::size_t>(pivot) * n + j]);
        std::swap(b[static_cast<std::size_t>(col) * n + j],
                  b[static_cast<std::size_t>(pivot) * n + j]);
      }
    }
    const double d = a[static_cast<std::size_t>(col) * n + col];
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[static_cast<std::size_t>(r) * n + col] / d;
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        a[static_cast<std::size_t>(r) * n + j] -=
            f * a[static_cast<std::size_t>(col) * n + j];
        b[static_cast<std::size_t>(r) * n + j] -=
            f * b[static_cast<std::size_t>(col) * n + j];
      }
    }
  }
  for (int r = 0; r < n; ++r) {
    const double d = a[static_cast<std::size_t>(r) * n + r];
    for (int j = 0; j < n; ++j) b[static_cast<std::size_t>(r) * n + j] /= d;
  }
}

// Scaling-and-squaring with a diagonal [6/6] Pade core; machine-accurate
// once the scaled norm is below 1/4.
std::vector<double> pade_expm(int n, std::vector<double> a) {
  static constexpr double kC[7] = {1.0,         1.0 / 2.0,     5.0 / 44.0,
                                   1.0 / 66.0,  1.0 / 792.0,   1.0 / 15840.0,
                                   1.0 / 665280.0};
  int squarings = 0;
  const double norm = inf_norm(n, a);
  if (norm > 0.25) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
    const double scale = std::ldexp(1.0, -squarings);
    for (double& v : a) v *= scale;
  }
  const std::vector<double> a2 = mat_mul(n, a, a);
  const std::vector<double> a4 = mat_mul(n, a2, a2);
  const std::vector<double> a6 = mat_mul(n, a2, a4);
  const std::vector<double> id = mat_identity(n);
  std::vector<double> u_core(static_cast<std::size_t>(n) * n);
  std::vector<double> v(static_cast<std::size_t>(n) * n);
  for (std::size_t i = 0; i < u_core.size(); ++i) {
    u_core[i] = kC[1] * id[i] + kC[3] * a2[i] + kC[5] * a4[i];
    v[i] = kC[0] * id[i] + kC[2] * a2[i] + kC[4] * a4[i] + kC[6] * a6[i];
  }
  const std::vector<double> u = mat_mul(n, a, u_core);
  std::vector<double> numer(v), denom(v);
  for (std::size_t i = 0; i < v.size(); ++i) {
    numer[i] += u[i];
    denom[i] -= u[i];
  }
  solve_inplace(n, std::move(denom), numer);
  for (int s = 0; s < squarings; ++s) numer = mat_mul(n, numer, numer);
  return numer;
}

// Poisson-weighted powers of the uniformized chain I + Q/lambda.  Rows stay
// nonnegative by construction; the truncation deficit is below 1e-15.
std::vector<double> uniformized_expm(int n, const std::vector<double>& q, double t) {
  double lambda = 0.0;
  for (int i = 0; i < n; ++i) {
    lambda = std::max(lambda, std::abs(q[static_cast<std::size_t>(i) * n + i]));
  }
  if (lambda * t == 0.0) return mat_identity(n);
  if (lambda * t > 64.0) {
    const std::vector<double> half = uniformized_expm(n, q, t / 2.0);
    return mat_mul(n, half, half);
  }
  std::vector<double> p_tilde = mat_identity(n);
  for (std::size_t i = 0; i < p_tilde.size(); ++i) p_tilde[i] += q[i] / lambda;
  const double rate = lambda * t;
  double weight = std::exp(-rate);
  double cumulative = weight;
  std::vector<double> power = mat_identity(n);
  std::vector<double> sum(power);
  for (double& v : sum) v *= weight;
  for (int m = 1; m <= 2000 && cumulative < 1.0 - 1e-15; ++m) {
    weight *= rate / m;
    cumulative += weight;
    power = mat_mul(n, power, p_tilde);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += weight * power[i];
  }
  return sum;
}

}  // namespace

struct SemigroupModel::Cache {
  std::once_flag flag;
  std::optional<InvariantMeasureResult> invariant;
};

SemigroupModel::SemigroupModel(Variant variant, SpacePtr space,
                               std::vector<double> matrix)
    : variant_(variant),
      space_(std::move(space)),
      matrix_(std::move(matrix)),
      cache_(std::make_shared<Cache>()) {}

SemigroupModel SemigroupModel::discrete(const SpacePtr& space,
                                        std::vector<double> row_major) {
  if (!space) throw PreconditionError("semigroup model: null space");
  const int n = space->size();
  if (row_major.size() != static_cast<std::size_t>(n) * n) {
    throw SpaceMismatchError("semigroup model: matrix does not match carrier size");
  }
  for (int x = 0; x < n; ++x) {
    double mass = 0.0;
    for (int j = 0; j < n; ++j) {
      const double v = row_major[static_cast<std::size_t>(x) * n + j];
      if (!std::isfinite(v)) throw PreconditionError("step matrix has non-finite entry");
      if (v < -1e-12) {
        throw PreconditionError("step matrix row " + std::to_string(x) +
                                " has a negative entry");
      }
      mass += v;
    }
    if (std::abs(mass - 1.0) > 1e-12) {
      throw PreconditionError("step matrix row " + std::to_string(x) + " has mass " +
                              std::to_string(mass) + ", expected 1");
    }
  }
  return SemigroupModel(Variant::discrete, space, std::move(row_major));
}

SemigroupModel SemigroupModel::discrete(const TransitionKernel& step) {
  return discrete(step.space(), step.entries());
}

SemigroupModel SemigroupModel::continuous(const SpacePtr& space,
                                          std::vector<double> rates) {
  if (!space) throw PreconditionError("semigroup model: null space");
  const int n = space->size();
  if (rates.size() != static_cast<std::size_t>(n) * n) {
    throw SpaceMismatchError("semigroup model: matrix does not match carrier size");
  }
  for (int x = 0; x < n; ++x) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const double v = rates[static_cast<std::size_t>(x) * n + j];
      if (!std::isfinite(v)) throw PreconditionError("rate matrix has non-finite entry");
      if (x != j && v < 0.0) {
        throw PreconditionError("rate matrix has a negative off-diagonal at (" +
                                std::to_string(x) + "," + std::to_string(j) + ")");
      }
      sum += v;
    }
    if (std::abs(sum) > 1e-12) {
      throw PreconditionError("rate matrix row " + std::to_string(x) + " sums to " +
                              std::to_string(sum) + ", expected 0");
    }
  }
  return SemigroupModel(Variant::continuous, space, std::move(rates));
}

TransitionKernel SemigroupModel::evaluate(double t) const {
  if (!(t >= 0.0)) throw PreconditionError("evaluate: time must be >= 0");
  const int n = size();
  if (variant_ == Variant::discrete) {
    if (std::abs(t - std::llround(t)) > 1e-9) {
      throw PreconditionError("evaluate: discrete models need integer times");
    }
    long steps = std::llround(t);
    TransitionKernel result = TransitionKernel::identity(space_);
    TransitionKernel power(space_, matrix_);
    while (steps > 0) {
      if (steps & 1) result = compose(result, power);
      steps >>= 1;
      if (steps > 0) power = compose(power, power);
    }
    return result;
  }
  std::vector<double> scaled(matrix_);
  for (double& v : scaled) v *= t;
  std::vector<double> e = pade_expm(n, std::move(scaled));
  if (*std::min_element(e.begin(), e.end()) < -1e-12) {
    e = uniformized_expm(n, matrix_, t);
  }
  return TransitionKernel(space_, std::move(e));
}

TransitionKernel evaluate_uniformized(const SemigroupModel& model, double t) {
  if (model.variant() != SemigroupModel::Variant::continuous) {
    throw PreconditionError("evaluate_uniformized needs a continuous model");
  }
  if (!(t >= 0.0)) throw PreconditionError("evaluate_uniformized: time must be >= 0");
  return TransitionKernel(model.space(),
                          uniformized_expm(model.size(), model.matrix(), t));
}

bool is_markovian(const TransitionKernel& k, double mass_tol) {
  for (int x = 0; x < k.size(); ++x) {
    double mass = 0.0;
    for (int j = 0; j < k.size(); ++j) {
      const double v = k.entry(x, j);
      if (v < -1e-12) return false;
      mass += v;
    }
    if (std::abs(mass - 1.0) > mass_tol) return false;
  }
  return true;
}

namespace {

struct IterationOutcome {
  std::vector<double> weights;
  bool converged = false;
  long iterations = 0;
  double final_increment = 0.0;
};

// Damped power iteration nu <- (nu + nu K)/2.  Damping keeps the fixed space
// unchanged while killing rotation, so periodic chains settle as well.
IterationOutcome iterate_to_fixed_point(const TransitionKernel& k,
                                        std::vector<double> start, double tol,
                                        long cap) {
  const int n = k.size();
  IterationOutcome out;
  std::vector<double> next(n);
  for (long it = 0; it < cap; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int x = 0; x < n; ++x) {
      const double w = start[x];
      if (w == 0.0) continue;
      for (int j = 0; j < n; ++j) next[j] += w * k.entry(x, j);
    }
    double mass = 0.0;
    for (int j = 0; j < n; ++j) {
      next[j] = 0.5 * (next[j] + start[j]);
      mass += next[j];
    }
    double increment = 0.0;
    for (int j = 0; j < n; ++j) {
      next[j] /= mass;
      increment += std::abs(next[j] - start[j]);
    }
    start.swap(next);
    out.iterations = it + 1;
    out.final_increment = increment;
    if (increment <= tol) {
      out.converged = true;
      break;
    }
  }
  out.weights = std::move(start);
  return out;
}

}  // namespace

InvariantMeasureResult SemigroupModel::invariant_measure() const {
  std::call_once(cache_->flag, [this] {
    const TransitionKernel k = evaluate(1.0);
    const int n = size();
    // Iterate to machine-level increments so the fixed point itself is
    // accurate to ~1e-14; a rounding plateau below 1e-13 still counts.
    constexpr double kTol = 1e-15;
    constexpr double kPlateau = 1e-13;
    constexpr long kCap = 1000000;

    IterationOutcome uniform_run =
        iterate_to_fixed_point(k, std::vector<double>(n, 1.0 / n), kTol, kCap);

    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> random_start(n);
    double mass = 0.0;
    for (double& v : random_start) {
      v = 0.05 + unit(rng);
      mass += v;
    }
    for (double& v : random_start) v /= mass;
    const IterationOutcome random_run = iterate_to_fixed_point(k, random_start, kTol, kCap);

    InvariantMeasureResult result{SignedMeasure(space_, uniform_run.weights),
                                  false,
                                  false,
                                  uniform_run.iterations,
                                  0.0,
                                  0.0};
    const MeasureOperator op(k);
    result.residual = tv_distance(op.apply(result.measure), result.measure);
    const bool settled = (uniform_run.converged || uniform_run.final_increment <= kPlateau) &&
                         (random_run.converged || random_run.final_increment <= kPlateau);
    result.converged = settled && result.residual <= 1e-10;
    result.restart_gap =
        tv_distance(result.measure, SignedMeasure(space_, random_run.weights));
    result.unique = result.converged && result.restart_gap <= 1e-8;
    cache_->invariant = std::move(result);
  });
  return *cache_->invariant;
}

StochasticContinuityReport stochastic_continuity_check(
    const SemigroupModel& model, const std::vector<BoundedFunction>& functions,
    const std::vector<StateId>& states, const std::vector<double>& t_grid,
    double tau) {
  if (model.variant() != SemigroupModel::Variant::continuous) {
    throw PreconditionError(
        "stochastic_continuity_check: discrete models have no t -> 0 limit");
  }
  if (functions.empty() || states.empty() || t_grid.empty()) {
    throw PreconditionError("stochastic_continuity_check: empty probe family");
  }
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
    if (!(t_grid[i + 1] < t_grid[i])) {
      throw PreconditionError("stochastic_continuity_check: grid must decrease");
    }
  }
  if (t_grid.back() < 0.0) {
    throw PreconditionError("stochastic_continuity_check: negative time in grid");
  }

  StochasticContinuityReport report;
  report.pass = true;
  std::vector<MeasureOperator> ops;
  ops.reserve(t_grid.size());
  for (double t : t_grid) ops.emplace_back(model.evaluate(t));
  for (std::size_t fi = 0; fi < functions.size(); ++fi) {
    std::vector<BoundedFunction> images;
    images.reserve(ops.size());
    for (const MeasureOperator& op : ops) images.push_back(op.adjoint(functions[fi]));
    for (StateId x : states) {
      StochasticContinuityReport::Probe probe;
      probe.name = "f" + std::to_string(fi) + "@x" + std::to_string(x);
      probe.state = x;
      for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
        probe.deviations.emplace_back(t_grid[ti],
                                      std::abs(images[ti](x) - functions[fi](x)));
      }
      probe.final_deviation = probe.deviations.back().second;
      probe.pass = probe.final_deviation <= tau;
      report.pass = report.pass && probe.pass;
      report.probes.push_back(std::move(probe));
    }
  }
  return report;
}

RegularityReport regularity_check(const SemigroupModel& model, double t0, double tau) {
  if (!(t0 > 0.0)) throw PreconditionError("regularity_check: t0 must be > 0");
  const TransitionKernel k = model.evaluate(t0);
  RegularityReport report;
  report.pass = true;
  const StateSubset reference = k.row(0).support(tau);
  for (int x = 1; x < k.size(); ++x) {
    const StateSubset sx = k.row(x).support(tau);
    if (sx == reference) continue;
    report.pass = false;
    report.witness_states = std::make_pair(0, x);
    const StateSubset diff =
        sx.minus(reference).unioned(reference.minus(sx));
    report.witness_set_state = diff.ids().front();
    break;
  }
  return report;
}

PropagationReport regularity_propagation_check(const SemigroupModel& model, double t0,
                                               const std::vector<double>& r_grid,
                                               double tol, double tau) {
  const TransitionKernel k0 = model.evaluate(t0);
  const StateSubset reference = k0.row(0).support(tau);
  PropagationReport report;
  report.pass = true;
  for (double r : r_grid) {
    PropagationReport::Entry entry;
    entry.r = r;
    const TransitionKernel direct = model.evaluate(t0 + r);
    const TransitionKernel chained = compose(model.evaluate(r), k0);
    double err = 0.0;
    for (std::size_t i = 0; i < direct.entries().size(); ++i) {
      err = std::max(err, std::abs(direct.entries()[i] - chained.entries()[i]));
    }
    entry.compose_error = err;
    entry.rows_equivalent = true;
    for (int x = 0; x < direct.size() && entry.rows_equivalent; ++x) {
      entry.rows_equivalent = direct.row(x).support(tau) == reference;
    }
    entry.pass = entry.compose_error <= tol && entry.rows_equivalent;
    report.pass = report.pass && entry.pass;
    report.entries.push_back(entry);
  }
  return report;
}

OverlapReport overlap_check(const SemigroupModel& model, double s, double r,
                            double tau) {
  if (!(r > s) || !(s >= 0.0)) {
    throw PreconditionError("overlap_check: needs r > s >= 0");
  }
  const TransitionKernel q = kernel_meet(model.evaluate(s), model.evaluate(r));
  OverlapReport report;
  report.min_mass = q.row(0).mass();
  for (int x = 0; x < q.size(); ++x) {
    report.min_mass = std::min(report.min_mass, q.row(x).mass());
  }
  report.pass = report.min_mass > tau;
  return report;
}

ExpandingReport expanding_check(const SemigroupModel& model, double t,
                                const SignedMeasure& mu_ref, double tau) {
  require_same_space(model.space(), mu_ref.space(), "expanding_check");
  const StateSubset support = mu_ref.support(tau);
  if (support.empty()) {
    throw PreconditionError("expanding_check: reference measure has empty support");
  }
  const TransitionKernel k = model.evaluate(t);
  ExpandingReport report;
  report.pass = true;
  for (int x = 0; x < k.size() && report.pass; ++x) {
    for (StateId j : support.ids()) {
      if (!(k.entry(x, j) > tau)) {
        report.pass = false;
        report.witness = std::make_pair(x, j);
        break;
      }
    }
  }
  return report;
}

namespace {

std::vector<double> geometric_grid(const SemigroupModel& model, double t_max) {
  if (!(t_max > 0.0)) throw PreconditionError("doob_convergence: t_max must be > 0");
  if (model.variant() == SemigroupModel::Variant::discrete &&
      std::abs(t_max - std::llround(t_max)) > 1e-9) {
    throw PreconditionError("doob_convergence: discrete models need integer t_max");
  }
  std::vector<double> grid;
  for (double t = 1.0; t < t_max; t *= 2.0) grid.push_back(t);
  if (grid.empty() || grid.back() < t_max) grid.push_back(t_max);
  return grid;
}

}  // namespace

ConvergenceTrace doob_convergence(const SemigroupModel& model, const SignedMeasure& nu,
                                  double t_max, double tol) {
  require_same_space(model.space(), nu.space(), "doob_convergence");
  const InvariantMeasureResult invariant = model.invariant_measure();
  if (!invariant.converged || !invariant.unique) {
    throw PreconditionError(
        "doob_convergence: needs a unique invariant probability measure");
  }
  const SignedMeasure limit = invariant.measure * nu.mass();

  ConvergenceTrace trace;
  for (double t : geometric_grid(model, t_max)) {
    const MeasureOperator op(model.evaluate(t));
    trace.points.push_back({t, tv_distance(op.apply(nu), limit)});
  }
  trace.terminal_distance = trace.points.back().tv;
  trace.reached_tol = trace.terminal_distance <= tol;

  // Geometric rate fit over the trailing points: least squares on log
  // distances against time.
  std::vector<ConvergencePoint> tail;
  for (const ConvergencePoint& p : trace.points) {
    if (p.tv > 1e-300) tail.push_back(p);
  }
  if (tail.size() > 10) tail.erase(tail.begin(), tail.end() - 10);
  if (tail.size() >= 2) {
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (const ConvergencePoint& p : tail) {
      const double y = std::log(p.tv);
      st += p.t;
      sy += y;
      stt += p.t * p.t;
      sty += p.t * y;
    }
    const double m = static_cast<double>(tail.size());
    const double denom = m * stt - st * st;
    if (denom > 0.0) {
      trace.fitted_rate = std::exp((m * sty - st * sy) / denom);
    }
  }

  bool nondecreasing = true;
  for (std::size_t i = 0; i + 1 < trace.points.size(); ++i) {
    if (trace.points[i + 1].tv < trace.points[i].tv - 1e-15) {
      nondecreasing = false;
      break;
    }
  }
  trace.diverged = nondecreasing && trace.terminal_distance > tol;
  return trace;
}

namespace {

std::string pair_witness(const std::optional<std::pair<StateId, StateId>>& p,
                         const std::optional<StateId>& set_state) {
  if (!p) return "";
  std::ostringstream os;
  os << "rows " << p->first << " and " << p->second << " differ";
  if (set_state) os << " on A={" << *set_state << "}";
  return os.str();
}

}  // namespace

DoobReport doob_hypothesis_report(const SemigroupModel& model, double t0, double tau) {
  if (!(t0 > 0.0)) throw PreconditionError("doob_hypothesis_report: t0 must be > 0");
  DoobReport report;
  auto add = [&report](std::string name, bool pass, std::optional<double> value,
                       std::string witness) {
    report.checks.push_back({std::move(name), pass, value, std::move(witness)});
  };
  const bool discrete = model.variant() == SemigroupModel::Variant::discrete;

  const TransitionKernel k0 = model.evaluate(t0);
  const bool markovian =
      is_markovian(k0) && is_markovian(model.evaluate(discrete ? 1.0 : t0 / 2.0));
  add("markovian", markovian, std::nullopt, markovian ? "" : "a row is not a probability measure");

  if (!discrete) {
    const SpacePtr& space = model.space();
    const int n = model.size();
    std::vector<BoundedFunction> fs;
    fs.push_back(BoundedFunction::constant(space, 1.0));
    std::vector<double> coordinate(n);
    for (int i = 0; i < n; ++i) coordinate[i] = n > 1 ? static_cast<double>(i) / (n - 1) : 0.0;
    fs.emplace_back(space, std::move(coordinate));
    fs.push_back(BoundedFunction::indicator(space, StateSubset::of(n, {0})));
    std::vector<StateId> states{0};
    if (n > 1) states.push_back(n - 1);
    const std::vector<double> grid{1.0, 0.1, 0.01, 1e-3, 1e-4, 1e-6, 1e-8};
    const StochasticContinuityReport sc =
        stochastic_continuity_check(model, fs, states, grid);
    double worst = 0.0;
    std::string witness;
    for (const auto& probe : sc.probes) {
      if (probe.final_deviation > worst) {
        worst = probe.final_deviation;
        if (!probe.pass) witness = probe.name;
      }
    }
    add("stochastic_continuity", sc.pass, worst, witness);
  }

  const RegularityReport reg = regularity_check(model, t0, tau);
  add("regularity", reg.pass, std::nullopt,
      pair_witness(reg.witness_states, reg.witness_set_state));

  const PropagationReport prop = regularity_propagation_check(
      model, t0, std::vector<double>{t0, 2.0 * t0, 3.0 * t0}, 1e-10, tau);
  double worst_compose = 0.0;
  for (const auto& entry : prop.entries) {
    worst_compose = std::max(worst_compose, entry.compose_error);
  }
  add("regularity_propagation", prop.pass, worst_compose, "");

  const OverlapReport overlap = overlap_check(model, t0, 2.0 * t0, tau);
  add("overlap", overlap.pass, overlap.min_mass,
      overlap.pass ? "" : "meet kernel has a massless row");

  const InvariantMeasureResult invariant = model.invariant_measure();
  const ExpandingReport expanding = expanding_check(model, t0, invariant.measure, tau);
  std::string expanding_witness;
  if (expanding.witness) {
    std::ostringstream os;
    os << "row " << expanding.witness->first << " does not charge state "
       << expanding.witness->second;
    expanding_witness = os.str();
  }
  add("expanding", expanding.pass, std::nullopt, expanding_witness);

  add("invariant_measure", invariant.converged, invariant.residual,
      invariant.converged ? "" : "power iteration did not reach its tolerance");
  add("uniqueness", invariant.unique, invariant.restart_gap,
      invariant.unique ? "" : "a second start reached a different fixed point");

  bool rows_equivalent = true;
  std::string equiv_witness;
  const StateSubset mu_support = invariant.measure.support(tau);
  for (int x = 0; x < k0.size(); ++x) {
    if (k0.row(x).support(tau) == mu_support) continue;
    rows_equivalent = false;
    std::ostringstream os;
    os << "row " << x << " is not equivalent to the invariant measure";
    equiv_witness = os.str();
    break;
  }
  add("invariant_equivalent_to_rows", rows_equivalent, std::nullopt, equiv_witness);

  report.all_pass = true;
  for (const DoobCheck& c : report.checks) report.all_pass = report.all_pass && c.pass;
  report.note =
      "fixed space identification on a finite Markov model: the fixed functional is "
      "the constant-one function and the quasi-interior fixed point is the invariant "
      "measure";
  return report;
}

}  // namespace klat
