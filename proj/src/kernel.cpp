#include "klat/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "klat/errors.hpp"

namespace klat {

TransitionKernel::TransitionKernel(SpacePtr space, std::vector<double> row_major)
    : space_(std::move(space)) {
  if (!space_) throw PreconditionError("kernel: null space");
  n_ = space_->size();
  if (row_major.size() != static_cast<std::size_t>(n_) * n_) {
    throw SpaceMismatchError("kernel: entry count does not match carrier size");
  }
  entries_ = std::move(row_major);
  for (double v : entries_) {
    if (!std::isfinite(v)) throw PreconditionError("kernel: entries must be finite");
  }
  for (int x = 0; x < n_; ++x) bound_ = std::max(bound_, row_total_variation(x));
}

TransitionKernel TransitionKernel::zero(const SpacePtr& space) {
  if (!space) throw PreconditionError("kernel: null space");
  const std::size_t n = space->size();
  return TransitionKernel(space, std::vector<double>(n * n, 0.0));
}

TransitionKernel TransitionKernel::identity(const SpacePtr& space) {
  if (!space) throw PreconditionError("kernel: null space");
  const int n = space->size();
  std::vector<double> e(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i) * n + i] = 1.0;
  return TransitionKernel(space, std::move(e));
}

TransitionKernel TransitionKernel::from_rows(
    const SpacePtr& space, const std::vector<std::vector<double>>& rows) {
  if (!space) throw PreconditionError("kernel: null space");
  const int n = space->size();
  if (static_cast<int>(rows.size()) != n) {
    throw SpaceMismatchError("kernel: row count does not match carrier size");
  }
  std::vector<double> e;
  e.reserve(static_cast<std::size_t>(n) * n);
  for (const std::vector<double>& r : rows) {
    if (static_cast<int>(r.size()) != n) {
      throw SpaceMismatchError("kernel: row length does not match carrier size");
    }
    e.insert(e.end(), r.begin(), r.end());
  }
  return TransitionKernel(space, std::move(e));
}

TransitionKernel TransitionKernel::from_rows(const std::vector<SignedMeasure>& rows) {
  if (rows.empty()) throw PreconditionError("kernel: no rows");
  const SpacePtr& space = rows.front().space();
  const int n = space->size();
  if (static_cast<int>(rows.size()) != n) {
    throw SpaceMismatchError("kernel: row count does not match carrier size");
  }
  std::vector<double> e;
  e.reserve(static_cast<std::size_t>(n) * n);
  for (const SignedMeasure& r : rows) {
    require_same_space(space, r.space(), "kernel rows");
    e.insert(e.end(), r.weights().begin(), r.weights().end());
  }
  return TransitionKernel(space, std::move(e));
}

SignedMeasure TransitionKernel::row(StateId x) const {
  if (!space_->contains(x)) {
    throw PreconditionError("kernel row: unknown state id " + std::to_string(x));
  }
  return SignedMeasure(space_,
                       std::vector<double>(entries_.begin() + index(x, 0),
                                           entries_.begin() + index(x, 0) + n_));
}

double TransitionKernel::row_mass(StateId x, const StateSubset& set) const {
  if (set.universe_size() != n_) {
    throw SpaceMismatchError("row_mass: subset universe does not match carrier");
  }
  double m = 0.0;
  for (StateId j : set.ids()) m += entries_[index(x, j)];
  return m;
}

double TransitionKernel::row_total_variation(StateId x) const {
  double m = 0.0;
  for (int j = 0; j < n_; ++j) m += std::abs(entries_[index(x, j)]);
  return m;
}

TransitionKernel TransitionKernel::operator+(const TransitionKernel& other) const {
  require_same_space(space_, other.space_, "kernel addition");
  std::vector<double> e(entries_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.entries_[i];
  return TransitionKernel(space_, std::move(e));
}

TransitionKernel TransitionKernel::operator-(const TransitionKernel& other) const {
  require_same_space(space_, other.space_, "kernel subtraction");
  std::vector<double> e(entries_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] -= other.entries_[i];
  return TransitionKernel(space_, std::move(e));
}

TransitionKernel TransitionKernel::operator*(double scalar) const {
  std::vector<double> e(entries_);
  for (double& v : e) v *= scalar;
  return TransitionKernel(space_, std::move(e));
}

bool TransitionKernel::operator==(const TransitionKernel& other) const {
  return same_space(space_, other.space_) && entries_ == other.entries_;
}

TransitionKernel modulus(const TransitionKernel& k) {
  std::vector<double> e(k.entries());
  for (double& v : e) v = std::abs(v);
  return TransitionKernel(k.space(), std::move(e));
}

TransitionKernel positive_part(const TransitionKernel& k) {
  std::vector<double> e(k.entries());
  for (double& v : e) v = std::max(v, 0.0);
  return TransitionKernel(k.space(), std::move(e));
}

TransitionKernel negative_part(const TransitionKernel& k) {
  std::vector<double> e(k.entries());
  for (double& v : e) v = std::max(-v, 0.0);
  return TransitionKernel(k.space(), std::move(e));
}

TransitionKernel kernel_meet(const TransitionKernel& a, const TransitionKernel& b) {
  require_same_space(a.space(), b.space(), "kernel_meet");
  std::vector<double> e(a.entries());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::min(e[i], b.entries()[i]);
  return TransitionKernel(a.space(), std::move(e));
}

TransitionKernel kernel_join(const TransitionKernel& a, const TransitionKernel& b) {
  require_same_space(a.space(), b.space(), "kernel_join");
  std::vector<double> e(a.entries());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::max(e[i], b.entries()[i]);
  return TransitionKernel(a.space(), std::move(e));
}

double bound(const TransitionKernel& k) { return k.bound(); }

double tv_via_test_functions(const TransitionKernel& k, StateId x,
                             std::uint64_t family_size) {
  if (family_size < 1) throw PreconditionError("tv_via_test_functions: empty family");
  if (!k.space()->contains(x)) {
    throw PreconditionError("tv_via_test_functions: unknown state id");
  }
  const int n = k.size();
  const std::vector<BasisSet> basis = generate_basis(k.space(), 0);
  std::vector<double> f(n);
  double best = 0.0;
  for (std::uint64_t m = 0; m < family_size; ++m) {
    std::fill(f.begin(), f.end(), 0.0);
    std::uint64_t digits = m;
    for (std::size_t b = 0; b < basis.size() && digits != 0; ++b) {
      const int digit = static_cast<int>(digits % 3);
      digits /= 3;
      if (digit == 0) continue;
      const double sign = digit == 1 ? 1.0 : -1.0;
      for (StateId j : basis[b].members.ids()) f[j] += sign;
    }
    double value = 0.0;
    for (int j = 0; j < n; ++j) {
      // Clip to the unit ball: f ^ 1 v (-1).
      value += std::clamp(f[j], -1.0, 1.0) * k.entry(x, j);
    }
    best = std::max(best, std::abs(value));
  }
  return best;
}

StateSubset superlevel_union(const TransitionKernel& k, double alpha,
                             const std::vector<BasisSet>& basis) {
  if (!(alpha > 0.0)) throw PreconditionError("superlevel_union: alpha must be > 0");
  if (basis.empty()) throw PreconditionError("superlevel_union: empty basis");
  for (const BasisSet& b : basis) {
    require_same_space(k.space(), b.space, "superlevel_union");
  }
  StateSubset out(k.size());
  for (const BasisSet& b : basis) {
    for (int x = 0; x < k.size(); ++x) {
      if (k.row_mass(x, b.members) > alpha) out.add(x);
    }
  }
  return out;
}

TransitionKernel kernel_sequence_sup(const std::vector<TransitionKernel>& terms,
                                     double sup_norm) {
  if (terms.empty()) throw PreconditionError("kernel_sequence_sup: empty sequence");
  TransitionKernel running = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) {
    running = kernel_join(running, terms[i]);
  }
  for (int x = 0; x < running.size(); ++x) {
    if (running.row_total_variation(x) > sup_norm + 1e-12) {
      throw PreconditionError(
          "kernel_sequence_sup: row " + std::to_string(x) +
          " exceeds the bound (mass " + std::to_string(running.row_total_variation(x)) +
          " > " + std::to_string(sup_norm) + ")");
    }
  }
  return running;
}

TransitionKernel compose(const TransitionKernel& a, const TransitionKernel& b) {
  require_same_space(a.space(), b.space(), "compose");
  const int n = a.size();
  std::vector<double> e(static_cast<std::size_t>(n) * n, 0.0);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const double axy = a.entry(x, y);
      if (axy == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        e[static_cast<std::size_t>(x) * n + j] += axy * b.entry(y, j);
      }
    }
  }
  return TransitionKernel(a.space(), std::move(e));
}

bool kernel_leq(const TransitionKernel& a, const TransitionKernel& b) {
  require_same_space(a.space(), b.space(), "kernel_leq");
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    if (a.entries()[i] > b.entries()[i]) return false;
  }
  return true;
}

TransitionKernel sequence_example_kernel(const SpacePtr& space) {
  if (!space || space->kind() != TopologyKind::two_sided_sequence) {
    throw PreconditionError("sequence_example_kernel needs a two-sided sequence space");
  }
  const int N = space->truncation();
  TransitionKernel k = TransitionKernel::zero(space);
  std::vector<double> e(k.entries());
  const int n = space->size();
  for (int m = 1; m <= N; ++m) {
    const StateId from = space->id_of_sequence_index(m);
    const StateId succ =
        m < N ? space->id_of_sequence_index(m + 1) : space->infinity_id();
    e[static_cast<std::size_t>(from) * n + from] += 1.0;
    e[static_cast<std::size_t>(from) * n + succ] -= 1.0;
  }
  return TransitionKernel(space, std::move(e));
}

}  // namespace klat
