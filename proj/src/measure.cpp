#include "klat/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "klat/errors.hpp"

namespace klat {

SignedMeasure::SignedMeasure(SpacePtr space, std::vector<double> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (!space_) throw PreconditionError("signed measure: null space");
  if (static_cast<int>(weights_.size()) != space_->size()) {
    throw SpaceMismatchError("signed measure: weight count does not match space");
  }
  for (double w : weights_) {
    if (!std::isfinite(w)) {
      throw PreconditionError("signed measure: weights must be finite");
    }
  }
}

SignedMeasure SignedMeasure::zero(const SpacePtr& space) {
  if (!space) throw PreconditionError("signed measure: null space");
  return SignedMeasure(space, std::vector<double>(space->size(), 0.0));
}

double SignedMeasure::mass() const {
  double m = 0.0;
  for (double w : weights_) m += w;
  return m;
}

double SignedMeasure::mass_on(const StateSubset& set) const {
  if (set.universe_size() != size()) {
    throw SpaceMismatchError("mass_on: subset universe does not match space");
  }
  double m = 0.0;
  for (StateId i : set.ids()) m += weights_[i];
  return m;
}

double SignedMeasure::total_variation() const {
  double m = 0.0;
  for (double w : weights_) m += std::abs(w);
  return m;
}

bool SignedMeasure::is_positive(double slack) const {
  for (double w : weights_) {
    if (w < -slack) return false;
  }
  return true;
}

StateSubset SignedMeasure::support(double tau) const {
  StateSubset s(size());
  for (int i = 0; i < size(); ++i) {
    if (std::abs(weights_[i]) > tau) s.add(i);
  }
  return s;
}

SignedMeasure SignedMeasure::operator+(const SignedMeasure& other) const {
  require_same_space(space_, other.space_, "measure addition");
  std::vector<double> w(weights_);
  for (int i = 0; i < size(); ++i) w[i] += other.weights_[i];
  return SignedMeasure(space_, std::move(w));
}

SignedMeasure SignedMeasure::operator-(const SignedMeasure& other) const {
  require_same_space(space_, other.space_, "measure subtraction");
  std::vector<double> w(weights_);
  for (int i = 0; i < size(); ++i) w[i] -= other.weights_[i];
  return SignedMeasure(space_, std::move(w));
}

SignedMeasure SignedMeasure::operator*(double scalar) const {
  std::vector<double> w(weights_);
  for (double& v : w) v *= scalar;
  return SignedMeasure(space_, std::move(w));
}

bool SignedMeasure::operator==(const SignedMeasure& other) const {
  return same_space(space_, other.space_) && weights_ == other.weights_;
}

SignedMeasure dirac(const SpacePtr& space, StateId x) {
  if (!space) throw PreconditionError("dirac: null space");
  if (!space->contains(x)) {
    throw PreconditionError("dirac: unknown state id " + std::to_string(x));
  }
  std::vector<double> w(space->size(), 0.0);
  w[x] = 1.0;
  return SignedMeasure(space, std::move(w));
}

double total_variation(const SignedMeasure& mu) { return mu.total_variation(); }

JordanDecomposition jordan_decomposition(const SignedMeasure& mu) {
  std::vector<double> pos(mu.size(), 0.0), neg(mu.size(), 0.0);
  for (int i = 0; i < mu.size(); ++i) {
    const double w = mu.weight(i);
    if (w > 0.0) {
      pos[i] = w;
    } else {
      neg[i] = -w;
    }
  }
  return {SignedMeasure(mu.space(), std::move(pos)),
          SignedMeasure(mu.space(), std::move(neg))};
}

HahnSets hahn_sets(const SignedMeasure& mu) {
  StateSubset positive(mu.size());
  for (int i = 0; i < mu.size(); ++i) {
    if (mu.weight(i) > 0.0) positive.add(i);  // ties go negative
  }
  return {positive, positive.complement()};
}

double integrate(const BoundedFunction& f, const SignedMeasure& mu) {
  require_same_space(f.space(), mu.space(), "integrate");
  double acc = 0.0;
  for (int i = 0; i < mu.size(); ++i) acc += f(i) * mu.weight(i);
  return acc;
}

SignedMeasure measure_sup(const SignedMeasure& a, const SignedMeasure& b) {
  require_same_space(a.space(), b.space(), "measure_sup");
  std::vector<double> w(a.size());
  for (int i = 0; i < a.size(); ++i) w[i] = std::max(a.weight(i), b.weight(i));
  return SignedMeasure(a.space(), std::move(w));
}

SignedMeasure measure_inf(const SignedMeasure& a, const SignedMeasure& b) {
  require_same_space(a.space(), b.space(), "measure_inf");
  std::vector<double> w(a.size());
  for (int i = 0; i < a.size(); ++i) w[i] = std::min(a.weight(i), b.weight(i));
  return SignedMeasure(a.space(), std::move(w));
}

SignedMeasure sequence_sup(const std::vector<SignedMeasure>& terms,
                           const SignedMeasure& bound) {
  if (terms.empty()) throw PreconditionError("sequence_sup: empty sequence");
  for (const SignedMeasure& t : terms) {
    require_same_space(t.space(), bound.space(), "sequence_sup");
  }
  for (std::size_t k = 0; k + 1 < terms.size(); ++k) {
    for (int i = 0; i < terms[k].size(); ++i) {
      if (terms[k + 1].weight(i) < terms[k].weight(i)) {
        throw PreconditionError("sequence_sup: sequence not increasing at term " +
                                std::to_string(k + 1) + ", state " + std::to_string(i));
      }
    }
  }
  std::vector<double> w(terms.front().weights());
  for (const SignedMeasure& t : terms) {
    for (int i = 0; i < t.size(); ++i) w[i] = std::max(w[i], t.weight(i));
  }
  for (int i = 0; i < bound.size(); ++i) {
    if (w[i] > bound.weight(i)) {
      throw PreconditionError("sequence_sup: sequence exceeds its bound at state " +
                              std::to_string(i));
    }
  }
  return SignedMeasure(terms.front().space(), std::move(w));
}

bool absolutely_continuous(const SignedMeasure& mu, const SignedMeasure& nu,
                           double tau) {
  require_same_space(mu.space(), nu.space(), "absolutely_continuous");
  return mu.support(tau).is_subset_of(nu.support(tau));
}

bool equivalent(const SignedMeasure& mu, const SignedMeasure& nu, double tau) {
  require_same_space(mu.space(), nu.space(), "equivalent");
  return mu.support(tau) == nu.support(tau);
}

double tv_distance(const SignedMeasure& mu, const SignedMeasure& nu) {
  require_same_space(mu.space(), nu.space(), "tv_distance");
  double d = 0.0;
  for (int i = 0; i < mu.size(); ++i) d += std::abs(mu.weight(i) - nu.weight(i));
  return d;
}

SignedMeasure band_projection_ac(const SignedMeasure& mu) {
  std::vector<double> w(mu.weights());
  for (int i = 0; i < mu.size(); ++i) {
    if (mu.space()->tag(i) == StateTag::atom) w[i] = 0.0;
  }
  return SignedMeasure(mu.space(), std::move(w));
}

}  // namespace klat
