#ifndef KLAT_MEASURE_HPP
#define KLAT_MEASURE_HPP

#include <vector>

#include "klat/state_space.hpp"

namespace klat {

// Absolute threshold below which a weight does not count as support.
inline constexpr double kDefaultSupportTol = 1e-12;

/// Signed measure on a finite carrier, stored as one weight per state.
/// For Cell states the weight is the measure OF the cell (density times
/// reference weight).  Values are immutable after construction.
class SignedMeasure {
 public:
  SignedMeasure(SpacePtr space, std::vector<double> weights);
  static SignedMeasure zero(const SpacePtr& space);

  const SpacePtr& space() const { return space_; }
  int size() const { return static_cast<int>(weights_.size()); }
  double weight(StateId i) const { return weights_.at(i); }
  const std::vector<double>& weights() const { return weights_; }

  double mass() const;                            // mu(Omega)
  double mass_on(const StateSubset& set) const;   // mu(A)
  double total_variation() const;                 // |mu|(Omega)
  bool is_positive(double slack = 0.0) const;
  StateSubset support(double tau = kDefaultSupportTol) const;

  SignedMeasure operator+(const SignedMeasure& other) const;
  SignedMeasure operator-(const SignedMeasure& other) const;
  SignedMeasure operator*(double scalar) const;
  friend SignedMeasure operator*(double scalar, const SignedMeasure& mu) {
    return mu * scalar;
  }
  bool operator==(const SignedMeasure& other) const;

 private:
  SpacePtr space_;
  std::vector<double> weights_;
};

/// Unit point mass at state x.
SignedMeasure dirac(const SpacePtr& space, StateId x);

double total_variation(const SignedMeasure& mu);

struct JordanDecomposition {
  SignedMeasure positive;
  SignedMeasure negative;
};

/// mu = mu+ - mu- with disjoint supports; on a finite carrier entrywise.
JordanDecomposition jordan_decomposition(const SignedMeasure& mu);

struct HahnSets {
  StateSubset positive;
  StateSubset negative;
};

/// Carrier split with mu >= 0 on the positive part and mu <= 0 on the
/// negative part.  Zero-weight states go to the negative side.
HahnSets hahn_sets(const SignedMeasure& mu);

/// <f, mu> = sum over states of f(x) mu({x}).
double integrate(const BoundedFunction& f, const SignedMeasure& mu);

SignedMeasure measure_sup(const SignedMeasure& a, const SignedMeasure& b);
SignedMeasure measure_inf(const SignedMeasure& a, const SignedMeasure& b);

/// Setwise supremum of an increasing sequence dominated by `bound`.  The
/// caller supplies a finite tail; the last term is taken as the limit (a
/// tail is considered converged once TV increments drop below 1e-12).
SignedMeasure sequence_sup(const std::vector<SignedMeasure>& terms,
                           const SignedMeasure& bound);

bool absolutely_continuous(const SignedMeasure& mu, const SignedMeasure& nu,
                           double tau = kDefaultSupportTol);
bool equivalent(const SignedMeasure& mu, const SignedMeasure& nu,
                double tau = kDefaultSupportTol);

/// Total variation of mu - nu; the norm metric on measures.
double tv_distance(const SignedMeasure& mu, const SignedMeasure& nu);

/// Band projection onto the atomless band: zeroes Atom states, keeps Cell
/// states.  Idempotent and contractive in TV norm.
SignedMeasure band_projection_ac(const SignedMeasure& mu);

}  // namespace klat

#endif
