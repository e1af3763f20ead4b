#ifndef KLAT_TESTS_SUPPORT_HPP
#define KLAT_TESTS_SUPPORT_HPP

// Shared test utilities and independent oracles.  Everything here is kept
// separate from the library code paths it checks: linear solves, the Taylor
// exponential, and subset enumeration are written from scratch.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "klat/kernel.hpp"
#include "klat/measure.hpp"
#include "klat/state_space.hpp"

namespace klat_tests {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline klat::SignedMeasure random_measure(std::mt19937_64& rng,
                                          const klat::SpacePtr& space, double lo,
                                          double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> w(space->size());
  for (double& v : w) v = dist(rng);
  return klat::SignedMeasure(space, std::move(w));
}

inline klat::SignedMeasure random_positive_measure(std::mt19937_64& rng,
                                                   const klat::SpacePtr& space,
                                                   double hi = 1.0) {
  return random_measure(rng, space, 0.0, hi);
}

inline klat::TransitionKernel random_kernel(std::mt19937_64& rng,
                                            const klat::SpacePtr& space, double lo,
                                            double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  const int n = space->size();
  std::vector<double> e(static_cast<std::size_t>(n) * n);
  for (double& v : e) v = dist(rng);
  return klat::TransitionKernel(space, std::move(e));
}

inline klat::TransitionKernel random_stochastic_kernel(std::mt19937_64& rng,
                                                       const klat::SpacePtr& space) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  const int n = space->size();
  std::vector<double> e(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x) {
    double mass = 0.0;
    for (int j = 0; j < n; ++j) {
      const double v = 0.05 + dist(rng);
      e[static_cast<std::size_t>(x) * n + j] = v;
      mass += v;
    }
    for (int j = 0; j < n; ++j) e[static_cast<std::size_t>(x) * n + j] /= mass;
  }
  return klat::TransitionKernel(space, std::move(e));
}

// Mass of a measure over the subset encoded by a bitmask; independent of
// StateSubset.
inline double mask_mass(const std::vector<double>& weights, std::uint64_t mask) {
  double m = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if ((mask >> i) & 1u) m += weights[i];
  }
  return m;
}

// Gaussian elimination with partial pivoting; throws on singular systems.
inline std::vector<double> gauss_solve(int n, std::vector<double> a,
                                       std::vector<double> b) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[static_cast<std::size_t>(r) * n + col]) >
          std::abs(a[static_cast<std::size_t>(pivot) * n + col])) {
        pivot = r;
      }
    }
    if (a[static_cast<std::size_t>(pivot) * n + col] == 0.0) {
      throw std::runtime_error("gauss_solve: singular matrix");
    }
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a[static_cast<std::size_t>(col) * n + j],
                  a[static_cast<std::size_t>(pivot) * n + j]);
      }
      std::swap(b[col], b[pivot]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = a[static_cast<std::size_t>(r) * n + col] /
                       a[static_cast<std::size_t>(col) * n + col];
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) {
        a[static_cast<std::size_t>(r) * n + j] -=
            f * a[static_cast<std::size_t>(col) * n + j];
      }
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int j = r + 1; j < n; ++j) acc -= a[static_cast<std::size_t>(r) * n + j] * x[j];
    x[r] = acc / a[static_cast<std::size_t>(r) * n + r];
  }
  return x;
}

// Stationary distribution of a stochastic matrix: solve mu P = mu with the
// first balance equation replaced by normalization.
inline std::vector<double> stationary_oracle(int n, const std::vector<double>& p) {
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> b(n, 0.0);
  for (int j = 0; j < n; ++j) a[j] = 1.0;  // sum mu = 1
  b[0] = 1.0;
  for (int j = 1; j < n; ++j) {
    for (int x = 0; x < n; ++x) {
      a[static_cast<std::size_t>(j) * n + x] = p[static_cast<std::size_t>(x) * n + j];
    }
    a[static_cast<std::size_t>(j) * n + j] -= 1.0;
  }
  return gauss_solve(n, std::move(a), std::move(b));
}

// Stationary distribution of a conservative rate matrix: mu Q = 0.
inline std::vector<double> stationary_rates_oracle(int n, const std::vector<double>& q) {
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> b(n, 0.0);
  for (int j = 0; j < n; ++j) a[j] = 1.0;
  b[0] = 1.0;
  for (int j = 1; j < n; ++j) {
    for (int x = 0; x < n; ++x) {
      a[static_cast<std::size_t>(j) * n + x] = q[static_cast<std::size_t>(x) * n + j];
    }
  }
  return gauss_solve(n, std::move(a), std::move(b));
}

// Scaled-and-squared Taylor series for exp(tQ); independent of the library's
// Pade and uniformization routes.
inline std::vector<double> taylor_expm(int n, std::vector<double> q, double t) {
  for (double& v : q) v *= t;
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += std::abs(q[static_cast<std::size_t>(i) * n + j]);
    norm = std::max(norm, row);
  }
  int squarings = 0;
  if (norm > 0.25) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
    const double scale = std::ldexp(1.0, -squarings);
    for (double& v : q) v *= scale;
  }
  auto mul = [n](const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> z(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        const double v = x[static_cast<std::size_t>(i) * n + k];
        if (v == 0.0) continue;
        for (int j = 0; j < n; ++j) {
          z[static_cast<std::size_t>(i) * n + j] += v * y[static_cast<std::size_t>(k) * n + j];
        }
      }
    }
    return z;
  };
  std::vector<double> sum(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) sum[static_cast<std::size_t>(i) * n + i] = 1.0;
  std::vector<double> term(sum);
  for (int k = 1; k <= 64; ++k) {
    term = mul(term, q);
    for (double& v : term) v /= k;
    double term_norm = 0.0;
    for (double v : term) term_norm = std::max(term_norm, std::abs(v));
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
    if (term_norm < 1e-22) break;
  }
  for (int s = 0; s < squarings; ++s) sum = mul(sum, sum);
  return sum;
}

// Subdominant eigenvalue of a 2x2 stochastic matrix.
inline double two_state_subdominant(const std::vector<double>& p) {
  return p[0] + p[3] - 1.0;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace klat_tests

#endif
