#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hiqec/errors.hpp"
#include "hiqec/walsh.hpp"

namespace hiqec {

inline constexpr double kNormTolerance = 1e-10;

// Normalized real amplitude vector over the 2^n computational basis states.
class RealWavefunction {
public:
  explicit RealWavefunction(std::vector<double> amplitudes)
      : amplitudes_(std::move(amplitudes)), n_(log2_exact(amplitudes_.size())) {
    check_qubit_count(n_);
    double norm2 = 0.0;
    for (double a : amplitudes_) {
      norm2 += a * a;
    }
    if (std::abs(norm2 - 1.0) > kNormTolerance) {
      throw ValidationError("wavefunction norm^2 = " + std::to_string(norm2) +
                            " deviates from 1 beyond tolerance");
    }
  }

  int num_qubits() const { return n_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  const std::vector<double> &amplitudes() const { return amplitudes_; }

private:
  std::vector<double> amplitudes_;
  int n_;
};

// Vector of basis-state probabilities |psi_l|^2.
struct ProbabilityVector {
  std::vector<double> p;

  int num_qubits() const { return log2_exact(p.size()); }
};

// Expectation values <O_j> of every Z-string basis operator, indexed by j.
// Entry 0 is 1 (identity) and all entries lie in [-1, 1].
class ExpectationVector {
public:
  explicit ExpectationVector(std::vector<double> values)
      : values_(std::move(values)), n_(log2_exact(values_.size())) {
    if (std::abs(values_[0] - 1.0) > 1e-12) {
      throw ValidationError("expectation of the identity deviates from 1");
    }
    for (double v : values_) {
      if (std::abs(v) > 1.0 + 1e-12) {
        throw ValidationError("basis expectation outside [-1, 1]");
      }
    }
  }

  int num_qubits() const { return n_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t j) const { return values_[j]; }
  const std::vector<double> &values() const { return values_; }

private:
  std::vector<double> values_;
  int n_;
};

namespace detail {

inline std::vector<double> normalized(std::vector<double> v) {
  double norm2 = 0.0;
  for (double x : v) {
    norm2 += x * x;
  }
  if (norm2 <= 0.0) {
    throw ValidationError("cannot normalize a zero vector");
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double &x : v) {
    x *= inv;
  }
  return v;
}

} // namespace detail

// Digitized Gaussian: psi_l = N exp[-((l - mu)/sigma)^2 / 4], unit norm.
// mu and sigma are in grid units.
inline RealWavefunction gaussian(int n, double mu, double sigma) {
  check_qubit_count(n);
  if (!(sigma > 0.0)) {
    throw ParameterError("gaussian width must be positive, got " +
                         std::to_string(sigma));
  }
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> amps(dim);
  for (std::size_t l = 0; l < dim; ++l) {
    const double z = (static_cast<double>(l) - mu) / sigma;
    amps[l] = std::exp(-0.25 * z * z);
  }
  return RealWavefunction(detail::normalized(std::move(amps)));
}

// Reproducible pseudo-random state: amplitudes i.i.d. uniform on [0, 1),
// then normalized. Uses a fixed splitmix64 stream mapped to doubles via
// (x >> 11) * 2^-53, so identical seeds give identical vectors on every
// platform (std::uniform_real_distribution is implementation-defined).
inline RealWavefunction random_state(int n, std::uint64_t seed) {
  check_qubit_count(n);
  const std::size_t dim = std::size_t{1} << n;
  std::uint64_t s = seed;
  auto next = [&s]() {
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  std::vector<double> amps(dim);
  for (std::size_t l = 0; l < dim; ++l) {
    amps[l] = static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  return RealWavefunction(detail::normalized(std::move(amps)));
}

inline ProbabilityVector probabilities(const RealWavefunction &w) {
  std::vector<double> p(w.dimension());
  for (std::size_t l = 0; l < p.size(); ++l) {
    const double a = w.amplitudes()[l];
    p[l] = a * a;
  }
  return ProbabilityVector{std::move(p)};
}

// <O_j> for every j: the Walsh-Hadamard transform of the probability
// vector, i.e. entry j equals sum_l |psi_l|^2 (-1)^popcount(j & l).
// Residual norm slack inside the wavefunction tolerance is divided out so
// <O_0> = 1 holds to full precision.
inline ExpectationVector expectations(const RealWavefunction &w) {
  ProbabilityVector p = probabilities(w);
  double total = 0.0;
  for (double v : p.p) {
    total += v;
  }
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw ValidationError("probability vector does not sum to 1");
  }
  for (double &v : p.p) {
    v /= total;
  }
  return ExpectationVector(fwht(std::move(p.p)));
}

} // namespace hiqec
