#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hiqec/errors.hpp"
#include "hiqec/observables.hpp"
#include "hiqec/states.hpp"
#include "hiqec/walsh.hpp"

namespace hiqec {

// Per-qubit depolarizing strengths: eta_q is the probability that qubit q
// is hit by isotropic Pauli noise (X, Y, Z each with probability eta/3).
// With eta' = 3 eta / 4, eta' is the probability of replacement by the
// maximally mixed state.
class NoiseVector {
public:
  explicit NoiseVector(std::vector<double> eta) : eta_(std::move(eta)) {
    for (std::size_t q = 0; q < eta_.size(); ++q) {
      if (!(eta_[q] >= 0.0 && eta_[q] <= 1.0)) {
        throw ParameterError("eta[" + std::to_string(q) + "] = " +
                             std::to_string(eta_[q]) + " outside [0, 1]");
      }
    }
  }

  static NoiseVector zero(int n) {
    check_qubit_count(n);
    return NoiseVector(std::vector<double>(static_cast<std::size_t>(n), 0.0));
  }

  // All qubits noiseless except qubit q.
  static NoiseVector single(int n, int q, double eta) {
    check_qubit_count(n);
    if (q < 0 || q >= n) {
      throw ParameterError("qubit index out of range");
    }
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(q)] = eta;
    return NoiseVector(std::move(e));
  }

  int num_qubits() const { return static_cast<int>(eta_.size()); }
  double operator[](std::size_t q) const { return eta_[q]; }
  const std::vector<double> &eta() const { return eta_; }

private:
  std::vector<double> eta_;
};

// Linear response coefficients gamma_q of a normalized expectation value
// to depolarizing noise on each qubit:
//   <O>(eta) = <O>(0) [1 + sum_q gamma_q eta_q + O(eta^2)].
struct SensitivityProfile {
  std::vector<double> gamma; // indexed by qubit, 0 = most UV

  int num_qubits() const { return static_cast<int>(gamma.size()); }

  // IR qubit (index n-1) first; the ordering used in reduction tables.
  std::vector<double> ir_first() const {
    return std::vector<double>(gamma.rbegin(), gamma.rend());
  }
};

namespace detail {

inline void check_same_qubits(int a, int b, const char *what) {
  if (a != b) {
    throw DimensionError(std::string("qubit count mismatch in ") + what +
                         ": " + std::to_string(a) + " vs " +
                         std::to_string(b));
  }
}

} // namespace detail

inline double noiseless_expectation(const PauliDecomposition &b,
                                    const ExpectationVector &e) {
  detail::check_same_qubits(b.num_qubits(), e.num_qubits(),
                            "noiseless_expectation");
  double acc = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    acc += b[j] * e[j];
  }
  return acc;
}

// <O>(eta) under independent per-qubit depolarizing noise:
//   sum_j beta_j <O_j> prod_{q : j_q = 1} (1 - 4 eta_q / 3).
// A Z at a noisy qubit scales the j-th contribution by (1 - 4 eta / 3);
// an identity leaves it untouched.
inline double noisy_expectation(const PauliDecomposition &b,
                                const ExpectationVector &e,
                                const NoiseVector &eta) {
  detail::check_same_qubits(b.num_qubits(), e.num_qubits(),
                            "noisy_expectation");
  detail::check_same_qubits(b.num_qubits(), eta.num_qubits(),
                            "noisy_expectation");
  const int n = b.num_qubits();
  const std::size_t dim = b.size();
  // product over set bits of j, built up one qubit at a time
  std::vector<double> factor(dim, 1.0);
  for (int q = 0; q < n; ++q) {
    const double f = 1.0 - 4.0 * eta[static_cast<std::size_t>(q)] / 3.0;
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t j = bit; j < dim; ++j) {
      if (j & bit) {
        factor[j] = factor[j ^ bit] * f;
      }
    }
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    acc += b[j] * e[j] * factor[j];
  }
  return acc;
}

// Multilinear polynomial in the eta_q for a single basis term:
//   <O_j> prod_{q : j_q = 1} (1 - 4 eta_q / 3)
// expanded over subsets of the active qubits. Degree <= 1 per variable;
// the constant term is <O_j> itself.
struct NoisePolynomial {
  struct Term {
    std::uint32_t subset; // bitmask of eta variables in the monomial
    double coefficient;
  };

  std::uint32_t j;
  int n;
  std::vector<Term> terms; // ascending subset mask; terms[0] is the constant

  double constant() const { return terms.front().coefficient; }

  double coefficient(std::uint32_t subset) const {
    for (const Term &t : terms) {
      if (t.subset == subset) {
        return t.coefficient;
      }
    }
    return 0.0;
  }

  double evaluate(const NoiseVector &eta) const {
    double acc = 0.0;
    for (const Term &t : terms) {
      double m = t.coefficient;
      for (int q = 0; q < n; ++q) {
        if ((t.subset >> q) & 1u) {
          m *= eta[static_cast<std::size_t>(q)];
        }
      }
      acc += m;
    }
    return acc;
  }
};

inline NoisePolynomial noise_polynomial(const ExpectationVector &e,
                                        const BasisIndex &idx) {
  detail::check_same_qubits(e.num_qubits(), idx.n, "noise_polynomial");
  const double value = e[idx.j];
  NoisePolynomial poly{idx.j, idx.n, {}};
  // (s - m) & m walks the subsets of mask m in ascending order from 0
  std::uint32_t s = 0;
  while (true) {
    const int k = std::popcount(s);
    double c = value;
    for (int i = 0; i < k; ++i) {
      c *= -4.0 / 3.0;
    }
    poly.terms.push_back(NoisePolynomial::Term{s, c});
    if (s == idx.j) {
      break;
    }
    s = (s - idx.j) & idx.j;
  }
  return poly;
}

// gamma_q = -(4/3) sum_{j : j_q = 1} beta_j <O_j> / sum_j beta_j <O_j>,
// the exact derivative of noisy_expectation at eta = 0, normalized by the
// noiseless value.
inline SensitivityProfile sensitivities(const PauliDecomposition &b,
                                        const ExpectationVector &e) {
  detail::check_same_qubits(b.num_qubits(), e.num_qubits(), "sensitivities");
  const double denom = noiseless_expectation(b, e);
  if (std::abs(denom) <= 1e-12) {
    throw SensitivityError(
        "noiseless expectation value vanishes; sensitivities undefined");
  }
  const int n = b.num_qubits();
  SensitivityProfile profile;
  profile.gamma.assign(static_cast<std::size_t>(n), 0.0);
  for (int q = 0; q < n; ++q) {
    const std::size_t bit = std::size_t{1} << q;
    double num = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (j & bit) {
        num += b[j] * e[j];
      }
    }
    profile.gamma[static_cast<std::size_t>(q)] = -4.0 / 3.0 * num / denom;
  }
  return profile;
}

namespace detail {

using cmat = std::vector<std::complex<double>>; // row-major dense matrix

// out = K rho K^dagger with the 2x2 matrix K acting on qubit q.
inline void apply_kraus_term(const cmat &rho, const std::complex<double> k[4],
                             int q, std::size_t dim, cmat &scratch,
                             cmat &out) {
  const std::size_t bit = std::size_t{1} << q;
  // scratch = K . rho  (pairs of rows)
  for (std::size_t r = 0; r < dim; ++r) {
    const std::size_t r0 = r & ~bit;
    const std::size_t r1 = r | bit;
    const std::complex<double> a = (r & bit) ? k[2] : k[0];
    const std::complex<double> b = (r & bit) ? k[3] : k[1];
    for (std::size_t c = 0; c < dim; ++c) {
      scratch[r * dim + c] = a * rho[r0 * dim + c] + b * rho[r1 * dim + c];
    }
  }
  // out = scratch . K^dagger  (pairs of columns)
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      const std::size_t c0 = c & ~bit;
      const std::size_t c1 = c | bit;
      const std::complex<double> a = std::conj((c & bit) ? k[2] : k[0]);
      const std::complex<double> b = std::conj((c & bit) ? k[3] : k[1]);
      out[r * dim + c] = scratch[r * dim + c0] * a + scratch[r * dim + c1] * b;
    }
  }
}

} // namespace detail

inline constexpr int kOracleQubitLimit = 12;

// Brute-force reference: builds rho = |psi><psi|, pushes it through the
// full four-Kraus depolarizing channel on every qubit in turn, and returns
// Tr[rho' O]. Exponentially expensive (dense 4^n density matrix); intended
// as an independent cross-check of noisy_expectation, so it deliberately
// does not exploit the diagonality of O.
inline double kraus_oracle(const RealWavefunction &w,
                           const DiagonalObservable &o,
                           const NoiseVector &eta) {
  const int n = w.num_qubits();
  detail::check_same_qubits(n, o.num_qubits(), "kraus_oracle");
  detail::check_same_qubits(n, eta.num_qubits(), "kraus_oracle");
  if (n > kOracleQubitLimit) {
    throw ResourceError("kraus_oracle limited to " +
                        std::to_string(kOracleQubitLimit) +
                        " qubits (dense density matrix)");
  }
  const std::size_t dim = w.dimension();
  detail::cmat rho(dim * dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      rho[r * dim + c] = w.amplitudes()[r] * w.amplitudes()[c];
    }
  }

  detail::cmat scratch(dim * dim), term(dim * dim), next(dim * dim);
  for (int q = 0; q < n; ++q) {
    const double etaq = eta[static_cast<std::size_t>(q)];
    const double a0 = std::sqrt(1.0 - etaq);
    const double a = std::sqrt(etaq / 3.0);
    const std::complex<double> kraus_ops[4][4] = {
        {a0, 0.0, 0.0, a0},                          // sqrt(1-eta) I
        {0.0, a, a, 0.0},                            // sqrt(eta/3) X
        {0.0, {0.0, -a}, {0.0, a}, 0.0},             // sqrt(eta/3) Y
        {a, 0.0, 0.0, -a},                           // sqrt(eta/3) Z
    };
    std::fill(next.begin(), next.end(), std::complex<double>(0.0));
    for (const auto &k : kraus_ops) {
      detail::apply_kraus_term(rho, k, q, dim, scratch, term);
      for (std::size_t i = 0; i < next.size(); ++i) {
        next[i] += term[i];
      }
    }
    rho.swap(next);
  }

  std::complex<double> trace = 0.0;
  for (std::size_t l = 0; l < dim; ++l) {
    trace += rho[l * dim + l] * o.diag[l];
  }
  return trace.real();
}

// Exponential-decay fit of a sensitivity profile: least squares of
// log gamma against the position in the IR-first sequence (0 = IR qubit,
// increasing toward the UV). Only strictly positive entries enter the fit.
struct DecayFit {
  double xi;      // slope; negative when sensitivities decay toward the UV
  double quality; // coefficient of determination R^2
};

inline DecayFit decay_fit(const SensitivityProfile &g) {
  const int n = g.num_qubits();
  std::vector<double> xs, ys;
  for (int q = 0; q < n; ++q) {
    const double v = g.gamma[static_cast<std::size_t>(q)];
    if (v > 0.0) {
      xs.push_back(static_cast<double>(n - 1 - q));
      ys.push_back(std::log(v));
    }
  }
  if (xs.size() < 3) {
    throw FitError("decay fit needs at least 3 strictly positive "
                   "sensitivities, got " +
                   std::to_string(xs.size()));
  }
  const double m = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (slope * xs[i] + intercept);
    ss_res += r * r;
  }
  const double quality = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return DecayFit{slope, quality};
}

} // namespace hiqec
