#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hiqec/errors.hpp"
#include "hiqec/states.hpp"
#include "hiqec/walsh.hpp"

namespace hiqec {

// Real diagonal operator: eigenvalues on the computational basis states.
struct DiagonalObservable {
  std::vector<double> diag;
  std::string label;

  DiagonalObservable(std::vector<double> diag, std::string label)
      : diag(std::move(diag)), label(std::move(label)) {
    log2_exact(this->diag.size());
  }

  int num_qubits() const { return log2_exact(diag.size()); }
};

// Projection coefficients beta_j of a diagonal observable onto the
// Z-string basis, O = sum_j beta_j O_j.
class PauliDecomposition {
public:
  explicit PauliDecomposition(std::vector<double> beta)
      : beta_(std::move(beta)), n_(log2_exact(beta_.size())) {}

  int num_qubits() const { return n_; }
  std::size_t size() const { return beta_.size(); }
  double operator[](std::size_t j) const { return beta_[j]; }
  const std::vector<double> &beta() const { return beta_; }

private:
  std::vector<double> beta_;
  int n_;
};

// beta = 2^-n * fwht(diag). Exact inverse of recompose.
inline PauliDecomposition decompose(const DiagonalObservable &o) {
  std::vector<double> beta = fwht(o.diag);
  const double scale = 1.0 / static_cast<double>(beta.size());
  for (double &b : beta) {
    b *= scale;
  }
  return PauliDecomposition(std::move(beta));
}

inline DiagonalObservable recompose(const PauliDecomposition &b,
                                    std::string label = "recomposed") {
  return DiagonalObservable(fwht(b.beta()), std::move(label));
}

// Powers of the digitized field operator, symmetrized about the origin
// with endpoints +-1: diag entry l = ((2^n - 1 - 2l)/(2^n - 1))^p.
inline DiagonalObservable phi_power(int n, int p) {
  check_qubit_count(n);
  if (p < 1) {
    throw ParameterError("field power must be at least 1, got " +
                         std::to_string(p));
  }
  const std::size_t dim = std::size_t{1} << n;
  const double denom = static_cast<double>(dim - 1);
  std::vector<double> diag(dim);
  for (std::size_t l = 0; l < dim; ++l) {
    const double x =
        (denom - 2.0 * static_cast<double>(l)) / denom;
    double v = 1.0;
    for (int k = 0; k < p; ++k) {
      v *= x;
    }
    diag[l] = v;
  }
  return DiagonalObservable(std::move(diag),
                            "phi^" + std::to_string(p));
}

// Generic linearly spaced diagonal, for field windows other than the
// symmetric +-1 one (offset or unsymmetrized digitizations).
inline DiagonalObservable linspace_observable(int n, double first,
                                              double last,
                                              std::string label = "linspace") {
  check_qubit_count(n);
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> diag(dim);
  const double step = dim > 1 ? (last - first) / static_cast<double>(dim - 1)
                              : 0.0;
  for (std::size_t l = 0; l < dim; ++l) {
    diag[l] = first + step * static_cast<double>(l);
  }
  return DiagonalObservable(std::move(diag), std::move(label));
}

// One line of a sequency-ordered decomposition table.
struct SequencyRow {
  std::uint32_t j;
  std::uint32_t sequency;
  std::optional<int> most_uv; // empty for j = 0
  double beta;
};

// Rows (j, s, q_s, beta_j) sorted by sequency. Rows with |beta_j| below
// zero_tolerance are suppressed unless include_zeros is set.
inline std::vector<SequencyRow> sequency_report(const PauliDecomposition &b,
                                                bool include_zeros = false,
                                                double zero_tolerance = 1e-12) {
  std::vector<SequencyRow> rows;
  rows.reserve(b.size());
  for (std::uint32_t j = 0; j < b.size(); ++j) {
    if (!include_zeros && std::abs(b[j]) <= zero_tolerance) {
      continue;
    }
    const BasisIndex idx(j, b.num_qubits());
    rows.push_back(SequencyRow{j, sequency(idx), most_uv_qubit(idx), b[j]});
  }
  std::sort(rows.begin(), rows.end(),
            [](const SequencyRow &a, const SequencyRow &c) {
              return a.sequency < c.sequency;
            });
  return rows;
}

} // namespace hiqec
