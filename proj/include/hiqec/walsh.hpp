#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "hiqec/errors.hpp"

namespace hiqec {

// Hard upper bound on the register size; dense length-2^n vectors above
// this are not supported.
inline constexpr int kHardQubitLimit = 30;
inline constexpr int kDefaultQubitCap = 24;

// Working cap on the qubit count. Defaults to 24; the environment variable
// HIQEC_MAX_QUBITS overrides it, clamped to [1, 30].
inline int qubit_cap() {
  static const int cap = [] {
    if (const char *env = std::getenv("HIQEC_MAX_QUBITS")) {
      char *end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end != env && v >= 1) {
        return static_cast<int>(v < kHardQubitLimit ? v : kHardQubitLimit);
      }
    }
    return kDefaultQubitCap;
  }();
  return cap;
}

inline void check_qubit_count(int n) {
  if (n < 1) {
    throw ParameterError("qubit count must be at least 1, got " +
                         std::to_string(n));
  }
  if (n > qubit_cap()) {
    throw ParameterError("qubit count " + std::to_string(n) +
                         " exceeds cap " + std::to_string(qubit_cap()) +
                         " (set HIQEC_MAX_QUBITS to raise it, hard limit " +
                         std::to_string(kHardQubitLimit) + ")");
  }
}

constexpr bool is_power_of_two(std::size_t x) {
  return x != 0 && (x & (x - 1)) == 0;
}

// Exact log2 of a power-of-two length.
inline int log2_exact(std::size_t len) {
  if (!is_power_of_two(len)) {
    throw DimensionError("vector length " + std::to_string(len) +
                         " is not a power of two");
  }
  int n = 0;
  while ((std::size_t{1} << n) < len) {
    ++n;
  }
  return n;
}

// Index of a Z-string basis operator on an n-qubit register. Bit b of j
// selects a Pauli-Z on qubit b; qubit 0 is the least-significant (most-UV)
// qubit and qubit n-1 the most-significant (IR) qubit.
struct BasisIndex {
  std::uint32_t j;
  int n;

  BasisIndex(std::uint32_t j, int n) : j(j), n(n) {
    check_qubit_count(n);
    if (j >> n != 0) {
      throw ParameterError("basis index " + std::to_string(j) +
                           " out of range for " + std::to_string(n) +
                           " qubits");
    }
  }

  std::size_t dimension() const { return std::size_t{1} << n; }
};

namespace detail {

template <typename T> void fwht_in_place(std::vector<T> &v) {
  const std::size_t len = v.size();
  for (std::size_t h = 1; h < len; h <<= 1) {
    for (std::size_t block = 0; block < len; block += h << 1) {
      for (std::size_t i = block; i < block + h; ++i) {
        const T x = v[i];
        const T y = v[i + h];
        v[i] = x + y;
        v[i + h] = x - y;
      }
    }
  }
}

} // namespace detail

// Natural-ordered Walsh-Hadamard transform with +-1 matrix elements
// (unnormalized: fwht(fwht(v)) == 2^n * v). Row j of the transform matrix
// is the diagonal of the Z-string selected by the bits of j: entry l equals
// (-1)^popcount(j & l). O(2^n * n) butterfly.
template <typename T> std::vector<T> fwht(std::vector<T> v) {
  log2_exact(v.size()); // throws DimensionError on bad length
  detail::fwht_in_place(v);
  return v;
}

// Reverses the low n bits of j.
inline std::uint32_t bit_reverse(std::uint32_t j, int n) {
  std::uint32_t r = 0;
  for (int b = 0; b < n; ++b) {
    r = (r << 1) | ((j >> b) & 1u);
  }
  return r;
}

// Gray code to binary (prefix XOR).
inline std::uint32_t gray_to_binary(std::uint32_t g) {
  g ^= g >> 16;
  g ^= g >> 8;
  g ^= g >> 4;
  g ^= g >> 2;
  g ^= g >> 1;
  return g;
}

// Number of sign changes along row j of the natural-ordered transform
// (the sequency of the Walsh function). Equals the inverse Gray code of
// the bit-reversal of j.
inline std::uint32_t sequency(const BasisIndex &idx) {
  return gray_to_binary(bit_reverse(idx.j, idx.n));
}

// Least-significant set bit of j: the most-UV qubit carrying a Z in the
// basis operator. Empty for j = 0 (identity, no active qubit).
inline std::optional<int> most_uv_qubit(const BasisIndex &idx) {
  if (idx.j == 0) {
    return std::nullopt;
  }
  int q = 0;
  while (((idx.j >> q) & 1u) == 0) {
    ++q;
  }
  return q;
}

// n-character I/Z label; leftmost character is qubit n-1.
inline std::string pauli_string(const BasisIndex &idx) {
  std::string s(static_cast<std::size_t>(idx.n), 'I');
  for (int b = 0; b < idx.n; ++b) {
    if ((idx.j >> b) & 1u) {
      s[static_cast<std::size_t>(idx.n - 1 - b)] = 'Z';
    }
  }
  return s;
}

} // namespace hiqec
