#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <random>
#include <vector>

#include "hiqec/walsh.hpp"

using namespace hiqec;

namespace {

std::vector<double> random_vector(std::size_t len, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(len);
  for (double &x : v) {
    x = dist(rng);
  }
  return v;
}

// Sign changes along a +-1 sequence; the defining property of sequency.
int count_sign_changes(const std::vector<double> &row) {
  int changes = 0;
  for (std::size_t i = 1; i < row.size(); ++i) {
    if ((row[i] > 0) != (row[i - 1] > 0)) {
      ++changes;
    }
  }
  return changes;
}

std::vector<double> unit_vector(std::size_t len, std::size_t at) {
  std::vector<double> v(len, 0.0);
  v[at] = 1.0;
  return v;
}

} // namespace

TEST_CASE("fwht on trivial inputs") {
  SECTION("2x2 Hadamard column") {
    const std::vector<double> out = fwht(std::vector<double>{1.0, 0.0});
    REQUIRE(out == std::vector<double>{1.0, 1.0});
  }
  SECTION("column 9 of the four-qubit transform") {
    const std::vector<double> out = fwht(unit_vector(16, 9));
    const std::vector<double> expected = {1, -1, 1, -1, 1, -1, 1, -1,
                                          -1, 1, -1, 1, -1, 1, -1, 1};
    REQUIRE(out == expected);
  }
  SECTION("rejects non-power-of-two lengths") {
    REQUIRE_THROWS_AS(fwht(std::vector<double>(6, 1.0)), DimensionError);
    REQUIRE_THROWS_AS(fwht(std::vector<double>{}), DimensionError);
  }
}

TEST_CASE("fwht is an involution up to 2^n") {
  for (int n : {1, 3, 6, 10, 12}) {
    const std::size_t len = std::size_t{1} << n;
    const std::vector<double> v = random_vector(len, 100u + n);
    const std::vector<double> twice = fwht(fwht(v));
    const double scale = static_cast<double>(len);
    for (std::size_t i = 0; i < len; ++i) {
      REQUIRE_THAT(twice[i], Catch::Matchers::WithinAbs(scale * v[i],
                                                        1e-9 * scale));
    }
  }
}

TEST_CASE("fwht is linear") {
  const std::size_t len = 64;
  const std::vector<double> u = random_vector(len, 7);
  const std::vector<double> v = random_vector(len, 8);
  const double a = 0.37, b = -2.25;
  std::vector<double> combo(len);
  for (std::size_t i = 0; i < len; ++i) {
    combo[i] = a * u[i] + b * v[i];
  }
  const std::vector<double> lhs = fwht(combo);
  const std::vector<double> fu = fwht(u);
  const std::vector<double> fv = fwht(v);
  for (std::size_t i = 0; i < len; ++i) {
    REQUIRE_THAT(lhs[i],
                 Catch::Matchers::WithinAbs(a * fu[i] + b * fv[i], 1e-12));
  }
}

TEST_CASE("transform rows are the Z-string diagonals") {
  const int n = 5;
  const std::size_t len = std::size_t{1} << n;
  for (std::uint32_t j = 0; j < len; ++j) {
    const std::vector<double> row = fwht(unit_vector(len, j));
    for (std::size_t l = 0; l < len; ++l) {
      const double sign = (std::popcount(j & static_cast<std::uint32_t>(l)) % 2)
                              ? -1.0
                              : 1.0;
      REQUIRE(row[l] == sign);
    }
  }
}

TEST_CASE("sequency reproduces the four-qubit table") {
  const std::vector<std::uint32_t> expected = {0, 15, 7, 8, 3, 12, 4, 11,
                                               1, 14, 6, 9, 2, 13, 5, 10};
  for (std::uint32_t j = 0; j < 16; ++j) {
    REQUIRE(sequency(BasisIndex(j, 4)) == expected[j]);
  }
  REQUIRE(sequency(BasisIndex(0, 4)) == 0);
}

TEST_CASE("sequency equals the sign-change count of the transform rows") {
  const int n = 8;
  const std::size_t len = std::size_t{1} << n;
  for (std::uint32_t j = 0; j < len; ++j) {
    const std::vector<double> row = fwht(unit_vector(len, j));
    REQUIRE(sequency(BasisIndex(j, n)) ==
            static_cast<std::uint32_t>(count_sign_changes(row)));
  }
}

TEST_CASE("sequency is a bijection") {
  for (int n : {1, 2, 3, 4, 7}) {
    const std::size_t len = std::size_t{1} << n;
    std::vector<bool> seen(len, false);
    for (std::uint32_t j = 0; j < len; ++j) {
      const std::uint32_t s = sequency(BasisIndex(j, n));
      REQUIRE(s < len);
      REQUIRE_FALSE(seen[s]);
      seen[s] = true;
    }
  }
}

TEST_CASE("most_uv_qubit") {
  SECTION("four-qubit table values") {
    for (std::uint32_t j : {3u, 5u, 9u, 15u}) {
      REQUIRE(most_uv_qubit(BasisIndex(j, 4)) == 0);
    }
    REQUIRE(most_uv_qubit(BasisIndex(6, 4)) == 1);
    REQUIRE(most_uv_qubit(BasisIndex(10, 4)) == 1);
    REQUIRE(most_uv_qubit(BasisIndex(12, 4)) == 2);
  }
  SECTION("single-bit indices") {
    for (int k = 0; k < 8; ++k) {
      REQUIRE(most_uv_qubit(BasisIndex(1u << k, 8)) == k);
    }
  }
  SECTION("identity has no active qubit") {
    REQUIRE_FALSE(most_uv_qubit(BasisIndex(0, 4)).has_value());
  }
  SECTION("matches a brute-force bit scan") {
    const int n = 8;
    for (std::uint32_t j = 1; j < (1u << n); ++j) {
      int lowest = -1;
      for (int b = 0; b < n; ++b) {
        if ((j >> b) & 1u) {
          lowest = b;
          break;
        }
      }
      REQUIRE(most_uv_qubit(BasisIndex(j, n)) == lowest);
    }
  }
}

TEST_CASE("pauli_string labels") {
  REQUIRE(pauli_string(BasisIndex(9, 4)) == "ZIIZ");
  REQUIRE(pauli_string(BasisIndex(0, 4)) == "IIII");
  REQUIRE(pauli_string(BasisIndex(12, 4)) == "ZZII");
  REQUIRE(pauli_string(BasisIndex(15, 4)) == "ZZZZ");
  REQUIRE(pauli_string(BasisIndex(1, 6)) == "IIIIIZ");
}

TEST_CASE("basis index validation") {
  REQUIRE_THROWS_AS(BasisIndex(16, 4), ParameterError);
  REQUIRE_THROWS_AS(BasisIndex(0, 0), ParameterError);
  REQUIRE_THROWS_AS(BasisIndex(0, qubit_cap() + 1), ParameterError);
  REQUIRE_NOTHROW(BasisIndex(15, 4));
}
