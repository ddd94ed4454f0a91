#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hiqec/errors.hpp"
#include "hiqec/observables.hpp"
#include "hiqec/states.hpp"

namespace hiqec {

// Reads a vector of reals from a file holding either a JSON array or
// newline-delimited decimal text.
inline std::vector<double> load_real_vector(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open file: " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();

  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) {
    throw ValidationError("file is empty: " + path);
  }
  std::vector<double> values;
  if (text[first] == '[') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &ex) {
      throw ValidationError("invalid JSON in " + path + ": " + ex.what());
    }
    if (!doc.is_array()) {
      throw ValidationError("expected a JSON array in " + path);
    }
    for (const auto &item : doc) {
      if (!item.is_number()) {
        throw ValidationError("non-numeric entry in " + path);
      }
      values.push_back(item.get<double>());
    }
  } else {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      const std::size_t begin = line.find_first_not_of(" \t\r");
      if (begin == std::string::npos || line[begin] == '#') {
        continue;
      }
      try {
        std::size_t used = 0;
        values.push_back(std::stod(line.substr(begin), &used));
      } catch (const std::exception &) {
        throw ValidationError("cannot parse line as a number in " + path +
                              ": '" + line + "'");
      }
    }
  }
  if (values.empty()) {
    throw ValidationError("no values found in " + path);
  }
  return values;
}

// Loads amplitudes and normalizes them when the norm is within 1% of one;
// anything further off is rejected rather than silently rescaled.
inline RealWavefunction load_wavefunction(const std::string &path) {
  std::vector<double> amps = load_real_vector(path);
  if (!is_power_of_two(amps.size())) {
    throw ValidationError("state file length " + std::to_string(amps.size()) +
                          " is not a power of two: " + path);
  }
  double norm2 = 0.0;
  for (double a : amps) {
    norm2 += a * a;
  }
  const double norm = std::sqrt(norm2);
  if (std::abs(norm - 1.0) > 0.01) {
    throw ValidationError("state file norm " + std::to_string(norm) +
                          " deviates from 1 by more than 1%: " + path);
  }
  for (double &a : amps) {
    a /= norm;
  }
  return RealWavefunction(std::move(amps));
}

inline DiagonalObservable load_observable(const std::string &path) {
  std::vector<double> diag = load_real_vector(path);
  if (!is_power_of_two(diag.size())) {
    throw ValidationError("observable file length " +
                          std::to_string(diag.size()) +
                          " is not a power of two: " + path);
  }
  return DiagonalObservable(std::move(diag), path);
}

} // namespace hiqec
