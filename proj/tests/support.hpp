#pragma once

#include <map>
#include <string>

#include "gevpnoise/core/csv.hpp"
#include "gevpnoise/core/linalg.hpp"

namespace testing_support {

/// name -> value from tests/fixtures/reference.csv (PySCF values).
inline const std::map<std::string, double>& fixtures() {
  static const std::map<std::string, double> values = [] {
    std::map<std::string, double> out;
    const auto t = gevpnoise::csv::Table::from_file(std::string(GEVPNOISE_TEST_DIR) + "/fixtures/reference.csv");
    for (const auto& row : t.rows) out[row[0]] = std::stod(row[1]);
    return out;
  }();
  return values;
}

inline double fixture(const std::string& name) { return fixtures().at(name); }

inline std::string fixture_path(const std::string& name) { return std::string(GEVPNOISE_TEST_DIR) + "/fixtures/" + name; }

}  // namespace testing_support
