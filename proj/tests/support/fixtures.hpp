#pragma once

#include <string>

#include "dea/data.hpp"

namespace dea::testing {

inline std::string data_path(const std::string& name) { return std::string(DEA_TEST_DATA) + "/" + name; }

inline Dataset eight_units() { return load_dataset(data_path("eight_units.csv")); }
inline Dataset four_units() { return load_dataset(data_path("four_units.csv")); }

}  // namespace dea::testing
