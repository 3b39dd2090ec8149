#pragma once

#include <functional>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace nls::cli {

using ExperimentFn = std::function<void(const Node& root, Artifacts& art)>;

struct ExperimentEntry {
  std::string name;
  std::string summary;
  ExperimentFn run;
};

// In command order.
const std::vector<ExperimentEntry>& experiment_table();

}  // namespace nls::cli
