#pragma once

#include <cstddef>
#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "qfusion/config.hpp"

namespace qfusion {

struct VerifyOptions {
  std::size_t n_max = 16;           ///< level bound for trace-bound and level-dimension
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::uint64_t samples = 1000;     ///< random samples for lemmas and woronowicz
  std::uint64_t walk_paths = 100000;
  std::size_t scan_length = 10;     ///< |s| bound for the support scan
};

struct SuiteResult {
  std::string name;
  bool pass = false;
  nlohmann::json checks = nlohmann::json::array();  ///< {name, pass, value, bound, margin}
};

/// fusion, level-dimension, trace-convolution, trace-bound, boundary,
/// cylinder, walk-trace, walk, woronowicz, faithfulness, lemmas.
const std::vector<std::string>& suite_names();

/// Expands "all" to every suite; throws ConfigError on unknown names.
std::vector<std::string> expand_suites(const std::vector<std::string>& selected);

SuiteResult run_suite(const std::string& name, const RunContext& rc, const VerifyOptions& opts);

nlohmann::json to_json(const SuiteResult& r);

}  // namespace qfusion
