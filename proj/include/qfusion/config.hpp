#pragma once

#include <Eigen/Core>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>

#include "qfusion/qarith.hpp"
#include "qfusion/real.hpp"

namespace qfusion {

/// Bad user input: malformed words, files or flag combinations.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numeric environment plus the Woronowicz spectrum when it came from F.
struct RunContext {
  QContext<Real> ctx;
  std::optional<QSpectrum<Real>> spectrum;
  std::optional<Eigen::MatrixXcd> F;
  std::string source;  ///< "q=<text>" or "F:<path>"
};

/// {"F": [[[re, im], ...], ...]} (entries may also be plain reals).
Eigen::MatrixXcd parse_F(const nlohmann::json& j);

/// {"q": <real or decimal string>} or {"F": ...}; exactly one key.
RunContext context_from_json(const nlohmann::json& j, const std::string& origin);

RunContext context_from_file(const std::string& path);

/// q given as decimal text, parsed at the current precision.
RunContext context_from_q_text(const std::string& text);

/// Resolves --q / --F (a file path). Neither: q = 1. Both: ConfigError.
RunContext resolve_context(const std::optional<std::string>& q_text, const std::optional<std::string>& F_path);

}  // namespace qfusion
