#include "qfusion/config.hpp"

#include <fstream>

namespace qfusion {

Eigen::MatrixXcd parse_F(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("F must be a nonempty array of rows");
  const std::size_t n = j.size();
  Eigen::MatrixXcd F(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || row.size() != n) throw ConfigError("F must be square");
    for (std::size_t c = 0; c < n; ++c) {
      const auto& e = row[c];
      if (e.is_number()) {
        F(r, c) = {e.get<double>(), 0.0};
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        F(r, c) = {e[0].get<double>(), e[1].get<double>()};
      } else {
        throw ConfigError("F entries must be numbers or [re, im] pairs");
      }
    }
  }
  return F;
}

RunContext context_from_q_text(const std::string& text) {
  Real q;
  try {
    std::size_t used = 0;
    (void)std::stod(text, &used);
    if (used != text.size()) throw ConfigError("malformed q: " + text);
    q = Real(text);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("malformed q: " + text);
  }
  if (!(q > 0) || q > 1) throw ConfigError("q must lie in (0, 1]");
  RunContext rc;
  rc.ctx = context_from_q(q);
  rc.source = "q=" + text;
  return rc;
}

RunContext context_from_json(const nlohmann::json& j, const std::string& origin) {
  if (!j.is_object()) throw ConfigError(origin + ": expected a JSON object");
  const bool has_q = j.contains("q"), has_F = j.contains("F");
  if (has_q == has_F) throw ConfigError(origin + ": exactly one of \"q\" and \"F\" is required");
  if (has_q) {
    const auto& q = j["q"];
    if (q.is_string()) return context_from_q_text(q.get<std::string>());
    if (!q.is_number()) throw ConfigError(origin + ": q must be a number");
    RunContext rc = context_from_q_text(q.dump());
    rc.source = "q=" + q.dump();
    return rc;
  }
  RunContext rc;
  rc.F = parse_F(j["F"]);
  try {
    auto [ctx, spectrum] = context_from_F(*rc.F);
    rc.ctx = std::move(ctx);
    rc.spectrum = std::move(spectrum);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  rc.source = "F:" + origin;
  return rc;
}

RunContext context_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return context_from_json(j, path);
}

RunContext resolve_context(const std::optional<std::string>& q_text, const std::optional<std::string>& F_path) {
  if (q_text && F_path) throw ConfigError("--q and --F are mutually exclusive");
  if (F_path) return context_from_file(*F_path);
  return context_from_q_text(q_text.value_or("1"));
}

}  // namespace qfusion
