#pragma once

// Verdict records. A certificate passes iff every numeric residual is below
// its tolerance and every exact check holds.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cmk2/bigfloat.hpp"

namespace cmk2 {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kCertificateSchema = "cmk2-certificate/1";

struct Certificate {
  std::string id;        // stable sort key, e.g. "E1/(2+i)^2/(2+i)/2-function-identity"
  std::string identity;  // the identity being checked, in words
  ordered_json parameters = ordered_json::object();
  std::uint64_t seed{0};
  unsigned precision_bits{0};
  Real tolerance{0};
  std::vector<std::string> samples;
  std::vector<std::pair<std::string, Real>> residuals;
  std::vector<std::pair<std::string, bool>> exact_checks;
  ordered_json diagnostics = ordered_json::object();

  void residual(std::string name, Real value) { residuals.emplace_back(std::move(name), std::move(value)); }
  void check(std::string name, bool ok) { exact_checks.emplace_back(std::move(name), ok); }
  bool passed() const;
  ordered_json to_json() const;
};

/// Residuals print with this many significant digits.
inline constexpr int kResidualDigits = 6;

struct RelationReport {
  std::string relation;  // "E1" or "E2"
  std::string m;
  std::string l;
  std::vector<Certificate> stages;

  bool passed() const;
  ordered_json to_json() const;
};

/// One JSON document per line, sorted by id.
std::string emit_stream(std::vector<ordered_json> records);

}  // namespace cmk2
