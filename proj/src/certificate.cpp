#include "cmk2/certificate.hpp"

#include <algorithm>

namespace cmk2 {

bool Certificate::passed() const {
  for (const auto& [name, r] : residuals)
    if (!(r < tolerance)) return false;
  for (const auto& [name, ok] : exact_checks)
    if (!ok) return false;
  return true;
}

ordered_json Certificate::to_json() const {
  ordered_json j;
  j["schema"] = kCertificateSchema;
  j["id"] = id;
  j["identity"] = identity;
  j["parameters"] = parameters;
  j["seed"] = seed;
  j["precision_bits"] = precision_bits;
  j["tolerance"] = decimal(tolerance, 3);
  j["samples"] = samples;
  ordered_json res = ordered_json::object();
  for (const auto& [name, r] : residuals) res[name] = decimal(r, kResidualDigits);
  j["residuals"] = res;
  ordered_json exact = ordered_json::object();
  for (const auto& [name, ok] : exact_checks) exact[name] = ok;
  j["exact_checks"] = exact;
  j["diagnostics"] = diagnostics;
  j["verdict"] = passed() ? "pass" : "fail";
  return j;
}

bool RelationReport::passed() const {
  return std::all_of(stages.begin(), stages.end(), [](const Certificate& c) { return c.passed(); });
}

ordered_json RelationReport::to_json() const {
  ordered_json j;
  j["schema"] = kCertificateSchema;
  j["id"] = relation + "/" + m + "/" + l;
  j["relation"] = relation;
  j["m"] = m;
  j["l"] = l;
  ordered_json st = ordered_json::array();
  for (const Certificate& c : stages) st.push_back(c.to_json());
  j["stages"] = st;
  j["verdict"] = passed() ? "pass" : "fail";
  return j;
}

std::string emit_stream(std::vector<ordered_json> records) {
  std::stable_sort(records.begin(), records.end(), [](const ordered_json& a, const ordered_json& b) {
    return a.value("id", std::string()) < b.value("id", std::string());
  });
  std::string out;
  for (const auto& r : records) out += r.dump() + "\n";
  return out;
}

}  // namespace cmk2
