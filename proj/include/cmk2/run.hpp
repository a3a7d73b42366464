#pragma once

// Batch front end: configuration, validation, command dispatch and the
// certificate stream. Exit status 0 when every verdict passes, 1 on a failed
// verdict, 2 on a configuration error.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmk2/certificate.hpp"

namespace cmk2 {

/// Names the offending field: "m: unexpected character 'x' in ideal".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class CommandKind { enumerate, hecke_check, build_alpha, certify_tame, verify_e1, verify_e2, frobenius_check,
                         choice_check, all };

const char* command_name(CommandKind kind);

struct Command {
  CommandKind kind{CommandKind::all};
  std::string m{"1"};
  std::string l;
};

struct RunConfig {
  int d{-4};
  std::int64_t A{-1};
  std::int64_t B{0};
  std::string conductor{"(1+i)^3"};
  int a{2};
  std::int64_t p{13};
  std::string prime;  // prime above p; empty selects the one with phi-value of positive w-coordinate
  std::int64_t bound{50};
  unsigned bits{256};
  std::string tolerance{"1e-25"};
  int samples{20};
  std::uint64_t seed{20240601};

  // Grid for `all` and for hecke-check / frobenius-check.
  std::int64_t hecke_max_prime{500};
  std::vector<std::int64_t> frobenius_primes{5, 13, 17, 29};
  std::vector<std::string> tame_m{"1", "2-i", "(2+i)(2-i)"};
  std::vector<int> tame_a{2, 3};
  std::string named_l{"2+i"};
  std::vector<std::string> e1{"(2+i)^2:2+i", "2-i:p"};  // "m:l", l = "p" for the chosen prime
  std::vector<std::string> e2{"2-i:2+i"};
  std::string choice_m{"2-i"};

  std::vector<Command> commands;
};

struct RunOutput {
  std::vector<ordered_json> records;
  bool passed{true};
  std::string stream() const { return emit_stream(records); }
};

/// Checks every field and command before any computation; throws ConfigError.
void validate(const RunConfig& config);

/// validate, then run every command at the configured precision.
RunOutput run(const RunConfig& config);

/// run with the stream on `out` and diagnostics on `err`; returns the exit status.
int run_main(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace cmk2
