#include <doctest.h>

#include <sstream>

#include "cmk2/run.hpp"

using namespace cmk2;

namespace {

RunConfig with(CommandKind kind, std::string m = "1", std::string l = "") {
  RunConfig c;
  c.commands = {Command{kind, std::move(m), std::move(l)}};
  return c;
}

std::string field_of(const RunConfig& c) {
  try {
    validate(c);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_SUITE("run") {
  TEST_CASE("validation names the offending field") {
    CHECK(field_of(with(CommandKind::enumerate)).empty());
    RunConfig c = with(CommandKind::enumerate);
    c.d = -5;
    CHECK(field_of(c) == "d");
    c = with(CommandKind::enumerate);
    c.B = 3;
    CHECK(field_of(c) == "B");
    c = with(CommandKind::enumerate);
    c.conductor = "(1+i";
    CHECK(field_of(c) == "conductor");
    c = with(CommandKind::enumerate);
    c.p = 7;
    CHECK(field_of(c) == "p");
    c = with(CommandKind::enumerate);
    c.prime = "2+i";
    CHECK(field_of(c) == "prime");
    c = with(CommandKind::enumerate);
    c.tolerance = "1e-90";
    CHECK(field_of(c) == "tolerance");
    c = with(CommandKind::enumerate);
    c.samples = 0;
    CHECK(field_of(c) == "samples");
    c.commands.clear();
    c.samples = 20;
    CHECK(field_of(c) == "commands");
    CHECK(field_of(with(CommandKind::certify_tame, "2-x")) == "m");
    CHECK(field_of(with(CommandKind::certify_tame, "3")).empty());  // -3 = 1 mod (2+2i)
    c = with(CommandKind::certify_tame, "3");
    c.a = 3;
    CHECK(field_of(c) == "m");  // divides a
    CHECK(field_of(with(CommandKind::certify_tame, "1+i")) == "m");     // divides f
    CHECK(field_of(with(CommandKind::certify_tame, "3-2i")) == "m");    // pbar
    CHECK(field_of(with(CommandKind::verify_e1, "2-i", "2+i")) == "verify-e1");
    CHECK(field_of(with(CommandKind::verify_e2, "2+i", "2+i")) == "verify-e2");
    CHECK(field_of(with(CommandKind::verify_e2, "2-i", "(2+i)^2")) == "l");
    CHECK(field_of(with(CommandKind::verify_e1, "2-i", "p")).empty());
    c = with(CommandKind::all);
    c.e1 = {"(2+i)^2"};
    CHECK(field_of(c) == "e1");
  }

  TEST_CASE("the chosen prime above p") {
    RunConfig c = with(CommandKind::build_alpha, "2-i");
    std::ostringstream out, err;
    CHECK(run_main(c, out, err) == 0);
    CHECK(out.str().find("\"p\":\"(3+2*i)\"") != std::string::npos);
    c.prime = "3-2i";
    std::ostringstream out2;
    CHECK(run_main(c, out2, err) == 0);
    CHECK(out2.str().find("\"p\":\"(2+3*i)\"") != std::string::npos);
  }

  TEST_CASE("exit status") {
    std::ostringstream out, err;
    CHECK(run_main(with(CommandKind::certify_tame, "1"), out, err) == 0);
    CHECK(run_main(with(CommandKind::verify_e2, "2-x", "2+i"), out, err) == 2);
    CHECK(err.str().find("config error: m:") != std::string::npos);
    // a quartic twist of y^2 = x^3 - x has different a_p
    RunConfig twist = with(CommandKind::hecke_check);
    twist.A = -2;
    twist.hecke_max_prime = 60;
    std::ostringstream tout;
    CHECK(run_main(twist, tout, err) == 1);
    CHECK(tout.str().find("\"verdict\":\"fail\"") != std::string::npos);
  }

  TEST_CASE("stream is sorted by id and deterministic") {
    RunConfig c = with(CommandKind::verify_e2, "2-i", "2+i");
    c.commands.push_back(Command{CommandKind::certify_tame, "1", ""});
    c.commands.push_back(Command{CommandKind::enumerate, "1", ""});
    const RunOutput a = run(c);
    const RunOutput b = run(c);
    CHECK(a.stream() == b.stream());
    CHECK(a.passed);
    std::istringstream lines(a.stream());
    std::string line, prev;
    int n = 0;
    while (std::getline(lines, line)) {
      const std::string id = nlohmann::json::parse(line)["id"];
      CHECK(prev <= id);
      prev = id;
      ++n;
    }
    CHECK(n == 3);
  }

  TEST_CASE("every numeric sub-check reports a residual") {
    const RunOutput out = run(with(CommandKind::verify_e1, "(2+i)^2", "2+i"));
    for (const auto& stage : out.records.front()["stages"]) {
      CAPTURE(stage["id"].get<std::string>());
      CHECK(stage.contains("residuals"));
      CHECK(stage["precision_bits"].get<unsigned>() >= 256);
      CHECK(!stage["tolerance"].get<std::string>().empty());
      for (const auto& [k, v] : stage["residuals"].items()) CHECK(v.is_string());
    }
  }
}
