#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cmk2/run.hpp"

using namespace cmk2;

int main(int argc, char** argv) {
  CLI::App app{"Elliptic K_2 elements on CM lattices: construction and certification"};
  app.set_config("--config", "", "key = value configuration file");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--d", cfg.d, "field discriminant")->capture_default_str();
  app.add_option("--A", cfg.A, "curve coefficient A in y^2 = x^3 + A x + B")->capture_default_str();
  app.add_option("--B", cfg.B, "curve coefficient B")->capture_default_str();
  app.add_option("--conductor", cfg.conductor, "conductor of the Hecke character")->capture_default_str();
  app.add_option("--a", cfg.a, "the auxiliary integer a")->capture_default_str();
  app.add_option("--p", cfg.p, "split rational prime p")->capture_default_str();
  app.add_option("--prime", cfg.prime, "prime above p (default: phi-value with positive w-coordinate)");
  app.add_option("--bound", cfg.bound, "norm bound for the index sets")->capture_default_str();
  app.add_option("--bits", cfg.bits, "working precision in bits")->capture_default_str();
  app.add_option("--tol", cfg.tolerance, "identity tolerance")->capture_default_str();
  app.add_option("--samples", cfg.samples, "sample points per constancy scan")->capture_default_str();
  app.add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
  app.add_option("--hecke-max-prime", cfg.hecke_max_prime, "primes below this are point-counted")->capture_default_str();
  app.add_option("--frobenius-primes", cfg.frobenius_primes, "primes for frobenius-check")->capture_default_str();
  app.add_option("--tame-m", cfg.tame_m, "grid of m for all")->capture_default_str();
  app.add_option("--tame-a", cfg.tame_a, "grid of a for all")->capture_default_str();
  app.add_option("--named-l", cfg.named_l, "l for the named-function checks in all")->capture_default_str();
  app.add_option("--e1", cfg.e1, "E1 pairs m:l for all")->capture_default_str();
  app.add_option("--e2", cfg.e2, "E2 pairs m:l for all")->capture_default_str();
  app.add_option("--choice-m", cfg.choice_m, "m for the choice-independence check in all")->capture_default_str();

  Command cmd;
  auto sub = [&](const char* name, CommandKind kind, const char* help, bool m, bool l) {
    CLI::App* s = app.add_subcommand(name, help);
    s->callback([&cmd, kind] { cmd.kind = kind; });
    if (m) s->add_option("--m", cmd.m, "the ideal m")->capture_default_str();
    if (l) s->add_option("--l", cmd.l, "the prime l, or p")->required();
  };
  sub("enumerate", CommandKind::enumerate, "index sets of primes and their products", false, false);
  sub("hecke-check", CommandKind::hecke_check, "Hecke character against point counts", false, false);
  sub("build-alpha", CommandKind::build_alpha, "alpha'_m and alpha_m as formal sums", true, false);
  sub("certify-tame", CommandKind::certify_tame, "tame certificate of N(mf) alpha'_m", true, false);
  sub("verify-e1", CommandKind::verify_e1, "norm relation for l | m or l = p", true, true);
  sub("verify-e2", CommandKind::verify_e2, "norm relation with Euler factor for l not dividing m p", true, true);
  sub("frobenius-check", CommandKind::frobenius_check, "Frobenius against CM on E(F_p^2)", false, false);
  sub("choice-check", CommandKind::choice_check, "independence of the choice of g_a, s_m, t_gamma", true, false);
  sub("all", CommandKind::all, "the full grid", false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  cfg.commands = {cmd};
  return run_main(cfg, std::cout, std::cerr);
}
