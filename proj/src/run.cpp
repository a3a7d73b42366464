#include "cmk2/run.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

#include "cmk2/checks.hpp"
#include "cmk2/relations.hpp"

namespace cmk2 {

const char* command_name(CommandKind kind) {
  switch (kind) {
    case CommandKind::enumerate: return "enumerate";
    case CommandKind::hecke_check: return "hecke-check";
    case CommandKind::build_alpha: return "build-alpha";
    case CommandKind::certify_tame: return "certify-tame";
    case CommandKind::verify_e1: return "verify-e1";
    case CommandKind::verify_e2: return "verify-e2";
    case CommandKind::frobenius_check: return "frobenius-check";
    case CommandKind::choice_check: return "choice-check";
    case CommandKind::all: return "all";
  }
  return "?";
}

namespace {

struct RelationPair {
  QuadIdeal m;
  QuadIdeal l;
};

/// A validated configuration with everything parsed.
class Instance {
 public:
  explicit Instance(const RunConfig& config) : cfg(config), phi(make_character(config)), f(phi.conductor()) {
    check_field_and_curve();
    primes = make_primes();
    check_numerics();
    if (cfg.commands.empty()) throw ConfigError("commands", "nothing to run");
    for (const Command& c : cfg.commands) check_command(c);
  }

  QuadIdeal ideal(const std::string& field, const std::string& text) const {
    try {
      return parse_ideal(text, cfg.d);
    } catch (const std::exception& e) {
      throw ConfigError(field, "'" + text + "': " + e.what());
    }
  }

  QuadIdeal index_ideal(const std::string& field, const std::string& text) const {
    const QuadIdeal m = ideal(field, text);
    for (const auto& [P, e] : factor(m)) admissible_prime(field, P);
    return m;
  }

  QuadIdeal index_prime(const std::string& field, const std::string& text) const {
    if (text == "p") return primes.p;
    const QuadIdeal l = ideal(field, text);
    const auto fac = factor(l);
    if (fac.size() != 1 || fac.front().second != 1) throw ConfigError(field, to_string(l) + " is not prime");
    admissible_prime(field, l);
    return l;
  }

  RelationPair pair(const std::string& field, const std::string& text) const {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ConfigError(field, "'" + text + "' is not of the form m:l");
    return {index_ideal(field + ".m", text.substr(0, colon)), index_prime(field + ".l", text.substr(colon + 1))};
  }

  void check_e1(const std::string& field, const RelationPair& r) const {
    if (!r.l.divides(r.m) && !(r.l == primes.p && !primes.p.divides(r.m)))
      throw ConfigError(field, "E1 needs l | m, or l = p with p not dividing m");
  }

  void check_e2(const std::string& field, const RelationPair& r) const {
    if (r.l.divides(r.m * primes.p)) throw ConfigError(field, "E2 needs l not dividing m p");
  }

  void check_a(const std::string& field, int a, const QuadIdeal& m) const {
    if (a < 2) throw ConfigError(field, "a must be at least 2");
    if (std::gcd(static_cast<std::int64_t>(a), m.norm()) != 1)
      throw ConfigError(field, "a = " + std::to_string(a) + " is not prime to N(" + to_string(m) + ")");
  }

  const RunConfig& cfg;
  HeckeCharacter phi;
  QuadIdeal f;
  PrimePair primes;

 private:
  static HeckeCharacter make_character(const RunConfig& c) {
    if (!is_class_number_one(c.d)) throw ConfigError("d", std::to_string(c.d) + " is not a class-number-one discriminant");
    QuadIdeal f;
    try {
      f = parse_ideal(c.conductor, c.d);
    } catch (const std::exception& e) {
      throw ConfigError("conductor", "'" + c.conductor + "': " + e.what());
    }
    try {
      return HeckeCharacter(f);
    } catch (const std::exception& e) {
      throw ConfigError("conductor", e.what());
    }
  }

  void check_field_and_curve() const {
    if (4 * cfg.A * cfg.A * cfg.A + 27 * cfg.B * cfg.B == 0) throw ConfigError("A, B", "singular curve");
    if (cfg.d == -4 && cfg.B != 0) throw ConfigError("B", "CM by Z[i] needs y^2 = x^3 + A x");
    if (cfg.d == -3 && cfg.A != 0) throw ConfigError("A", "CM by Z[w] needs y^2 = x^3 + B");
    if (cfg.a < 2) throw ConfigError("a", "must be at least 2");
  }

  PrimePair make_primes() const {
    if (!is_prime(cfg.p)) throw ConfigError("p", std::to_string(cfg.p) + " is not prime");
    if (split_rational_prime(cfg.p, cfg.d).kind != SplitKind::split) throw ConfigError("p", "does not split in K");
    PrimePair out;
    try {
      out = choose_prime(phi, cfg.p);
    } catch (const std::exception& e) {
      throw ConfigError("p", e.what());
    }
    if (!cfg.prime.empty()) {
      const QuadIdeal chosen = ideal("prime", cfg.prime);
      if (chosen == out.pbar) std::swap(out.p, out.pbar);
      else if (chosen != out.p) throw ConfigError("prime", to_string(chosen) + " does not lie above p");
    }
    return out;
  }

  void check_numerics() const {
    if (cfg.bound < 1) throw ConfigError("bound", "must be positive");
    if (cfg.bits < 64 || cfg.bits > 1u << 16) throw ConfigError("bits", "must lie in [64, 65536]");
    if (cfg.samples < 1) throw ConfigError("samples", "must be positive");
    PrecisionScope scope(cfg.bits);
    Real tol;
    try {
      tol = parse_real(cfg.tolerance);
    } catch (const std::exception& e) {
      throw ConfigError("tolerance", "'" + cfg.tolerance + "': " + e.what());
    }
    if (!(tol > Real(0))) throw ConfigError("tolerance", "must be positive");
    const double digits = 0.8 * cfg.bits * std::log10(2.0);
    if (-static_cast<double>(log10(tol)) > digits)
      throw ConfigError("tolerance", "needs more than " + std::to_string(cfg.bits) + " bits");
  }

  void admissible_prime(const std::string& field, const QuadIdeal& P) const {
    const QuadIdeal excluded = f * primes.pbar * QuadIdeal(QuadInt(cfg.a, 0, cfg.d));
    if (!coprime(P, excluded))
      throw ConfigError(field, to_string(P) + " is not prime to f * pbar * a");
    if (!phi.ray_one_generator(P))
      throw ConfigError(field, to_string(P) + " has no generator congruent to 1 mod f");
  }

  void check_curve_commands(const std::string& field) const {
    if (cfg.d != -4 && cfg.d != -3) throw ConfigError(field, "point counts are supported for d = -3 and d = -4");
    if (cfg.hecke_max_prime < 3) throw ConfigError("hecke-max-prime", "must be at least 3");
    for (const std::int64_t q : cfg.frobenius_primes)
      if (!is_prime(q) || split_rational_prime(q, cfg.d).kind != SplitKind::split)
        throw ConfigError("frobenius-primes", std::to_string(q) + " is not a split prime");
  }

  void check_command(const Command& c) const {
    const std::string name = command_name(c.kind);
    switch (c.kind) {
      case CommandKind::enumerate: break;
      case CommandKind::hecke_check:
      case CommandKind::frobenius_check: check_curve_commands(name); break;
      case CommandKind::build_alpha:
      case CommandKind::certify_tame:
      case CommandKind::choice_check: check_a("a", cfg.a, index_ideal("m", c.m)); break;
      case CommandKind::verify_e1: {
        const RelationPair r{index_ideal("m", c.m), index_prime("l", c.l)};
        check_e1(name, r);
        check_a("a", cfg.a, r.m * r.l);
        break;
      }
      case CommandKind::verify_e2: {
        const RelationPair r{index_ideal("m", c.m), index_prime("l", c.l)};
        check_e2(name, r);
        check_a("a", cfg.a, r.m * r.l);
        break;
      }
      case CommandKind::all: {
        check_curve_commands(name);
        for (const std::string& m : cfg.tame_m)
          for (const int a : cfg.tame_a) check_a("tame-a", a, index_ideal("tame-m", m));
        index_prime("named-l", cfg.named_l);
        for (const std::string& s : cfg.e1) {
          const RelationPair r = pair("e1", s);
          check_e1("e1", r);
          check_a("a", cfg.a, r.m * r.l);
        }
        for (const std::string& s : cfg.e2) {
          const RelationPair r = pair("e2", s);
          check_e2("e2", r);
          check_a("a", cfg.a, r.m * r.l);
        }
        check_a("a", cfg.a, index_ideal("choice-m", cfg.choice_m));
        break;
      }
    }
  }
};

void push(RunOutput& out, const ordered_json& record) {
  if (record.value("verdict", std::string()) != "pass") out.passed = false;
  out.records.push_back(record);
}

void execute(const Instance& in, const Command& cmd, const TorsionSystem& sys, const Lattice& L, const Real& tol,
             RunOutput& out) {
  const RunConfig& cfg = in.cfg;
  auto context = [&](int a) { return RelationContext{sys, L, a, in.primes.p, tol, cfg.samples, cfg.seed}; };
  const RelationContext ctx = context(cfg.a);
  switch (cmd.kind) {
    case CommandKind::enumerate:
      push(out, check_enumeration(in.phi, in.primes.pbar, cfg.a, cfg.bound).to_json());
      break;
    case CommandKind::hecke_check:
      push(out, check_hecke(in.phi, cfg.A, cfg.B, cfg.hecke_max_prime).to_json());
      break;
    case CommandKind::frobenius_check:
      for (const std::int64_t q : cfg.frobenius_primes) push(out, check_frobenius(in.phi, cfg.A, cfg.B, q).to_json());
      break;
    case CommandKind::build_alpha:
      push(out, describe_alpha(ctx, in.ideal("m", cmd.m)).to_json());
      break;
    case CommandKind::certify_tame:
      push(out, check_tame(ctx, in.ideal("m", cmd.m)).to_json());
      break;
    case CommandKind::verify_e1:
      push(out, verify_E1(ctx, in.ideal("m", cmd.m), in.index_prime("l", cmd.l)).to_json());
      break;
    case CommandKind::verify_e2:
      push(out, verify_E2(ctx, in.ideal("m", cmd.m), in.index_prime("l", cmd.l)).to_json());
      break;
    case CommandKind::choice_check:
      push(out, verify_choice_independence(ctx, in.ideal("m", cmd.m)).to_json());
      break;
    case CommandKind::all: {
      for (const CommandKind k : {CommandKind::enumerate, CommandKind::hecke_check, CommandKind::frobenius_check})
        execute(in, Command{k, "1", ""}, sys, L, tol, out);
      std::vector<QuadIdeal> ms;
      for (const std::string& m : cfg.tame_m) ms.push_back(in.ideal("tame-m", m));
      push(out, check_named_functions(ctx, ms, in.index_prime("named-l", cfg.named_l), cfg.tame_a).to_json());
      for (const int a : cfg.tame_a) {
        const RelationContext ca = context(a);
        for (const QuadIdeal& m : ms) push(out, check_tame(ca, m).to_json());
        push(out, control_single_term(ca).to_json());
      }
      bool fault_done = false;
      for (const std::string& s : cfg.e1) {
        const RelationPair r = in.pair("e1", s);
        push(out, verify_E1(ctx, r.m, r.l).to_json());
        if (!fault_done && r.l.divides(r.m)) {
          const RelationReport bad = verify_E1(ctx, r.m, r.l, Fault::g_l_times_nonconstant);
          push(out, fault_control("control/E1/" + to_string(r.m) + "/" + to_string(r.l) + "/g_l-times-nonconstant",
                                  "replacing g_l by g_l * h with h nonconstant breaks the function identity",
                                  bad.passed())
                        .to_json());
          fault_done = true;
        }
      }
      for (const std::string& s : cfg.e2) {
        const RelationPair r = in.pair("e2", s);
        push(out, verify_E2(ctx, r.m, r.l).to_json());
      }
      const QuadIdeal cm = in.ideal("choice-m", cfg.choice_m);
      push(out, verify_choice_independence(ctx, cm).to_json());
      push(out, fault_control("control/choice/" + to_string(cm) + "/nonconstant",
                              "replacing s_m by s_m * h with h nonconstant is detected",
                              verify_choice_independence(ctx, cm, Fault::nonconstant_choice).passed())
                    .to_json());
      break;
    }
  }
}

}  // namespace

void validate(const RunConfig& config) { Instance check(config); }

RunOutput run(const RunConfig& config) {
  const Instance in(config);
  PrecisionScope scope(config.bits);
  const Real tol = parse_real(config.tolerance);
  const TorsionSystem sys(in.phi, in.f);
  const Lattice L(config.d);
  RunOutput out;
  for (const Command& c : config.commands) {
    try {
      execute(in, c, sys, L, tol, out);
    } catch (const ArithmeticError& e) {
      throw ConfigError(command_name(c.kind), e.what());
    }
  }
  return out;
}

int run_main(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const RunOutput result = run(config);
    out << result.stream();
    return result.passed ? 0 : 1;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace cmk2
