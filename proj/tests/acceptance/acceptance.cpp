// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure. argv[1] may name the CLI binary for the end-to-end checks;
// otherwise the CLI entry point is called in-process.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>

#include "primebounds/claims.hpp"
#include "primebounds/cli.hpp"
#include "primebounds/legendre.hpp"
#include "support/oracles.hpp"

using namespace primebounds;

namespace {

using Clock = std::chrono::steady_clock;

std::string cli_path;

struct CliRun {
  int code = 0;
  std::string out;
};

CliRun cli(const std::vector<std::string>& args) {
  CliRun r;
  if (cli_path.empty()) {
    std::ostringstream out;
    std::ostringstream err;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    return r;
  }
  std::string cmd = "'" + cli_path + "'";
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const ClaimResult* find(const Report& r, std::string_view id) {
  for (const auto& c : r.claims) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

bool matched(const Report& r, std::string_view id) {
  const ClaimResult* c = find(r, id);
  return c && c->status == MatchStatus::Match;
}

std::string strip_timing(const std::string& json) {
  static const std::regex elapsed("\"elapsed_ms\": [0-9]+");
  return std::regex_replace(json, elapsed, "\"elapsed_ms\": 0");
}

struct Outcome {
  bool ok = true;
  std::string note;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note += (note.empty() ? "" : "; ") + what;
    }
  }
};

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  const CliRun run = cli({"verify", "--claims", "C2,C3,C4", "--format", "json"});
  const double elapsed = seconds_since(t0);
  o.require(run.code == 0, "verify C2,C3,C4 exit code " + std::to_string(run.code));
  o.require(run.out.find("\"status\": \"MISMATCH\"") == std::string::npos, "a claim mismatched");

  const Report r = run_all({"C2", "C3", "C4"});
  const ClaimResult* c4 = find(r, "C4");
  o.require(matched(r, "C2") && matched(r, "C3") && matched(r, "C4"), "not all MATCH");
  o.require(c4 && c4->verdict.witness == 96097, "C4 witness");
  const double m = c4 ? std::fabs(c4->verdict.margin_at_witness) : 0;
  o.require(m >= 0.07 && m <= 0.09, "C4 margin " + std::to_string(m));
  const double tail = exp_threshold(1.11, chebyshev_constants().c2);
  o.require(std::fabs(tail - 112005.18) <= 0.01, "tail " + std::to_string(tail));
  o.require(elapsed < 2.0, "runtime " + std::to_string(elapsed) + " s");
  o.note += (o.note.empty() ? "" : "; ") + std::string("runtime ") + std::to_string(elapsed) + " s";
  return o;
}

Outcome criterion2() {
  Outcome o;
  const double v = eval(builtin_bounds().at("cheb_upper"), 100).value;
  o.require(std::fabs(v - 24.0067225069) <= 1e-9, "eval(cheb_upper, 100) = " + std::to_string(v));
  o.require(pi_at(std::int64_t{100}) == 25, "pi(100)");
  o.require(oracle::pi_trial_division(100) == 25, "oracle pi(100)");
  o.require(matched(run_all({"C1"}), "C1"), "C1 not MATCH");
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto [c1, c2] = chebyshev_constants();
  o.require(std::fabs(c1 - 0.921292022934) <= 1e-11, "c1");
  o.require(std::fabs(c2 - 1.10555042752) <= 1e-10, "c2");
  const double direct = std::log(2.0) / 2 + std::log(3.0) / 3 + std::log(5.0) / 5 -
                        std::log(30.0) / 30;
  o.require(std::fabs(c1 - direct) <= 1e-15, "c1 not from its defining logs");
  o.require(matched(run_all({"C15"}), "C15"), "C15 not MATCH");
  return o;
}

Outcome criterion4() {
  Outcome o;
  const std::vector<std::string> ids{"C5", "C6a", "C6b", "C7a", "C7b", "C8a", "C8b"};
  const std::vector<std::int64_t> thresholds{17, 32299, 355991, 284860, 17, 3299, 4};
  const auto t0 = Clock::now();
  const Report r = run_all(ids, Limits{kDefaultScanCap, kDefaultSegmentLength, 1});
  const double elapsed = seconds_since(t0);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const ClaimResult* c = find(r, ids[i]);
    if (!c || c->status != MatchStatus::Match) {
      std::string what = ids[i] + " " + (c ? std::string(to_string(c->status)) : "missing");
      if (c && c->verdict.witness) {
        what += " (" + std::string(to_string(c->verdict.status)) + " at " +
                std::to_string(*c->verdict.witness) + ", " +
                std::to_string(c->verdict.violations) + " violations)";
      }
      o.require(false, what);
    } else {
      o.require(c->lo == thresholds[i], ids[i] + " threshold " + std::to_string(c->lo));
    }
  }
  o.require(elapsed < 20.0, "runtime " + std::to_string(elapsed) + " s");
  return o;
}

Outcome criterion5() {
  Outcome o;
  const Report r = run_all({"C9", "C10", "C11"});
  for (const char* id : {"C9", "C10", "C11"}) o.require(matched(r, id), std::string(id));
  const ClaimResult* c11 = find(r, "C11");
  o.require(c11 && c11->lo == 2 && c11->hi == 1'000'000, "C11 range");
  const PsiTable table = psi_table(300);
  double worst = 0;
  for (std::int64_t x = 2; x <= 300; ++x) {
    const double exact = oracle::log_lcm(x);
    worst = std::max(worst, std::fabs(table.value(x) - exact) / exact);
    worst = std::max(worst, std::fabs(psi_at(static_cast<double>(x)).value - exact) / exact);
  }
  o.require(worst <= 1e-12, "psi vs log lcm rel err " + std::to_string(worst));
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto& reg = builtin_bounds();
  const CrossoverResult a =
      analytic_crossover(reg.at("dusart_upper"), reg.at("pan_upper"), 30, 50'000);
  const CrossoverResult b =
      analytic_crossover(reg.at("dusart_upper"), reg.at("legendre_a"), 1'000'001, 5'000'000);
  o.require(a.found && a.threshold == 28516, "first crossover " + std::to_string(a.threshold));
  o.require(a.sign_changes == 1, "first sign changes " + std::to_string(a.sign_changes));
  o.require(b.found && b.threshold == 2846396, "second crossover " + std::to_string(b.threshold));
  o.require(b.sign_changes == 1, "second sign changes " + std::to_string(b.sign_changes));
  const Report r = run_all({"C13", "C14"});
  o.require(matched(r, "C13") && matched(r, "C14"), "C13/C14 not MATCH");
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::int64_t count = 0;
  for (std::int64_t x = 0; x <= 10'000; ++x) {
    count += oracle::is_prime(x);
    if (pi_at(x) != count) {
      o.require(false, "pi_at(" + std::to_string(x) + ")");
      break;
    }
  }
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> xs(0, 5'000'000);
  const PiTable table = pi_table(2, 5'000'000);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::int64_t x = xs(rng);
    const std::int64_t sieve = x < 2 ? 0 : table.count(x);
    bad += pi_point_legendre(x) != sieve;
  }
  o.require(bad == 0, std::to_string(bad) + " Legendre samples disagree");
  o.require(pi_point_legendre(1'000'000) == 78498, "Legendre pi(1e6)");
  o.require(count_primes_up_to(1'000'000) == 78498, "sieve pi(1e6)");
  return o;
}

Outcome criterion8(const Report& full) {
  Outcome o;
  double worst = std::numeric_limits<double>::infinity();
  std::string worst_id;
  for (const auto& c : full.claims) {
    if (c.status == MatchStatus::Skipped) continue;
    o.require(c.ambiguous_count() == 0, c.id + " has ambiguous points");
    o.require(c.verdict.status != Status::Ambiguous, c.id + " AMBIGUOUS");
    if (c.guard_ratio() < worst) {
      worst = c.guard_ratio();
      worst_id = c.id;
    }
  }
  o.require(worst > 1e3, "guard ratio " + std::to_string(worst) + " at " + worst_id);
  o.note += (o.note.empty() ? "" : "; ") + std::string("smallest margin/guard ") +
            std::to_string(worst) + " (" + worst_id + ")";
  return o;
}

Outcome criterion9() {
  Outcome o;
  const auto t0 = Clock::now();
  const CliRun a = cli({"verify", "--format", "json"});
  const double elapsed = seconds_since(t0);
  const CliRun b = cli({"verify", "--format", "json"});
  o.require(a.code == b.code, "exit codes differ");
  o.require(!a.out.empty() && strip_timing(a.out) == strip_timing(b.out),
            "reruns differ beyond timing");
  const CliRun t1 = cli({"--threads", "1", "verify", "--format", "json"});
  const CliRun t8 = cli({"--threads", "8", "verify", "--format", "json"});
  o.require(strip_timing(t1.out) == strip_timing(t8.out), "threads 1 vs 8 differ");
  o.require(elapsed < 60.0, "runtime " + std::to_string(elapsed) + " s");
  o.note += (o.note.empty() ? "" : "; ") + std::string("full suite ") + std::to_string(elapsed) +
            " s";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) cli_path = argv[1];

  const Report full = run_all();

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 c2 x/log x threshold 96098 and tail (C2, C3, C4)", criterion1},
      {"2 counterexample at x = 100 (C1)", criterion2},
      {"3 constants c1, c2 (C15)", criterion3},
      {"4 pi bounds at thresholds (C5-C8b)", criterion4},
      {"5 psi suite and log-lcm oracle (C9-C11)", criterion5},
      {"6 crossovers 28516 and 2846396 (C13, C14)", criterion6},
      {"7 oracle equivalences", criterion7},
      {"8 guard-band audit", [&] { return criterion8(full); }},
      {"9 determinism and runtime", criterion9},
  };

  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.ok = false;
      o.note = std::string("exception: ") + e.what();
    }
    failures += !o.ok;
    std::cout << (o.ok ? "PASS " : "FAIL ") << name;
    if (!o.note.empty()) std::cout << " -- " << o.note;
    std::cout << "\n";
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
