#include "primebounds/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "primebounds/bounds.hpp"
#include "primebounds/claims.hpp"
#include "primebounds/errors.hpp"
#include "primebounds/legendre.hpp"
#include "primebounds/primes.hpp"
#include "primebounds/psi.hpp"
#include "primebounds/scan.hpp"

namespace primebounds {

namespace {

const std::vector<std::string> kSubcommands = {"pi",     "psi",       "bound", "scan",
                                               "verify", "crossover", "table"};

// Shortest round-trip decimal, '.' separator regardless of locale.
std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_real(const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(value)) {
    throw ArgumentError("not a decimal number: '" + text + "'");
  }
  return value;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Direction parse_direction(const std::string& text) {
  if (text == "upper") return Direction::UpperStrict;
  if (text == "lower") return Direction::LowerStrict;
  throw ArgumentError("unknown direction '" + text + "'; valid: upper, lower");
}

struct Options {
  std::int64_t cap = kDefaultScanCap;
  unsigned threads = 1;
  std::string format = "text";

  std::string x_text;
  std::string method = "sieve";
  std::string bound_name;
  std::string direction = "upper";
  std::int64_t from = 0;
  std::int64_t to = 0;
  std::int64_t step = 1;
  std::string left;
  std::string right;
  std::string claims;
  std::string bounds;

  Limits limits() const { return Limits{cap, kDefaultSegmentLength, threads}; }
  bool json() const { return format == "json"; }
};

int cmd_pi(const Options& o, std::ostream& out) {
  const double x = parse_real(o.x_text);
  if (x < 0) throw DomainError("pi requires x >= 0");
  std::int64_t value = 0;
  if (o.method == "legendre") {
    const double f = std::floor(x);
    if (f > static_cast<double>(kLegendreMax)) throw OverflowError("x exceeds 2^62");
    value = pi_point_legendre(static_cast<std::int64_t>(f));
  } else {
    value = pi_at(x, o.limits());
  }
  if (o.json()) {
    out << nlohmann::ordered_json{{"x", x}, {"pi", value}, {"method", o.method}}.dump() << "\n";
  } else {
    out << value << "\n";
  }
  return kExitOk;
}

int cmd_psi(const Options& o, std::ostream& out) {
  const double x = parse_real(o.x_text);
  if (x < 0) throw DomainError("psi requires x >= 0");
  const PsiValue v = psi_at(static_cast<std::int64_t>(std::floor(x)), o.limits());
  if (o.json()) {
    out << nlohmann::ordered_json{{"x", v.x},
                                  {"psi", v.value},
                                  {"term_count", v.term_count},
                                  {"error_bound", v.error_bound}}
               .dump()
        << "\n";
  } else {
    out << format_double(v.value) << "\n";
  }
  return kExitOk;
}

int cmd_bound_list(const Options& o, std::ostream& out) {
  if (o.json()) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& b : builtin_bounds().all()) {
      list.push_back({{"name", b.name}, {"description", describe(b)}, {"valid_from", b.valid_from}});
    }
    out << list.dump(2) << "\n";
    return kExitOk;
  }
  for (const auto& b : builtin_bounds().all()) out << describe(b) << "\n";
  return kExitOk;
}

int cmd_bound_eval(const Options& o, std::ostream& out) {
  const BoundExpr& b = builtin_bounds().at(o.bound_name);
  const double x = parse_real(o.x_text);
  const EvalResult r = eval(b, x);
  if (o.json()) {
    out << nlohmann::ordered_json{{"name", b.name},
                                  {"x", x},
                                  {"value", r.value},
                                  {"abs_error_bound", r.abs_error_bound}}
               .dump()
        << "\n";
  } else {
    out << format_double(r.value) << "\n";
  }
  return kExitOk;
}

int cmd_scan(const Options& o, std::ostream& out) {
  const BoundExpr& b = builtin_bounds().at(o.bound_name);
  const Direction dir = parse_direction(o.direction);
  const Verifier verifier(o.limits());
  ScanOptions scan;
  scan.threads = effective_threads(o.limits());
  const Verdict v = verifier.verify(b, dir, o.from, o.to, scan);
  if (o.json()) {
    nlohmann::ordered_json j{{"bound", b.name},
                             {"direction", std::string(to_string(dir))},
                             {"range", {o.from, o.to}},
                             {"verdict", std::string(to_string(v.status))},
                             {"witness", v.witness ? nlohmann::ordered_json(*v.witness)
                                                   : nlohmann::ordered_json()},
                             {"min_margin", v.min_margin},
                             {"points_checked", v.points_checked},
                             {"violations", v.violations},
                             {"ambiguous_points", v.ambiguous_points}};
    out << j.dump(2) << "\n";
  } else {
    out << to_string(v.status);
    if (v.witness) out << " witness=" << *v.witness;
    out << " min_margin=" << format_double(v.min_margin) << " points=" << v.points_checked
        << " violations=" << v.violations << " ambiguous=" << v.ambiguous_points.size() << "\n";
  }
  return v.status == Status::Pass ? kExitOk : kExitCheckFailed;
}

int cmd_crossover(const Options& o, std::ostream& out) {
  const BoundExpr& f = builtin_bounds().at(o.left);
  const BoundExpr& g = builtin_bounds().at(o.right);
  ScanOptions scan;
  scan.threads = effective_threads(o.limits());
  const CrossoverResult r = analytic_crossover(f, g, o.from, o.to, scan);
  if (o.json()) {
    nlohmann::ordered_json j{{"left", f.name},
                             {"right", g.name},
                             {"range", {o.from, o.to}},
                             {"found", r.found},
                             {"threshold", r.found ? nlohmann::ordered_json(r.threshold)
                                                   : nlohmann::ordered_json()},
                             {"last_failure", r.last_failure
                                                  ? nlohmann::ordered_json(*r.last_failure)
                                                  : nlohmann::ordered_json()},
                             {"sign_changes", r.sign_changes},
                             {"ambiguous_points", r.ambiguous_points}};
    out << j.dump(2) << "\n";
  } else if (r.found) {
    out << r.threshold << " sign_changes=" << r.sign_changes
        << " ambiguous=" << r.ambiguous_points.size() << "\n";
  } else {
    out << "not found: " << f.name << " <= " << g.name << " fails at the end of the range\n";
  }
  return r.found && r.ambiguous_points.empty() ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const Report report = run_all(split_list(o.claims), o.limits());
  if (o.json()) {
    out << to_json(report);
  } else if (o.format == "csv") {
    out << to_csv(report);
  } else {
    out << to_text(report);
  }
  return report.all_match() ? kExitOk : kExitCheckFailed;
}

int cmd_table(const Options& o, std::ostream& out) {
  if (o.step < 1) throw ArgumentError("--step must be >= 1");
  if (o.from < 0 || o.to < o.from) throw DomainError("table requires 0 <= from <= to");
  std::vector<const BoundExpr*> columns;
  for (const auto& name : split_list(o.bounds)) columns.push_back(&builtin_bounds().at(name));

  const Limits limits = o.limits();
  std::optional<PiTable> table;
  if (o.to <= limits.cap) table = pi_table(o.from, o.to, limits);

  out << "x,pi";
  for (const auto* b : columns) out << ',' << b->name;
  out << '\n';
  for (std::int64_t x = o.from; x <= o.to; x += o.step) {
    out << x << ',' << (table ? table->count(x) : pi_at(x, limits));
    for (const auto* b : columns) {
      out << ',';
      const auto xd = static_cast<double>(x);
      if (in_domain(*b, xd)) out << format_double(eval(*b, xd).value);
    }
    out << '\n';
    if (o.to - x < o.step) break;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prime counting and explicit bound verification", "primebounds"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--cap", o.cap, "Largest x a sieve table may reach")
      ->check(CLI::Range(std::int64_t{2}, std::numeric_limits<std::int64_t>::max()));
  app.add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));

  auto* pi = app.add_subcommand("pi", "Count primes <= x");
  pi->add_option("x", o.x_text, "Real x >= 0 (floored)")->required();
  pi->add_option("--method", o.method)->check(CLI::IsMember({"sieve", "legendre"}));

  auto* psi = app.add_subcommand("psi", "Chebyshev psi(x)");
  psi->add_option("x", o.x_text, "Real x >= 0 (floored)")->required();

  auto* bound = app.add_subcommand("bound", "List or evaluate bound expressions");
  bound->require_subcommand(1);
  auto* bound_list = bound->add_subcommand("list", "List builtin bounds");
  auto* bound_eval = bound->add_subcommand("eval", "Evaluate a bound at x");
  bound_eval->add_option("name", o.bound_name)->required();
  bound_eval->add_option("x", o.x_text)->required();

  auto* scan = app.add_subcommand("scan", "Check a bound against pi or psi over a range");
  scan->add_option("--bound", o.bound_name)->required();
  scan->add_option("--dir", o.direction)->check(CLI::IsMember({"upper", "lower"}));
  scan->add_option("--from", o.from)->required();
  scan->add_option("--to", o.to)->required();

  auto* crossover = app.add_subcommand("crossover", "Smallest n from which left <= right");
  crossover->add_option("--left", o.left)->required();
  crossover->add_option("--right", o.right)->required();
  crossover->add_option("--from", o.from)->required();
  crossover->add_option("--to", o.to)->required();

  auto* verify = app.add_subcommand("verify", "Run the claim suite");
  verify->add_option("--claims", o.claims, "Comma-separated claim ids");
  verify->add_option("--format", o.format)->check(CLI::IsMember({"text", "json", "csv"}));

  auto* table = app.add_subcommand("table", "CSV of pi and bound values");
  table->add_option("--from", o.from)->required();
  table->add_option("--to", o.to)->required();
  table->add_option("--step", o.step);
  table->add_option("--bounds", o.bounds, "Comma-separated bound names");

  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--cap" || a == "--threads" || a == "--format") {
      ++i;
      continue;
    }
    if (a.empty() || a[0] == '-') continue;
    if (std::find(kSubcommands.begin(), kSubcommands.end(), a) == kSubcommands.end()) {
      err << "unknown subcommand '" << a << "'; valid subcommands: pi, psi, bound, scan, "
          << "crossover, verify, table\n";
      return kExitUsage;
    }
    break;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (pi->parsed()) return cmd_pi(o, out);
    if (psi->parsed()) return cmd_psi(o, out);
    if (bound_list->parsed()) return cmd_bound_list(o, out);
    if (bound_eval->parsed()) return cmd_bound_eval(o, out);
    if (scan->parsed()) return cmd_scan(o, out);
    if (crossover->parsed()) return cmd_crossover(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (table->parsed()) return cmd_table(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace primebounds
