#include "primebounds/claims.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "parallel.hpp"
#include "primebounds/errors.hpp"

namespace primebounds {

std::string_view to_string(ClaimKind k) {
  switch (k) {
    case ClaimKind::PiCheck: return "PiCheck";
    case ClaimKind::PsiCheck: return "PsiCheck";
    case ClaimKind::Crossover: return "Crossover";
    case ClaimKind::PointValue: return "PointValue";
    case ClaimKind::ConstantValue: return "ConstantValue";
  }
  return "?";
}

std::string_view to_string(MatchStatus s) {
  switch (s) {
    case MatchStatus::Match: return "MATCH";
    case MatchStatus::Mismatch: return "MISMATCH";
    case MatchStatus::Skipped: return "SKIPPED";
  }
  return "?";
}

namespace {

constexpr double kU = std::numeric_limits<double>::epsilon() / 2;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kMillion = 1'000'000;
constexpr std::int64_t kFiveMillion = 5'000'000;

constexpr auto kUpper = Direction::UpperStrict;
constexpr auto kLower = Direction::LowerStrict;

std::vector<Claim> make_claims() {
  std::vector<Claim> claims;
  auto add = [&](std::string id, std::string description, ClaimKind kind,
                 std::vector<Check> checks) {
    claims.push_back({std::move(id), std::move(description), kind, std::move(checks)});
  };

  add("C1", "c2 x/log x < pi(x) is false at x = 100: pi(100) = 25 > 24.0067...",
      ClaimKind::PointValue,
      {ScanCheck{"cheb_upper", kUpper, 100, 100, Status::Fail, 100, std::nullopt},
       PointCheck{100.0, 25, "cheb_upper", 24.0067225069, 1e-9}});

  add("C2", "pi(x) < c2 x/log x holds on [96098, 112006]; the tail follows from "
            "x/(log x - 1.11) <= c2 x/log x beyond exp(1.11 c2/(c2 - 1))",
      ClaimKind::PiCheck,
      {ScanCheck{"cheb_upper", kUpper, 96098, 112006, Status::Pass, std::nullopt, std::nullopt},
       TailCheck{"pan_upper", "cheb_upper", 112005.18, 0.01, 112007}});

  add("C3", "exp(1.11 c2 / (c2 - 1)) = 112005.18 to two decimals", ClaimKind::ConstantValue,
      {TailCheck{"pan_upper", "cheb_upper", 112005.18, 0.01, 112007}});

  add("C4", "pi(96097) = 9260 > c2 * 96097/log 96097 = 9259.92 (last failure)",
      ClaimKind::PiCheck,
      {ScanCheck{"cheb_upper", kUpper, 96097, 96097, Status::Fail, 96097,
                 std::pair{0.07, 0.09}},
       PointCheck{96097.0, 9260, "cheb_upper", 9259.92, 0.005}});

  add("C5", "x/log x < pi(x) for all real x >= 17; fails just below 17 (x = 16.999)",
      ClaimKind::PiCheck,
      {ScanCheck{"unit_lower", kLower, 17, kMillion, Status::Pass, std::nullopt, std::nullopt},
       ScanCheck{"unit_lower", kLower, 16, 16, Status::Fail, 16, std::nullopt},
       PointCheck{16.999, 6, "unit_lower", 6.0000257, 5e-8}});

  add("C6a", "pi(x) >= (x/log x)(1 + 1/log x + 1.8/log^2 x) for x >= 32299",
      ClaimKind::PiCheck,
      {ScanCheck{"dusart_lower", kLower, 32299, kMillion, Status::Pass, std::nullopt,
                 std::nullopt},
       SharpnessNote{"dusart_lower", kLower, 2, 32298}});

  add("C6b", "pi(x) <= (x/log x)(1 + 1/log x + 2.51/log^2 x) for x >= 355991",
      ClaimKind::PiCheck,
      {ScanCheck{"dusart_upper", kUpper, 355991, kFiveMillion, Status::Pass, std::nullopt,
                 std::nullopt},
       SharpnessNote{"dusart_upper", kUpper, 2, 355990}});

  add("C7a", "pi(x) < 1.095 x/log x for x >= 284860", ClaimKind::PiCheck,
      {ScanCheck{"d1095", kUpper, 284860, kFiveMillion, Status::Pass, std::nullopt,
                 std::nullopt},
       SharpnessNote{"d1095", kUpper, 2, 284859}});

  add("C7b", "pi(x) < 1.25506 x/log x for x >= 17", ClaimKind::PiCheck,
      {ScanCheck{"d125506", kUpper, 17, kMillion, Status::Pass, std::nullopt, std::nullopt},
       SharpnessNote{"d125506", kUpper, 2, 16}});

  add("C8a", "pi(x) > x/(log x - 28/29) for x >= 3299", ClaimKind::PiCheck,
      {ScanCheck{"pan_lower", kLower, 3299, kMillion, Status::Pass, std::nullopt,
                 std::nullopt}});

  add("C8b", "pi(x) < x/(log x - 1.11) for x >= 4", ClaimKind::PiCheck,
      {ScanCheck{"pan_upper", kUpper, 4, kMillion, Status::Pass, std::nullopt, std::nullopt},
       SharpnessNote{"pan_upper", kUpper, 4, kMillion}});

  add("C9", "psi(x) < (6/5) c1 x + 5/(4 log 6) log^2 x + (5/4) log x + 1 for x >= 30",
      ClaimKind::PsiCheck,
      {ScanCheck{"psi_upper", kUpper, 30, kMillion, Status::Pass, std::nullopt, std::nullopt}});

  add("C10", "psi(x) > c1 x - (5/2) log x - 1 for x >= 30", ClaimKind::PsiCheck,
      {ScanCheck{"psi_lower", kLower, 30, kMillion, Status::Pass, std::nullopt,
                 std::nullopt}});

  add("C11", "psi(x) <= pi(x) log x <= 2 psi(x) for x >= 2", ClaimKind::PsiCheck,
      {SandwichCheck{2, kMillion}});

  add("C12", "c1 x/log x < pi(x) < 2 c2 x/log x for x >= 30", ClaimKind::PiCheck,
      {ScanCheck{"cheb_lower", kLower, 30, kMillion, Status::Pass, std::nullopt, std::nullopt},
       ScanCheck{"cheb_upper_2x", kUpper, 30, kMillion, Status::Pass, std::nullopt,
                 std::nullopt}});

  add("C13", "(x/log x)(1 + 1/log x + 2.51/log^2 x) < x/(log x - 1.11) from x = 28516",
      ClaimKind::Crossover, {CrossoverCheck{"dusart_upper", "pan_upper", 30, 50000, 28516, 1}});

  add("C14", "the 2.51 series beats x/(log x - 1.08366) only from x = 2846396",
      ClaimKind::Crossover,
      {CrossoverCheck{"dusart_upper", "legendre_a", kMillion + 1, kFiveMillion, 2846396, 1}});

  add("C15", "c1 = 0.921292022934, c2 = 1.10555042752", ClaimKind::ConstantValue,
      {ConstantCheck{ChebyshevConstant::C1, 0.921292022934, 1e-11},
       ConstantCheck{ChebyshevConstant::C2, 1.10555042752, 1e-10}});

  return claims;
}

double ratio(double margin, double guard) {
  if (guard <= 0.0) return kInf;
  return std::fabs(margin) / guard;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string describe_verdict(const Verdict& v) {
  std::ostringstream os;
  os << to_string(v.status);
  if (v.witness) os << " witness=" << *v.witness;
  os << " margin=" << fmt(v.margin_at_witness) << " guard=" << fmt(v.guard_at_witness)
     << " points=" << v.points_checked;
  if (v.violations > 0) os << " violations=" << v.violations;
  if (!v.ambiguous_points.empty()) os << " ambiguous=" << v.ambiguous_points.size();
  if (v.exact_resolutions > 0) os << " exact=" << v.exact_resolutions;
  return os.str();
}

// Largest x a check needs tabulated; 0 when it needs no table.
std::int64_t table_extent(const Check& check) {
  return std::visit(
      [](const auto& c) -> std::int64_t {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ScanCheck> || std::is_same_v<T, SandwichCheck> ||
                      std::is_same_v<T, CrossoverCheck> || std::is_same_v<T, SharpnessNote>) {
          return c.hi;
        } else {
          return 0;
        }
      },
      check);
}

bool is_informational(const Check& check) { return std::holds_alternative<SharpnessNote>(check); }

struct CheckRunner {
  const Verifier& verifier;
  const BoundRegistry& bounds = builtin_bounds();

  CheckResult operator()(const ScanCheck& c) const {
    CheckResult r;
    r.lo = c.lo;
    r.hi = c.hi;
    r.verdict = verifier.verify(bounds.at(c.bound), c.direction, c.lo, c.hi);
    const Verdict& v = r.verdict;
    r.matched = v.status == c.expect;
    if (c.expect_witness) r.matched = r.matched && v.witness == c.expect_witness;
    if (c.expect_witness_margin) {
      const double m = std::fabs(v.margin_at_witness);
      r.matched = r.matched && m >= c.expect_witness_margin->first &&
                  m <= c.expect_witness_margin->second;
    }
    r.guard_ratio = ratio(v.margin_at_witness, v.guard_at_witness);
    r.detail = c.bound + " " + std::string(to_string(c.direction)) + " on [" +
               std::to_string(c.lo) + ", " + std::to_string(c.hi) + "]: " + describe_verdict(v) +
               " (expected " + std::string(to_string(c.expect)) + ")";
    return r;
  }

  CheckResult operator()(const SandwichCheck& c) const {
    CheckResult r;
    r.lo = c.lo;
    r.hi = c.hi;
    r.verdict = verifier.verify_sandwich(c.lo, c.hi);
    r.matched = r.verdict.status == Status::Pass;
    r.guard_ratio = ratio(r.verdict.margin_at_witness, r.verdict.guard_at_witness);
    r.detail = "psi <= pi log x <= 2 psi on [" + std::to_string(c.lo) + ", " +
               std::to_string(c.hi) + "]: " + describe_verdict(r.verdict);
    return r;
  }

  CheckResult operator()(const CrossoverCheck& c) const {
    CheckResult r;
    r.lo = c.lo;
    r.hi = c.hi;
    const CrossoverResult x = analytic_crossover(bounds.at(c.left), bounds.at(c.right), c.lo, c.hi);
    Verdict& v = r.verdict;
    v.status = !x.ambiguous_points.empty() ? Status::Ambiguous
               : x.found                   ? Status::Pass
                                           : Status::Fail;
    v.witness = x.threshold;
    v.min_margin = x.min_gap;
    v.margin_at_witness = x.min_gap;
    v.guard_at_witness = x.guard_at_gap_witness;
    v.points_checked = x.points_checked;
    v.ambiguous_points = x.ambiguous_points;
    v.last_violation = x.last_failure;
    v.sign_changes = x.sign_changes;
    r.matched = x.found && x.ambiguous_points.empty() && x.threshold == c.expect_threshold &&
                x.sign_changes == c.expect_sign_changes;
    r.guard_ratio = ratio(x.min_gap, x.guard_at_gap_witness);
    r.detail = c.left + " <= " + c.right + " on [" + std::to_string(c.lo) + ", " +
               std::to_string(c.hi) + "]: threshold=" + std::to_string(x.threshold) +
               " sign_changes=" + std::to_string(x.sign_changes) + " min_gap=" + fmt(x.min_gap) +
               " at " + std::to_string(x.gap_witness) + " (expected " +
               std::to_string(c.expect_threshold) + ")";
    return r;
  }

  CheckResult operator()(const PointCheck& c) const {
    CheckResult r;
    const auto n = static_cast<std::int64_t>(std::floor(c.x));
    r.lo = r.hi = n;
    r.matched = true;
    r.guard_ratio = kInf;
    std::ostringstream detail;
    detail << "x=" << fmt(c.x);
    if (c.expect_pi) {
      const std::int64_t pi = pi_at(c.x, verifier.limits());
      r.matched = r.matched && pi == *c.expect_pi;
      detail << " pi=" << pi << " (expected " << *c.expect_pi << ")";
    }
    double margin = 0.0;
    double guard = 0.0;
    if (c.bound) {
      const EvalResult e = eval(bounds.at(*c.bound), c.x);
      margin = c.tolerance - std::fabs(e.value - c.expect_value);
      guard = e.abs_error_bound;
      r.matched = r.matched && margin >= 0.0;
      r.guard_ratio = ratio(margin, guard);
      detail << " " << *c.bound << "=" << fmt(e.value) << " (expected " << fmt(c.expect_value)
             << " +- " << c.tolerance << ")";
    }
    r.verdict.status = r.matched ? Status::Pass : Status::Fail;
    r.verdict.witness = n;
    r.verdict.min_margin = r.verdict.margin_at_witness = margin;
    r.verdict.guard_at_witness = guard;
    r.verdict.points_checked = 1;
    r.detail = detail.str();
    return r;
  }

  CheckResult operator()(const ConstantCheck& c) const {
    const auto [c1, c2] = chebyshev_constants();
    const double value = c.which == ChebyshevConstant::C1 ? c1 : c2;
    // Bound on the rounding error of the log-built constant.
    const double guard = (c.which == ChebyshevConstant::C1 ? 12 : 14) * kU * value;
    CheckResult r;
    const double margin = c.tolerance - std::fabs(value - c.expected);
    r.matched = margin >= 0.0;
    r.guard_ratio = ratio(margin, guard);
    r.verdict.status = r.matched ? Status::Pass : Status::Fail;
    r.verdict.min_margin = r.verdict.margin_at_witness = margin;
    r.verdict.guard_at_witness = guard;
    r.verdict.points_checked = 1;
    r.detail = std::string(c.which == ChebyshevConstant::C1 ? "c1" : "c2") + "=" +
               fmt(value) + " (expected " + fmt(c.expected) + " +- " + fmt(c.tolerance) + ")";
    return r;
  }

  CheckResult operator()(const TailCheck& c) const {
    const BoundExpr& shifted = bounds.at(c.shifted);
    const BoundExpr& scaled = bounds.at(c.scaled);
    const double shift = std::get<ShiftedLog>(shifted.form).shift;
    const double coefficient = std::get<ScaledLog>(scaled.form).coefficient;
    const double t = exp_threshold(shift, coefficient);
    const double above = std::ceil(t);
    const double below = std::floor(t) - 1.0;
    const bool dominated_above = eval(shifted, above).value <= eval(scaled, above).value;
    const bool exceeds_below = eval(shifted, below).value > eval(scaled, below).value;

    CheckResult r;
    r.lo = static_cast<std::int64_t>(std::floor(t));
    r.hi = static_cast<std::int64_t>(above);
    const double margin = c.tolerance - std::fabs(t - c.expected);
    // exp amplifies the relative error of its argument by the argument size.
    const double exponent = shift * coefficient / (coefficient - 1.0);
    const double guard = t * (32 * kU * std::fabs(exponent) + 2 * kU);
    r.matched = margin >= 0.0 && dominated_above && exceeds_below &&
                static_cast<std::int64_t>(above) <= c.covered_to;
    r.guard_ratio = ratio(margin, guard);
    r.verdict.status = r.matched ? Status::Pass : Status::Fail;
    r.verdict.witness = r.hi;
    r.verdict.min_margin = r.verdict.margin_at_witness = margin;
    r.verdict.guard_at_witness = guard;
    r.verdict.points_checked = 1;
    r.detail = "exp_threshold(" + fmt(shift) + ", " + fmt(coefficient) + ")=" + fmt(t) +
               " (expected " + fmt(c.expected) + " +- " + fmt(c.tolerance) + "); " + c.shifted +
               (dominated_above ? " <= " : " > ") + c.scaled + " at " + fmt(above) + ", " +
               c.shifted + (exceeds_below ? " > " : " <= ") + c.scaled + " at " + fmt(below);
    return r;
  }

  CheckResult operator()(const SharpnessNote& c) const {
    CheckResult r;
    r.informational = true;
    r.matched = true;
    r.lo = c.lo;
    r.hi = c.hi;
    const CrossoverResult x = verifier.last_violation(bounds.at(c.bound), c.direction, c.lo, c.hi);
    r.verdict.last_violation = x.last_failure;
    r.verdict.points_checked = x.points_checked;
    r.guard_ratio = kInf;
    r.detail = "informational: " + c.bound + " last violation in [" +
               std::to_string(c.lo) + ", " + std::to_string(c.hi) + "] at " +
               (x.last_failure ? std::to_string(*x.last_failure) : std::string("none"));
    return r;
  }
};

}  // namespace

double ClaimResult::guard_ratio() const {
  double worst = kInf;
  for (const auto& c : checks) {
    if (!c.informational) worst = std::min(worst, c.guard_ratio);
  }
  return worst;
}

std::int64_t ClaimResult::ambiguous_count() const {
  std::int64_t total = 0;
  for (const auto& c : checks) total += static_cast<std::int64_t>(c.verdict.ambiguous_points.size());
  return total;
}

bool Report::all_match() const {
  return !claims.empty() && std::all_of(claims.begin(), claims.end(), [](const ClaimResult& c) {
    return c.status == MatchStatus::Match;
  });
}

const std::vector<Claim>& builtin_claims() {
  static const std::vector<Claim> claims = make_claims();
  return claims;
}

ClaimResult run_claim(const Claim& claim, const Verifier& verifier) {
  const auto start = std::chrono::steady_clock::now();
  ClaimResult result;
  result.id = claim.id;
  result.description = claim.description;

  const std::int64_t cap = verifier.limits().cap;
  for (const auto& check : claim.checks) {
    if (!is_informational(check) && table_extent(check) > cap) {
      result.status = MatchStatus::Skipped;
      result.skip_reason = "needs x up to " + std::to_string(table_extent(check)) +
                           " but the cap is " + std::to_string(cap);
      break;
    }
  }

  if (result.status != MatchStatus::Skipped) {
    bool all = true;
    for (const auto& check : claim.checks) {
      if (is_informational(check) && table_extent(check) > cap) continue;
      CheckResult r;
      try {
        r = std::visit(CheckRunner{verifier}, check);
      } catch (const Error& e) {
        r.matched = false;
        r.verdict.status = Status::Fail;
        r.detail = std::string("error: ") + e.what();
      }
      all = all && (r.informational || r.matched);
      result.checks.push_back(std::move(r));
    }
    result.status = all ? MatchStatus::Match : MatchStatus::Mismatch;
    if (!result.checks.empty()) {
      result.verdict = result.checks.front().verdict;
      result.lo = result.checks.front().lo;
      result.hi = result.checks.front().hi;
    }
  } else {
    const Check& primary = claim.checks.front();
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (requires { c.lo; c.hi; }) {
            result.lo = c.lo;
            result.hi = c.hi;
          } else if constexpr (std::is_same_v<T, PointCheck>) {
            result.lo = result.hi = static_cast<std::int64_t>(std::floor(c.x));
          }
        },
        primary);
  }

  result.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return result;
}

Report run_all(const std::vector<std::string>& ids, const Limits& limits) {
  const auto start = std::chrono::steady_clock::now();
  const auto& registry = builtin_claims();

  std::vector<const Claim*> selected;
  if (ids.empty()) {
    for (const auto& c : registry) selected.push_back(&c);
  } else {
    for (const auto& id : ids) {
      auto it = std::find_if(registry.begin(), registry.end(),
                             [&](const Claim& c) { return c.id == id; });
      if (it == registry.end()) {
        std::string valid;
        for (const auto& c : registry) valid += (valid.empty() ? "" : ", ") + c.id;
        throw ArgumentError("unknown claim id '" + id + "'; valid ids: " + valid);
      }
    }
    // Registry order regardless of the order ids were given in.
    for (const auto& c : registry) {
      if (std::find(ids.begin(), ids.end(), c.id) != ids.end()) selected.push_back(&c);
    }
  }

  const Verifier verifier(limits);
  Report report;
  report.cap = limits.cap;
  report.threads = effective_threads(limits);
  report.guard_policy = kGuardPolicy;
  report.claims.resize(selected.size());
  detail::parallel_for(selected.size(), report.threads, [&](std::size_t i) {
    report.claims[i] = run_claim(*selected[i], verifier);
  });
  report.total_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  return report;
}

}  // namespace primebounds
