#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "primebounds/scan.hpp"

namespace primebounds {

enum class ClaimKind { PiCheck, PsiCheck, Crossover, PointValue, ConstantValue };
enum class MatchStatus { Match, Mismatch, Skipped };

std::string_view to_string(ClaimKind k);
std::string_view to_string(MatchStatus s);

// A range scan of one bound against pi or psi (by the bound's target).
struct ScanCheck {
  std::string bound;
  Direction direction;
  std::int64_t lo;
  std::int64_t hi;
  Status expect;
  std::optional<std::int64_t> expect_witness;
  // Accepted interval for |margin at witness|.
  std::optional<std::pair<double, double>> expect_witness_margin;
};

// psi(n) <= pi(n) log n <= 2 psi(n) over [lo, hi].
struct SandwichCheck {
  std::int64_t lo;
  std::int64_t hi;
};

struct CrossoverCheck {
  std::string left;
  std::string right;
  std::int64_t lo;
  std::int64_t hi;
  std::int64_t expect_threshold;
  std::int64_t expect_sign_changes;
};

// pi at a point and/or a bound's value at that point.
struct PointCheck {
  double x;
  std::optional<std::int64_t> expect_pi;
  std::optional<std::string> bound;
  double expect_value = 0.0;
  double tolerance = 0.0;
};

enum class ChebyshevConstant { C1, C2 };

struct ConstantCheck {
  ChebyshevConstant which;
  double expected;
  double tolerance;
};

// exp_threshold(shift, C) against a stated decimal, plus a direct
// evaluation of both bounds on either side of it. `covered_to` is the first
// x not covered by the accompanying scan; the threshold must not exceed it.
struct TailCheck {
  std::string shifted;  // ShiftedLog bound
  std::string scaled;   // ScaledLog bound
  double expected;
  double tolerance;
  std::int64_t covered_to;
};

// Records the last violation in a range; never affects MATCH.
struct SharpnessNote {
  std::string bound;
  Direction direction;
  std::int64_t lo;
  std::int64_t hi;
};

using Check = std::variant<ScanCheck, SandwichCheck, CrossoverCheck, PointCheck, ConstantCheck,
                           TailCheck, SharpnessNote>;

// One machine-checkable statement. The first check is the primary one: its
// verdict, witness, margin and range are what the report shows.
struct Claim {
  std::string id;
  std::string description;
  ClaimKind kind;
  std::vector<Check> checks;
};

struct CheckResult {
  bool matched = false;
  bool informational = false;
  Verdict verdict;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  // |margin| / guard at the decision that came closest; +inf when exact.
  double guard_ratio = 0.0;
  std::string detail;
};

struct ClaimResult {
  std::string id;
  std::string description;
  MatchStatus status = MatchStatus::Mismatch;
  Verdict verdict;  // of the primary check
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t elapsed_ms = 0;
  std::string skip_reason;
  std::vector<CheckResult> checks;

  // Smallest guard ratio over the decided checks (the audit quantity).
  double guard_ratio() const;
  std::int64_t ambiguous_count() const;
};

struct Report {
  std::int64_t cap = 0;
  unsigned threads = 1;
  std::string guard_policy;
  std::vector<ClaimResult> claims;
  std::int64_t total_ms = 0;

  bool all_match() const;
};

inline constexpr const char* kGuardPolicy =
    "additive: bound evaluation error + psi summation error (pi exact); "
    "ambiguous iff |margin| <= guard";

// The builtin claim suite, in registry order.
const std::vector<Claim>& builtin_claims();

// Runs one claim. Checks whose range exceeds the verifier's cap make the
// claim SKIPPED, never MISMATCH.
ClaimResult run_claim(const Claim& claim, const Verifier& verifier);

// Runs the selected claims (all when ids is empty) and assembles the report
// in registry order. Throws ArgumentError on unknown ids.
Report run_all(const std::vector<std::string>& ids = {}, const Limits& limits = {});

// Fixed-schema JSON; see README for the field list.
std::string to_json(const Report& report, bool include_timing = true);
std::string to_text(const Report& report);
std::string to_csv(const Report& report);

}  // namespace primebounds
