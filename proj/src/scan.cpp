#include "primebounds/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "parallel.hpp"
#include "primebounds/errors.hpp"

namespace primebounds {

std::string_view to_string(Direction d) {
  return d == Direction::UpperStrict ? "upper" : "lower";
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Ambiguous: return "AMBIGUOUS";
  }
  return "?";
}

double exp_threshold(double shift, double coefficient) {
  if (!(coefficient > 1.0)) {
    throw DomainError("exp_threshold requires C > 1, got " + std::to_string(coefficient));
  }
  return std::exp(shift * coefficient / (coefficient - 1.0));
}

namespace {

constexpr double kU = std::numeric_limits<double>::epsilon() / 2;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Decision {
  double margin;
  double guard;
};

enum class Outcome { Holds, Violated, Ambiguous };

Outcome classify(const Decision& d) {
  if (std::fabs(d.margin) <= d.guard) return Outcome::Ambiguous;
  return d.margin > 0 ? Outcome::Holds : Outcome::Violated;
}

// Statistics of a contiguous block of cells. merge() is associative and is
// applied in increasing-n block order, so partitioning and scheduling cannot
// change a verdict.
struct CellStats {
  std::int64_t points = 0;
  std::int64_t violations = 0;
  std::optional<std::int64_t> last_violation;
  Decision last_violation_decision{0, 0};
  double min_margin = kInf;
  std::int64_t min_at = 0;
  double min_guard = 0;
  std::vector<std::int64_t> ambiguous;
  std::int64_t exact_resolutions = 0;
  // Alternations between satisfied and violated cells, in increasing n.
  int first_sign = 0;
  int last_sign = 0;
  std::int64_t sign_changes = 0;

  void note_sign(int sign) {
    if (sign == 0) return;
    if (first_sign == 0) first_sign = sign;
    if (last_sign != 0 && last_sign != sign) ++sign_changes;
    last_sign = sign;
  }

  void record(std::int64_t n, const Decision& cell, Outcome outcome) {
    ++points;
    note_sign(outcome == Outcome::Holds ? 1 : outcome == Outcome::Violated ? -1 : 0);
    if (outcome == Outcome::Violated) {
      ++violations;
      if (!last_violation || n > *last_violation) {
        last_violation = n;
        last_violation_decision = cell;
      }
    } else if (outcome == Outcome::Ambiguous) {
      ambiguous.push_back(n);
    }
    note_margin(n, cell);
  }

  void note_margin(std::int64_t n, const Decision& cell) {
    if (cell.margin < min_margin || (cell.margin == min_margin && n < min_at)) {
      min_margin = cell.margin;
      min_at = n;
      min_guard = cell.guard;
    }
  }

  // `o` covers the cells directly above this block.
  void merge(const CellStats& o) {
    sign_changes += o.sign_changes;
    if (last_sign != 0 && o.first_sign != 0 && last_sign != o.first_sign) ++sign_changes;
    if (first_sign == 0) first_sign = o.first_sign;
    if (o.last_sign != 0) last_sign = o.last_sign;
    points += o.points;
    violations += o.violations;
    exact_resolutions += o.exact_resolutions;
    if (o.last_violation && (!last_violation || *o.last_violation > *last_violation)) {
      last_violation = o.last_violation;
      last_violation_decision = o.last_violation_decision;
    }
    if (o.points > 0 && o.min_margin != kInf) note_margin(o.min_at, {o.min_margin, o.min_guard});
    ambiguous.insert(ambiguous.end(), o.ambiguous.begin(), o.ambiguous.end());
  }

  Verdict to_verdict() && {
    Verdict v;
    std::sort(ambiguous.begin(), ambiguous.end());
    v.points_checked = points;
    v.violations = violations;
    v.last_violation = last_violation;
    v.min_margin = min_margin == kInf ? 0.0 : min_margin;
    v.ambiguous_points = std::move(ambiguous);
    v.exact_resolutions = exact_resolutions;
    v.sign_changes = sign_changes;
    if (violations > 0) {
      v.status = Status::Fail;
      v.witness = last_violation;
      v.margin_at_witness = last_violation_decision.margin;
      v.guard_at_witness = last_violation_decision.guard;
    } else {
      v.status = v.ambiguous_points.empty() ? Status::Pass : Status::Ambiguous;
      if (points > 0 && min_margin != kInf) {
        v.witness = min_at;
        v.margin_at_witness = min_margin;
        v.guard_at_witness = min_guard;
      }
    }
    return v;
  }
};

struct Chunking {
  std::int64_t lo;
  std::int64_t hi;
  std::int64_t length;
  std::size_t count() const { return static_cast<std::size_t>((hi - lo) / length + 1); }
  std::int64_t begin(std::size_t i) const { return lo + static_cast<std::int64_t>(i) * length; }
  std::int64_t end(std::size_t i) const { return std::min(hi, begin(i) + length - 1); }
};

Chunking make_chunking(std::int64_t lo, std::int64_t hi, const ScanOptions& options) {
  return {lo, hi, std::max<std::int64_t>(1, options.chunk)};
}

Decision decide(Direction dir, const EvalResult& bound, double f, double f_error) {
  const double margin = dir == Direction::UpperStrict ? bound.value - f : f - bound.value;
  return {margin, bound.abs_error_bound + f_error};
}

void require_bound_domain(const BoundExpr& b, std::int64_t lo, std::int64_t hi,
                          const ScanOptions& options) {
  const auto x_lo = static_cast<double>(lo);
  const auto x_hi = static_cast<double>(hi) + 1.0;
  if (!in_domain(b, x_lo)) {
    throw DomainError("bound '" + b.name + "' is undefined at x = " + std::to_string(lo));
  }
  if (options.require_increasing && !is_increasing_on(b, x_lo, x_hi)) {
    throw MonotonicityError("bound '" + b.name + "' is not increasing on [" +
                            std::to_string(lo) + ", " + std::to_string(hi + 1) + "]");
  }
}

// Core real-semantics scan. value(n) and error(n) give the step function on
// [n, n+1).
template <typename ValueFn, typename ErrorFn>
Verdict scan_cells(const BoundExpr& b, Direction dir, std::int64_t lo, std::int64_t hi,
                   ValueFn&& value, ErrorFn&& error, const ScanOptions& options) {
  require_bound_domain(b, lo, hi, options);
  const auto turns =
      turning_points(b, static_cast<double>(lo), static_cast<double>(hi) + 1.0);
  const Chunking chunks = make_chunking(lo, hi, options);
  std::vector<CellStats> stats(chunks.count());

  detail::parallel_for(chunks.count(), options.threads, [&](std::size_t ci) {
    const std::int64_t first = chunks.begin(ci);
    const std::int64_t last = chunks.end(ci);
    std::vector<EvalResult> at(static_cast<std::size_t>(last - first + 2));
    for (std::int64_t n = first; n <= last + 1; ++n) {
      at[static_cast<std::size_t>(n - first)] = eval(b, static_cast<double>(n));
    }
    auto turn = std::upper_bound(turns.begin(), turns.end(), static_cast<double>(first));
    const auto turn_end =
        std::lower_bound(turns.begin(), turns.end(), static_cast<double>(last) + 1.0);
    CellStats& s = stats[ci];

    auto visit = [&](std::int64_t n) {
      const double f = value(n);
      const double f_err = error(n);
      const auto i = static_cast<std::size_t>(n - first);
      Decision cell = decide(dir, at[i], f, f_err);
      Outcome outcome = classify(cell);
      auto fold = [&](const Decision& d) {
        const Outcome o = classify(d);
        if (o == Outcome::Violated ||
            (o == Outcome::Ambiguous && outcome == Outcome::Holds)) {
          outcome = o;
        }
        if (d.margin < cell.margin) cell = d;
      };
      fold(decide(dir, at[i + 1], f, f_err));
      for (auto t = std::upper_bound(turn, turn_end, static_cast<double>(n));
           t != turn_end && *t < static_cast<double>(n + 1); ++t) {
        fold(decide(dir, eval(b, *t), f, f_err));
      }
      s.record(n, cell, outcome);
    };

    if (options.backward) {
      for (std::int64_t n = last; n >= first; --n) visit(n);
      std::swap(s.first_sign, s.last_sign);
    } else {
      for (std::int64_t n = first; n <= last; ++n) visit(n);
    }
  });

  CellStats total;
  for (const auto& s : stats) total.merge(s);
  return std::move(total).to_verdict();
}

}  // namespace

Verdict verify_steps(const BoundExpr& b, Direction dir, std::int64_t lo,
                     std::span<const double> values, std::span<const double> errors,
                     const ScanOptions& options) {
  if (values.empty() || values.size() != errors.size()) {
    throw DomainError("verify_steps needs matching, nonempty value and error spans");
  }
  const std::int64_t hi = lo + static_cast<std::int64_t>(values.size()) - 1;
  return scan_cells(
      b, dir, lo, hi, [&](std::int64_t n) { return values[static_cast<std::size_t>(n - lo)]; },
      [&](std::int64_t n) { return errors[static_cast<std::size_t>(n - lo)]; }, options);
}

Verifier::Verifier(Limits limits) : limits_(limits) {}

void Verifier::require_range(std::int64_t lo, std::int64_t hi) const {
  if (lo < 2 || hi < lo) {
    throw DomainError("scan range must satisfy 2 <= lo <= hi, got [" + std::to_string(lo) +
                      ", " + std::to_string(hi) + "]");
  }
  if (hi > limits_.cap) {
    throw ResourceLimitError("scan to " + std::to_string(hi) + " exceeds the cap " +
                             std::to_string(limits_.cap));
  }
}

std::shared_ptr<const PiTable> Verifier::pi_table_to(std::int64_t hi) const {
  std::lock_guard lock(mutex_);
  if (!pi_ || pi_->hi() < hi) {
    // Grow geometrically so a sequence of widening scans sieves O(cap) total.
    const std::int64_t target =
        std::min(limits_.cap, std::max(hi, pi_ ? 2 * pi_->hi() : hi));
    pi_ = std::make_shared<const PiTable>(pi_table(0, target, limits_));
  }
  return pi_;
}

std::shared_ptr<const PsiTable> Verifier::psi_table_to(std::int64_t hi) const {
  std::lock_guard lock(mutex_);
  if (!psi_ || psi_->hi() < hi) {
    const std::int64_t target =
        std::min(limits_.cap, std::max(hi, psi_ ? 2 * psi_->hi() : hi));
    psi_ = std::make_shared<const PsiTable>(psi_table(target, limits_));
  }
  return psi_;
}

Verdict Verifier::verify_pi(const BoundExpr& b, Direction dir, std::int64_t lo, std::int64_t hi,
                            const ScanOptions& options) const {
  require_range(lo, hi);
  const auto table = pi_table_to(hi);
  return scan_cells(
      b, dir, lo, hi, [&](std::int64_t n) { return static_cast<double>(table->count(n)); },
      [](std::int64_t) { return 0.0; }, options);
}

Verdict Verifier::verify_psi(const BoundExpr& b, Direction dir, std::int64_t lo,
                             std::int64_t hi, const ScanOptions& options) const {
  require_range(lo, hi);
  const auto table = psi_table_to(hi);
  return scan_cells(
      b, dir, lo, hi, [&](std::int64_t n) { return table->value(n); },
      [&](std::int64_t n) { return table->error_bound(n); }, options);
}

Verdict Verifier::verify(const BoundExpr& b, Direction dir, std::int64_t lo, std::int64_t hi,
                         const ScanOptions& options) const {
  return b.target() == Target::Psi ? verify_psi(b, dir, lo, hi, options)
                                   : verify_pi(b, dir, lo, hi, options);
}

CrossoverResult Verifier::last_violation(const BoundExpr& b, Direction dir, std::int64_t lo,
                                         std::int64_t hi, const ScanOptions& options) const {
  const Verdict v = verify(b, dir, lo, hi, options);
  CrossoverResult out;
  out.points_checked = v.points_checked;
  out.ambiguous_points = v.ambiguous_points;
  out.last_failure = v.last_violation;
  out.threshold = v.last_violation ? *v.last_violation + 1 : lo;
  out.found = out.threshold <= hi;
  out.min_gap = v.min_margin;
  out.gap_witness = v.witness.value_or(lo);
  out.guard_at_gap_witness = v.guard_at_witness;
  out.sign_changes = v.sign_changes;
  return out;
}

std::int64_t Verifier::count_violations(const BoundExpr& b, Direction dir, std::int64_t lo,
                                        std::int64_t hi, const ScanOptions& options) const {
  return verify(b, dir, lo, hi, options).violations;
}

bool sandwich_certificate(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p : primes_up_to(n)) {
    const int k = max_power_le(p, n);
    if (k < 1) return false;
    // p^k <= n by construction of k; confirm n < p^(k+1) <= p^(2k).
    std::int64_t power = 1;
    for (int i = 0; i < k; ++i) power *= p;
    if (power > n) return false;
    if (power <= n / p) return false;  // p^(k+1) <= n would contradict maximality
  }
  return true;
}

Verdict Verifier::verify_sandwich(std::int64_t lo, std::int64_t hi) const {
  require_range(lo, hi);
  const auto table = psi_table_to(hi);
  CellStats stats;
  for (std::int64_t n = lo; n <= hi; ++n) {
    const double psi = table->value(n);
    const double psi_err = table->error_bound(n);
    const double scaled = static_cast<double>(table->prime_count(n)) *
                          std::log(static_cast<double>(n));
    const double scaled_err = 3 * kU * scaled;
    const Decision left{scaled - psi, psi_err + scaled_err};
    const Decision right{2 * psi - scaled, 2 * psi_err + scaled_err};
    const Outcome l = classify(left);
    const Outcome r = classify(right);
    if (l == Outcome::Ambiguous || r == Outcome::Ambiguous) {
      if (l != Outcome::Violated && r != Outcome::Violated && sandwich_certificate(n)) {
        ++stats.exact_resolutions;
        ++stats.points;
        // Only float-decided sides contribute to the margin statistics.
        if (l == Outcome::Holds) stats.note_margin(n, left);
        if (r == Outcome::Holds) stats.note_margin(n, right);
        continue;
      }
    }
    const Decision cell = left.margin < right.margin ? left : right;
    Outcome outcome = Outcome::Holds;
    if (l == Outcome::Violated || r == Outcome::Violated) {
      outcome = Outcome::Violated;
    } else if (l == Outcome::Ambiguous || r == Outcome::Ambiguous) {
      outcome = Outcome::Ambiguous;
    }
    stats.record(n, cell, outcome);
  }
  return std::move(stats).to_verdict();
}

namespace {

struct SignStats {
  int first = 0;  // +1 holds, -1 fails, 0 none decided yet
  int last = 0;
  std::int64_t changes = 0;
  std::optional<std::int64_t> last_failure;
  std::vector<std::int64_t> ambiguous;
  double min_gap = kInf;
  std::int64_t gap_at = 0;
  double gap_guard = 0;
  std::int64_t points = 0;

  void note(int sign) {
    if (sign == 0) return;
    if (first == 0) first = sign;
    if (last != 0 && last != sign) ++changes;
    last = sign;
  }

  // `next` covers the points scanned after this block.
  void append(const SignStats& next) {
    points += next.points;
    changes += next.changes;
    if (last != 0 && next.first != 0 && last != next.first) ++changes;
    if (first == 0) first = next.first;
    if (next.last != 0) last = next.last;
    if (next.last_failure && (!last_failure || *next.last_failure > *last_failure)) {
      last_failure = next.last_failure;
    }
    ambiguous.insert(ambiguous.end(), next.ambiguous.begin(), next.ambiguous.end());
    if (next.min_gap < min_gap || (next.min_gap == min_gap && next.gap_at < gap_at)) {
      min_gap = next.min_gap;
      gap_at = next.gap_at;
      gap_guard = next.gap_guard;
    }
  }
};

}  // namespace

CrossoverResult analytic_crossover(const BoundExpr& f, const BoundExpr& g, std::int64_t lo,
                                   std::int64_t hi, const ScanOptions& options) {
  if (hi < lo) {
    throw DomainError("crossover range is empty: [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
  for (const BoundExpr* b : {&f, &g}) {
    if (!in_domain(*b, static_cast<double>(lo))) {
      throw DomainError("bound '" + b->name + "' is undefined at x = " + std::to_string(lo));
    }
  }
  CrossoverResult out;
  if (same_form(f.form, g.form)) {
    // Identical expressions evaluate bit-identically: f <= g everywhere.
    out.found = true;
    out.threshold = lo;
    out.points_checked = hi - lo + 1;
    return out;
  }

  const Chunking chunks = make_chunking(lo, hi, options);
  std::vector<SignStats> stats(chunks.count());
  detail::parallel_for(chunks.count(), options.threads, [&](std::size_t ci) {
    const std::int64_t first = chunks.begin(ci);
    const std::int64_t last = chunks.end(ci);
    SignStats& s = stats[ci];
    auto visit = [&](std::int64_t n) {
      const auto x = static_cast<double>(n);
      const EvalResult fv = eval(f, x);
      const EvalResult gv = eval(g, x);
      const double gap = gv.value - fv.value;
      const double guard = fv.abs_error_bound + gv.abs_error_bound;
      ++s.points;
      int sign = 0;
      if (std::fabs(gap) <= guard) {
        s.ambiguous.push_back(n);
      } else {
        sign = gap > 0 ? 1 : -1;
        if (sign < 0 && (!s.last_failure || n > *s.last_failure)) s.last_failure = n;
      }
      s.note(sign);
      if (std::fabs(gap) < s.min_gap || (std::fabs(gap) == s.min_gap && n < s.gap_at)) {
        s.min_gap = std::fabs(gap);
        s.gap_at = n;
        s.gap_guard = guard;
      }
    };
    if (options.backward) {
      for (std::int64_t n = last; n >= first; --n) visit(n);
    } else {
      for (std::int64_t n = first; n <= last; ++n) visit(n);
    }
  });

  SignStats total;
  if (options.backward) {
    for (auto it = stats.rbegin(); it != stats.rend(); ++it) total.append(*it);
  } else {
    for (const auto& s : stats) total.append(s);
  }
  std::sort(total.ambiguous.begin(), total.ambiguous.end());

  out.points_checked = total.points;
  out.sign_changes = total.changes;
  out.last_failure = total.last_failure;
  out.threshold = total.last_failure ? *total.last_failure + 1 : lo;
  out.found = out.threshold <= hi;
  out.ambiguous_points = std::move(total.ambiguous);
  out.min_gap = total.min_gap == kInf ? 0.0 : total.min_gap;
  out.gap_witness = total.gap_at;
  out.guard_at_gap_witness = total.gap_guard;
  return out;
}

}  // namespace primebounds
