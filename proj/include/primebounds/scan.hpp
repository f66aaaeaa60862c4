#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string_view>
#include <vector>

#include "primebounds/bounds.hpp"
#include "primebounds/limits.hpp"
#include "primebounds/primes.hpp"
#include "primebounds/psi.hpp"

namespace primebounds {

// Shape of the inequality being checked, f being pi or psi.
enum class Direction {
  UpperStrict,  // f(x) < B(x)
  LowerStrict,  // B(x) < f(x)
};

enum class Status { Pass, Fail, Ambiguous };

std::string_view to_string(Direction d);
std::string_view to_string(Status s);

struct Verdict {
  Status status = Status::Pass;
  // Last violating point for Fail, closest-margin point otherwise.
  std::optional<std::int64_t> witness;
  // Smallest signed decision margin over the range; positive means satisfied.
  double min_margin = 0.0;
  double margin_at_witness = 0.0;
  double guard_at_witness = 0.0;
  std::int64_t points_checked = 0;
  std::int64_t violations = 0;
  std::optional<std::int64_t> last_violation;
  std::vector<std::int64_t> ambiguous_points;
  // Points whose float comparison fell inside the guard band and were then
  // settled by an exact integer certificate (sandwich check only).
  std::int64_t exact_resolutions = 0;
  // Alternations between satisfied and violated points in increasing x.
  std::int64_t sign_changes = 0;
};

struct CrossoverResult {
  bool found = false;
  std::int64_t threshold = 0;
  std::optional<std::int64_t> last_failure;
  std::int64_t sign_changes = 0;
  std::vector<std::int64_t> ambiguous_points;
  // Smallest |g - f| seen and where; used by the guard-band audit.
  double min_gap = 0.0;
  std::int64_t gap_witness = 0;
  double guard_at_gap_witness = 0.0;
  std::int64_t points_checked = 0;
};

struct ScanOptions {
  // Reject bounds that are not increasing on [lo, hi + 1] instead of
  // handling their turning points cell by cell.
  bool require_increasing = false;
  // Walk the range from hi down to lo. Results are identical either way.
  bool backward = false;
  unsigned threads = 1;
  std::int64_t chunk = std::int64_t{1} << 16;
};

// exp(shift * C / (C - 1)): the exact real solution of
// x / (log x - shift) <= C x / log x. Throws DomainError when C <= 1.
double exp_threshold(double shift, double coefficient);

// Pure scan over an explicit step function; the building block of Verifier.
// values[i], errors[i] give f(lo + i) and its error bound.
Verdict verify_steps(const BoundExpr& b, Direction dir, std::int64_t lo,
                     std::span<const double> values, std::span<const double> errors,
                     const ScanOptions& options = {});

// Smallest n in [lo, hi] with f(m) <= g(m) for every scanned m >= n.
CrossoverResult analytic_crossover(const BoundExpr& f, const BoundExpr& g, std::int64_t lo,
                                   std::int64_t hi, const ScanOptions& options = {});

// Checks pi- and psi-inequalities under real-x semantics.
//
// Each integer n stands for the cell [n, n+1) on which pi and psi are
// constant. A cell satisfies f < B iff f(n) < B(n), f(n) <= B(n+1) and
// f(n) < B(c) at every turning point c of B inside the cell; LowerStrict is
// symmetric. Decisions within the guard band are reported, not guessed.
//
// Tables are built lazily on first use and shared; a Verifier may be used
// from several threads.
class Verifier {
 public:
  explicit Verifier(Limits limits = {});

  const Limits& limits() const { return limits_; }

  Verdict verify_pi(const BoundExpr& b, Direction dir, std::int64_t lo, std::int64_t hi,
                    const ScanOptions& options = {}) const;
  Verdict verify_psi(const BoundExpr& b, Direction dir, std::int64_t lo, std::int64_t hi,
                     const ScanOptions& options = {}) const;
  // Dispatches on b.target().
  Verdict verify(const BoundExpr& b, Direction dir, std::int64_t lo, std::int64_t hi,
                 const ScanOptions& options = {}) const;

  CrossoverResult last_violation(const BoundExpr& b, Direction dir, std::int64_t lo,
                                 std::int64_t hi, const ScanOptions& options = {}) const;
  std::int64_t count_violations(const BoundExpr& b, Direction dir, std::int64_t lo,
                                std::int64_t hi, const ScanOptions& options = {}) const;

  // psi(n) <= pi(n) log n <= 2 psi(n) for integers n in [lo, hi], lo >= 2.
  Verdict verify_sandwich(std::int64_t lo, std::int64_t hi) const;

  std::shared_ptr<const PiTable> pi_table_to(std::int64_t hi) const;
  std::shared_ptr<const PsiTable> psi_table_to(std::int64_t hi) const;

 private:
  void require_range(std::int64_t lo, std::int64_t hi) const;

  Limits limits_;
  mutable std::mutex mutex_;
  mutable std::shared_ptr<const PiTable> pi_;
  mutable std::shared_ptr<const PsiTable> psi_;
};

// Exact check of both sandwich inequalities at n via the prime-power
// exponents: p^k <= n < p^(k+1) <= p^(2k) for every prime p <= n.
bool sandwich_certificate(std::int64_t n);

}  // namespace primebounds
