#include <doctest.h>

#include <cmath>
#include <random>

#include "primebounds/errors.hpp"
#include "primebounds/scan.hpp"
#include "support/oracles.hpp"

using namespace primebounds;

namespace {

const BoundExpr& B(std::string_view name) { return builtin_bounds().at(name); }

const Verifier& shared_verifier() {
  static const Verifier v;
  return v;
}

constexpr auto kUpper = Direction::UpperStrict;
constexpr auto kLower = Direction::LowerStrict;

}  // namespace

TEST_CASE("verify_pi examples") {
  const Verifier& v = shared_verifier();

  const Verdict pass = v.verify_pi(B("cheb_upper"), kUpper, 96098, 112006);
  CHECK(pass.status == Status::Pass);
  CHECK(pass.points_checked == 112006 - 96098 + 1);
  CHECK(pass.ambiguous_points.empty());
  CHECK(pass.min_margin > 0);

  const Verdict fail = v.verify_pi(B("cheb_upper"), kUpper, 96097, 96097);
  CHECK(fail.status == Status::Fail);
  REQUIRE(fail.witness);
  CHECK(*fail.witness == 96097);
  CHECK(std::fabs(fail.margin_at_witness) >= 0.07);
  CHECK(std::fabs(fail.margin_at_witness) <= 0.09);
  // Re-check the witness directly.
  CHECK(pi_at(std::int64_t{96097}) == 9260);
  CHECK(static_cast<double>(pi_at(std::int64_t{96097})) >= eval(B("cheb_upper"), 96097).value);

  CHECK(v.verify_pi(B("unit_lower"), kLower, 17, 1'000'000).status == Status::Pass);
}

TEST_CASE("lower checks use the right end of each cell") {
  const Verifier& v = shared_verifier();
  // pi(16) = 6 = pi(16.999) while 16.999/log 16.999 > 6.
  CHECK(v.verify_pi(B("unit_lower"), kLower, 16, 16).status == Status::Fail);
  CHECK(oracle::pi_trial_division(16) == 6);
  CHECK(eval(B("unit_lower"), 16.999).value > 6.0);
  CHECK(eval(B("unit_lower"), 16.0).value < 6.0);
}

TEST_CASE("verify_psi examples") {
  const Verifier& v = shared_verifier();
  CHECK(v.verify_psi(B("psi_upper"), kUpper, 30, 1'000'000).status == Status::Pass);
  CHECK(v.verify_psi(B("psi_lower"), kLower, 30, 1'000'000).status == Status::Pass);

  // psi(2) = log 2 against c1 x - (5/2) log x - 1 on [2, 3), decided by hand:
  // the bound has its minimum at x = 5/(2 c1) ~ 2.71 and is below log 2 on the
  // whole cell (its value at 3 is about -0.98).
  const auto [c1, c2] = chebyshev_constants();
  const auto lower = [&](double x) { return c1 * x - 2.5 * std::log(x) - 1; };
  const bool holds = lower(2) < std::log(2.0) && lower(3) <= std::log(2.0);
  const Verdict at2 = v.verify_psi(B("psi_lower"), kLower, 2, 2);
  CHECK(at2.status == (holds ? Status::Pass : Status::Fail));
  CHECK(at2.status == Status::Pass);
  CHECK(v.verify(B("psi_lower"), kLower, 2, 2).status == at2.status);
}

TEST_CASE("range and monotonicity errors") {
  const Verifier& v = shared_verifier();
  CHECK_THROWS_AS(v.verify_pi(B("unit_lower"), kLower, 1, 10), DomainError);
  CHECK_THROWS_AS(v.verify_pi(B("unit_lower"), kLower, 20, 10), DomainError);
  CHECK_THROWS_AS(v.verify_pi(B("unit_lower"), kLower, 17, 5'000'001), ResourceLimitError);
  CHECK_THROWS_AS(v.verify_pi(B("pan_upper"), kUpper, 3, 10), DomainError);

  ScanOptions strict;
  strict.require_increasing = true;
  CHECK_THROWS_AS(v.verify_pi(B("pan_upper"), kUpper, 4, 1'000'000, strict), MonotonicityError);
  CHECK_THROWS_AS(v.verify_psi(B("psi_lower"), kLower, 2, 2, strict), MonotonicityError);
  CHECK(v.verify_pi(B("cheb_upper"), kUpper, 96098, 112006, strict).status == Status::Pass);

  Verifier small(Limits{1000, kDefaultSegmentLength, 1});
  CHECK_THROWS_AS(small.verify_pi(B("cheb_upper"), kUpper, 96098, 112006), ResourceLimitError);
}

TEST_CASE("last_violation examples") {
  const Verifier& v = shared_verifier();

  const CrossoverResult cheb = v.last_violation(B("cheb_upper"), kUpper, 30, 200'000);
  REQUIRE(cheb.last_failure);
  CHECK(*cheb.last_failure == 96097);
  CHECK(cheb.threshold == 96098);

  const CrossoverResult d = v.last_violation(B("d125506"), kUpper, 17, 1'000'000);
  CHECK_FALSE(d.last_failure);
  CHECK(d.threshold == 17);

  // Regression value from the first full scan.
  const CrossoverResult dusart = v.last_violation(B("dusart_upper"), kUpper, 2, 1'000'000);
  REQUIRE(dusart.last_failure);
  CHECK(*dusart.last_failure == 355990);
  CHECK(dusart.threshold == 355991);
}

TEST_CASE("last_violation and verify agree") {
  const Verifier& v = shared_verifier();
  struct Case {
    const char* bound;
    Direction dir;
    std::int64_t lo;
    std::int64_t hi;
  };
  for (const Case& c : {Case{"cheb_upper", kUpper, 30, 200'000},
                        Case{"dusart_lower", kLower, 2, 100'000},
                        Case{"pan_lower", kLower, 3, 100'000},
                        Case{"unit_lower", kLower, 2, 100'000},
                        Case{"pan_upper", kUpper, 4, 100'000}}) {
    CAPTURE(c.bound);
    const CrossoverResult r = v.last_violation(B(c.bound), c.dir, c.lo, c.hi);
    REQUIRE(r.last_failure);
    CHECK(r.threshold == *r.last_failure + 1);
    CHECK(v.verify(B(c.bound), c.dir, *r.last_failure, *r.last_failure).status == Status::Fail);
    CHECK(v.verify(B(c.bound), c.dir, r.threshold, c.hi).status == Status::Pass);
  }
}

TEST_CASE("pan_upper fails just above 24000") {
  // Confirmed against trial division, independent of the sieve.
  const Verifier& v = shared_verifier();
  const Verdict r = v.verify_pi(B("pan_upper"), kUpper, 4, 1'000'000);
  CHECK(r.status == Status::Fail);
  CHECK(r.violations == 19);
  REQUIRE(r.witness);
  CHECK(*r.witness == 24254);
  CHECK(oracle::pi_trial_division(24254) == 2699);
  CHECK(2699.0 > 24254.0 / (std::log(24254.0) - 1.11));
  CHECK(v.verify_pi(B("pan_upper"), kUpper, 24255, 1'000'000).status == Status::Pass);
  CHECK(v.verify_pi(B("pan_upper"), kUpper, 4, 24120).status == Status::Pass);
}

TEST_CASE("count_violations") {
  const Verifier& v = shared_verifier();
  CHECK(v.count_violations(B("cheb_upper"), kUpper, 96098, 112006) == 0);
  CHECK(v.count_violations(B("cheb_upper"), kUpper, 96097, 96097) == 1);
  // Regression value from the first full scan.
  CHECK(v.count_violations(B("cheb_upper"), kUpper, 30, 96097) == 83411);
}

TEST_CASE("violation count matches a direct integer recount") {
  // For an increasing bound, an upper cell fails iff pi(n) >= B(n).
  std::int64_t direct = 0;
  for (std::int64_t n = 30; n <= 20'000; ++n) {
    direct += static_cast<double>(oracle::pi_trial_division(n)) >=
              eval(B("cheb_upper"), static_cast<double>(n)).value;
  }
  CHECK(shared_verifier().count_violations(B("cheb_upper"), kUpper, 30, 20'000) == direct);
}

TEST_CASE("exp_threshold") {
  const auto [c1, c2] = chebyshev_constants();
  const double t = exp_threshold(1.11, c2);
  CHECK(std::fabs(t - 112005.18) <= 0.01);
  CHECK(exp_threshold(0, 3.0) == 1.0);
  CHECK_THROWS_AS(exp_threshold(1.11, 1.0), DomainError);
  CHECK_THROWS_AS(exp_threshold(1.11, 0.5), DomainError);

  CHECK(eval(B("pan_upper"), std::ceil(t)).value <= eval(B("cheb_upper"), std::ceil(t)).value);
  CHECK(eval(B("pan_upper"), std::floor(t) - 1).value >
        eval(B("cheb_upper"), std::floor(t) - 1).value);
}

TEST_CASE("crossover examples") {
  const CrossoverResult a = analytic_crossover(B("dusart_upper"), B("pan_upper"), 30, 50'000);
  REQUIRE(a.found);
  CHECK(a.threshold == 28516);
  CHECK(a.sign_changes == 1);
  REQUIRE(a.last_failure);
  CHECK(*a.last_failure == 28515);
  CHECK(a.ambiguous_points.empty());

  const CrossoverResult b =
      analytic_crossover(B("dusart_upper"), B("legendre_a"), 1'000'001, 5'000'000);
  REQUIRE(b.found);
  CHECK(b.threshold == 2846396);
  CHECK(b.sign_changes == 1);

  const CrossoverResult same = analytic_crossover(B("pan_upper"), B("pan_upper"), 30, 1000);
  CHECK(same.found);
  CHECK(same.threshold == 30);
  CHECK(same.sign_changes == 0);
  CHECK_FALSE(same.last_failure);

  // g < f everywhere: the explicit not-found result.
  const CrossoverResult none = analytic_crossover(B("cheb_upper_2x"), B("cheb_upper"), 30, 1000);
  CHECK_FALSE(none.found);
}

TEST_CASE("crossover is stable under scan order, chunking and threads") {
  const CrossoverResult fwd = analytic_crossover(B("dusart_upper"), B("pan_upper"), 30, 50'000);
  for (bool backward : {false, true}) {
    for (std::int64_t chunk : {std::int64_t{97}, std::int64_t{4096}, std::int64_t{1} << 16}) {
      for (unsigned threads : {1u, 4u}) {
        ScanOptions o;
        o.backward = backward;
        o.chunk = chunk;
        o.threads = threads;
        const CrossoverResult r =
            analytic_crossover(B("dusart_upper"), B("pan_upper"), 30, 50'000, o);
        CHECK(r.threshold == fwd.threshold);
        CHECK(r.sign_changes == fwd.sign_changes);
        CHECK(r.min_gap == fwd.min_gap);
        CHECK(r.gap_witness == fwd.gap_witness);
      }
    }
  }
}

TEST_CASE("verdicts are bit-identical across threads, chunks and direction") {
  const Verifier& v = shared_verifier();
  const Verdict base = v.verify_pi(B("cheb_upper"), kUpper, 30, 200'000);
  for (bool backward : {false, true}) {
    for (std::int64_t chunk : {std::int64_t{1000}, std::int64_t{1} << 16}) {
      for (unsigned threads : {1u, 3u, 8u}) {
        ScanOptions o;
        o.backward = backward;
        o.chunk = chunk;
        o.threads = threads;
        const Verdict r = v.verify_pi(B("cheb_upper"), kUpper, 30, 200'000, o);
        CHECK(r.status == base.status);
        CHECK(r.witness == base.witness);
        CHECK(r.min_margin == base.min_margin);
        CHECK(r.violations == base.violations);
        CHECK(r.sign_changes == base.sign_changes);
        CHECK(r.points_checked == base.points_checked);
      }
    }
  }
}

TEST_CASE("PASS verdicts hold at random real points") {
  const Verifier& v = shared_verifier();
  struct Case {
    const char* bound;
    Direction dir;
    std::int64_t lo;
    std::int64_t hi;
  };
  std::mt19937_64 rng(2024);
  for (const Case& c : {Case{"cheb_upper", kUpper, 96098, 112006},
                        Case{"unit_lower", kLower, 17, 1'000'000},
                        Case{"dusart_lower", kLower, 32299, 1'000'000},
                        Case{"d125506", kUpper, 17, 1'000'000},
                        Case{"pan_lower", kLower, 3299, 1'000'000},
                        Case{"cheb_lower", kLower, 30, 1'000'000}}) {
    CAPTURE(c.bound);
    REQUIRE(v.verify(B(c.bound), c.dir, c.lo, c.hi).status == Status::Pass);
    std::uniform_real_distribution<double> xs(static_cast<double>(c.lo),
                                              static_cast<double>(c.hi) + 1.0);
    for (int i = 0; i < 1000; ++i) {
      double x = xs(rng);
      // Bias a third of the samples towards the right end of a cell.
      if (i % 3 == 0) x = std::floor(x) + 0.999999;
      const double pi = static_cast<double>(pi_at(x));
      const double b = eval(B(c.bound), x).value;
      CAPTURE(x);
      REQUIRE((c.dir == kUpper ? pi < b : b < pi));
    }
  }
}

TEST_CASE("turning points inside a cell are checked") {
  // unit_lower has its minimum at e, inside the cell [2, 3).
  const std::vector<double> values{1.0};
  const std::vector<double> errors{0.0};
  const Verdict r = verify_steps(B("unit_lower"), kLower, 2, values, errors);
  CHECK(r.status == Status::Fail);  // B(2) ~ 2.885 > 1
  const std::vector<double> three{3.0};
  CHECK(verify_steps(B("unit_lower"), kLower, 2, three, errors).status == Status::Pass);
  // Upper: f must stay below B at the interior minimum e ~ 2.718.
  const std::vector<double> just_below_min{std::exp(1.0) - 1e-9};
  CHECK(verify_steps(B("unit_lower"), kUpper, 2, just_below_min, errors).status == Status::Pass);
  const std::vector<double> above_min{std::exp(1.0) + 1e-6};
  CHECK(verify_steps(B("unit_lower"), kUpper, 2, above_min, errors).status == Status::Fail);
}

TEST_CASE("ties inside the guard band are ambiguous") {
  const double b17 = eval(B("unit_lower"), 17.0).value;
  const std::vector<double> values{b17};
  const std::vector<double> errors{1e-6};
  const Verdict r = verify_steps(B("unit_lower"), kLower, 16, values, errors);
  CHECK(r.status == Status::Ambiguous);
  REQUIRE(r.ambiguous_points.size() == 1);
  CHECK(r.ambiguous_points.front() == 16);
  CHECK_THROWS_AS(verify_steps(B("unit_lower"), kLower, 16, values, std::vector<double>{}),
                  DomainError);
}

TEST_CASE("sandwich inequality") {
  const Verifier& v = shared_verifier();
  const Verdict r = v.verify_sandwich(2, 1'000'000);
  CHECK(r.status == Status::Pass);
  CHECK(r.ambiguous_points.empty());
  CHECK(r.points_checked == 999'999);
  // x = 2: psi = pi log x exactly, so the float test needs the certificate.
  CHECK(r.exact_resolutions >= 1);
  for (std::int64_t n = 2; n <= 2000; ++n) CHECK(sandwich_certificate(n));
  CHECK_THROWS_AS(v.verify_sandwich(1, 10), DomainError);
}
