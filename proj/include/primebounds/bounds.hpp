#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace primebounds {

// B(x) = coefficient * x / log x
struct ScaledLog {
  double coefficient;
};

// B(x) = x / (log x - shift)
struct ShiftedLog {
  double shift;
};

// B(x) = (x / log x) * (1 + 1/log x + k / log^2 x)
struct DusartSeries {
  double k;
};

// B(x) = linear * x + log_squared * log^2 x + log * log x + constant
struct PsiAffine {
  double linear;
  double log_squared;
  double log;
  double constant;
};

using BoundForm = std::variant<ScaledLog, ShiftedLog, DusartSeries, PsiAffine>;

// Which arithmetic function a bound is compared against.
enum class Target { Pi, Psi };

struct BoundExpr {
  std::string name;
  BoundForm form;
  double valid_from = 0.0;
  // Relative error of the stored parameters against their exact values
  // (0.5 ulp for decimal literals, more for constants built from logs).
  double parameter_error = 0.0;

  Target target() const {
    return std::holds_alternative<PsiAffine>(form) ? Target::Psi : Target::Pi;
  }
};

bool same_form(const BoundForm& a, const BoundForm& b);

struct EvalResult {
  double value;
  double abs_error_bound;
};

struct ChebyshevConstants {
  double c1;
  double c2;
};

// c1 = log(2^(1/2) 3^(1/3) 5^(1/5) 30^(-1/30)), c2 = (6/5) c1.
ChebyshevConstants chebyshev_constants();

// True iff x lies in the domain where the formula is defined.
bool in_domain(const BoundExpr& b, double x);

// Evaluates b at x with a conservative rounding-error bound.
// Throws DomainError naming the bound and x when x is out of domain.
EvalResult eval(const BoundExpr& b, double x);

// A function whose sign equals the sign of B'(x) on the domain.
double derivative_sign_function(const BoundExpr& b, double x);

// Points in [lo, hi] where B' changes sign, in increasing order. Located
// by splitting at the analytic critical points of the sign function and
// bisecting each monotone piece.
std::vector<double> turning_points(const BoundExpr& b, double lo, double hi);

// True iff B' > 0 on all of [lo, hi].
bool is_increasing_on(const BoundExpr& b, double lo, double hi);

class BoundRegistry {
 public:
  // Throws ArgumentError when the name is already present.
  void add(BoundExpr bound);

  // Throws ArgumentError listing the valid names when absent.
  const BoundExpr& at(std::string_view name) const;
  const BoundExpr* find(std::string_view name) const;

  std::span<const BoundExpr> all() const { return bounds_; }
  std::vector<std::string> names() const;

 private:
  std::vector<BoundExpr> bounds_;
};

// Every builtin bound family, keyed by name.
const BoundRegistry& builtin_bounds();

std::string describe(const BoundExpr& b);

}  // namespace primebounds
