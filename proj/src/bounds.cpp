#include "primebounds/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "primebounds/errors.hpp"

namespace primebounds {

namespace {

constexpr double kU = std::numeric_limits<double>::epsilon() / 2;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::string format_real(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

[[noreturn]] void throw_domain(const BoundExpr& b, double x) {
  throw DomainError("x = " + format_real(x) + " is outside the domain of bound '" + b.name + "'");
}

}  // namespace

bool same_form(const BoundForm& a, const BoundForm& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      Overloaded{
          [&](const ScaledLog& f) { return f.coefficient == std::get<ScaledLog>(b).coefficient; },
          [&](const ShiftedLog& f) { return f.shift == std::get<ShiftedLog>(b).shift; },
          [&](const DusartSeries& f) { return f.k == std::get<DusartSeries>(b).k; },
          [&](const PsiAffine& f) {
            const auto& g = std::get<PsiAffine>(b);
            return f.linear == g.linear && f.log_squared == g.log_squared && f.log == g.log &&
                   f.constant == g.constant;
          },
      },
      a);
}

ChebyshevConstants chebyshev_constants() {
  const double c1 = std::log(2.0) / 2 + std::log(3.0) / 3 + std::log(5.0) / 5 -
                    std::log(30.0) / 30;
  return {c1, 6.0 / 5.0 * c1};
}

bool in_domain(const BoundExpr& b, double x) {
  if (!(x > 1.0) || !std::isfinite(x)) {
    // ShiftedLog with a negative shift is defined on part of (0, 1] as well,
    // but no bound in this algebra is evaluated there.
    return false;
  }
  if (const auto* s = std::get_if<ShiftedLog>(&b.form)) return std::log(x) > s->shift;
  return true;
}

EvalResult eval(const BoundExpr& b, double x) {
  if (!in_domain(b, x)) throw_domain(b, x);
  const double L = std::log(x);
  const double e = b.parameter_error;
  return std::visit(
      Overloaded{
          [&](const ScaledLog& f) -> EvalResult {
            const double v = f.coefficient * (x / L);
            return {v, 2 * (e + 4 * kU) * std::fabs(v)};
          },
          [&](const ShiftedLog& f) -> EvalResult {
            const double d = L - f.shift;
            const double d_err = 2 * kU * L + (e + kU) * std::fabs(f.shift) + kU * d;
            const double v = x / d;
            return {v, 2 * (d_err / d + kU) * std::fabs(v)};
          },
          [&](const DusartSeries& f) -> EvalResult {
            const double t = 1.0 / L;
            const double head = x / L;
            const double series = 1.0 + t + f.k * t * t;
            const double v = head * series;
            const double tail_err = e * std::fabs(f.k) * t * t * head;
            return {v, 2 * (16 * kU * std::fabs(v) + tail_err)};
          },
          [&](const PsiAffine& f) -> EvalResult {
            const double terms[] = {f.linear * x, f.log_squared * L * L, f.log * L, f.constant};
            const double rel[] = {e + kU, e + 5 * kU, e + 3 * kU, e};
            double v = 0.0;
            double magnitude = 0.0;
            double err = 0.0;
            for (int i = 0; i < 4; ++i) {
              v += terms[i];
              magnitude += std::fabs(terms[i]);
              err += std::fabs(terms[i]) * rel[i];
            }
            return {v, 2 * (err + 3 * kU * magnitude)};
          },
      },
      b.form);
}

double derivative_sign_function(const BoundExpr& b, double x) {
  if (!in_domain(b, x)) throw_domain(b, x);
  const double L = std::log(x);
  return std::visit(
      Overloaded{
          // d/dx C x/L = C (L - 1) / L^2
          [&](const ScaledLog& f) { return f.coefficient * (L - 1.0); },
          // d/dx x/(L - m) = (L - m - 1) / (L - m)^2
          [&](const ShiftedLog& f) { return L - f.shift - 1.0; },
          // With t = 1/L: B' = t (1 + (k - 2) t^2 - 3k t^3)
          [&](const DusartSeries& f) {
            const double t = 1.0 / L;
            return 1.0 + (f.k - 2.0) * t * t - 3.0 * f.k * t * t * t;
          },
          // B' = (a x + 2 b L + c) / x
          [&](const PsiAffine& f) { return f.linear * x + 2.0 * f.log_squared * L + f.log; },
      },
      b.form);
}

namespace {

// Critical points of derivative_sign_function in (lo, hi): between them it
// is monotone, so each piece holds at most one sign change.
std::vector<double> sign_function_breaks(const BoundExpr& b, double lo, double hi) {
  std::vector<double> out;
  auto keep = [&](double x) {
    if (x > lo && x < hi) out.push_back(x);
  };
  std::visit(Overloaded{
                 [](const ScaledLog&) {},
                 [](const ShiftedLog&) {},
                 [&](const DusartSeries& f) {
                   // dP/dt = 2 (k - 2) t - 9 k t^2 vanishes at t = 2 (k - 2) / (9 k).
                   if (f.k != 0.0) {
                     const double t = 2.0 * (f.k - 2.0) / (9.0 * f.k);
                     if (t > 0.0) keep(std::exp(1.0 / t));
                   }
                 },
                 [&](const PsiAffine& f) {
                   // d/dx (a x + 2 b log x + c) = a + 2 b / x vanishes at x = -2b/a.
                   if (f.linear != 0.0) keep(-2.0 * f.log_squared / f.linear);
                 },
             },
             b.form);
  return out;
}

std::vector<double> breakpoints(const BoundExpr& b, double lo, double hi) {
  std::vector<double> points{lo};
  for (double c : sign_function_breaks(b, lo, hi)) points.push_back(c);
  points.push_back(hi);
  std::sort(points.begin(), points.end());
  return points;
}

void require_interval(const BoundExpr& b, double lo, double hi) {
  if (!(lo <= hi)) {
    throw DomainError("interval [" + format_real(lo) + ", " + format_real(hi) + "] is empty");
  }
  if (!in_domain(b, lo)) throw_domain(b, lo);
  if (!in_domain(b, hi)) throw_domain(b, hi);
}

}  // namespace

std::vector<double> turning_points(const BoundExpr& b, double lo, double hi) {
  require_interval(b, lo, hi);
  const auto points = breakpoints(b, lo, hi);
  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    double left = points[i];
    double right = points[i + 1];
    const double s_left = derivative_sign_function(b, left);
    const double s_right = derivative_sign_function(b, right);
    if (s_left == 0.0) {
      roots.push_back(left);
      continue;
    }
    if (s_right == 0.0 || (s_left < 0) == (s_right < 0)) continue;
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = left + (right - left) / 2;
      if (mid <= left || mid >= right) break;
      if ((derivative_sign_function(b, mid) < 0) == (s_left < 0)) {
        left = mid;
      } else {
        right = mid;
      }
    }
    roots.push_back(left + (right - left) / 2);
  }
  if (derivative_sign_function(b, hi) == 0.0) roots.push_back(hi);
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

bool is_increasing_on(const BoundExpr& b, double lo, double hi) {
  require_interval(b, lo, hi);
  for (double x : breakpoints(b, lo, hi)) {
    if (!(derivative_sign_function(b, x) > 0.0)) return false;
  }
  return true;
}

void BoundRegistry::add(BoundExpr bound) {
  if (find(bound.name) != nullptr) throw ArgumentError("duplicate bound name '" + bound.name + "'");
  bounds_.push_back(std::move(bound));
}

const BoundExpr* BoundRegistry::find(std::string_view name) const {
  for (const auto& b : bounds_) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

const BoundExpr& BoundRegistry::at(std::string_view name) const {
  if (const auto* b = find(name)) return *b;
  std::string valid;
  for (const auto& b : bounds_) {
    if (!valid.empty()) valid += ", ";
    valid += b.name;
  }
  throw ArgumentError("unknown bound '" + std::string(name) + "'; valid names: " + valid);
}

std::vector<std::string> BoundRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& b : bounds_) out.push_back(b.name);
  return out;
}

const BoundRegistry& builtin_bounds() {
  static const BoundRegistry registry = [] {
    const auto [c1, c2] = chebyshev_constants();
    // c1 carries four faithfully rounded logs plus the sums; c2 one more product.
    const double c1_err = 12 * kU;
    const double c2_err = c1_err + 2 * kU;
    const double literal = kU;

    BoundRegistry r;
    r.add({"cheb_upper", ScaledLog{c2}, 96098, c2_err});
    r.add({"cheb_lower", ScaledLog{c1}, 30, c1_err});
    r.add({"cheb_upper_2x", ScaledLog{2 * c2}, 30, c2_err});
    r.add({"unit_lower", ScaledLog{1.0}, 17, 0.0});
    r.add({"d1095", ScaledLog{1.095}, 284860, literal});
    r.add({"d125506", ScaledLog{1.25506}, 17, literal});
    r.add({"dusart_lower", DusartSeries{1.8}, 32299, literal});
    r.add({"dusart_upper", DusartSeries{2.51}, 355991, literal});
    r.add({"pan_lower", ShiftedLog{28.0 / 29.0}, 3299, literal});
    r.add({"pan_upper", ShiftedLog{1.11}, 4, literal});
    r.add({"legendre_a", ShiftedLog{1.08366}, 1e6, literal});
    r.add({"psi_upper",
           PsiAffine{6.0 / 5.0 * c1, 5.0 / (4.0 * std::log(6.0)), 5.0 / 4.0, 1.0}, 30, c2_err});
    r.add({"psi_lower", PsiAffine{c1, 0.0, -5.0 / 2.0, -1.0}, 30, c1_err});
    return r;
  }();
  return registry;
}

std::string describe(const BoundExpr& b) {
  std::string form = std::visit(
      Overloaded{
          [](const ScaledLog& f) { return "ScaledLog{C=" + format_real(f.coefficient) + "}"; },
          [](const ShiftedLog& f) { return "ShiftedLog{m=" + format_real(f.shift) + "}"; },
          [](const DusartSeries& f) { return "DusartSeries{k=" + format_real(f.k) + "}"; },
          [](const PsiAffine& f) {
            return "PsiAffine{a=" + format_real(f.linear) + ", b=" + format_real(f.log_squared) +
                   ", c=" + format_real(f.log) + ", d=" + format_real(f.constant) + "}";
          },
      },
      b.form);
  return b.name + " " + form + " valid_from=" + format_real(b.valid_from) + " target=" +
         (b.target() == Target::Pi ? "pi" : "psi");
}

}  // namespace primebounds
