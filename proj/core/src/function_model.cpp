#include "tprice/function_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <utility>

#include "tprice/errors.hpp"

namespace tprice {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Coordinates that overshoot a bound by a few ulps (e.g. theta_L + m_L after
// accumulating step sizes) are snapped back instead of rejected.
double edge_slack(double bound) {
  return std::isfinite(bound) ? 1e-12 * std::max(1.0, std::abs(bound)) : 0.0;
}

bool within(double x, const Interval& iv) {
  return x >= iv.lo - edge_slack(iv.lo) && x <= iv.hi + edge_slack(iv.hi);
}

double snap(double x, const Interval& iv) {
  return std::clamp(x, iv.lo, iv.hi);
}

std::string fmt_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

void require_knots(const std::vector<double>& x, const char* what) {
  if (x.size() < 2) {
    throw std::invalid_argument(std::string(what) + " needs at least 2 knots");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw std::invalid_argument(std::string(what) + " has non-finite knot");
    }
    if (i > 0 && !(x[i] > x[i - 1])) {
      throw std::invalid_argument(std::string(what) +
                                  " knots must be strictly increasing");
    }
  }
}

// Index of the segment [x[i], x[i+1]] containing t (clamped to the table).
std::size_t segment(const std::vector<double>& x, double t) {
  auto it = std::upper_bound(x.begin(), x.end(), t);
  auto i = static_cast<std::size_t>(std::distance(x.begin(), it));
  if (i == 0) return 0;
  return std::min(i - 1, x.size() - 2);
}

double interpolate(const std::vector<double>& x, const std::vector<double>& y,
                   double t) {
  const std::size_t i = segment(x, t);
  const double w = (t - x[i]) / (x[i + 1] - x[i]);
  return y[i] + w * (y[i + 1] - y[i]);
}

// Central difference of `f` at t with one-sided fallback near the edges of
// `dom`. The fallback is flagged.
template <class F>
DerivativeEstimate difference(F&& f, double t, const Interval& dom, double h) {
  const bool left_ok = t - h >= dom.lo;
  const bool right_ok = t + h <= dom.hi;
  if (left_ok && right_ok) {
    return {(f(t + h) - f(t - h)) / (2.0 * h), false};
  }
  if (right_ok) return {(f(t + h) - f(t)) / h, true};
  if (left_ok) return {(f(t) - f(t - h)) / h, true};
  throw DomainError("interval too short for a finite difference at " +
                    fmt_num(t));
}

double fd_step(double t) { return 1e-5 * std::max(1.0, std::abs(t)); }

}  // namespace

Interval non_negative_reals() noexcept {
  return {0.0, std::numeric_limits<double>::infinity()};
}

// ---------------------------------------------------------------------------
// ScalarFunction

ScalarFunction::ScalarFunction(Family f, Interval domain)
    : family_(std::move(f)), domain_(domain) {
  if (!(domain_.lo <= domain_.hi) || std::isnan(domain_.lo)) {
    throw std::invalid_argument("function domain must be a nonempty interval");
  }
}

ScalarFunction ScalarFunction::linear(double slope, Interval domain) {
  return {family::Linear{slope}, domain};
}

ScalarFunction ScalarFunction::logarithmic(double scale, Interval domain) {
  if (domain.lo <= -1.0) {
    throw std::invalid_argument("log(1+s) requires a domain above -1");
  }
  return {family::Logarithmic{scale}, domain};
}

ScalarFunction ScalarFunction::power(double scale, double exponent,
                                     Interval domain) {
  if (domain.lo < 0.0 && exponent != std::floor(exponent)) {
    throw std::invalid_argument(
        "fractional power requires a non-negative domain");
  }
  return {family::Power{scale, exponent}, domain};
}

ScalarFunction ScalarFunction::scaled(ScalarFunction base, double factor) {
  Interval dom = base.domain();
  return {family::Scaled{std::make_shared<const ScalarFunction>(std::move(base)),
                         factor},
          dom};
}

ScalarFunction ScalarFunction::tabulated(std::vector<double> x,
                                         std::vector<double> y) {
  require_knots(x, "tabulated function");
  if (x.size() != y.size()) {
    throw std::invalid_argument("tabulated function columns differ in length");
  }
  for (double v : y) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("tabulated function has non-finite value");
    }
  }
  Interval dom{x.front(), x.back()};
  return {family::Tabulated{
              std::make_shared<const std::vector<double>>(std::move(x)),
              std::make_shared<const std::vector<double>>(std::move(y))},
          dom};
}

void ScalarFunction::require_in_domain(double s) const {
  if (std::isnan(s) || !within(s, domain_)) {
    throw DomainError("s=" + fmt_num(s) + " outside [" + fmt_num(domain_.lo) +
                      ", " + fmt_num(domain_.hi) + "] of " + describe());
  }
}

double ScalarFunction::raw_value(double s) const {
  return std::visit(
      Overloaded{
          [s](const family::Linear& f) { return f.slope * s; },
          [s](const family::Logarithmic& f) { return f.scale * std::log1p(s); },
          [s](const family::Power& f) {
            return f.scale * std::pow(s, f.exponent);
          },
          [s](const family::Scaled& f) { return f.factor * f.base->value(s); },
          [s](const family::Tabulated& f) { return interpolate(*f.x, *f.y, s); },
      },
      family_);
}

double ScalarFunction::value(double s) const {
  require_in_domain(s);
  return raw_value(snap(s, domain_));
}

DerivativeEstimate ScalarFunction::derivative_estimate(double s) const {
  require_in_domain(s);
  s = snap(s, domain_);
  return std::visit(
      Overloaded{
          [](const family::Linear& f) {
            return DerivativeEstimate{f.slope, false};
          },
          [s](const family::Logarithmic& f) {
            return DerivativeEstimate{f.scale / (1.0 + s), false};
          },
          [s](const family::Power& f) {
            if (f.exponent == 0.0) return DerivativeEstimate{0.0, false};
            return DerivativeEstimate{
                f.scale * f.exponent * std::pow(s, f.exponent - 1.0), false};
          },
          [s](const family::Scaled& f) {
            auto d = f.base->derivative_estimate(s);
            d.value *= f.factor;
            return d;
          },
          [this, s](const family::Tabulated& f) {
            return difference(
                [&](double t) { return interpolate(*f.x, *f.y, t); }, s,
                domain_, fd_step(s));
          },
      },
      family_);
}

bool ScalarFunction::is_analytic() const noexcept {
  return std::visit(Overloaded{
                        [](const family::Tabulated&) { return false; },
                        [](const family::Scaled& f) {
                          return f.base->is_analytic();
                        },
                        [](const auto&) { return true; },
                    },
                    family_);
}

bool ScalarFunction::has_monotone_derivative() const noexcept {
  return is_analytic();
}

std::string ScalarFunction::describe() const {
  return std::visit(
      Overloaded{
          [](const family::Linear& f) {
            return "linear(slope=" + fmt_num(f.slope) + ")";
          },
          [](const family::Logarithmic& f) {
            return "log(scale=" + fmt_num(f.scale) + ")";
          },
          [](const family::Power& f) {
            return "power(scale=" + fmt_num(f.scale) +
                   ", exponent=" + fmt_num(f.exponent) + ")";
          },
          [](const family::Scaled& f) {
            return "scaled(" + f.base->describe() +
                   ", factor=" + fmt_num(f.factor) + ")";
          },
          [](const family::Tabulated& f) {
            return "tabulated(" + std::to_string(f.x->size()) + " knots)";
          },
      },
      family_);
}

// ---------------------------------------------------------------------------
// DomainBox

void DomainBox::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(theta_low) || !finite(theta_up) || !finite(s_low) ||
      !finite(s_up)) {
    throw std::invalid_argument("domain box bounds must be finite");
  }
  if (!(theta_low > 0.0) || !(theta_low < theta_up)) {
    throw std::invalid_argument(
        "domain box needs 0 < theta_low < theta_up");
  }
  if (!(s_low > 0.0) || !(s_low < s_up)) {
    throw std::invalid_argument("domain box needs 0 < s_low < s_up");
  }
}

// ---------------------------------------------------------------------------
// TariffFunction

TariffFunction::TariffFunction(Family f, DomainBox box)
    : family_(std::move(f)), box_(box) {
  box_.validate();
}

TariffFunction TariffFunction::bilinear(double d_p, DomainBox box) {
  if (!(d_p > 0.0)) {
    throw std::invalid_argument("bilinear tariff needs D_p > 0");
  }
  return {family::Bilinear{d_p}, box};
}

TariffFunction TariffFunction::separable(ScalarFunction g, ScalarFunction h,
                                         DomainBox box) {
  if (!within(box.theta_low, g.domain()) || !within(box.theta_up, g.domain())) {
    throw std::invalid_argument("separable tariff: g does not cover theta range");
  }
  if (!within(box.s_low, h.domain()) || !within(box.s_up, h.domain())) {
    throw std::invalid_argument("separable tariff: h does not cover s range");
  }
  return {family::Separable{std::make_shared<const ScalarFunction>(std::move(g)),
                            std::make_shared<const ScalarFunction>(std::move(h))},
          box};
}

TariffFunction TariffFunction::tabulated(std::vector<double> theta,
                                         std::vector<double> s,
                                         std::vector<double> values,
                                         DomainBox box) {
  require_knots(theta, "tariff theta grid");
  require_knots(s, "tariff s grid");
  if (values.size() != theta.size() * s.size()) {
    throw std::invalid_argument("tariff grid values do not fill the grid");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("tariff grid has non-finite value");
    }
  }
  if (theta.front() > box.theta_low || theta.back() < box.theta_up ||
      s.front() > box.s_low || s.back() < box.s_up) {
    throw std::invalid_argument("tariff grid does not cover the domain box");
  }
  return {family::Grid2D{
              std::make_shared<const std::vector<double>>(std::move(theta)),
              std::make_shared<const std::vector<double>>(std::move(s)),
              std::make_shared<const std::vector<double>>(std::move(values))},
          box};
}

void TariffFunction::require_in_box(double theta, double s) const {
  if (std::isnan(theta) || !within(theta, box_.theta())) {
    throw DomainError("theta=" + fmt_num(theta) + " outside [" +
                      fmt_num(box_.theta_low) + ", " + fmt_num(box_.theta_up) +
                      "]");
  }
  if (std::isnan(s) || !within(s, box_.quality())) {
    throw DomainError("s=" + fmt_num(s) + " outside [" + fmt_num(box_.s_low) +
                      ", " + fmt_num(box_.s_up) + "]");
  }
}

double TariffFunction::raw_value(double theta, double s) const {
  return std::visit(
      Overloaded{
          [=](const family::Bilinear& f) { return f.d_p * theta * s; },
          [=](const family::Separable& f) {
            return f.g->value(theta) * f.h->value(s);
          },
          [=](const family::Grid2D& f) {
            const auto& tx = *f.theta;
            const auto& sx = *f.s;
            const auto& v = *f.values;
            const std::size_t i = segment(tx, theta);
            const std::size_t j = segment(sx, s);
            const std::size_t n = sx.size();
            const double u = (theta - tx[i]) / (tx[i + 1] - tx[i]);
            const double w = (s - sx[j]) / (sx[j + 1] - sx[j]);
            const double v00 = v[i * n + j], v01 = v[i * n + j + 1];
            const double v10 = v[(i + 1) * n + j], v11 = v[(i + 1) * n + j + 1];
            return (1 - u) * ((1 - w) * v00 + w * v01) +
                   u * ((1 - w) * v10 + w * v11);
          },
      },
      family_);
}

double TariffFunction::value(double theta, double s) const {
  require_in_box(theta, s);
  return raw_value(snap(theta, box_.theta()), snap(s, box_.quality()));
}

TariffPartials TariffFunction::partials(double theta, double s) const {
  require_in_box(theta, s);
  theta = snap(theta, box_.theta());
  s = snap(s, box_.quality());
  return std::visit(
      Overloaded{
          [=](const family::Bilinear& f) {
            return TariffPartials{f.d_p * s, f.d_p * theta, f.d_p};
          },
          [=](const family::Separable& f) {
            const double g = f.g->value(theta), dg = f.g->derivative(theta);
            const double h = f.h->value(s), dh = f.h->derivative(s);
            return TariffPartials{dg * h, g * dh, dg * dh};
          },
          [this, theta, s](const family::Grid2D&) {
            const Interval th = box_.theta(), sq = box_.quality();
            const double ht = fd_step(theta), hs = fd_step(s);
            TariffPartials p;
            p.f_theta = difference([&](double t) { return raw_value(t, s); },
                                   theta, th, ht)
                            .value;
            p.f_s = difference([&](double q) { return raw_value(theta, q); }, s,
                               sq, hs)
                        .value;
            // Mixed partial: difference in theta of the s-difference, with
            // wider steps to keep cancellation error down.
            const double mt = 1e-4 * std::max(1.0, std::abs(theta));
            const double ms = 1e-4 * std::max(1.0, std::abs(s));
            p.f_2 = difference(
                        [&](double t) {
                          return difference(
                                     [&](double q) { return raw_value(t, q); },
                                     s, sq, ms)
                              .value;
                        },
                        theta, th, mt)
                        .value;
            return p;
          },
      },
      family_);
}

bool TariffFunction::is_analytic() const noexcept {
  return std::visit(Overloaded{
                        [](const family::Grid2D&) { return false; },
                        [](const family::Separable& f) {
                          return f.g->is_analytic() && f.h->is_analytic();
                        },
                        [](const auto&) { return true; },
                    },
                    family_);
}

std::string TariffFunction::describe() const {
  return std::visit(
      Overloaded{
          [](const family::Bilinear& f) {
            return "bilinear(D_p=" + fmt_num(f.d_p) + ")";
          },
          [](const family::Separable& f) {
            return "separable(g=" + f.g->describe() + ", h=" + f.h->describe() +
                   ")";
          },
          [](const family::Grid2D& f) {
            return "tabulated(" + std::to_string(f.theta->size()) + "x" +
                   std::to_string(f.s->size()) + ")";
          },
      },
      family_);
}

}  // namespace tprice
