#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace tprice {

/// Closed interval [lo, hi]; hi may be +infinity.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  double length() const noexcept { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// [0, +inf), the default domain of cost, profit and budget functions.
Interval non_negative_reals() noexcept;

/// Derivative value together with a flag raised when the estimate had to fall
/// back to a one-sided difference at the edge of a tabulated domain.
struct DerivativeEstimate {
  double value = 0.0;
  bool reduced_accuracy = false;
};

class ScalarFunction;

namespace family {
struct Linear {
  double slope;
};
/// scale * log(1 + s)
struct Logarithmic {
  double scale;
};
/// scale * s^exponent
struct Power {
  double scale;
  double exponent;
};
struct Scaled {
  std::shared_ptr<const ScalarFunction> base;
  double factor;
};
/// Piecewise-linear interpolation through strictly increasing knots.
struct Tabulated {
  std::shared_ptr<const std::vector<double>> x;
  std::shared_ptr<const std::vector<double>> y;
};
}  // namespace family

/// Immutable one-variable function of quality or demand. Used for the cost
/// C(s), the target profit B(s), per-type budgets P_i(s) and the factors of a
/// separable tariff.
class ScalarFunction {
 public:
  using Family = std::variant<family::Linear, family::Logarithmic,
                              family::Power, family::Scaled,
                              family::Tabulated>;

  static ScalarFunction linear(double slope,
                               Interval domain = non_negative_reals());
  static ScalarFunction logarithmic(double scale,
                                    Interval domain = non_negative_reals());
  static ScalarFunction power(double scale, double exponent,
                              Interval domain = non_negative_reals());
  /// factor * base(s), on the domain of `base`.
  static ScalarFunction scaled(ScalarFunction base, double factor);
  /// Throws std::invalid_argument unless `x` is strictly increasing, both
  /// columns have equal length >= 2 and all values are finite.
  static ScalarFunction tabulated(std::vector<double> x, std::vector<double> y);

  /// Throws DomainError naming the offending coordinate.
  double value(double s) const;
  double operator()(double s) const { return value(s); }

  /// Analytic for parametric families, central difference with step
  /// 1e-5 * max(1, |s|) for tabulated ones.
  double derivative(double s) const { return derivative_estimate(s).value; }
  DerivativeEstimate derivative_estimate(double s) const;

  const Interval& domain() const noexcept { return domain_; }
  const Family& family() const noexcept { return family_; }

  /// True when value and derivative are closed-form.
  bool is_analytic() const noexcept;
  /// True when the derivative is known to be monotone on the whole domain, so
  /// its extrema over an interval sit at the endpoints.
  bool has_monotone_derivative() const noexcept;

  std::string describe() const;

 private:
  ScalarFunction(Family f, Interval domain);
  void require_in_domain(double s) const;
  double raw_value(double s) const;

  Family family_;
  Interval domain_;
};

/// Rectangle [theta_low, theta_up] x [s_low, s_up] of demands and qualities.
struct DomainBox {
  double theta_low = 0.0;
  double theta_up = 0.0;
  double s_low = 0.0;
  double s_up = 0.0;

  /// Throws std::invalid_argument unless both intervals are nonempty and
  /// strictly positive.
  void validate() const;
  Interval theta() const noexcept { return {theta_low, theta_up}; }
  Interval quality() const noexcept { return {s_low, s_up}; }
  friend bool operator==(const DomainBox&, const DomainBox&) = default;
};

struct TariffPartials {
  double f_theta = 0.0;  // dF/dtheta
  double f_s = 0.0;      // dF/ds
  double f_2 = 0.0;      // d2F/(dtheta ds)
};

namespace family {
/// D_p * theta * s
struct Bilinear {
  double d_p;
};
/// g(theta) * h(s)
struct Separable {
  std::shared_ptr<const ScalarFunction> g;
  std::shared_ptr<const ScalarFunction> h;
};
/// Bilinear interpolation over a rectangular grid; values row-major with
/// theta as the slow index.
struct Grid2D {
  std::shared_ptr<const std::vector<double>> theta;
  std::shared_ptr<const std::vector<double>> s;
  std::shared_ptr<const std::vector<double>> values;
};
}  // namespace family

/// Willingness to pay F(theta, s) of a user with demand theta for quality s.
class TariffFunction {
 public:
  using Family =
      std::variant<family::Bilinear, family::Separable, family::Grid2D>;

  static TariffFunction bilinear(double d_p, DomainBox box);
  static TariffFunction separable(ScalarFunction g, ScalarFunction h,
                                  DomainBox box);
  /// `values[i * s.size() + j]` is F(theta[i], s[j]). The grid must cover
  /// `box`.
  static TariffFunction tabulated(std::vector<double> theta,
                                  std::vector<double> s,
                                  std::vector<double> values, DomainBox box);

  double value(double theta, double s) const;
  double operator()(double theta, double s) const { return value(theta, s); }
  TariffPartials partials(double theta, double s) const;

  const DomainBox& box() const noexcept { return box_; }
  const Family& family() const noexcept { return family_; }
  bool is_analytic() const noexcept;

  std::string describe() const;

 private:
  TariffFunction(Family f, DomainBox box);
  void require_in_box(double theta, double s) const;
  double raw_value(double theta, double s) const;

  Family family_;
  DomainBox box_;
};

inline TariffPartials tariff_partials(const TariffFunction& f, double theta,
                                      double s) {
  return f.partials(theta, s);
}

}  // namespace tprice
