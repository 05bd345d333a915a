#pragma once

#include <cstddef>
#include <stdexcept>

namespace tprice {

/// Composite Simpson rule on [a, b] with `n` subintervals (rounded up to the
/// next even count). Exact for cubics.
template <class F>
double simpson(F&& f, double a, double b, std::size_t n) {
  if (n < 2) throw std::invalid_argument("simpson needs at least 2 intervals");
  if (n % 2 != 0) ++n;
  const double h = (b - a) / static_cast<double>(n);
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double x = a + h * static_cast<double>(k);
    (k % 2 ? odd : even) += f(x);
  }
  return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

}  // namespace tprice
