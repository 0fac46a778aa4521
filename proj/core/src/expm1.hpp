#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

namespace kaon::detail {

// exp(z) - 1 without cancellation for small |z|.
inline std::complex<double> expm1(std::complex<double> z) {
  const double half_sin = std::sin(0.5 * z.imag());
  return {std::expm1(z.real()) * std::cos(z.imag()) - 2.0 * half_sin * half_sin,
          std::exp(z.real()) * std::sin(z.imag())};
}

// (exp(x) - 1) / x, equal to 1 at x = 0.
template <typename T>
T exprel(T x) {
  if (std::abs(x) < 0.5) {
    // Horner form of sum_{n>=0} x^n / (n+1)!
    T acc{1.0};
    for (int n = 24; n >= 1; --n) {
      acc = T{1.0} + acc * x / static_cast<double>(n + 1);
    }
    return acc;
  }
  if constexpr (std::is_same_v<T, double>) {
    return std::expm1(x) / x;
  } else {
    return detail::expm1(x) / x;
  }
}

}  // namespace kaon::detail
