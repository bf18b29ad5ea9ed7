#include "overshift/special.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "overshift/errors.hpp"

namespace overshift {

double sine_integral(double x) {
  const double ax = std::abs(x);
  if (ax == 0.0) return 0.0;
  double si;
  if (ax <= 4.0) {
    const double x2 = ax * ax;
    double term = ax;  // x^(2k+1) / (2k+1)!
    si = 0.0;
    for (int k = 0; k < 60; ++k) {
      const double contrib = term / (2 * k + 1);
      si += (k % 2 == 0) ? contrib : -contrib;
      if (contrib < 1e-18 * std::abs(si)) break;
      term *= x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    }
  } else {
    // Lentz evaluation of the continued fraction for E1(i x).
    constexpr double kTiny = 1e-300;
    std::complex<double> b(1.0, ax);
    std::complex<double> c = 1.0 / kTiny;
    std::complex<double> d = 1.0 / b;
    std::complex<double> h = d;
    for (int i = 2; i < 100000; ++i) {
      const double a = -static_cast<double>(i - 1) * (i - 1);
      b += 2.0;
      d = 1.0 / (a * d + b);
      c = b + a / c;
      const std::complex<double> del = c * d;
      h *= del;
      if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16) break;
    }
    h *= std::complex<double>(std::cos(ax), -std::sin(ax));
    si = std::numbers::pi / 2 + h.imag();
  }
  return x < 0 ? -si : si;
}

double trigamma(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw Error(ErrorKind::kInvalidArgument, "trigamma: argument must be > 0");
  }
  double acc = 0.0;
  while (z < 12.0) {
    acc += 1.0 / (z * z);
    z += 1.0;
  }
  const double iz = 1.0 / z;
  const double iz2 = iz * iz;
  // 1/z + 1/(2z^2) + sum_k B_2k / z^(2k+1)
  const double series =
      iz2 * iz *
      (1.0 / 6 +
       iz2 * (-1.0 / 30 +
              iz2 * (1.0 / 42 +
                     iz2 * (-1.0 / 30 +
                            iz2 * (5.0 / 66 + iz2 * (-691.0 / 2730 + iz2 * (7.0 / 6)))))));
  return acc + iz + 0.5 * iz2 + series;
}

}  // namespace overshift
