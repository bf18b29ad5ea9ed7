#pragma once

namespace overshift {

// Si(x) = int_0^x sin(t)/t dt.
double sine_integral(double x);

// psi_1(z) = d^2/dz^2 log Gamma(z), z > 0.
double trigamma(double z);

}  // namespace overshift
