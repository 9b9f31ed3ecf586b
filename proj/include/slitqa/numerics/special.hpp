#pragma once

namespace slitqa {

/// Dawson function D(x) = e^{-x^2} ∫_0^x e^{t^2} dt.
double dawson(double x);

/// Standard normal CDF Φ_G(x) = ½(1 + erf(x/√2)).
double erfc_cdf(double x);

/// Complementary error function.
double erfc(double x);

} // namespace slitqa
