#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace catpump {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Internal unit of angular frequency is rad/ns, so f[GHz] -> 2*pi*f.
inline constexpr double ghz(double f) { return two_pi * f; }
inline constexpr double mhz(double f) { return two_pi * f * 1e-3; }
inline constexpr double to_ghz(double w) { return w / two_pi; }
inline constexpr double to_mhz(double w) { return w / two_pi * 1e3; }

// hbar / k_B in K*ns, so hbar*omega/(k_B T) = omega * kHbarOverKb / T.
inline constexpr double kHbarOverKb = 1.054571817e-34 / 1.380649e-23 * 1e9;

}  // namespace catpump
