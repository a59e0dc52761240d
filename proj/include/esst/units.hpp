#pragma once

#include <numbers>

// All frequencies inside the library are angular frequencies in rad/s with
// hbar = 1; all times are in seconds.
namespace esst::units {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// 2pi x 1 MHz in rad/s.
inline constexpr double kTwoPiMHz = kTwoPi * 1.0e6;
/// 2pi x 1 GHz in rad/s.
inline constexpr double kTwoPiGHz = kTwoPi * 1.0e9;

inline constexpr double kMicrosecond = 1.0e-6;

constexpr double from_mhz(double v) { return v * kTwoPiMHz; }
constexpr double to_mhz(double w) { return w / kTwoPiMHz; }
constexpr double from_ghz(double v) { return v * kTwoPiGHz; }
constexpr double from_us(double t) { return t * kMicrosecond; }
constexpr double to_us(double t) { return t / kMicrosecond; }

}  // namespace esst::units
