#pragma once

#include <string>

namespace frontspeed {

// Periodic coefficient shapes accepted by the config layer:
//   constant:      offset
//   sin2:          offset + amplitude * sin^2(2*pi*x/L)
//   shifted_sine:  offset + amplitude * sin(2*pi*x/L + phase)
struct Waveform {
  enum class Kind { constant, sin2, shifted_sine };

  Kind kind = Kind::constant;
  double offset = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;

  static Waveform constant(double value) { return {Kind::constant, value, 0.0, 0.0}; }
  static Waveform sin2(double offset, double amplitude) {
    return {Kind::sin2, offset, amplitude, 0.0};
  }
  static Waveform shifted_sine(double offset, double amplitude, double phase) {
    return {Kind::shifted_sine, offset, amplitude, phase};
  }

  double operator()(double x, double period_length) const;

  // Closed-form extrema over one period.
  double min() const;
  double max() const;

  bool is_constant() const { return kind == Kind::constant || amplitude == 0.0; }

  std::string to_string() const;

  bool operator==(const Waveform&) const = default;
};

}  // namespace frontspeed
