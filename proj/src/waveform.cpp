#include "frontspeed/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "frontspeed/report.hpp"

namespace frontspeed {

double Waveform::operator()(double x, double period_length) const {
  const double theta = 2.0 * std::numbers::pi * x / period_length;
  switch (kind) {
    case Kind::constant:
      return offset;
    case Kind::sin2: {
      const double s = std::sin(theta);
      return offset + amplitude * s * s;
    }
    case Kind::shifted_sine:
      return offset + amplitude * std::sin(theta + phase);
  }
  return offset;
}

double Waveform::min() const {
  switch (kind) {
    case Kind::constant:
      return offset;
    case Kind::sin2:
      return offset + std::min(0.0, amplitude);
    case Kind::shifted_sine:
      return offset - std::abs(amplitude);
  }
  return offset;
}

double Waveform::max() const {
  switch (kind) {
    case Kind::constant:
      return offset;
    case Kind::sin2:
      return offset + std::max(0.0, amplitude);
    case Kind::shifted_sine:
      return offset + std::abs(amplitude);
  }
  return offset;
}

std::string Waveform::to_string() const {
  switch (kind) {
    case Kind::constant:
      return "constant " + format_number(offset);
    case Kind::sin2:
      return "sin2 " + format_number(offset) + " " + format_number(amplitude);
    case Kind::shifted_sine:
      return "shifted_sine " + format_number(offset) + " " +
             format_number(amplitude) + " " + format_number(phase);
  }
  return {};
}

}  // namespace frontspeed
