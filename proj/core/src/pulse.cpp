// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include "romscat/pulse.hpp"

#include <cmath>
#include <numbers>

#include "romscat/error.hpp"

namespace romscat {

Pulse Pulse::ricker(double center_frequency) {
  if (!(center_frequency > 0.0)) throw ArgumentError("pulse center frequency must be positive");
  Pulse p;
  p.kind_ = Kind::Ricker;
  p.f0_ = center_frequency;
  return p;
}

Pulse Pulse::flat() {
  Pulse p;
  p.kind_ = Kind::Flat;
  return p;
}

Pulse Pulse::custom(std::function<double(double)> half_spectrum, double center_frequency) {
  if (!half_spectrum) throw ArgumentError("custom pulse needs a spectrum");
  if (!(center_frequency > 0.0)) throw ArgumentError("pulse center frequency must be positive");
  Pulse p;
  p.kind_ = Kind::Custom;
  p.f0_ = center_frequency;
  p.custom_ = std::move(half_spectrum);
  return p;
}

double Pulse::peak_angular_frequency() const { return 2.0 * std::numbers::pi * f0_; }

double Pulse::half_spectrum(double omega) const {
  switch (kind_) {
    case Kind::Flat:
      return 1.0;
    case Kind::Custom:
      return custom_(omega);
    case Kind::Ricker:
      break;
  }
  const double x = omega / peak_angular_frequency();
  return x * x * std::exp(-x * x);
}

double Pulse::spectrum(double omega) const {
  const double s = half_spectrum(omega);
  return s * s;
}

double Pulse::cutoff_angular_frequency(double level) const {
  if (!(level > 0.0 && level < 1.0)) throw ArgumentError("cut-off level must lie in (0, 1)");
  if (kind_ == Kind::Flat) throw ArgumentError("flat pulse has no cut-off frequency");
  const double wp = peak_angular_frequency();
  const double target = level * spectrum(wp);
  double lo = wp;
  double hi = 2.0 * wp;
  while (spectrum(hi) > target) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (spectrum(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double Pulse::tau_for(double samples_per_period, double level) const {
  if (!(samples_per_period > 0.0)) throw ArgumentError("samples per period must be positive");
  return 2.0 * std::numbers::pi / (samples_per_period * cutoff_angular_frequency(level));
}

double Pulse::support() const {
  if (kind_ == Kind::Flat) return 0.0;
  // f(t) = integral_0^W s(w)^2 cos(w t) dw by the trapezoid rule.
  const double wmax = 8.0 * peak_angular_frequency();
  const int samples = 4000;
  const double dw = wmax / samples;
  auto f = [&](double t) {
    double acc = 0.0;
    for (int k = 0; k <= samples; ++k) {
      const double w = k * dw;
      const double weight = (k == 0 || k == samples) ? 0.5 : 1.0;
      acc += weight * spectrum(w) * std::cos(w * t);
    }
    return acc * dw;
  };
  const double peak = std::abs(f(0.0));
  const double dt = 0.05 / f0_;
  double last = 0.0;
  for (int k = 1; k < 800; ++k) {
    if (std::abs(f(k * dt)) > 1e-6 * peak) last = k * dt;
  }
  return last + dt;
}

}  // namespace romscat
