// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

namespace romscat {

/// Probing pulse described in the frequency domain.
///
/// The sensor functions use the half spectrum s(w) (the Fourier transform of
/// the emitted waveform) and the recorded data then carry the compressed
/// pulse with spectrum f(w) = s(w)^2 >= 0. For the Ricker wavelet
/// s(w) = (w/wp)^2 exp(-(w/wp)^2) with peak angular frequency wp = 2 pi f0,
/// which is itself non-negative.
class Pulse {
 public:
  enum class Kind { Ricker, Flat, Custom };

  static Pulse ricker(double center_frequency);
  /// s(w) = 1; sensor functions collapse to scaled grid deltas. Tests only.
  static Pulse flat();
  static Pulse custom(std::function<double(double)> half_spectrum, double center_frequency);

  Kind kind() const { return kind_; }
  double center_frequency() const { return f0_; }
  double peak_angular_frequency() const;
  /// Central wavelength c / f0.
  double wavelength(double c) const { return c / f0_; }

  double half_spectrum(double omega) const;
  double spectrum(double omega) const;

  /// Angular frequency above the peak where spectrum() drops to `level` of
  /// its maximum (bisection).
  double cutoff_angular_frequency(double level) const;
  /// Sampling interval so that the shortest period at the `level` cut-off
  /// spans `samples_per_period` intervals.
  double tau_for(double samples_per_period, double level = 0.05) const;
  /// Time half-width beyond which the compressed Ricker pulse is below 1e-6
  /// of its peak.
  double support() const;

 private:
  Kind kind_ = Kind::Ricker;
  double f0_ = 1.0;
  std::function<double(double)> custom_;
};

}  // namespace romscat
