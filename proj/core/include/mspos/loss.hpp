#pragma once

#include <cmath>

#include "mspos/errors.hpp"

namespace mspos {

enum class LossKind { SquaredL2, Huber, Cauchy };

/// Scale multipliers giving ~95% asymptotic efficiency under Gaussian noise
/// when applied to a robust sigma estimate.
inline constexpr double kCauchyTuning = 2.3849;
inline constexpr double kHuberTuning = 1.345;

/// Normalized-MAD consistency factor for Gaussian data.
inline constexpr double kMadToSigma = 1.4826;

struct LossSpec {
  LossKind kind = LossKind::SquaredL2;
  double scale = 1.0;  // eta for Cauchy, c for Huber; ignored for SquaredL2

  static LossSpec squared_l2() { return {LossKind::SquaredL2, 1.0}; }
  static LossSpec huber(double c) { return {LossKind::Huber, c}; }
  static LossSpec cauchy(double eta) { return {LossKind::Cauchy, eta}; }

  void validate() const {
    if (kind != LossKind::SquaredL2 && !(scale > 0.0)) {
      throw ConfigError("robust loss scale must be positive");
    }
  }

  const char* name() const {
    switch (kind) {
      case LossKind::SquaredL2: return "squared_l2";
      case LossKind::Huber: return "huber";
      case LossKind::Cauchy: return "cauchy";
    }
    return "?";
  }
};

/// Loss value at residual z.
///   SquaredL2: z^2
///   Huber:     z^2/2 for |z| <= c, else c|z| - c^2/2
///   Cauchy:    (eta^2/2) ln(1 + z^2/eta^2)
inline double loss(const LossSpec& spec, double z) {
  switch (spec.kind) {
    case LossKind::SquaredL2:
      return z * z;
    case LossKind::Huber: {
      const double c = spec.scale;
      const double a = std::abs(z);
      return a <= c ? 0.5 * z * z : c * a - 0.5 * c * c;
    }
    case LossKind::Cauchy: {
      const double e2 = spec.scale * spec.scale;
      return 0.5 * e2 * std::log1p(z * z / e2);
    }
  }
  return 0.0;
}

/// d(loss)/dz. The Cauchy influence redescends: bounded by eta/2 (attained
/// at z = eta) and decaying for larger residuals, which is what caps any
/// single outlier's pull on the fusion.
inline double influence(const LossSpec& spec, double z) {
  switch (spec.kind) {
    case LossKind::SquaredL2:
      return 2.0 * z;
    case LossKind::Huber: {
      const double c = spec.scale;
      return std::abs(z) <= c ? z : std::copysign(c, z);
    }
    case LossKind::Cauchy: {
      const double e2 = spec.scale * spec.scale;
      return z / (1.0 + z * z / e2);
    }
  }
  return 0.0;
}

}  // namespace mspos
