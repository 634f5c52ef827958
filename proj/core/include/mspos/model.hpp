#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "mspos/errors.hpp"

namespace mspos {

// ---------------------------------------------------------------------------
// Geometry primitives
// ---------------------------------------------------------------------------

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}
inline Vec3 operator*(double s, const Vec3& v) {
  return {s * v.x, s * v.y, s * v.z};
}
inline Vec3 operator*(const Vec3& v, double s) { return s * v; }
inline Vec3 operator/(const Vec3& v, double s) {
  return {v.x / s, v.y / s, v.z / s};
}
inline Vec3& operator+=(Vec3& a, const Vec3& b) {
  a.x += b.x;
  a.y += b.y;
  a.z += b.z;
  return a;
}
inline Vec3& operator-=(Vec3& a, const Vec3& b) {
  a.x -= b.x;
  a.y -= b.y;
  a.z -= b.z;
  return a;
}
inline bool operator==(const Vec3& a, const Vec3& b) {
  return a.x == b.x && a.y == b.y && a.z == b.z;
}

inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

/// (to - from) scaled to unit length. Throws GeometryError on coincident
/// points.
Vec3 unit_from(const Vec3& from, const Vec3& to);

/// Axis-aligned box.
struct Aabb {
  Vec3 min;
  Vec3 max;

  bool contains(const Vec3& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y &&
           p.z >= min.z && p.z <= max.z;
  }
  Vec3 center() const { return 0.5 * (min + max); }
  Vec3 extent() const { return max - min; }

  /// Box scaled about its center by `factor` per axis.
  Aabb inflated(double factor) const {
    const Vec3 c = center();
    const Vec3 h = 0.5 * factor * extent();
    return {c - h, c + h};
  }
};

// ---------------------------------------------------------------------------
// Scenario description
// ---------------------------------------------------------------------------

struct GnbNode {
  int id = 0;
  Vec3 position;
  int array_elements = 4;
  double array_spacing = 0.5;  // in wavelengths
  double boresight_azimuth = 0.0;
};

/// Obstacle as min-corner plus extent.
struct ObstacleBox {
  Vec3 position;
  Vec3 extent;

  Aabb box() const { return {position, position + extent}; }
};

struct Scenario {
  std::vector<GnbNode> gnbs;
  Vec3 room_min;
  Vec3 room_max;
  double carrier_hz = 28.0e9;
  double bandwidth_hz = 400.0e6;
  double tx_power_dbm = 23.0;
  std::vector<Vec3> waypoints;
  std::vector<ObstacleBox> obstacles;

  Aabb room() const { return {room_min, room_max}; }

  /// Lookup by station id. Throws ConfigError on unknown id.
  const GnbNode& gnb(int id) const;

  /// Checks station count, id uniqueness, array parameters, room box sanity
  /// and containment of stations and waypoints. A proper position fix needs
  /// K >= 3; two stations are accepted so degenerate single-pair studies can
  /// still run.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Measurements
// ---------------------------------------------------------------------------

/// One bistatic link observation: estimated bistatic distance, arrival
/// bearing at the receiver and its concentration.
struct BistaticMeasurement {
  int tx_id = 0;
  int rx_id = 0;
  double range_m = 0.0;
  Vec3 aoa_unit{0.0, 0.0, 1.0};
  double kappa = 0.0;
};

struct MeasurementSet {
  std::vector<BistaticMeasurement> measurements;

  std::size_t size() const { return measurements.size(); }
  bool empty() const { return measurements.empty(); }
  auto begin() const { return measurements.begin(); }
  auto end() const { return measurements.end(); }

  /// True when every ordered (tx, rx) pair of a K-station deployment is
  /// present.
  bool round_robin_complete(int station_count) const;

  /// Enforces pair uniqueness, tx != rx, unit-norm bearings (1e-9), finite
  /// non-negative ranges and kappas.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Total path length tx -> target -> rx.
double bistatic_range(const Vec3& tx, const Vec3& rx, const Vec3& target);

/// Measured-minus-predicted bistatic distance for a candidate position.
double residual(const BistaticMeasurement& meas, const Scenario& scenario,
                const Vec3& candidate);

/// A physical echo satisfies range >= direct tx-rx baseline. Contaminated
/// measurements may violate this; the solvers must survive them, so this is
/// a flag, never a validation error.
bool violates_baseline(const BistaticMeasurement& meas,
                       const Scenario& scenario, double tolerance = 1e-9);

}  // namespace mspos
