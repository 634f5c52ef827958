#include "mspos/model.hpp"

#include <set>
#include <string>
#include <utility>

namespace mspos {

Vec3 unit_from(const Vec3& from, const Vec3& to) {
  const Vec3 d = to - from;
  const double n = norm(d);
  if (!(n > 0.0)) {
    throw GeometryError("unit_from: coincident points give no direction");
  }
  return d / n;
}

const GnbNode& Scenario::gnb(int id) const {
  for (const auto& g : gnbs) {
    if (g.id == id) return g;
  }
  throw ConfigError("unknown gNB id " + std::to_string(id));
}

void Scenario::validate() const {
  if (gnbs.size() < 2) {
    throw ConfigError("scenario needs at least two gNBs");
  }
  std::set<int> ids;
  for (const auto& g : gnbs) {
    if (!ids.insert(g.id).second) {
      throw ConfigError("duplicate gNB id " + std::to_string(g.id));
    }
    if (g.array_elements < 1) throw ConfigError("array_elements must be >= 1");
    if (!(g.array_spacing > 0.0)) throw ConfigError("array_spacing must be > 0");
    if (!g.position.finite()) throw ConfigError("non-finite gNB position");
  }
  if (!(room_min.x < room_max.x && room_min.y < room_max.y &&
        room_min.z < room_max.z)) {
    throw ConfigError("room_min must be componentwise below room_max");
  }
  const Aabb box = room();
  for (const auto& g : gnbs) {
    if (!box.contains(g.position)) {
      throw ConfigError("gNB " + std::to_string(g.id) + " outside the room");
    }
  }
  for (const auto& w : waypoints) {
    if (!w.finite() || !box.contains(w)) {
      throw ConfigError("waypoint outside the room");
    }
  }
  if (!(carrier_hz > 0.0) || !(bandwidth_hz > 0.0)) {
    throw ConfigError("carrier and bandwidth must be positive");
  }
}

bool MeasurementSet::round_robin_complete(int station_count) const {
  if (station_count < 2) return false;
  const std::size_t expected =
      static_cast<std::size_t>(station_count) * (station_count - 1);
  if (measurements.size() != expected) return false;
  std::set<std::pair<int, int>> pairs;
  for (const auto& m : measurements) pairs.emplace(m.tx_id, m.rx_id);
  return pairs.size() == expected;
}

void MeasurementSet::validate() const {
  std::set<std::pair<int, int>> pairs;
  for (const auto& m : measurements) {
    if (m.tx_id == m.rx_id) {
      throw ConfigError("measurement with tx_id == rx_id");
    }
    if (!pairs.emplace(m.tx_id, m.rx_id).second) {
      throw ConfigError("duplicate (tx, rx) measurement pair");
    }
    if (!std::isfinite(m.range_m) || m.range_m < 0.0) {
      throw ConfigError("measurement range must be finite and >= 0");
    }
    if (!std::isfinite(m.kappa) || m.kappa < 0.0) {
      throw ConfigError("measurement kappa must be finite and >= 0");
    }
    if (!m.aoa_unit.finite() || std::abs(norm(m.aoa_unit) - 1.0) >= 1e-9) {
      throw ConfigError("measurement bearing is not unit norm");
    }
  }
}

double bistatic_range(const Vec3& tx, const Vec3& rx, const Vec3& target) {
  return distance(tx, target) + distance(target, rx);
}

double residual(const BistaticMeasurement& meas, const Scenario& scenario,
                const Vec3& candidate) {
  const Vec3& tx = scenario.gnb(meas.tx_id).position;
  const Vec3& rx = scenario.gnb(meas.rx_id).position;
  return meas.range_m - bistatic_range(tx, rx, candidate);
}

bool violates_baseline(const BistaticMeasurement& meas,
                       const Scenario& scenario, double tolerance) {
  const Vec3& tx = scenario.gnb(meas.tx_id).position;
  const Vec3& rx = scenario.gnb(meas.rx_id).position;
  return meas.range_m < distance(tx, rx) - tolerance;
}

}  // namespace mspos
