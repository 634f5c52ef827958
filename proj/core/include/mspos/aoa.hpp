#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mspos/model.hpp"

namespace mspos {

/// One directional observation: receiver position, measured bearing toward
/// the target and its concentration.
struct VmfObservation {
  Vec3 rx_position;
  Vec3 aoa_unit;
  double kappa = 0.0;
};

struct GridSearchConfig {
  double resolution_m = 0.25;
  Vec3 bounds_min;
  Vec3 bounds_max;

  /// When set the search runs on a single horizontal slice.
  std::optional<double> planar_height_m;

  /// One local pass at resolution/4 around the coarse winner.
  bool refine = true;

  void validate() const;
};

struct AoaFix {
  Vec3 position;

  /// Raised when the bearings are (near-)parallel and the returned point is
  /// the in-room midpoint of the mean ray rather than a triangulated fix.
  bool ill_conditioned = false;
};

/// Directional log-likelihood up to an additive constant:
/// kappa * dot(measured bearing, unit vector rx -> candidate).
/// The VMF normalizer does not depend on the candidate, so it never enters
/// the search. Throws GeometryError when candidate == rx_position.
double vmf_loglik(const VmfObservation& obs, const Vec3& candidate);

/// Coarse maximum-likelihood position: argmax over the grid of the summed
/// log-likelihoods, ties broken toward the point nearest the bounds center
/// and then toward the lexicographically first grid index. Near-parallel
/// bearings yield a flagged ray-midpoint heuristic instead.
AoaFix aoa_ml_fix(std::span<const VmfObservation> observations,
                  const GridSearchConfig& grid);

/// Bearing observations of a measurement set, resolved against the scenario.
std::vector<VmfObservation> vmf_observations(const MeasurementSet& set,
                                             const Scenario& scenario);

}  // namespace mspos
