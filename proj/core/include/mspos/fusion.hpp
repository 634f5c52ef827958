#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mspos/loss.hpp"
#include "mspos/model.hpp"

namespace mspos {

/// Which links enter the fusion objective: every ordered pair (round-robin)
/// or only those with a fixed transmitter.
struct FusionMode {
  bool all_transmitters = true;
  int tx_id = 0;

  static FusionMode round_robin() { return {true, 0}; }
  static FusionMode single_tx(int k) { return {false, k}; }

  bool selects(const BistaticMeasurement& m) const {
    return all_transmitters || m.tx_id == tx_id;
  }
};

struct SolverConfig {
  double step_size = 1e-2;    // alpha
  double tolerance = 1e-4;    // epsilon, meters of iterate motion
  int max_iterations = 10000;
  FusionMode mode = FusionMode::round_robin();

  /// When set, z is frozen at this height and the descent runs in-plane.
  std::optional<double> planar_height_m;

  /// Optional backtracking line search (halving). Off by default: the
  /// reference recursion uses a fixed step.
  bool backtracking = false;

  /// Record the iterate sequence in SolveResult::trajectory.
  bool record_trajectory = false;

  void validate() const {
    if (!(step_size > 0.0)) throw ConfigError("step_size must be > 0");
    if (!(tolerance > 0.0)) throw ConfigError("tolerance must be > 0");
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  }
};

struct SolveResult {
  Vec3 estimate;
  int iterations = 0;
  bool converged = false;
  double objective_value = 0.0;
  Vec3 initial_guess;

  /// Set when some term was dropped because the iterate touched a gNB.
  bool gnb_proximity_hit = false;

  std::vector<Vec3> trajectory;  // filled only when requested
};

/// Sum of per-link losses of the bistatic residuals at `candidate`.
/// Round-robin + SquaredL2, single-tx + SquaredL2 and round-robin + Cauchy
/// reproduce the three canonical fusion problems.
double objective(const MeasurementSet& set, const Scenario& scenario,
                 const Vec3& candidate, const LossSpec& spec,
                 const FusionMode& mode);

/// Analytic gradient of `objective`: sum of influence(residual) times the
/// residual direction -(u_tx + u_rx), where u_* are unit vectors from the
/// stations to the candidate. Throws GeometryError when the candidate sits
/// on a selected station.
Vec3 gradient(const MeasurementSet& set, const Scenario& scenario,
              const Vec3& candidate, const LossSpec& spec,
              const FusionMode& mode);

/// Residuals of the selected measurements, in measurement order.
std::vector<double> residuals_at(const MeasurementSet& set,
                                 const Scenario& scenario,
                                 const Vec3& candidate,
                                 const FusionMode& mode);

/// Robust scale: 1.4826 * median(|r_i - median(r)|). Throws ConfigError for
/// fewer than two residuals and NumericalError when the deviations are all
/// zero (no scale information).
double estimate_sigma(std::span<const double> residuals);

/// Fixed-step gradient descent on the fusion objective. Stops when the
/// iterate moves no more than config.tolerance, diverges (DivergenceError)
/// once the iterate leaves the room box inflated tenfold, and freezes z in
/// planar mode. Iteration count equals the number of update steps taken, so
/// per-iteration work scales with the number of selected links.
SolveResult solve_gd(const MeasurementSet& set, const Scenario& scenario,
                     const Vec3& init, const LossSpec& spec,
                     const SolverConfig& config);

/// Iteratively reweighted least squares benchmark: Huber weights
/// w = influence(r)/r with the scale re-estimated every iteration, inner
/// Gauss-Newton step on the weighted residuals, same stop criterion as
/// solve_gd. `huber_tuning` scales the per-iteration sigma estimate; a very
/// large value forces unit weights (plain nonlinear least squares).
SolveResult solve_irls(const MeasurementSet& set, const Scenario& scenario,
                       const Vec3& init, const SolverConfig& config,
                       double huber_tuning = kHuberTuning);

}  // namespace mspos
