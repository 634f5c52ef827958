#include "mspos/fusion.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace mspos {

namespace {

constexpr double kGnbProximity = 1e-9;  // meters

struct LinkRef {
  const Vec3* tx;
  const Vec3* rx;
  double range_m;
};

std::vector<LinkRef> select_links(const MeasurementSet& set,
                                  const Scenario& scenario,
                                  const FusionMode& mode) {
  std::vector<LinkRef> links;
  links.reserve(set.size());
  for (const auto& m : set) {
    if (!mode.selects(m)) continue;
    links.push_back({&scenario.gnb(m.tx_id).position,
                     &scenario.gnb(m.rx_id).position, m.range_m});
  }
  if (links.empty()) {
    throw ConfigError("fusion: no measurements selected for this mode");
  }
  return links;
}

double objective_of(const std::vector<LinkRef>& links, const Vec3& x,
                    const LossSpec& spec) {
  double sum = 0.0;
  for (const auto& l : links) {
    sum += loss(spec, l.range_m - bistatic_range(*l.tx, *l.rx, x));
  }
  return sum;
}

/// Gradient with a policy for candidates sitting on a station: `strict`
/// throws, otherwise the offending term's direction is zeroed for this
/// evaluation and *proximity_hit is raised.
Vec3 gradient_of(const std::vector<LinkRef>& links, const Vec3& x,
                 const LossSpec& spec, bool strict, bool* proximity_hit) {
  Vec3 g;
  for (const auto& l : links) {
    const Vec3 dt = x - *l.tx;
    const Vec3 dr = x - *l.rx;
    const double nt = norm(dt);
    const double nr = norm(dr);
    if (nt < kGnbProximity || nr < kGnbProximity) {
      if (strict) {
        throw GeometryError("gradient: candidate coincides with a gNB");
      }
      if (proximity_hit) *proximity_hit = true;
      continue;
    }
    const double delta = l.range_m - (nt + nr);
    const double w = influence(spec, delta);
    // d(residual)/dx = -(u_tx + u_rx)
    g += -w * (dt / nt + dr / nr);
  }
  return g;
}

}  // namespace

double objective(const MeasurementSet& set, const Scenario& scenario,
                 const Vec3& candidate, const LossSpec& spec,
                 const FusionMode& mode) {
  spec.validate();
  return objective_of(select_links(set, scenario, mode), candidate, spec);
}

Vec3 gradient(const MeasurementSet& set, const Scenario& scenario,
              const Vec3& candidate, const LossSpec& spec,
              const FusionMode& mode) {
  spec.validate();
  return gradient_of(select_links(set, scenario, mode), candidate, spec,
                     /*strict=*/true, nullptr);
}

std::vector<double> residuals_at(const MeasurementSet& set,
                                 const Scenario& scenario,
                                 const Vec3& candidate,
                                 const FusionMode& mode) {
  const auto links = select_links(set, scenario, mode);
  std::vector<double> r;
  r.reserve(links.size());
  for (const auto& l : links) {
    r.push_back(l.range_m - bistatic_range(*l.tx, *l.rx, candidate));
  }
  return r;
}

double estimate_sigma(std::span<const double> residuals) {
  if (residuals.size() < 2) {
    throw ConfigError("estimate_sigma needs at least two residuals");
  }
  std::vector<double> v(residuals.begin(), residuals.end());
  auto median_of = [](std::vector<double>& w) {
    const std::size_t n = w.size();
    std::nth_element(w.begin(), w.begin() + n / 2, w.end());
    double m = w[n / 2];
    if (n % 2 == 0) {
      const double lo = *std::max_element(w.begin(), w.begin() + n / 2);
      m = 0.5 * (lo + m);
    }
    return m;
  };
  const double med = median_of(v);
  for (double& x : v) x = std::abs(x - med);
  const double mad = median_of(v);
  if (!(mad > 0.0)) {
    throw NumericalError("estimate_sigma: zero scale (no spread in residuals)");
  }
  return kMadToSigma * mad;
}

SolveResult solve_gd(const MeasurementSet& set, const Scenario& scenario,
                     const Vec3& init, const LossSpec& spec,
                     const SolverConfig& config) {
  config.validate();
  spec.validate();
  const auto links = select_links(set, scenario, config.mode);
  const Aabb guard = scenario.room().inflated(10.0);

  Vec3 x = init;
  if (config.planar_height_m) x.z = *config.planar_height_m;

  SolveResult result;
  result.initial_guess = x;
  if (config.record_trajectory) result.trajectory.push_back(x);

  for (int i = 0; i < config.max_iterations; ++i) {
    Vec3 g = gradient_of(links, x, spec, /*strict=*/false,
                         &result.gnb_proximity_hit);
    if (config.planar_height_m) g.z = 0.0;

    double step = config.step_size;
    if (config.backtracking) {
      const double f0 = objective_of(links, x, spec);
      for (int h = 0; h < 30 && objective_of(links, x - step * g, spec) > f0;
           ++h) {
        step *= 0.5;
      }
    }

    const Vec3 next = x - step * g;
    const double moved = distance(next, x);
    x = next;
    result.iterations = i + 1;
    if (config.record_trajectory) result.trajectory.push_back(x);

    if (!x.finite() || !guard.contains(x)) {
      throw DivergenceError("solve_gd: iterate left the scenario region");
    }
    if (moved <= config.tolerance) {
      result.converged = true;
      break;
    }
  }

  result.estimate = x;
  result.objective_value = objective_of(links, x, spec);
  return result;
}

SolveResult solve_irls(const MeasurementSet& set, const Scenario& scenario,
                       const Vec3& init, const SolverConfig& config,
                       double huber_tuning) {
  config.validate();
  const auto links = select_links(set, scenario, config.mode);
  const Aabb guard = scenario.room().inflated(10.0);
  const bool planar = config.planar_height_m.has_value();

  Vec3 x = init;
  if (planar) x.z = *config.planar_height_m;

  SolveResult result;
  result.initial_guess = x;

  std::vector<double> res(links.size());
  std::vector<Vec3> dirs(links.size());

  for (int i = 0; i < config.max_iterations; ++i) {
    for (std::size_t j = 0; j < links.size(); ++j) {
      const Vec3 dt = x - *links[j].tx;
      const Vec3 dr = x - *links[j].rx;
      const double nt = norm(dt);
      const double nr = norm(dr);
      if (nt < kGnbProximity || nr < kGnbProximity) {
        result.gnb_proximity_hit = true;
        res[j] = 0.0;
        dirs[j] = Vec3{};
        continue;
      }
      res[j] = links[j].range_m - (nt + nr);
      dirs[j] = dt / nt + dr / nr;  // gradient of the predicted range
    }

    // Robust scale, re-estimated every pass. Zero spread (all residuals
    // identical) degenerates to unit weights.
    double c = 0.0;
    try {
      c = huber_tuning * estimate_sigma(res);
    } catch (const Error&) {
      c = 0.0;
    }

    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d atb = Eigen::Vector3d::Zero();
    for (std::size_t j = 0; j < links.size(); ++j) {
      const double a = std::abs(res[j]);
      const double w = (c > 0.0 && a > c) ? c / a : 1.0;
      const Eigen::Vector3d g(dirs[j].x, dirs[j].y, dirs[j].z);
      ata += w * g * g.transpose();
      atb += w * res[j] * g;
    }

    Eigen::Vector3d delta = Eigen::Vector3d::Zero();
    if (planar) {
      const Eigen::Matrix2d a2 = ata.topLeftCorner<2, 2>();
      Eigen::FullPivLU<Eigen::Matrix2d> lu(a2);
      if (!lu.isInvertible()) {
        throw NumericalError("solve_irls: singular normal equations");
      }
      delta.head<2>() = lu.solve(atb.head<2>());
    } else {
      Eigen::FullPivLU<Eigen::Matrix3d> lu(ata);
      if (!lu.isInvertible()) {
        throw NumericalError("solve_irls: singular normal equations");
      }
      delta = lu.solve(atb);
    }

    x += Vec3{delta.x(), delta.y(), delta.z()};
    result.iterations = i + 1;

    if (!x.finite() || !guard.contains(x)) {
      throw DivergenceError("solve_irls: iterate left the scenario region");
    }
    if (delta.norm() <= config.tolerance) {
      result.converged = true;
      break;
    }
  }

  result.estimate = x;
  result.objective_value =
      objective_of(links, x, LossSpec::squared_l2());
  return result;
}

}  // namespace mspos
