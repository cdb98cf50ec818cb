#include "rflux/dfba.hpp"

#include <algorithm>
#include <cmath>

#include "rflux/error.hpp"

namespace rflux {

void KineticParams::validate() const {
  const double values[] = {v_glucose_max, k_glucose, v_xylose_max, k_xylose,
                           k_glucose_inhibition, o2_max_uptake, dt, duration};
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError("kinetic parameters must be finite and strictly positive");
    }
  }
  const double n = duration / dt;
  if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n)) {
    throw ConfigError("duration / dt must be an integer number of steps");
  }
}

int KineticParams::steps() const { return static_cast<int>(std::lround(duration / dt)); }

double uptake_glucose(double glucose, const KineticParams& p) {
  return p.v_glucose_max * glucose / (p.k_glucose + glucose);
}

double uptake_xylose(double xylose, double glucose, const KineticParams& p) {
  return p.v_xylose_max * xylose / (p.k_xylose + xylose) / (1.0 + glucose / p.k_glucose_inhibition);
}

DfbaSimulator::DfbaSimulator(MetabolicModel model, KineticParams params, ExchangeIds exchanges,
                             SolverOptions options)
    : params_(params),
      exchanges_(std::move(exchanges)),
      fba_(std::move(model), {exchanges_.glucose, exchanges_.xylose, exchanges_.oxygen}, options) {
  params_.validate();
  const auto& m = fba_.model();
  auto shipped = [&](const std::string& id) {
    const auto& r = m.reactions()[m.reaction_index(id)];
    return Bounds{r.lower_bound, r.upper_bound};
  };
  glucose_bounds_ = shipped(exchanges_.glucose);
  xylose_bounds_ = shipped(exchanges_.xylose);
  oxygen_bounds_ = shipped(exchanges_.oxygen);
}

namespace {

// An uptake limit above a shipped upper bound (odd exports only) pins the
// exchange at that bound.
Bounds uptake_bounds(double v, const Bounds& shipped) {
  return {std::min(-v, shipped.upper), shipped.upper};
}

}  // namespace

BoundOverrides DfbaSimulator::medium(double vg, double vx) const {
  return {{exchanges_.glucose, uptake_bounds(vg, glucose_bounds_)},
          {exchanges_.xylose, uptake_bounds(vx, xylose_bounds_)},
          {exchanges_.oxygen, uptake_bounds(params_.o2_max_uptake, oxygen_bounds_)}};
}

BoundOverrides DfbaSimulator::kinetic_medium(const NutrientInput& c) const {
  if (!(c.glucose >= 0.0) || !(c.xylose >= 0.0)) {
    throw ConfigError("nutrient concentrations must be non-negative");
  }
  return medium(uptake_glucose(c.glucose, params_), uptake_xylose(c.xylose, c.glucose, params_));
}

GrowthTrajectory DfbaSimulator::simulate(const NutrientInput& input, double b0) const {
  if (!(input.glucose >= 0.0) || !(input.xylose >= 0.0)) {
    throw ConfigError("nutrient concentrations must be non-negative");
  }
  if (!(b0 > 0.0) || !std::isfinite(b0)) throw ConfigError("initial biomass must be positive");

  const KineticParams& p = params_;
  const int steps = p.steps();
  GrowthTrajectory traj;
  traj.time.reserve(steps);
  traj.biomass.reserve(steps);
  traj.glucose.reserve(steps);
  traj.xylose.reserve(steps);
  traj.growth_rate.reserve(steps);

  double biomass = b0, glucose = input.glucose, xylose = input.xylose;
  double last_vg = -1.0, last_vx = -1.0;
  FbaResult flux;
  FbaWarmStart warm;
  for (int k = 0; k < steps; ++k) {
    const double vg = uptake_glucose(glucose, p);
    const double vx = uptake_xylose(xylose, glucose, p);
    // After depletion the bounds repeat step after step; reuse the solve.
    if (vg != last_vg || vx != last_vx) {
      try {
        flux = fba_.run(medium(vg, vx), &warm);
      } catch (const NumericalError& e) {
        throw NumericalError("dFBA step " + std::to_string(k) + ": " + e.what());
      }
      last_vg = vg;
      last_vx = vx;
    }
    const double mu = std::max(0.0, flux.growth_rate);
    const double ug = flux.uptake_fluxes.at(exchanges_.glucose);
    const double ux = flux.uptake_fluxes.at(exchanges_.xylose);

    // Consumption is charged against the biomass at the end of the step.
    biomass = p.biomass_update == BiomassUpdate::kEuler ? biomass * (1.0 + mu * p.dt)
                                                         : biomass * std::exp(mu * p.dt);
    glucose = std::max(0.0, glucose - ug * biomass * p.dt);
    xylose = std::max(0.0, xylose - ux * biomass * p.dt);

    traj.time.push_back((k + 1) * p.dt);
    traj.biomass.push_back(biomass);
    traj.glucose.push_back(glucose);
    traj.xylose.push_back(xylose);
    traj.growth_rate.push_back(mu);
  }
  return traj;
}

GrowthTrajectory simulate(const MetabolicModel& model, const NutrientInput& input,
                          const KineticParams& params, double b0, const ExchangeIds& exchanges) {
  return DfbaSimulator(model, params, exchanges).simulate(input, b0);
}

}  // namespace rflux
