#pragma once

#include <string>
#include <vector>

#include "rflux/fba.hpp"
#include "rflux/model.hpp"

namespace rflux {

enum class BiomassUpdate { kEuler, kExponential };

/// Uptake kinetics and time grid. Defaults are the published E. coli /
/// xylose constants with a 5 mmol/gDW/h oxygen cap over 20 h at 0.1 h.
struct KineticParams {
  double v_glucose_max = 10.0;  // mmol/gDW/h
  double k_glucose = 0.015;     // mM
  double v_xylose_max = 9.0;    // mmol/gDW/h
  double k_xylose = 0.01;       // mM
  double k_glucose_inhibition = 0.01;  // mM
  double o2_max_uptake = 5.0;   // mmol/gDW/h
  double dt = 0.1;              // h
  double duration = 20.0;       // h
  BiomassUpdate biomass_update = BiomassUpdate::kEuler;

  /// Throws ConfigError unless every constant is strictly positive and
  /// duration / dt is an integer.
  void validate() const;
  /// duration / dt (200 for the defaults).
  int steps() const;
};

/// Michaelis-Menten glucose uptake bound V_g = Vg_max G / (K_g + G).
double uptake_glucose(double glucose, const KineticParams& p);

/// Xylose uptake bound with glucose inhibition:
/// V_x = Vx_max X / (K_x + X) / (1 + G / K_ig).
double uptake_xylose(double xylose, double glucose, const KineticParams& p);

struct NutrientInput {
  double glucose = 0.0;  // mM
  double xylose = 0.0;   // mM
};

/// Exchange reactions overridden at every step; all other bounds stay as shipped.
struct ExchangeIds {
  std::string glucose = "EX_glc__D_e";
  std::string xylose = "EX_xyl__D_e";
  std::string oxygen = "EX_o2_e";
};

/// State after each step: entry k holds time (k+1) dt.
struct GrowthTrajectory {
  std::vector<double> time;         // h
  std::vector<double> biomass;      // gDW/L
  std::vector<double> glucose;      // mM
  std::vector<double> xylose;       // mM
  std::vector<double> growth_rate;  // 1/h used for the step

  std::size_t size() const { return time.size(); }
};

/// Dynamic FBA driver bound to one model. simulate() is const and
/// thread-safe; one instance can serve many parallel simulations.
class DfbaSimulator {
 public:
  /// Throws ConfigError for bad params, ValidationError for missing exchanges.
  DfbaSimulator(MetabolicModel model, KineticParams params = {}, ExchangeIds exchanges = {},
                SolverOptions options = {});

  /// Throws ConfigError for negative input or b0 <= 0, NumericalError
  /// (with the step index) when an FBA solve fails.
  GrowthTrajectory simulate(const NutrientInput& input, double b0 = 0.01) const;

  /// Exchange bounds the kinetics impose at the given concentrations:
  /// lower bounds -V_g, -V_x and -O2 cap, upper bounds as shipped.
  BoundOverrides kinetic_medium(const NutrientInput& concentrations) const;

  const KineticParams& params() const { return params_; }
  const ExchangeIds& exchanges() const { return exchanges_; }
  const MetabolicModel& model() const { return fba_.model(); }

 private:
  BoundOverrides medium(double vg, double vx) const;

  KineticParams params_;
  ExchangeIds exchanges_;
  FluxBalance fba_;
  Bounds glucose_bounds_, xylose_bounds_, oxygen_bounds_;
};

/// One-shot convenience wrapper around DfbaSimulator.
GrowthTrajectory simulate(const MetabolicModel& model, const NutrientInput& input,
                          const KineticParams& params = {}, double b0 = 0.01,
                          const ExchangeIds& exchanges = {});

}  // namespace rflux
