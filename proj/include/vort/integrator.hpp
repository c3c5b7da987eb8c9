#pragma once

#include "vort/bp_limiter.hpp"
#include "vort/convection.hpp"
#include "vort/elliptic.hpp"
#include "vort/grid.hpp"
#include "vort/velocity.hpp"

namespace vort {

enum class Equation { Euler, NavierStokes };

struct LimiterConfig {
    bool bp = false;
    TvbVariant tvb = TvbVariant::None;
    double tvb_p = 0.0;
    BpBounds bounds{0.0, 1.0};
};

struct StepConfig {
    Equation equation = Equation::Euler;
    double re = 0.0;             // Reynolds number, NavierStokes only
    LimiterConfig limiter{};
    double cfl_fraction = 1.0;   // scales the adaptive stability bound
    double fixed_dt = 0.0;       // > 0: overrides adaptive selection
};

/// Vorticity with its consistent streamfunction and velocity.
struct FlowState {
    double t = 0.0;
    Field2D omega;
    Field2D psi;
    VelocityPair vel;
};

struct StepStats {
    double dt = 0.0;
    long bp_precondition_violations = 0;
    long bp_limited_points = 0;
};

/// Solves the Poisson equation for psi (zero-mean gauge) and reconstructs the
/// discretely divergence-free velocity.
FlowState make_flow_state(double t, Field2D omega, const PeriodicPoissonPlan& poisson);

/// Largest dt satisfying the active stability constraint at the given
/// velocity extremes: convective sum <= 1/3 (Euler) or 1/6 plus the viscous
/// sum <= 5/24 (Navier-Stokes); with a TVB limiter, per-axis <= 1/24 instead.
/// Infinite when nothing constrains dt.
double stable_dt(const StepConfig& config, const Grid2D& grid, double max_u, double max_v);

/// fixed_dt when set, else cfl_fraction * stable_dt; a quiescent
/// unconstrained field falls back to min(dx, dy).
double compute_dt(const FlowState& state, const StepConfig& config);

/// Figure-caption step rule dt = fraction * dx / max |u| (vector magnitude),
/// meant to be frozen from the initial state into StepConfig::fixed_dt.
double caption_dt(const FlowState& initial, double fraction);

/// One forward Euler stage: weighted-average flux update (TVB-limited when
/// configured), point-value recovery, explicit diffusion for Navier-Stokes,
/// BP limiting, then a fresh Poisson solve and velocity reconstruction.
FlowState forward_euler_step(const FlowState& state, double dt, const StepConfig& config,
                             const PeriodicPoissonPlan& poisson, StepStats* stats = nullptr);

/// Three-stage third-order SSP Runge-Kutta built from forward_euler_step,
/// limiting applied inside every stage; stage combinations are convex so the
/// bounds survive.
FlowState ssprk3_step(const FlowState& state, double dt, const StepConfig& config,
                      const PeriodicPoissonPlan& poisson, StepStats* stats = nullptr);

/// The stepper applied to u' = z u with unit initial data; equals
/// 1 + z + z^2/2 + z^3/6 exactly in exact arithmetic.
double ssprk3_scalar_amplification(double z);

}  // namespace vort
