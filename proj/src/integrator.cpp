#include "vort/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vort/compact_ops.hpp"

namespace vort {

namespace {

// Shu-Osher coefficients; shared by the field stepper and the scalar surrogate.
constexpr double kStage2Old = 3.0 / 4.0, kStage2New = 1.0 / 4.0;
constexpr double kStage3Old = 1.0 / 3.0, kStage3New = 2.0 / 3.0;

void require_config(const StepConfig& c) {
    if (c.equation == Equation::NavierStokes && c.re <= 0.0)
        throw std::invalid_argument("StepConfig: NavierStokes requires re > 0");
    if (c.limiter.tvb != TvbVariant::None && c.limiter.tvb_p < 0.0)
        throw std::invalid_argument("StepConfig: tvb_p must be >= 0");
    if (c.limiter.bp && c.limiter.bounds.m >= c.limiter.bounds.M)
        throw std::invalid_argument("StepConfig: bp bounds require m < M");
}

}  // namespace

FlowState make_flow_state(double t, Field2D omega, const PeriodicPoissonPlan& poisson) {
    Field2D psi = poisson.solve(omega);
    VelocityPair vel = reconstruct_velocity(psi);
    return FlowState{t, std::move(omega), std::move(psi), std::move(vel)};
}

double stable_dt(const StepConfig& config, const Grid2D& grid, double max_u, double max_v) {
    require_config(config);
    const double dx = grid.dx(), dy = grid.dy();
    double dt = std::numeric_limits<double>::infinity();
    if (config.limiter.tvb != TvbVariant::None) {
        if (max_u > 0.0) dt = std::min(dt, dx / (24.0 * max_u));
        if (max_v > 0.0) dt = std::min(dt, dy / (24.0 * max_v));
    } else {
        const double conv = max_u / dx + max_v / dy;
        const double cap = config.equation == Equation::Euler ? 1.0 / 3.0 : 1.0 / 6.0;
        if (conv > 0.0) dt = std::min(dt, cap / conv);
    }
    if (config.equation == Equation::NavierStokes) {
        const double visc = 1.0 / (config.re * dx * dx) + 1.0 / (config.re * dy * dy);
        dt = std::min(dt, (5.0 / 24.0) / visc);
    }
    return dt;
}

double compute_dt(const FlowState& state, const StepConfig& config) {
    if (config.fixed_dt > 0.0) return config.fixed_dt;
    const Grid2D& g = state.omega.grid();
    const double dt = stable_dt(config, g, max_abs(state.vel.u), max_abs(state.vel.v));
    if (!std::isfinite(dt)) return config.cfl_fraction * std::min(g.dx(), g.dy());
    return config.cfl_fraction * dt;
}

double caption_dt(const FlowState& initial, double fraction) {
    const double speed = max_speed(initial.vel);
    if (speed <= 0.0) throw std::invalid_argument("caption_dt: quiescent initial state");
    return fraction * initial.omega.grid().dx() / speed;
}

FlowState forward_euler_step(const FlowState& state, double dt, const StepConfig& config,
                             const PeriodicPoissonPlan& poisson, StepStats* stats) {
    require_config(config);
    const Grid2D& g = state.omega.grid();
    const double lam1 = dt / g.dx(), lam2 = dt / g.dy();

    Field2D wbar = weighted_average(state.omega);
    FluxField flux = [&] {
        if (config.limiter.tvb == TvbVariant::None) return baseline_fluxes(state.omega, state.vel);
        SplitVelocity sv = split_velocity(state.vel);
        SplitFluxes sf = split_fluxes(state.omega, sv);
        return tvb_limit_fluxes(wbar, sf, TvbParams{config.limiter.tvb, config.limiter.tvb_p});
    }();
    Field2D wbar_new = conservative_update(wbar, flux, lam1, lam2);
    Field2D omega_new = solve_op(OpKind::W1, solve_op(OpKind::W1, wbar_new, Axis::X), Axis::Y);

    if (config.equation == Equation::NavierStokes) {
        Field2D diff = derivative_2(state.omega, Axis::X);
        diff += derivative_2(state.omega, Axis::Y);
        diff *= dt / config.re;
        omega_new += diff;
    }

    if (config.limiter.bp) {
        BpFieldStats bs;
        omega_new = config.equation == Equation::Euler
                        ? bp_limit_2d_euler(omega_new, config.limiter.bounds, &bs)
                        : bp_limit_2d_ns(omega_new, config.limiter.bounds, &bs);
        if (stats) {
            stats->bp_precondition_violations += bs.precondition_violations;
            stats->bp_limited_points += bs.limited_points;
        }
    }
    if (stats) stats->dt = dt;
    return make_flow_state(state.t + dt, std::move(omega_new), poisson);
}

FlowState ssprk3_step(const FlowState& state, double dt, const StepConfig& config,
                      const PeriodicPoissonPlan& poisson, StepStats* stats) {
    FlowState s1 = forward_euler_step(state, dt, config, poisson, stats);
    FlowState s2 = forward_euler_step(s1, dt, config, poisson, stats);
    Field2D w2 = axpby(kStage2Old, state.omega, kStage2New, s2.omega);
    FlowState mid = make_flow_state(state.t + dt / 2.0, std::move(w2), poisson);
    FlowState s3 = forward_euler_step(mid, dt, config, poisson, stats);
    Field2D w3 = axpby(kStage3Old, state.omega, kStage3New, s3.omega);
    if (stats) stats->dt = dt;
    return make_flow_state(state.t + dt, std::move(w3), poisson);
}

double ssprk3_scalar_amplification(double z) {
    const double u1 = 1.0;
    const double u2 = u1 + z * u1;
    const double u3 = kStage2Old * u1 + kStage2New * (u2 + z * u2);
    return kStage3Old * u1 + kStage3New * (u3 + z * u3);
}

}  // namespace vort
