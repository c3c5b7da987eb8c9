#pragma once

#include "vort/compact_ops.hpp"
#include "vort/grid.hpp"
#include "vort/velocity.hpp"

namespace vort {

/// Face fluxes of the conservative update on a periodic grid:
/// fx(i,j) sits at (i+1/2, j), fy(i,j) at (i, j+1/2).
struct FluxField {
    Field2D fx, fy;
};

/// Lax-Friedrichs velocity splitting u = u+ + u- with
/// u± = (u ± alpha)/2, alpha = max|u| over the grid (v likewise), so that
/// u+ >= 0 and u- <= 0 pointwise.
struct SplitVelocity {
    Field2D up, um, vp, vm;
    double alpha_x = 0.0, alpha_y = 0.0;
};

/// Sign-split face fluxes and face-averaged split velocities:
///   fp(i,j) = ((W1y(u+ o w))_ij + (W1y(u+ o w))_{i+1,j}) / 2, etc.
///   uhat_p(i,j) = ((W1y u+)_ij + (W1y u+)_{i+1,j}) / 2, etc.
struct SplitFluxes {
    Field2D fp, fm, gp, gm;
    Field2D uhat_p, uhat_m, vhat_p, vhat_m;
};

enum class TvbVariant { None, Tvb1, Tvb2 };

struct TvbParams {
    TvbVariant variant = TvbVariant::None;
    double p = 0.0;  // modified-minmod threshold constant: first arg wins when |a1| <= p*h^2
};

/// omega_bar = W1x W1y omega.
Field2D weighted_average(const Field2D& omega);

/// Unlimited face fluxes: fx = centered average of W1y(u o omega), fy likewise.
/// conservative_update with these reproduces the baseline weighted scheme.
FluxField baseline_fluxes(const Field2D& omega, const VelocityPair& vel);

SplitVelocity split_velocity(const VelocityPair& vel);

SplitFluxes split_fluxes(const Field2D& omega, const SplitVelocity& sv);

double minmod(double a1, double a2, double a3);
double modified_minmod(double a1, double a2, double a3, double p, double h);

/// TVB-limited total face fluxes built from the split fluxes; variant None
/// returns the recombined (unlimited) fluxes.
FluxField tvb_limit_fluxes(const Field2D& omega_bar, const SplitFluxes& base,
                           const TvbParams& params);

/// omega_bar - lam1*(fx_i - fx_{i-1}) - lam2*(fy_j - fy_{j-1}); conserves the
/// grid sum exactly in exact arithmetic (telescoping).
Field2D conservative_update(const Field2D& omega_bar, const FluxField& flux, double lam1,
                            double lam2);

/// Point-value convection right-hand sides:
///   euler_rhs = -(1/dx) W1x^{-1} Dx (u o w) - (1/dy) W1y^{-1} Dy (v o w)
///   ns_rhs    = euler_rhs + (1/re)(W2x^{-1} Dxx w /dx^2 + W2y^{-1} Dyy w /dy^2)
Field2D euler_rhs(const Field2D& omega, const VelocityPair& vel);
Field2D ns_rhs(const Field2D& omega, const VelocityPair& vel, double re);

}  // namespace vort
