#pragma once

#include "vort/compact_ops.hpp"
#include "vort/grid.hpp"

namespace vort {

struct VelocityPair {
    Field2D u, v;
};

/// Fourth-order velocity from the streamfunction on a periodic grid:
///   W1y u = -(1/dy) Dy psi,   W1x v = (1/dx) Dx psi.
/// Any psi yields a discretely divergence-free pair because Dx and Dy act on
/// different axes and commute.
VelocityPair reconstruct_velocity(const Field2D& psi);

/// Residual of the discrete divergence identity:
///   (1/dx) Dx W1y u + (1/dy) Dy W1x v.
Field2D divergence_residual(const VelocityPair& vel);

/// Pointwise maxima used by CFL rules.
double max_abs(const Field2D& f);
double max_speed(const VelocityPair& vel);  // max over grid of |(u, v)|

}  // namespace vort
