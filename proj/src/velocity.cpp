#include "vort/velocity.hpp"

#include <cmath>
#include <stdexcept>

namespace vort {

VelocityPair reconstruct_velocity(const Field2D& psi) {
    const Grid2D& g = psi.grid();
    if (g.bc_x != Bc::Periodic || g.bc_y != Bc::Periodic)
        throw std::invalid_argument("reconstruct_velocity: grid must be periodic");
    Field2D dpsi_y = apply_op(OpKind::Dx, psi, Axis::Y);
    dpsi_y *= -1.0 / g.dy();
    Field2D dpsi_x = apply_op(OpKind::Dx, psi, Axis::X);
    dpsi_x *= 1.0 / g.dx();
    return {solve_op(OpKind::W1, dpsi_y, Axis::Y), solve_op(OpKind::W1, dpsi_x, Axis::X)};
}

Field2D divergence_residual(const VelocityPair& vel) {
    const Grid2D& g = vel.u.grid();
    if (!(g == vel.v.grid())) throw std::invalid_argument("divergence_residual: grid mismatch");
    Field2D a = apply_op(OpKind::Dx, apply_op(OpKind::W1, vel.u, Axis::Y), Axis::X);
    a *= 1.0 / g.dx();
    Field2D b = apply_op(OpKind::Dx, apply_op(OpKind::W1, vel.v, Axis::X), Axis::Y);
    b *= 1.0 / g.dy();
    a += b;
    return a;
}

double max_abs(const Field2D& f) {
    double m = 0.0;
    for (double x : f.values()) m = std::max(m, std::abs(x));
    return m;
}

double max_speed(const VelocityPair& vel) {
    const auto us = vel.u.values(), vs = vel.v.values();
    double m = 0.0;
    for (size_t k = 0; k < us.size(); ++k)
        m = std::max(m, std::hypot(us[k], vs[k]));
    return m;
}

}  // namespace vort
