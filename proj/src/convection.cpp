#include "vort/convection.hpp"

#include <cmath>
#include <stdexcept>

namespace vort {

namespace {

void require_periodic(const Grid2D& g, const char* who) {
    if (g.bc_x != Bc::Periodic || g.bc_y != Bc::Periodic)
        throw std::invalid_argument(std::string(who) + ": grid must be periodic");
}

Field2D hadamard(const Field2D& a, const Field2D& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("hadamard: grid mismatch");
    Field2D r(a.grid());
    auto as = a.values(), bs = b.values();
    auto rs = r.values();
    for (size_t k = 0; k < rs.size(); ++k) rs[k] = as[k] * bs[k];
    return r;
}

/// Face average along one axis with periodic wrap: out(i,j) = (c(i,j)+c(i+1,j))/2.
Field2D face_average(const Field2D& c, Axis axis) {
    const Grid2D& g = c.grid();
    Field2D r(g);
    if (axis == Axis::X) {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                r(i, j) = 0.5 * (c(i, j) + c((i + 1) % g.nx, j));
    } else {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                r(i, j) = 0.5 * (c(i, j) + c(i, (j + 1) % g.ny));
    }
    return r;
}

}  // namespace

Field2D weighted_average(const Field2D& omega) {
    require_periodic(omega.grid(), "weighted_average");
    return apply_op(OpKind::W1, apply_op(OpKind::W1, omega, Axis::Y), Axis::X);
}

FluxField baseline_fluxes(const Field2D& omega, const VelocityPair& vel) {
    require_periodic(omega.grid(), "baseline_fluxes");
    Field2D a = apply_op(OpKind::W1, hadamard(vel.u, omega), Axis::Y);
    Field2D b = apply_op(OpKind::W1, hadamard(vel.v, omega), Axis::X);
    return {face_average(a, Axis::X), face_average(b, Axis::Y)};
}

SplitVelocity split_velocity(const VelocityPair& vel) {
    SplitVelocity sv;
    sv.alpha_x = max_abs(vel.u);
    sv.alpha_y = max_abs(vel.v);
    sv.up = vel.u;
    sv.um = vel.u;
    sv.vp = vel.v;
    sv.vm = vel.v;
    for (double& x : sv.up.values()) x = 0.5 * (x + sv.alpha_x);
    for (double& x : sv.um.values()) x = 0.5 * (x - sv.alpha_x);
    for (double& x : sv.vp.values()) x = 0.5 * (x + sv.alpha_y);
    for (double& x : sv.vm.values()) x = 0.5 * (x - sv.alpha_y);
    return sv;
}

SplitFluxes split_fluxes(const Field2D& omega, const SplitVelocity& sv) {
    require_periodic(omega.grid(), "split_fluxes");
    SplitFluxes out;
    out.fp = face_average(apply_op(OpKind::W1, hadamard(sv.up, omega), Axis::Y), Axis::X);
    out.fm = face_average(apply_op(OpKind::W1, hadamard(sv.um, omega), Axis::Y), Axis::X);
    out.gp = face_average(apply_op(OpKind::W1, hadamard(sv.vp, omega), Axis::X), Axis::Y);
    out.gm = face_average(apply_op(OpKind::W1, hadamard(sv.vm, omega), Axis::X), Axis::Y);
    out.uhat_p = face_average(apply_op(OpKind::W1, sv.up, Axis::Y), Axis::X);
    out.uhat_m = face_average(apply_op(OpKind::W1, sv.um, Axis::Y), Axis::X);
    out.vhat_p = face_average(apply_op(OpKind::W1, sv.vp, Axis::X), Axis::Y);
    out.vhat_m = face_average(apply_op(OpKind::W1, sv.vm, Axis::X), Axis::Y);
    return out;
}

double minmod(double a1, double a2, double a3) {
    if (a1 > 0.0 && a2 > 0.0 && a3 > 0.0) return std::min(a1, std::min(a2, a3));
    if (a1 < 0.0 && a2 < 0.0 && a3 < 0.0) return std::max(a1, std::max(a2, a3));
    return 0.0;
}

double modified_minmod(double a1, double a2, double a3, double p, double h) {
    if (std::abs(a1) <= p * h * h) return a1;
    return minmod(a1, a2, a3);
}

FluxField tvb_limit_fluxes(const Field2D& omega_bar, const SplitFluxes& base,
                           const TvbParams& params) {
    const Grid2D& g = omega_bar.grid();
    require_periodic(g, "tvb_limit_fluxes");
    const int nx = g.nx, ny = g.ny;
    FluxField out{Field2D(g), Field2D(g)};

    if (params.variant == TvbVariant::None) {
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                out.fx(i, j) = base.fp(i, j) + base.fm(i, j);
                out.fy(i, j) = base.gp(i, j) + base.gm(i, j);
            }
        return out;
    }

    const bool second = params.variant == TvbVariant::Tvb2;
    const double dx = g.dx(), dy = g.dy();

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int im = (i + nx - 1) % nx, ip = (i + 1) % nx, ipp = (i + 2) % nx;
            const double wb_m = omega_bar(im, j), wb_0 = omega_bar(i, j),
                         wb_p = omega_bar(ip, j), wb_pp = omega_bar(ipp, j);
            const double dplus = base.fp(i, j) - base.uhat_p(i, j) * wb_0;
            const double dminus = base.uhat_m(i, j) * wb_p - base.fm(i, j);
            double a2p, a3p, a2m, a3m;
            if (!second) {
                a2p = base.uhat_p(i, j) * (wb_p - wb_0);
                a3p = base.uhat_p(im, j) * (wb_0 - wb_m);
                a2m = base.uhat_m(i, j) * (wb_p - wb_0);
                a3m = base.uhat_m(ip, j) * (wb_pp - wb_p);
            } else {
                a2p = base.uhat_p(ip, j) * wb_p - base.uhat_p(i, j) * wb_0;
                a3p = base.uhat_p(i, j) * wb_0 - base.uhat_p(im, j) * wb_m;
                a2m = base.uhat_m(i, j) * wb_p - base.uhat_m(im, j) * wb_0;
                a3m = base.uhat_m(ip, j) * wb_pp - base.uhat_m(i, j) * wb_p;
            }
            const double dp_lim = modified_minmod(dplus, a2p, a3p, params.p, dx);
            const double dm_lim = modified_minmod(dminus, a2m, a3m, params.p, dx);
            out.fx(i, j) = base.uhat_p(i, j) * wb_0 + dp_lim +
                           base.uhat_m(i, j) * wb_p - dm_lim;
        }
    }
    for (int j = 0; j < ny; ++j) {
        const int jm = (j + ny - 1) % ny, jp = (j + 1) % ny, jpp = (j + 2) % ny;
        for (int i = 0; i < nx; ++i) {
            const double wb_m = omega_bar(i, jm), wb_0 = omega_bar(i, j),
                         wb_p = omega_bar(i, jp), wb_pp = omega_bar(i, jpp);
            const double dplus = base.gp(i, j) - base.vhat_p(i, j) * wb_0;
            const double dminus = base.vhat_m(i, j) * wb_p - base.gm(i, j);
            double a2p, a3p, a2m, a3m;
            if (!second) {
                a2p = base.vhat_p(i, j) * (wb_p - wb_0);
                a3p = base.vhat_p(i, jm) * (wb_0 - wb_m);
                a2m = base.vhat_m(i, j) * (wb_p - wb_0);
                a3m = base.vhat_m(i, jp) * (wb_pp - wb_p);
            } else {
                a2p = base.vhat_p(i, jp) * wb_p - base.vhat_p(i, j) * wb_0;
                a3p = base.vhat_p(i, j) * wb_0 - base.vhat_p(i, jm) * wb_m;
                a2m = base.vhat_m(i, j) * wb_p - base.vhat_m(i, jm) * wb_0;
                a3m = base.vhat_m(i, jp) * wb_pp - base.vhat_m(i, j) * wb_p;
            }
            const double dp_lim = modified_minmod(dplus, a2p, a3p, params.p, dy);
            const double dm_lim = modified_minmod(dminus, a2m, a3m, params.p, dy);
            out.fy(i, j) = base.vhat_p(i, j) * wb_0 + dp_lim +
                           base.vhat_m(i, j) * wb_p - dm_lim;
        }
    }
    return out;
}

Field2D conservative_update(const Field2D& omega_bar, const FluxField& flux, double lam1,
                            double lam2) {
    const Grid2D& g = omega_bar.grid();
    require_periodic(g, "conservative_update");
    const int nx = g.nx, ny = g.ny;
    Field2D out(g);
    for (int j = 0; j < ny; ++j) {
        const int jm = (j + ny - 1) % ny;
        for (int i = 0; i < nx; ++i) {
            const int im = (i + nx - 1) % nx;
            out(i, j) = omega_bar(i, j) - lam1 * (flux.fx(i, j) - flux.fx(im, j)) -
                        lam2 * (flux.fy(i, j) - flux.fy(i, jm));
        }
    }
    return out;
}

Field2D euler_rhs(const Field2D& omega, const VelocityPair& vel) {
    const Grid2D& g = omega.grid();
    require_periodic(g, "euler_rhs");
    Field2D fx = solve_op(OpKind::W1, apply_op(OpKind::Dx, hadamard(vel.u, omega), Axis::X), Axis::X);
    Field2D fy = solve_op(OpKind::W1, apply_op(OpKind::Dx, hadamard(vel.v, omega), Axis::Y), Axis::Y);
    fx *= -1.0 / g.dx();
    fy *= -1.0 / g.dy();
    fx += fy;
    return fx;
}

Field2D ns_rhs(const Field2D& omega, const VelocityPair& vel, double re) {
    if (!(re > 0.0)) throw std::invalid_argument("ns_rhs: re must be positive");
    Field2D rhs = euler_rhs(omega, vel);
    Field2D dxx = derivative_2(omega, Axis::X);
    Field2D dyy = derivative_2(omega, Axis::Y);
    dxx += dyy;
    dxx *= 1.0 / re;
    rhs += dxx;
    return rhs;
}

}  // namespace vort
