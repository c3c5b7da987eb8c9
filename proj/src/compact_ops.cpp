#include "vort/compact_ops.hpp"

#include <stdexcept>

namespace vort {

namespace {

struct Coeffs {
    double sub, diag, sup;
};

Coeffs coeffs(OpKind k) {
    switch (k) {
        case OpKind::W1: return {1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0};
        case OpKind::W2: return {1.0 / 12.0, 10.0 / 12.0, 1.0 / 12.0};
        case OpKind::Dx: return {-0.5, 0.0, 0.5};
        case OpKind::Dxx: return {1.0, -2.0, 1.0};
    }
    throw std::invalid_argument("LineOp: unknown kind");
}

/// Thomas solve of tridiag(a, diag, c) with the two end diagonals overridden
/// (b0, bn). Requires diagonal dominance, which W1/W2 and their
/// Sherman-Morrison modifications satisfy.
void thomas(double a, double b0, double b, double bn, double c,
            std::span<const double> d, std::span<double> x,
            std::vector<double>& cp, std::vector<double>& dp) {
    const int n = static_cast<int>(d.size());
    cp.resize(n);
    dp.resize(n);
    cp[0] = c / b0;
    dp[0] = d[0] / b0;
    for (int i = 1; i < n - 1; ++i) {
        const double m = b - a * cp[i - 1];
        cp[i] = c / m;
        dp[i] = (d[i] - a * dp[i - 1]) / m;
    }
    const double m = bn - a * cp[n - 2];
    dp[n - 1] = (d[n - 1] - a * dp[n - 2]) / m;
    x[n - 1] = dp[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = dp[i] - cp[i] * x[i + 1];
}

}  // namespace

LineOp::LineOp(OpKind kind, Bc bc, int n) : kind_(kind), n_(n), wrap_(bc == Bc::Periodic) {
    if (n < 3) throw std::invalid_argument("LineOp: n must be >= 3");
    if (!wrap_ && (kind == OpKind::W1 || kind == OpKind::Dx))
        throw std::invalid_argument("LineOp: bounded W1/Dx are not defined");
    const Coeffs c = coeffs(kind);
    sub_ = c.sub;
    diag_ = c.diag;
    sup_ = c.sup;
}

void LineOp::apply(std::span<const double> in, std::span<double> out) const {
    const int n = n_;
    if (wrap_) {
        out[0] = sub_ * in[n - 1] + diag_ * in[0] + sup_ * in[1];
        for (int i = 1; i < n - 1; ++i)
            out[i] = sub_ * in[i - 1] + diag_ * in[i] + sup_ * in[i + 1];
        out[n - 1] = sub_ * in[n - 2] + diag_ * in[n - 1] + sup_ * in[0];
    } else {
        out[0] = diag_ * in[0] + sup_ * in[1];
        for (int i = 1; i < n - 1; ++i)
            out[i] = sub_ * in[i - 1] + diag_ * in[i] + sup_ * in[i + 1];
        out[n - 1] = sub_ * in[n - 2] + diag_ * in[n - 1];
    }
}

void LineOp::solve(std::span<const double> in, std::span<double> out, LineWorkspace& ws) const {
    if (kind_ == OpKind::Dx || kind_ == OpKind::Dxx)
        throw std::domain_error("LineOp::solve: Dx/Dxx are singular on periodic lines; only W1/W2 solves are supported");
    const int n = n_;
    if (!wrap_) {
        thomas(sub_, diag_, diag_, diag_, sup_, in, out, ws.cp, ws.dp);
        return;
    }
    // Sherman-Morrison: A = A' + u v^T with u = (gamma,0,..,0,sup),
    // v = (1,0,..,0,sub/gamma), gamma = -diag. Corner entries (0,n-1) = sub
    // and (n-1,0) = sup are reproduced.
    const double gamma = -diag_;
    const double b0 = diag_ - gamma;
    const double bn = diag_ - sup_ * sub_ / gamma;
    ws.z.resize(n);
    ws.rhs.assign(n, 0.0);
    ws.rhs[0] = gamma;
    ws.rhs[n - 1] = sup_;
    thomas(sub_, b0, diag_, bn, sup_, ws.rhs, ws.z, ws.cp, ws.dp);
    thomas(sub_, b0, diag_, bn, sup_, in, out, ws.cp, ws.dp);
    const double vy = out[0] + sub_ / gamma * out[n - 1];
    const double vz = ws.z[0] + sub_ / gamma * ws.z[n - 1];
    const double f = vy / (1.0 + vz);
    for (int i = 0; i < n; ++i) out[i] -= f * ws.z[i];
}

namespace {

Bc axis_bc(const Grid2D& g, Axis axis) {
    const Bc bc = axis == Axis::X ? g.bc_x : g.bc_y;
    return bc == Bc::Periodic ? Bc::Periodic : Bc::Dirichlet;
}

template <typename LineFn>
Field2D map_lines(const Field2D& f, Axis axis, LineFn&& line) {
    const Grid2D& g = f.grid();
    Field2D out(g);
    if (axis == Axis::X) {
        std::vector<double> in(g.nx), res(g.nx);
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) in[i] = f(i, j);
            line(in, res);
            for (int i = 0; i < g.nx; ++i) out(i, j) = res[i];
        }
    } else {
        std::vector<double> in(g.ny), res(g.ny);
        for (int i = 0; i < g.nx; ++i) {
            for (int j = 0; j < g.ny; ++j) in[j] = f(i, j);
            line(in, res);
            for (int j = 0; j < g.ny; ++j) out(i, j) = res[j];
        }
    }
    return out;
}

}  // namespace

Field2D apply_op(OpKind kind, const Field2D& f, Axis axis) {
    const Grid2D& g = f.grid();
    LineOp op(kind, axis_bc(g, axis), axis == Axis::X ? g.nx : g.ny);
    return map_lines(f, axis, [&](const std::vector<double>& in, std::vector<double>& out) {
        op.apply(in, out);
    });
}

Field2D solve_op(OpKind kind, const Field2D& f, Axis axis) {
    const Grid2D& g = f.grid();
    LineOp op(kind, axis_bc(g, axis), axis == Axis::X ? g.nx : g.ny);
    LineWorkspace ws;
    return map_lines(f, axis, [&](const std::vector<double>& in, std::vector<double>& out) {
        op.solve(in, out, ws);
    });
}

namespace {

Field2D weighted_derivative(const Field2D& f, Axis axis, OpKind diff, OpKind weight, double scale) {
    const Grid2D& g = f.grid();
    if ((axis == Axis::X ? g.bc_x : g.bc_y) != Bc::Periodic)
        throw std::invalid_argument("compact derivative: axis must be periodic");
    Field2D d = apply_op(diff, f, axis);
    Field2D r = solve_op(weight, d, axis);
    r *= scale;
    return r;
}

}  // namespace

Field2D derivative_1(const Field2D& f, Axis axis) {
    const double h = axis == Axis::X ? f.grid().dx() : f.grid().dy();
    return weighted_derivative(f, axis, OpKind::Dx, OpKind::W1, 1.0 / h);
}

Field2D derivative_2(const Field2D& f, Axis axis) {
    const double h = axis == Axis::X ? f.grid().dx() : f.grid().dy();
    return weighted_derivative(f, axis, OpKind::Dxx, OpKind::W2, 1.0 / (h * h));
}

}  // namespace vort
