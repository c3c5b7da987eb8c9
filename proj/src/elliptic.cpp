#include "vort/elliptic.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vort {

namespace {

constexpr double kPi = std::numbers::pi;

/// Undivided symbols of the periodic circulants: Dxx and W2 = I + Dxx/12.
double lam1_periodic(int k, int n) { return 2.0 * std::cos(2.0 * kPi * k / n) - 2.0; }
double lam1_sine(int k, int n) { return 2.0 * std::cos((k + 1) * kPi / (n + 1)) - 2.0; }
double lam2_of(double lam1) { return 1.0 + lam1 / 12.0; }

struct FftwPlan {
    fftw_plan p = nullptr;
    FftwPlan() = default;
    explicit FftwPlan(fftw_plan plan) : p(plan) {}
    ~FftwPlan() {
        if (p) fftw_destroy_plan(p);
    }
    FftwPlan(const FftwPlan&) = delete;
    FftwPlan& operator=(const FftwPlan&) = delete;
};

struct RealBuf {
    double* p = nullptr;
    explicit RealBuf(size_t n) : p(static_cast<double*>(fftw_malloc(sizeof(double) * n))) {}
    ~RealBuf() { fftw_free(p); }
    RealBuf(const RealBuf&) = delete;
    RealBuf& operator=(const RealBuf&) = delete;
};

struct ComplexBuf {
    fftw_complex* p = nullptr;
    explicit ComplexBuf(size_t n)
        : p(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {}
    ~ComplexBuf() { fftw_free(p); }
    ComplexBuf(const ComplexBuf&) = delete;
    ComplexBuf& operator=(const ComplexBuf&) = delete;
};

void require_periodic(const Grid2D& g, const char* who) {
    if (g.bc_x != Bc::Periodic || g.bc_y != Bc::Periodic)
        throw std::invalid_argument(std::string(who) + ": grid must be periodic");
}

void require_bounded(const Grid2D& g, Bc bc, const char* who) {
    if (g.bc_x != bc || g.bc_y != bc)
        throw std::invalid_argument(std::string(who) + ": grid has the wrong boundary type");
}

}  // namespace

// ---------------------------------------------------------------------------
// Periodic: full 2D FFT diagonalization.

struct PeriodicPoissonPlan::Impl {
    Grid2D g;
    PoissonScheme scheme;
    RealBuf real;
    ComplexBuf spec;
    FftwPlan fwd, bwd;

    Impl(const Grid2D& grid, PoissonScheme s)
        : g(grid),
          scheme(s),
          real(static_cast<size_t>(grid.nx) * grid.ny),
          spec(static_cast<size_t>(grid.nx / 2 + 1) * grid.ny) {
        require_periodic(g, "PeriodicPoissonPlan");
        fwd.p = fftw_plan_dft_r2c_2d(g.ny, g.nx, real.p, spec.p, FFTW_ESTIMATE);
        bwd.p = fftw_plan_dft_c2r_2d(g.ny, g.nx, spec.p, real.p, FFTW_ESTIMATE);
    }

    double rhs_symbol(double l1x, double l1y) const {
        if (scheme == PoissonScheme::Compact) return lam2_of(l1x) * lam2_of(l1y);
        // nine-point: (1/12)(0,1,0; 1,8,1; 0,1,0), and lam1 = 2cos - 2
        return (12.0 + l1x + l1y) / 12.0;
    }
};

PeriodicPoissonPlan::PeriodicPoissonPlan(const Grid2D& g, PoissonScheme s)
    : impl_(std::make_unique<Impl>(g, s)) {}
PeriodicPoissonPlan::~PeriodicPoissonPlan() = default;
const Grid2D& PeriodicPoissonPlan::grid() const { return impl_->g; }

Field2D PeriodicPoissonPlan::solve(const Field2D& f) const {
    const Grid2D& g = impl_->g;
    if (!(f.grid() == g)) throw std::invalid_argument("PeriodicPoissonPlan::solve: grid mismatch");
    const int nx = g.nx, ny = g.ny, nk = nx / 2 + 1;
    const double idx2 = 1.0 / (g.dx() * g.dx()), idy2 = 1.0 / (g.dy() * g.dy());

    std::copy(f.values().begin(), f.values().end(), impl_->real.p);
    fftw_execute(impl_->fwd.p);
    const double norm = 1.0 / (double(nx) * ny);
    for (int ky = 0; ky < ny; ++ky) {
        const double l1y = lam1_periodic(ky, ny);
        for (int kx = 0; kx < nk; ++kx) {
            const double l1x = lam1_periodic(kx, nx);
            double c = 0.0;
            if (kx != 0 || ky != 0) {
                const double denom = idx2 * l1x * lam2_of(l1y) + idy2 * lam2_of(l1x) * l1y;
                c = impl_->rhs_symbol(l1x, l1y) / denom;
            }
            fftw_complex& z = impl_->spec.p[size_t(ky) * nk + kx];
            z[0] *= c * norm;
            z[1] *= c * norm;
        }
    }
    fftw_execute(impl_->bwd.p);
    Field2D u(g);
    std::copy_n(impl_->real.p, size_t(nx) * ny, u.values().begin());
    return u;
}

// ---------------------------------------------------------------------------
// Dirichlet: DST-I diagonalization with boundary folding.

struct DirichletPoissonPlan::Impl {
    Grid2D g;
    PoissonScheme scheme;
    RealBuf in, out;
    FftwPlan dst;

    Impl(const Grid2D& grid, PoissonScheme s)
        : g(grid), scheme(s), in(size_t(grid.nx) * grid.ny), out(size_t(grid.nx) * grid.ny) {
        require_bounded(g, Bc::Dirichlet, "DirichletPoissonPlan");
        dst.p = fftw_plan_r2r_2d(g.ny, g.nx, in.p, out.p, FFTW_RODFT00, FFTW_RODFT00,
                                 FFTW_ESTIMATE);
    }

    // Fold the 3x3 RHS stencil of f (full lattice) and the boundary values of
    // u into the effective interior right-hand side.
    void assemble(std::span<const double> f_full, std::span<const double> u_ring,
                  double* rhs) const {
        const int nx = g.nx, ny = g.ny, w = nx + 2;
        const size_t need = size_t(w) * (ny + 2);
        if (f_full.size() != need || u_ring.size() != need)
            throw std::invalid_argument("DirichletPoissonPlan::solve: need (nx+2)*(ny+2) samples");
        const double idx2 = 1.0 / (g.dx() * g.dx()), idy2 = 1.0 / (g.dy() * g.dy());
        static const double wgt[3] = {1.0, 10.0, 1.0};
        static const double sec[3] = {1.0, -2.0, 1.0};
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                double acc = 0.0;
                for (int dj = -1; dj <= 1; ++dj) {
                    for (int di = -1; di <= 1; ++di) {
                        const int li = i + 1 + di, lj = j + 1 + dj;
                        const size_t at = size_t(li) + size_t(w) * lj;
                        double r;
                        if (scheme == PoissonScheme::Compact)
                            r = wgt[di + 1] * wgt[dj + 1] / 144.0;
                        else
                            r = (di == 0 && dj == 0) ? 8.0 / 12.0
                                : (di == 0 || dj == 0) ? 1.0 / 12.0
                                                       : 0.0;
                        acc += r * f_full[at];
                        if (li == 0 || li == nx + 1 || lj == 0 || lj == ny + 1) {
                            const double lhs = idx2 * sec[di + 1] * wgt[dj + 1] / 12.0 +
                                               idy2 * wgt[di + 1] * sec[dj + 1] / 12.0;
                            acc -= lhs * u_ring[at];
                        }
                    }
                }
                rhs[size_t(i) + size_t(nx) * j] = acc;
            }
        }
    }
};

DirichletPoissonPlan::DirichletPoissonPlan(const Grid2D& g, PoissonScheme s)
    : impl_(std::make_unique<Impl>(g, s)) {}
DirichletPoissonPlan::~DirichletPoissonPlan() = default;
const Grid2D& DirichletPoissonPlan::grid() const { return impl_->g; }

Field2D DirichletPoissonPlan::solve(std::span<const double> f_full,
                                    std::span<const double> u_ring) const {
    const Grid2D& g = impl_->g;
    const int nx = g.nx, ny = g.ny;
    const double idx2 = 1.0 / (g.dx() * g.dx()), idy2 = 1.0 / (g.dy() * g.dy());

    impl_->assemble(f_full, u_ring, impl_->in.p);
    fftw_execute(impl_->dst.p);
    // RODFT00 applies 2*S per axis; S^{-1} = 2/(n+1) S for the symmetric DST-I
    // matrix, so one scaled double transform inverts and one re-applies.
    const double pre = 1.0 / (double(nx + 1) * (ny + 1));
    for (int ky = 0; ky < ny; ++ky) {
        const double l1y = lam1_sine(ky, ny);
        for (int kx = 0; kx < nx; ++kx) {
            const double l1x = lam1_sine(kx, nx);
            const double denom = idx2 * l1x * lam2_of(l1y) + idy2 * lam2_of(l1x) * l1y;
            impl_->in.p[size_t(kx) + size_t(nx) * ky] =
                impl_->out.p[size_t(kx) + size_t(nx) * ky] * pre / denom;
        }
    }
    fftw_execute(impl_->dst.p);
    Field2D u(g);
    auto uv = u.values();
    for (size_t k = 0; k < uv.size(); ++k) uv[k] = impl_->out.p[k] * 0.25;
    return u;
}

// ---------------------------------------------------------------------------
// Neumann: one-sided closures, dense eigendecomposition per axis.

namespace {

/// I_x: lifts interior values to the full lattice under homogeneous Neumann
/// closure; first/last rows hold the one-sided extrapolation weights.
Eigen::MatrixXd lift_matrix(int n) {
    Eigen::MatrixXd ix = Eigen::MatrixXd::Zero(n + 2, n);
    ix(0, 0) = 48.0 / 25.0;
    ix(0, 1) = -36.0 / 25.0;
    ix(0, 2) = 16.0 / 25.0;
    ix(0, 3) = -3.0 / 25.0;
    for (int i = 0; i < n; ++i) ix(i + 1, i) = 1.0;
    ix(n + 1, n - 1) = 48.0 / 25.0;
    ix(n + 1, n - 2) = -36.0 / 25.0;
    ix(n + 1, n - 3) = 16.0 / 25.0;
    ix(n + 1, n - 4) = -3.0 / 25.0;
    return ix;
}

Eigen::MatrixXd banded(int n, double a, double b, double c) {
    // n x (n+2), row i taps full-lattice columns i, i+1, i+2
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n + 2);
    for (int i = 0; i < n; ++i) {
        m(i, i) = a;
        m(i, i + 1) = b;
        m(i, i + 2) = c;
    }
    return m;
}

struct AxisEigen {
    Eigen::MatrixXd s, sinv;
    Eigen::VectorXd lam1;
    int zero_index = -1;
};

AxisEigen axis_eigen(const Eigen::MatrixXd& dxx) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(dxx);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("NeumannPoissonPlan: eigendecomposition failed");
    const double scale = dxx.cwiseAbs().maxCoeff();
    if (es.eigenvalues().imag().cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw std::runtime_error("NeumannPoissonPlan: complex eigenvalues in closure matrix");
    AxisEigen ax;
    ax.lam1 = es.eigenvalues().real();
    ax.s = es.eigenvectors().real();
    ax.sinv = ax.s.inverse();
    ax.lam1.cwiseAbs().minCoeff(&ax.zero_index);
    if (std::abs(ax.lam1[ax.zero_index]) > 1e-8)
        throw std::runtime_error("NeumannPoissonPlan: constant mode not found");
    return ax;
}

}  // namespace

struct NeumannPoissonPlan::Impl {
    Grid2D g;
    Eigen::MatrixXd dbar_x, dbar_y, wbar_x, wbar_y;  // full-lattice banded ops
    AxisEigen ax, ay;

    explicit Impl(const Grid2D& grid) : g(grid) {
        require_bounded(g, Bc::Neumann, "NeumannPoissonPlan");
        if (g.nx < 4 || g.ny < 4)
            throw std::invalid_argument("NeumannPoissonPlan: nx, ny must be >= 4");
        dbar_x = banded(g.nx, 1.0, -2.0, 1.0);
        dbar_y = banded(g.ny, 1.0, -2.0, 1.0);
        wbar_x = banded(g.nx, 1.0 / 12.0, 10.0 / 12.0, 1.0 / 12.0);
        wbar_y = banded(g.ny, 1.0 / 12.0, 10.0 / 12.0, 1.0 / 12.0);
        ax = axis_eigen(dbar_x * lift_matrix(g.nx));
        ay = axis_eigen(dbar_y * lift_matrix(g.ny));
    }
};

NeumannPoissonPlan::NeumannPoissonPlan(const Grid2D& g) : impl_(std::make_unique<Impl>(g)) {}
NeumannPoissonPlan::~NeumannPoissonPlan() = default;
const Grid2D& NeumannPoissonPlan::grid() const { return impl_->g; }

Field2D NeumannPoissonPlan::solve(std::span<const double> f_full, std::span<const double> gl,
                                  std::span<const double> gr, std::span<const double> gb,
                                  std::span<const double> gt) const {
    const Grid2D& g = impl_->g;
    const int nx = g.nx, ny = g.ny;
    const double dx = g.dx(), dy = g.dy();
    if (f_full.size() != size_t(nx + 2) * (ny + 2))
        throw std::invalid_argument("NeumannPoissonPlan::solve: need (nx+2)*(ny+2) f samples");
    if (gl.size() != size_t(ny + 2) || gr.size() != size_t(ny + 2) ||
        gb.size() != size_t(nx + 2) || gt.size() != size_t(nx + 2))
        throw std::invalid_argument("NeumannPoissonPlan::solve: edge data has wrong length");

    Eigen::MatrixXd f(nx + 2, ny + 2);
    for (int lj = 0; lj < ny + 2; ++lj)
        for (int li = 0; li < nx + 2; ++li) f(li, lj) = f_full[size_t(li) + size_t(nx + 2) * lj];

    // Boundary corrections of the affine lift uFull = I_x u I_y^T + E.
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(nx + 2, ny + 2);
    for (int lj = 1; lj <= ny; ++lj) {
        e(0, lj) = -(12.0 * dx / 25.0) * gl[lj];
        e(nx + 1, lj) = (12.0 * dx / 25.0) * gr[lj];
    }
    for (int li = 1; li <= nx; ++li) {
        e(li, 0) = -(12.0 * dy / 25.0) * gb[li];
        e(li, ny + 1) = (12.0 * dy / 25.0) * gt[li];
    }
    for (int lj : {0, ny + 1}) {
        e(0, lj) = (48.0 * e(1, lj) - 36.0 * e(2, lj) + 16.0 * e(3, lj) - 3.0 * e(4, lj) -
                    12.0 * dx * gl[lj]) /
                   25.0;
        e(nx + 1, lj) = (48.0 * e(nx, lj) - 36.0 * e(nx - 1, lj) + 16.0 * e(nx - 2, lj) -
                         3.0 * e(nx - 3, lj) + 12.0 * dx * gr[lj]) /
                        25.0;
    }

    const double idx2 = 1.0 / (dx * dx), idy2 = 1.0 / (dy * dy);
    Eigen::MatrixXd rhs = impl_->wbar_x * f * impl_->wbar_y.transpose() -
                          idx2 * (impl_->dbar_x * e * impl_->wbar_y.transpose()) -
                          idy2 * (impl_->wbar_x * e * impl_->dbar_y.transpose());

    Eigen::MatrixXd ut = impl_->ax.sinv * rhs * impl_->ay.sinv.transpose();
    for (int q = 0; q < ny; ++q) {
        const double l1y = impl_->ay.lam1[q];
        for (int p = 0; p < nx; ++p) {
            if (p == impl_->ax.zero_index && q == impl_->ay.zero_index) {
                ut(p, q) = 0.0;
                continue;
            }
            const double l1x = impl_->ax.lam1[p];
            ut(p, q) /= idx2 * l1x * lam2_of(l1y) + idy2 * lam2_of(l1x) * l1y;
        }
    }
    Eigen::MatrixXd usol = impl_->ax.s * ut * impl_->ay.s.transpose();
    usol.array() -= usol.mean();

    Field2D u(g);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) u(i, j) = usol(i, j);
    return u;
}

// ---------------------------------------------------------------------------
// Implicit heat stepping, periodic square-spacing grids.

struct HeatPlan::Impl {
    Grid2D g;
    double ratio, theta;
    bool ok = false;
    RealBuf real;
    ComplexBuf spec;
    FftwPlan fwd, bwd;

    Impl(const Grid2D& grid, HeatMethod m, double dt_over_h2, bool enforce)
        : g(grid),
          ratio(dt_over_h2),
          theta(m == HeatMethod::BackwardEuler ? 1.0 : 0.5),
          real(size_t(grid.nx) * grid.ny),
          spec(size_t(grid.nx / 2 + 1) * grid.ny) {
        require_periodic(g, "HeatPlan");
        if (std::abs(g.dx() - g.dy()) > 1e-12 * g.dx())
            throw std::invalid_argument("HeatPlan: square spacing (dx == dy) required");
        if (!(ratio > 0.0)) throw std::invalid_argument("HeatPlan: dt/h^2 must be positive");

        // Assemble the 3x3 stencils of A and B and check the maximum-principle
        // conditions directly: A a Z-matrix (M by diagonal dominance), B >= 0.
        static const double w2[3] = {1.0 / 12.0, 10.0 / 12.0, 1.0 / 12.0};
        static const double l9[3][3] = {{1, 4, 1}, {4, -20, 4}, {1, 4, 1}};
        const double tol = 1e-13;
        ok = true;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const double w = w2[a] * w2[b];
                const double astencil = w - theta * ratio * l9[a][b] / 6.0;
                const double bstencil = w + (1.0 - theta) * ratio * l9[a][b] / 6.0;
                if (a == 1 && b == 1) {
                    if (!(astencil > 0.0)) ok = false;
                } else if (astencil > tol) {
                    ok = false;
                }
                if (bstencil < -tol) ok = false;
            }
        }
        if (enforce && !ok)
            throw std::invalid_argument("HeatPlan: dt/h^2 outside the maximum-principle window");

        fwd.p = fftw_plan_dft_r2c_2d(g.ny, g.nx, real.p, spec.p, FFTW_ESTIMATE);
        bwd.p = fftw_plan_dft_c2r_2d(g.ny, g.nx, spec.p, real.p, FFTW_ESTIMATE);
    }
};

HeatPlan::HeatPlan(const Grid2D& g, HeatMethod m, double dt_over_h2, bool enforce_window)
    : impl_(std::make_unique<Impl>(g, m, dt_over_h2, enforce_window)) {}
HeatPlan::~HeatPlan() = default;
const Grid2D& HeatPlan::grid() const { return impl_->g; }
bool HeatPlan::window_ok() const { return impl_->ok; }

Field2D HeatPlan::step(const Field2D& u) const {
    const Grid2D& g = impl_->g;
    if (!(u.grid() == g)) throw std::invalid_argument("HeatPlan::step: grid mismatch");
    const int nx = g.nx, ny = g.ny, nk = nx / 2 + 1;
    const double th = impl_->theta, ratio = impl_->ratio;

    std::copy(u.values().begin(), u.values().end(), impl_->real.p);
    fftw_execute(impl_->fwd.p);
    const double norm = 1.0 / (double(nx) * ny);
    for (int ky = 0; ky < ny; ++ky) {
        const double l1y = lam1_periodic(ky, ny);
        for (int kx = 0; kx < nk; ++kx) {
            const double l1x = lam1_periodic(kx, nx);
            const double w2 = lam2_of(l1x) * lam2_of(l1y);
            const double lap = l1x * lam2_of(l1y) + lam2_of(l1x) * l1y;
            const double c = (w2 + (1.0 - th) * ratio * lap) / (w2 - th * ratio * lap) * norm;
            fftw_complex& z = impl_->spec.p[size_t(ky) * nk + kx];
            z[0] *= c;
            z[1] *= c;
        }
    }
    fftw_execute(impl_->bwd.p);
    Field2D out(g);
    std::copy_n(impl_->real.p, size_t(nx) * ny, out.values().begin());
    return out;
}

std::vector<double> sample_full_lattice(const Grid2D& g,
                                        const std::function<double(double, double)>& fn) {
    const double dx = g.dx(), dy = g.dy();
    std::vector<double> out(size_t(g.nx + 2) * (g.ny + 2));
    for (int lj = 0; lj < g.ny + 2; ++lj)
        for (int li = 0; li < g.nx + 2; ++li)
            out[size_t(li) + size_t(g.nx + 2) * lj] = fn(li * dx, lj * dy);
    return out;
}

}  // namespace vort
