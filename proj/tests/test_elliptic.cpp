#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "vort/elliptic.hpp"

using namespace vort;

namespace {

constexpr double kPi = std::numbers::pi;

std::mt19937 rng(20240815);

double unit_rand() {
    static std::uniform_real_distribution<double> dist(-1.0, 1.0);
    return dist(rng);
}

double wgt(int d) { return d == 0 ? 10.0 : 1.0; }
double sec(int d) { return d == 0 ? -2.0 : 1.0; }

// 3x3 left-hand stencil shared by every fourth-order Poisson variant.
double lhs_coef(int di, int dj, double idx2, double idy2) {
    return (idx2 * sec(di) * wgt(dj) + idy2 * wgt(di) * sec(dj)) / 12.0;
}

double rhs_coef(PoissonScheme s, int di, int dj) {
    if (s == PoissonScheme::Compact) return wgt(di) * wgt(dj) / 144.0;
    if (di == 0 && dj == 0) return 8.0 / 12.0;
    return (di == 0 || dj == 0) ? 1.0 / 12.0 : 0.0;
}

}  // namespace

TEST_CASE("periodic Poisson matches a dense stencil assembly") {
    const int nx = 6, ny = 5;
    Grid2D g(nx, ny, 2.0 * kPi, 1.3);
    const double idx2 = 1.0 / (g.dx() * g.dx()), idy2 = 1.0 / (g.dy() * g.dy());
    const int N = nx * ny;

    Field2D f(g);
    for (double& v : f.values()) v = unit_rand();
    const double fm = f.mean();
    for (double& v : f.values()) v -= fm;

    for (PoissonScheme s : {PoissonScheme::Compact, PoissonScheme::NinePoint}) {
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const int r = i + nx * j;
                for (int dj = -1; dj <= 1; ++dj)
                    for (int di = -1; di <= 1; ++di) {
                        const int ii = (i + di + nx) % nx, jj = (j + dj + ny) % ny;
                        A(r, ii + nx * jj) += lhs_coef(di, dj, idx2, idy2);
                        rhs(r) += rhs_coef(s, di, dj) * f.at_wrap(i + di, j + dj);
                    }
            }
        // Singular with a constant null space; the minimum-norm least-squares
        // solution is the zero-mean one the plan returns.
        Eigen::VectorXd ref = A.completeOrthogonalDecomposition().solve(rhs);

        PeriodicPoissonPlan plan(g, s);
        Field2D u = plan.solve(f);
        for (int k = 0; k < N; ++k) CHECK(u.values()[k] == doctest::Approx(ref(k)).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("periodic Poisson projects out the mean of the source") {
    Grid2D g(8, 8, 2.0 * kPi, 2.0 * kPi);
    PeriodicPoissonPlan plan(g);
    Field2D f(g);
    for (double& v : f.values()) v = unit_rand();
    Field2D f0 = f;
    const double fm = f0.mean();
    for (double& v : f0.values()) v -= fm;

    Field2D a = plan.solve(f), b = plan.solve(f0);
    for (int k = 0; k < g.size(); ++k)
        CHECK(a.values()[k] == doctest::Approx(b.values()[k]).epsilon(1e-12).scale(1.0));
    CHECK(std::abs(a.mean()) < 1e-12);
}

TEST_CASE("periodic Poisson is fourth-order on a manufactured solution") {
    auto linf = [](int n) {
        Grid2D g(n, n, 2.0 * kPi, 2.0 * kPi);
        PeriodicPoissonPlan plan(g);
        Field2D f(g);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) f(i, j) = -2.0 * std::sin(g.x(i)) * std::sin(g.y(j));
        Field2D u = plan.solve(f);
        double e = 0.0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                e = std::max(e, std::abs(u(i, j) - std::sin(g.x(i)) * std::sin(g.y(j))));
        return e;
    };
    const double e16 = linf(16), e32 = linf(32);
    CHECK(e16 < 1e-4);
    CHECK(e16 / e32 == doctest::Approx(16.0).epsilon(0.2));
}

TEST_CASE("Dirichlet Poisson matches a dense assembly with boundary lift") {
    const int nx = 6, ny = 5;
    Grid2D g(nx, ny, 1.0, 2.0, Bc::Dirichlet, Bc::Dirichlet);
    const double idx2 = 1.0 / (g.dx() * g.dx()), idy2 = 1.0 / (g.dy() * g.dy());
    const int N = nx * ny, mx = nx + 2;

    std::vector<double> f_full((nx + 2) * (ny + 2)), u_ring((nx + 2) * (ny + 2), 0.0);
    for (double& v : f_full) v = unit_rand();
    for (int j = 0; j <= ny + 1; ++j)
        for (int i = 0; i <= nx + 1; ++i)
            if (i == 0 || i == nx + 1 || j == 0 || j == ny + 1) u_ring[i + mx * j] = unit_rand();

    for (PoissonScheme s : {PoissonScheme::Compact, PoissonScheme::NinePoint}) {
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N, N);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const int r = i + nx * j;
                for (int dj = -1; dj <= 1; ++dj)
                    for (int di = -1; di <= 1; ++di) {
                        const int li = i + 1 + di, lj = j + 1 + dj;
                        const double coef = lhs_coef(di, dj, idx2, idy2);
                        const bool interior = li >= 1 && li <= nx && lj >= 1 && lj <= ny;
                        if (interior)
                            K(r, (li - 1) + nx * (lj - 1)) += coef;
                        else
                            rhs(r) -= coef * u_ring[li + mx * lj];
                        rhs(r) += rhs_coef(s, di, dj) * f_full[li + mx * lj];
                    }
            }
        Eigen::VectorXd ref = K.partialPivLu().solve(rhs);

        DirichletPoissonPlan plan(g, s);
        Field2D u = plan.solve(f_full, u_ring);
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                CHECK(u(i, j) == doctest::Approx(ref(i + nx * j)).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("Neumann Poisson matches a dense assembly with one-sided closures") {
    const int nx = 6, ny = 6;
    Grid2D g(nx, ny, 1.0, 2.0, Bc::Neumann, Bc::Neumann);
    const double dx = g.dx(), dy = g.dy();
    const double idx2 = 1.0 / (dx * dx), idy2 = 1.0 / (dy * dy);
    const int N = nx * ny;

    std::vector<double> f_full((nx + 2) * (ny + 2));
    for (double& v : f_full) v = unit_rand();
    Eigen::VectorXd gl(ny + 2), gr(ny + 2), gb(nx + 2), gt(nx + 2);
    for (int j = 0; j <= ny + 1; ++j) gl(j) = unit_rand(), gr(j) = unit_rand();
    for (int i = 0; i <= nx + 1; ++i) gb(i) = unit_rand(), gt(i) = unit_rand();

    // Affine lift of interior values to the full lattice: bottom/top edges by
    // the one-sided normal-derivative closure in y, then left/right edges and
    // corners by the closure in x applied to every lattice row.
    auto full_from = [&](const Eigen::MatrixXd& U, double gscale) {
        Eigen::MatrixXd F = Eigen::MatrixXd::Zero(nx + 2, ny + 2);
        F.block(1, 1, nx, ny) = U;
        for (int i = 1; i <= nx; ++i) {
            F(i, 0) = (48 * F(i, 1) - 36 * F(i, 2) + 16 * F(i, 3) - 3 * F(i, 4) -
                       12 * dy * gscale * gb(i)) / 25.0;
            F(i, ny + 1) = (48 * F(i, ny) - 36 * F(i, ny - 1) + 16 * F(i, ny - 2) -
                            3 * F(i, ny - 3) + 12 * dy * gscale * gt(i)) / 25.0;
        }
        for (int j = 0; j <= ny + 1; ++j) {
            F(0, j) = (48 * F(1, j) - 36 * F(2, j) + 16 * F(3, j) - 3 * F(4, j) -
                       12 * dx * gscale * gl(j)) / 25.0;
            F(nx + 1, j) = (48 * F(nx, j) - 36 * F(nx - 1, j) + 16 * F(nx - 2, j) -
                            3 * F(nx - 3, j) + 12 * dx * gscale * gr(j)) / 25.0;
        }
        return F;
    };

    Eigen::MatrixXd Dxxb_x = Eigen::MatrixXd::Zero(nx, nx + 2), W2b_x = Dxxb_x;
    Eigen::MatrixXd Dxxb_y = Eigen::MatrixXd::Zero(ny, ny + 2), W2b_y = Dxxb_y;
    for (int i = 0; i < nx; ++i) {
        Dxxb_x(i, i) = 1, Dxxb_x(i, i + 1) = -2, Dxxb_x(i, i + 2) = 1;
        W2b_x(i, i) = 1.0 / 12, W2b_x(i, i + 1) = 10.0 / 12, W2b_x(i, i + 2) = 1.0 / 12;
    }
    for (int j = 0; j < ny; ++j) {
        Dxxb_y(j, j) = 1, Dxxb_y(j, j + 1) = -2, Dxxb_y(j, j + 2) = 1;
        W2b_y(j, j) = 1.0 / 12, W2b_y(j, j + 1) = 10.0 / 12, W2b_y(j, j + 2) = 1.0 / 12;
    }
    auto scheme_lhs = [&](const Eigen::MatrixXd& F) {
        return (idx2 * (Dxxb_x * F * W2b_y.transpose()) + idy2 * (W2b_x * F * Dxxb_y.transpose()))
            .eval();
    };

    Eigen::MatrixXd A(N, N);
    for (int k = 0; k < N; ++k) {
        Eigen::MatrixXd U = Eigen::MatrixXd::Zero(nx, ny);
        U(k % nx, k / nx) = 1.0;
        Eigen::MatrixXd col = scheme_lhs(full_from(U, 0.0));
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) A(i + nx * j, k) = col(i, j);
    }
    Eigen::MatrixXd Fmat(nx + 2, ny + 2);
    for (int j = 0; j <= ny + 1; ++j)
        for (int i = 0; i <= nx + 1; ++i) Fmat(i, j) = f_full[i + (nx + 2) * j];
    Eigen::MatrixXd R = W2b_x * Fmat * W2b_y.transpose();
    Eigen::MatrixXd off = scheme_lhs(full_from(Eigen::MatrixXd::Zero(nx, ny), 1.0));
    Eigen::VectorXd c(N);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) c(i + nx * j) = R(i, j) - off(i, j);

    // The singular direction: constants lie in the kernel; an incompatible
    // right-hand side is repaired by removing its constant-mode coefficient,
    // which uses the left null vector.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    CHECK(svd.singularValues()(N - 1) < 1e-10 * svd.singularValues()(0));
    Eigen::VectorXd ell = svd.matrixU().col(N - 1);
    Eigen::VectorXd v0 = Eigen::VectorXd::Ones(N);
    c -= v0 * (ell.dot(c) / ell.dot(v0));
    Eigen::VectorXd ref = svd.solve(c);
    ref.array() -= ref.mean();

    NeumannPoissonPlan plan(g);
    Field2D u = plan.solve(f_full, {gl.data(), size_t(ny + 2)}, {gr.data(), size_t(ny + 2)},
                           {gb.data(), size_t(nx + 2)}, {gt.data(), size_t(nx + 2)});
    CHECK(std::abs(u.mean()) < 1e-11);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            CHECK(u(i, j) == doctest::Approx(ref(i + nx * j)).epsilon(1e-9).scale(1.0));
}

TEST_CASE("heat plan enforces the maximum-principle window") {
    Grid2D g(8, 8, 2.0 * kPi, 2.0 * kPi);
    CHECK_NOTHROW(HeatPlan(g, HeatMethod::BackwardEuler, 5.0 / 48.0));
    CHECK_NOTHROW(HeatPlan(g, HeatMethod::BackwardEuler, 10.0));
    CHECK_THROWS_AS(HeatPlan(g, HeatMethod::BackwardEuler, 5.0 / 48.0 * 0.999),
                    std::invalid_argument);
    CHECK_NOTHROW(HeatPlan(g, HeatMethod::CrankNicolson, 5.0 / 24.0));
    CHECK_NOTHROW(HeatPlan(g, HeatMethod::CrankNicolson, 5.0 / 12.0));
    CHECK_THROWS_AS(HeatPlan(g, HeatMethod::CrankNicolson, 5.0 / 24.0 * 0.999),
                    std::invalid_argument);
    CHECK_THROWS_AS(HeatPlan(g, HeatMethod::CrankNicolson, 5.0 / 12.0 * 1.001),
                    std::invalid_argument);

    HeatPlan loose(g, HeatMethod::CrankNicolson, 0.5, false);
    CHECK(!loose.window_ok());
    HeatPlan ok(g, HeatMethod::BackwardEuler, 0.25, false);
    CHECK(ok.window_ok());

    Grid2D bad(8, 8, 1.0, 2.0);
    CHECK_THROWS_AS(HeatPlan(bad, HeatMethod::BackwardEuler, 0.25), std::invalid_argument);
}

TEST_CASE("heat step matches a dense solve of the stencil system") {
    const int n = 8;
    Grid2D g(n, n, 2.0 * kPi, 2.0 * kPi);
    const int N = n * n;
    const int l9[3][3] = {{1, 4, 1}, {4, -20, 4}, {1, 4, 1}};

    Field2D u0(g);
    for (double& v : u0.values()) v = unit_rand();

    struct Setting {
        HeatMethod m;
        double r, theta;
    };
    for (const Setting& st : {Setting{HeatMethod::BackwardEuler, 0.3, 1.0},
                              Setting{HeatMethod::CrankNicolson, 0.3, 0.5}}) {
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N), B = Eigen::MatrixXd::Zero(N, N);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const int r = i + n * j;
                for (int dj = -1; dj <= 1; ++dj)
                    for (int di = -1; di <= 1; ++di) {
                        const int col = (i + di + n) % n + n * ((j + dj + n) % n);
                        const double w = wgt(di) * wgt(dj) / 144.0;
                        const double lap = l9[dj + 1][di + 1] / 6.0;
                        A(r, col) += w - st.theta * st.r * lap;
                        B(r, col) += w + (1.0 - st.theta) * st.r * lap;
                    }
            }
        Eigen::VectorXd x0(N);
        for (int k = 0; k < N; ++k) x0(k) = u0.values()[k];
        Eigen::VectorXd ref = A.partialPivLu().solve(B * x0);

        HeatPlan plan(g, st.m, st.r);
        Field2D u1 = plan.step(u0);
        for (int k = 0; k < N; ++k)
            CHECK(u1.values()[k] == doctest::Approx(ref(k)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("heat steps at the window edge respect the maximum principle") {
    Grid2D g(16, 16, 2.0 * kPi, 2.0 * kPi);
    for (auto [m, r] : {std::pair{HeatMethod::BackwardEuler, 5.0 / 48.0},
                        std::pair{HeatMethod::CrankNicolson, 5.0 / 24.0},
                        std::pair{HeatMethod::CrankNicolson, 5.0 / 12.0}}) {
        HeatPlan plan(g, m, r);
        for (int trial = 0; trial < 20; ++trial) {
            Field2D u(g);
            for (double& v : u.values()) v = 0.5 * (unit_rand() + 1.0);
            const double lo = u.min(), hi = u.max();
            Field2D next = plan.step(u);
            CHECK(next.min() >= lo - 1e-13);
            CHECK(next.max() <= hi + 1e-13);
        }
    }
}

TEST_CASE("full-lattice sampling covers the ring") {
    Grid2D g(4, 3, 1.0, 2.0, Bc::Dirichlet, Bc::Dirichlet);
    auto s = sample_full_lattice(g, [](double x, double y) { return x + 10.0 * y; });
    REQUIRE(s.size() == size_t(6 * 5));
    CHECK(s[0] == doctest::Approx(0.0));                       // (0, 0)
    CHECK(s[5 + 6 * 4] == doctest::Approx(1.0 + 20.0));        // (lx, ly)
    CHECK(s[1 + 6 * 1] == doctest::Approx(0.2 + 10.0 * 0.5));  // (dx, dy)
}
