#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "vort/integrator.hpp"
#include "vort/problems.hpp"

using namespace vort;

namespace {

constexpr double kPi = std::numbers::pi;

double abs_sum(const Field2D& f) {
    double s = 0.0;
    for (double x : f.values()) s += std::abs(x);
    return s;
}

FlowState shear_state(int n, const PeriodicPoissonPlan& plan) {
    return make_flow_state(0.0, sample_initial(shear_layer_problem(), n, n), plan);
}

}  // namespace

TEST_CASE("stability bound: convective sum for the inviscid baseline") {
    Grid2D g(32, 32, 2.0 * kPi, 2.0 * kPi);
    StepConfig cfg;  // Euler, no limiters
    const double h = g.dx();
    CHECK(stable_dt(cfg, g, 1.0, 1.0) == doctest::Approx(h / 6.0).epsilon(1e-14));
    CHECK(stable_dt(cfg, g, 2.0, 0.0) == doctest::Approx(h / 6.0).epsilon(1e-14));
}

TEST_CASE("stability bound: per-axis limit with a TVB limiter") {
    Grid2D g(32, 16, 2.0 * kPi, kPi);
    StepConfig cfg;
    cfg.limiter.tvb = TvbVariant::Tvb1;
    cfg.limiter.tvb_p = 100.0;
    const double expected = std::min(g.dx() / (24.0 * 0.8), g.dy() / (24.0 * 1.7));
    CHECK(stable_dt(cfg, g, 0.8, 1.7) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("stability bound: viscous constraint joins the convective one") {
    Grid2D g(32, 32, 2.0 * kPi, 2.0 * kPi);
    StepConfig cfg;
    cfg.equation = Equation::NavierStokes;
    cfg.re = 100.0;
    const double h = g.dx();
    const double conv = (1.0 / 6.0) / (2.0 / h);
    const double visc = (5.0 / 24.0) / (2.0 / (cfg.re * h * h));
    CHECK(stable_dt(cfg, g, 1.0, 1.0) == doctest::Approx(std::min(conv, visc)).epsilon(1e-14));
    // Small Re makes diffusion binding.
    cfg.re = 0.01;
    const double visc2 = (5.0 / 24.0) * 0.01 * h * h / 2.0;
    CHECK(stable_dt(cfg, g, 1.0, 1.0) == doctest::Approx(visc2).epsilon(1e-14));
}

TEST_CASE("quiescent inviscid states fall back to the grid spacing") {
    Grid2D g(16, 32, 2.0 * kPi, 2.0 * kPi);
    PeriodicPoissonPlan plan(g);
    FlowState st = make_flow_state(0.0, Field2D(g), plan);
    StepConfig cfg;
    cfg.cfl_fraction = 0.5;
    CHECK(compute_dt(st, cfg) == doctest::Approx(0.5 * std::min(g.dx(), g.dy())).epsilon(1e-14));
    cfg.fixed_dt = 0.01;
    CHECK(compute_dt(st, cfg) == 0.01);
}

TEST_CASE("caption step rule freezes dt from the initial speed") {
    const int n = 32;
    Grid2D g(n, n, 2.0 * kPi, 2.0 * kPi);
    PeriodicPoissonPlan plan(g);
    FlowState st = shear_state(n, plan);
    double speed = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            speed = std::max(speed, std::hypot(st.vel.u(i, j), st.vel.v(i, j)));
    CHECK(caption_dt(st, 1.0 / 24.0) ==
          doctest::Approx(g.dx() / (24.0 * speed)).epsilon(1e-14));

    FlowState still = make_flow_state(0.0, Field2D(g), plan);
    CHECK_THROWS_AS(caption_dt(still, 1.0 / 24.0), std::invalid_argument);
}

TEST_CASE("scalar amplification matches the cubic Taylor polynomial") {
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> dist(-2.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const double z = dist(gen);
        const double poly = 1.0 + z + z * z / 2.0 + z * z * z / 6.0;
        CHECK(std::abs(ssprk3_scalar_amplification(z) - poly) <= 1e-14);
    }
}

TEST_CASE("constant vorticity is a fixed point of every configuration") {
    Grid2D g(16, 16, 2.0 * kPi, 2.0 * kPi);
    PeriodicPoissonPlan plan(g);
    FlowState st = make_flow_state(0.0, Field2D(g, 0.7), plan);
    for (TvbVariant tv : {TvbVariant::None, TvbVariant::Tvb1, TvbVariant::Tvb2}) {
        for (bool bp : {false, true}) {
            StepConfig cfg;
            cfg.limiter.tvb = tv;
            cfg.limiter.tvb_p = 10.0;
            cfg.limiter.bp = bp;
            cfg.limiter.bounds = {0.0, 1.0};
            FlowState next = ssprk3_step(st, 0.01, cfg, plan);
            for (double v : next.omega.values()) CHECK(v == doctest::Approx(0.7).epsilon(1e-13));
        }
    }
}

TEST_CASE("steady-state residual shrinks at fourth order") {
    auto residual = [](int n) {
        Grid2D g(n, n, 2.0 * kPi, 2.0 * kPi);
        PeriodicPoissonPlan plan(g);
        FlowState st = make_flow_state(0.0, sample_initial(accuracy_problem(), n, n), plan);
        StepConfig cfg;
        cfg.fixed_dt = 5e-4;
        FlowState next = ssprk3_step(st, 5e-4, cfg, plan);
        double e = 0.0;
        for (int k = 0; k < g.size(); ++k)
            e = std::max(e, std::abs(next.omega.values()[k] - st.omega.values()[k]));
        return e;
    };
    const double r32 = residual(32), r64 = residual(64);
    CHECK(r32 / r64 > 9.0);
    CHECK(r32 / r64 < 28.0);
}

TEST_CASE("stepping is deterministic") {
    const int n = 32;
    Grid2D g(n, n, 2.0 * kPi, 2.0 * kPi);
    PeriodicPoissonPlan plan(g);
    StepConfig cfg;
    cfg.limiter.bp = true;
    cfg.limiter.tvb = TvbVariant::Tvb1;
    cfg.limiter.tvb_p = 100.0;
    cfg.limiter.bounds = shear_layer_problem().bounds;

    auto run = [&] {
        FlowState st = shear_state(n, plan);
        for (int s = 0; s < 3; ++s) st = ssprk3_step(st, compute_dt(st, cfg), cfg, plan);
        return st.omega;
    };
    Field2D a = run(), b = run();
    for (int k = 0; k < g.size(); ++k) CHECK(a.values()[k] == b.values()[k]);
}

TEST_CASE("sum conservation and bounds across limiter configurations") {
    const int n = 32;
    Grid2D g(n, n, 2.0 * kPi, 2.0 * kPi);
    PeriodicPoissonPlan plan(g);
    const BpBounds bounds = shear_layer_problem().bounds;

    for (TvbVariant tv : {TvbVariant::None, TvbVariant::Tvb1, TvbVariant::Tvb2}) {
        for (bool bp : {false, true}) {
            StepConfig cfg;
            cfg.limiter.tvb = tv;
            cfg.limiter.tvb_p = 100.0;
            cfg.limiter.bp = bp;
            cfg.limiter.bounds = bounds;
            FlowState st = shear_state(n, plan);
            const double s0 = st.omega.sum(), a0 = abs_sum(st.omega);
            StepStats stats;
            for (int s = 0; s < 3; ++s)
                st = ssprk3_step(st, compute_dt(st, cfg), cfg, plan, &stats);
            CHECK(st.omega.finite());
            CHECK(std::abs(st.omega.sum() - s0) <= 1e-11 * a0 + 1e-12);
            CHECK(stats.dt > 0.0);
            if (bp) {
                CHECK(st.omega.min() >= bounds.m - 1e-12);
                CHECK(st.omega.max() <= bounds.M + 1e-12);
            }
        }
    }
}

TEST_CASE("viscous stepping conserves and respects bounds with BP") {
    const int n = 32;
    Grid2D g(n, n, 2.0 * kPi, 2.0 * kPi);
    PeriodicPoissonPlan plan(g);
    StepConfig cfg;
    cfg.equation = Equation::NavierStokes;
    cfg.re = 100.0;
    cfg.limiter.bp = true;
    cfg.limiter.bounds = shear_layer_problem().bounds;

    FlowState st = shear_state(n, plan);
    const double s0 = st.omega.sum(), a0 = abs_sum(st.omega);
    for (int s = 0; s < 3; ++s) st = ssprk3_step(st, compute_dt(st, cfg), cfg, plan);
    CHECK(std::abs(st.omega.sum() - s0) <= 1e-11 * a0 + 1e-12);
    CHECK(st.omega.min() >= cfg.limiter.bounds.m - 1e-12);
    CHECK(st.omega.max() <= cfg.limiter.bounds.M + 1e-12);
}

TEST_CASE("configuration validation") {
    Grid2D g(16, 16, 2.0 * kPi, 2.0 * kPi);
    StepConfig cfg;
    cfg.equation = Equation::NavierStokes;  // re defaults to 0
    CHECK_THROWS_AS(stable_dt(cfg, g, 1.0, 1.0), std::invalid_argument);

    StepConfig bad_p;
    bad_p.limiter.tvb = TvbVariant::Tvb2;
    bad_p.limiter.tvb_p = -1.0;
    CHECK_THROWS_AS(stable_dt(bad_p, g, 1.0, 1.0), std::invalid_argument);

    StepConfig bad_b;
    bad_b.limiter.bp = true;
    bad_b.limiter.bounds = {2.0, -2.0};
    CHECK_THROWS_AS(stable_dt(bad_b, g, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("flow states carry a zero-mean streamfunction") {
    const int n = 24;
    Grid2D g(n, n, 2.0 * kPi, 2.0 * kPi);
    PeriodicPoissonPlan plan(g);
    FlowState st = shear_state(n, plan);
    CHECK(std::abs(st.psi.mean()) < 1e-12);
    Field2D res = divergence_residual(st.vel);
    CHECK(max_abs(res) <= 1e-11 * std::max(max_abs(st.vel.u), max_abs(st.vel.v)));
}
