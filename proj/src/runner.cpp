#include "vort/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "vort/elliptic.hpp"
#include "vort/integrator.hpp"
#include "vort/problems.hpp"
#include "vort/velocity.hpp"

namespace vort {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_time(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", t);
    return buf;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot open output file: " + p.string());
    return out;
}

class Manifest {
  public:
    void put(const std::string& key, const std::string& value) { kv_[key] = value; }
    void put(const std::string& key, double value) { kv_[key] = fmt17(value); }
    void put(const std::string& key, long long value) { kv_[key] = std::to_string(value); }
    void write(const fs::path& p) const {
        std::ofstream out = open_out(p);
        for (const auto& [k, v] : kv_) out << k << "=" << v << "\n";
    }

  private:
    std::map<std::string, std::string> kv_;
};

std::string limiter_name(bool bp, TvbVariant tvb) {
    std::string t = tvb == TvbVariant::Tvb1 ? "tvb1" : tvb == TvbVariant::Tvb2 ? "tvb2" : "";
    if (bp) return t.empty() ? "bp" : "bp+" + t;
    return t.empty() ? "none" : t;
}

void write_field_csv(const fs::path& p, const Field2D& f) {
    std::ofstream out = open_out(p);
    out << "x,y,value\n";
    const Grid2D& g = f.grid();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out << fmt17(g.x(i)) << "," << fmt17(g.y(j)) << "," << fmt17(f(i, j)) << "\n";
}

void write_matrix(const fs::path& p, const Field2D& f) {
    std::ofstream out = open_out(p);
    const Grid2D& g = f.grid();
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) out << (i ? " " : "") << fmt17(f(i, j));
        out << "\n";
    }
}

void write_diag_cut(const fs::path& p, const Field2D& f) {
    std::ofstream out = open_out(p);
    out << "s,omega\n";
    const Grid2D& g = f.grid();
    const int n = std::min(g.nx, g.ny);
    for (int k = 0; k < n; ++k) out << fmt17(g.x(k)) << "," << fmt17(f(k, k)) << "\n";
}

struct FlowResolved {
    ProblemSpec prob;
    int nx = 0, ny = 0;
    double tfinal = 0.0;
    double fraction = 0.0;
    StepConfig sc;
    std::vector<double> targets;  // ascending, unique, last == tfinal
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

std::vector<double> resolve_targets(std::vector<double> snapshots, double tfinal) {
    snapshots.push_back(tfinal);
    std::sort(snapshots.begin(), snapshots.end());
    std::vector<double> targets;
    for (double t : snapshots) {
        require(t > 0.0 && t <= tfinal + 1e-9, "snapshot time outside (0, tfinal]");
        if (targets.empty() || t - targets.back() > 1e-9) targets.push_back(std::min(t, tfinal));
    }
    return targets;
}

LimiterConfig resolve_limiter(const RunConfig& rc, const ProblemSpec& prob, double default_p) {
    LimiterConfig lc;
    if (rc.limiter_set) {
        lc.bp = rc.bp;
        lc.tvb = rc.tvb;
    } else if (prob.name == "accuracy") {
        lc.bp = true;
        lc.tvb = TvbVariant::Tvb1;
    } else {
        lc.bp = true;
    }
    lc.tvb_p = rc.tvb_p >= 0.0 ? rc.tvb_p : default_p;
    lc.bounds = prob.bounds;
    return lc;
}

/// Runs one flow simulation into dir; fills manifest entries and optionally
/// the final-state error against the exact solution. Returns an exit code.
int simulate(const FlowResolved& r, const fs::path& dir, Manifest& man, std::string* err,
             ErrorNorms* final_error) {
    Grid2D grid(r.nx, r.ny, r.prob.lx, r.prob.ly, Bc::Periodic, Bc::Periodic);
    PeriodicPoissonPlan poisson(grid);
    Field2D omega0 = sample_initial(r.prob, r.nx, r.ny);
    const double sum0 = omega0.sum();
    FlowState state = make_flow_state(0.0, std::move(omega0), poisson);

    std::ofstream steps = open_out(dir / "steps.csv");
    steps << "step,t,dt,min_omega,max_omega,sum_omega,div_residual_max,bp_violations\n";

    const BpBounds b = r.sc.limiter.bounds;
    const double hard_tol = 1e-8 * std::max({1.0, std::abs(b.m), std::abs(b.M)});

    long step = 0;
    size_t ti = 0;
    long bp_violations_total = 0;
    while (ti < r.targets.size()) {
        const double target = r.targets[ti];
        if (target - state.t <= 1e-12) {
            const std::string tag = fmt_time(target);
            write_field_csv(dir / ("fields_t" + tag + ".csv"), state.omega);
            write_matrix(dir / ("matrix_t" + tag + ".dat"), state.omega);
            if (r.prob.name == "vortex_patch")
                write_diag_cut(dir / ("diag_cut_t" + tag + ".csv"), state.omega);
            ++ti;
            continue;
        }
        double dt = r.sc.fixed_dt;
        if (state.t + dt > target - 1e-12) dt = target - state.t;
        StepStats st;
        state = ssprk3_step(state, dt, r.sc, poisson, &st);
        ++step;
        bp_violations_total += st.bp_precondition_violations;
        const double divmax = max_abs(divergence_residual(state.vel));
        const double wmin = state.omega.min(), wmax = state.omega.max();
        steps << step << "," << fmt17(state.t) << "," << fmt17(dt) << "," << fmt17(wmin) << ","
              << fmt17(wmax) << "," << fmt17(state.omega.sum()) << "," << fmt17(divmax) << ","
              << st.bp_precondition_violations << "\n";
        if (!state.omega.finite()) {
            if (err) *err = "non-finite vorticity at step " + std::to_string(step);
            return kRunInvariantError;
        }
        if (r.sc.limiter.bp && (wmin < b.m - hard_tol || wmax > b.M + hard_tol)) {
            if (err)
                *err = "vorticity left the limited range at step " + std::to_string(step) +
                       ": [" + fmt17(wmin) + ", " + fmt17(wmax) + "]";
            return kRunInvariantError;
        }
    }

    man.put("steps", static_cast<long long>(step));
    man.put("dt", r.sc.fixed_dt);
    man.put("sum_initial", sum0);
    man.put("sum_final", state.omega.sum());
    man.put("min_final", state.omega.min());
    man.put("max_final", state.omega.max());
    man.put("bp_violations_total", static_cast<long long>(bp_violations_total));

    if (final_error && r.prob.exact) {
        Field2D exact(grid);
        for (int j = 0; j < r.ny; ++j)
            for (int i = 0; i < r.nx; ++i) exact(i, j) = r.prob.exact(grid.x(i), grid.y(j), state.t);
        *final_error = error_norms(state.omega, exact);
    }
    return kRunOk;
}

void fill_common_manifest(Manifest& man, const RunConfig& rc, const FlowResolved& r) {
    man.put("problem", r.prob.name);
    man.put("nx", static_cast<long long>(r.nx));
    man.put("ny", static_cast<long long>(r.ny));
    man.put("lx", r.prob.lx);
    man.put("ly", r.prob.ly);
    man.put("tfinal", r.tfinal);
    man.put("equation", rc.re > 0.0 ? "navier_stokes" : "euler");
    man.put("re", rc.re);
    man.put("limiter", limiter_name(r.sc.limiter.bp, r.sc.limiter.tvb));
    man.put("tvb_p", r.sc.limiter.tvb_p);
    man.put("cfl_fraction", r.fraction);
    man.put("bounds_m", r.sc.limiter.bounds.m);
    man.put("bounds_M", r.sc.limiter.bounds.M);
    std::string snaps;
    for (double t : r.targets) snaps += (snaps.empty() ? "" : ",") + std::string(fmt_time(t));
    man.put("snapshots", snaps);
    man.put("version", kVersion);
}

FlowResolved resolve_flow(const RunConfig& rc) {
    FlowResolved r;
    r.prob = lookup_problem(rc.problem);
    r.nx = rc.nx > 0 ? rc.nx : 160;
    r.ny = rc.ny > 0 ? rc.ny : 160;
    require(r.nx >= 8 && r.ny >= 8, "flow runs require nx, ny >= 8");
    const double default_tfinal = rc.problem == "shear_layer" ? 8.0 : 5.0;
    r.tfinal = rc.tfinal > 0.0 ? rc.tfinal : default_tfinal;
    double default_p = 100.0;
    if (rc.problem == "vortex_patch") default_p = 10.0;
    if (rc.problem == "accuracy") default_p = 300.0;
    double default_fraction = 1.0 / 24.0;
    if (rc.problem == "vortex_patch" && r.tfinal >= 10.0) default_fraction = 1.0 / 12.0;
    r.fraction = rc.cfl_fraction > 0.0 ? rc.cfl_fraction : default_fraction;
    r.sc.equation = rc.re > 0.0 ? Equation::NavierStokes : Equation::Euler;
    r.sc.re = rc.re;
    r.sc.limiter = resolve_limiter(rc, r.prob, default_p);
    std::vector<double> snaps = rc.snapshots;
    if (snaps.empty() && rc.problem == "shear_layer")
        for (double t : {6.0, 8.0})
            if (t < r.tfinal - 1e-9) snaps.push_back(t);
    r.targets = resolve_targets(std::move(snaps), r.tfinal);
    return r;
}

int run_flow(const RunConfig& rc, std::string* err) {
    FlowResolved r = resolve_flow(rc);
    {
        Field2D w0 = sample_initial(r.prob, r.nx, r.ny);
        Grid2D g = w0.grid();
        PeriodicPoissonPlan plan(g);
        FlowState s0 = make_flow_state(0.0, std::move(w0), plan);
        r.sc.fixed_dt = caption_dt(s0, r.fraction);
    }
    const fs::path dir(rc.out_dir);
    fs::create_directories(dir);
    Manifest man;
    fill_common_manifest(man, rc, r);
    const int code = simulate(r, dir, man, err, nullptr);
    if (code == kRunOk) man.write(dir / "manifest");
    return code;
}

int run_accuracy(const RunConfig& rc, std::string* err) {
    std::vector<int> sweep = rc.accuracy_sweep;
    if (sweep.empty()) sweep = rc.nx > 0 ? std::vector<int>{rc.nx} : std::vector<int>{32, 64, 128, 256};
    std::sort(sweep.begin(), sweep.end());
    sweep.erase(std::unique(sweep.begin(), sweep.end()), sweep.end());
    for (int n : sweep) require(n >= 8, "accuracy sweep requires n >= 8");

    const fs::path dir(rc.out_dir);
    fs::create_directories(dir);

    std::vector<std::pair<int, double>> l2_runs, linf_runs;
    Manifest man;
    std::string sweep_str;
    for (int n : sweep) sweep_str += (sweep_str.empty() ? "" : ",") + std::to_string(n);
    man.put("sweep", sweep_str);

    for (int n : sweep) {
        RunConfig sub = rc;
        sub.nx = sub.ny = n;
        FlowResolved r = resolve_flow(sub);
        r.tfinal = rc.tfinal > 0.0 ? rc.tfinal : 0.5;
        r.targets = resolve_targets(rc.snapshots, r.tfinal);
        {
            Field2D w0 = sample_initial(r.prob, n, n);
            Grid2D g = w0.grid();
            PeriodicPoissonPlan plan(g);
            FlowState s0 = make_flow_state(0.0, std::move(w0), plan);
            // Caption step rule capped so temporal error stays under the
            // fourth-order spatial error.
            r.sc.fixed_dt = std::min(caption_dt(s0, r.fraction), 0.3 * std::pow(g.dx(), 4.0 / 3.0));
        }
        const fs::path sub_dir = dir / ("n" + std::to_string(n));
        fs::create_directories(sub_dir);
        Manifest sub_man;
        fill_common_manifest(sub_man, rc, r);
        ErrorNorms norms;
        const int code = simulate(r, sub_dir, sub_man, err, &norms);
        if (code != kRunOk) return code;
        sub_man.write(sub_dir / "manifest");
        l2_runs.emplace_back(n, norms.l2);
        linf_runs.emplace_back(n, norms.linf);
        man.put("dt_n" + std::to_string(n), r.sc.fixed_dt);
    }

    std::vector<double> l2_orders = convergence_order(l2_runs);
    std::vector<double> linf_orders = convergence_order(linf_runs);
    std::ofstream out = open_out(dir / "errors.csv");
    out << "n,l2_error,l2_order,linf_error,linf_order\n";
    for (size_t k = 0; k < l2_runs.size(); ++k) {
        out << l2_runs[k].first << "," << fmt17(l2_runs[k].second) << ","
            << (k == 0 ? "" : fmt17(l2_orders[k])) << "," << fmt17(linf_runs[k].second) << ","
            << (k == 0 ? "" : fmt17(linf_orders[k])) << "\n";
    }
    man.put("problem", "accuracy");
    man.put("version", kVersion);
    man.write(dir / "manifest");
    return kRunOk;
}

double mean_adjusted_linf(const Field2D& num, const Field2D& exact) {
    double shift = 0.0;
    const auto nv = num.values();
    const auto ev = exact.values();
    for (size_t k = 0; k < nv.size(); ++k) shift += ev[k] - nv[k];
    shift /= static_cast<double>(nv.size());
    double linf = 0.0;
    for (size_t k = 0; k < nv.size(); ++k) linf = std::max(linf, std::abs(nv[k] + shift - ev[k]));
    return linf;
}

int run_poisson_bench(const RunConfig& rc, std::string* err) {
    (void)err;
    const fs::path dir(rc.out_dir);
    fs::create_directories(dir);
    std::ofstream out = open_out(dir / "poisson_bench.csv");
    out << "bc,scheme,solution,nx,ny,linf_error,order\n";

    struct Mfg {
        std::string name;
        std::function<double(double, double)> u, f;
    };
    const double pi = std::numbers::pi;
    const Mfg dir1{"solution1",
                   [=](double x, double y) { return std::sin(pi * x) * std::sin(pi * y) + 2.0 * x; },
                   [=](double x, double y) { return -2.0 * pi * pi * std::sin(pi * x) * std::sin(pi * y); }};
    const Mfg dir2{"solution2",
                   [=](double x, double y) {
                       return std::sin(pi * x) * std::sin(pi * y) + 4.0 * std::pow(x, 4) * std::pow(y, 4);
                   },
                   [=](double x, double y) {
                       return -2.0 * pi * pi * std::sin(pi * x) * std::sin(pi * y) +
                              48.0 * x * x * y * y * (x * x + y * y);
                   }};

    auto emit_series = [&out](const std::string& bc, const std::string& scheme,
                              const std::string& solution,
                              const std::vector<std::pair<int, int>>& grids,
                              const std::function<double(int, int)>& solve_err) {
        double prev_err = 0.0, prev_h = 0.0;
        bool first = true;
        for (auto [nx, ny] : grids) {
            const double e = solve_err(nx, ny);
            const double h = bc == "periodic" ? 1.0 / nx : 1.0 / (nx + 1);
            std::string order;
            if (!first) order = fmt17(std::log(prev_err / e) / std::log(prev_h / h));
            out << bc << "," << scheme << "," << solution << "," << nx << "," << ny << ","
                << fmt17(e) << "," << order << "\n";
            prev_err = e;
            prev_h = h;
            first = false;
        }
    };

    const std::vector<std::pair<int, int>> dgrids{{11, 15}, {23, 31}, {47, 63}, {95, 127}};
    for (const Mfg* m : {&dir1, &dir2}) {
        for (PoissonScheme s : {PoissonScheme::Compact, PoissonScheme::NinePoint}) {
            const std::string sname = s == PoissonScheme::Compact ? "compact" : "ninepoint";
            emit_series("dirichlet", sname, m->name, dgrids, [&](int nx, int ny) {
                Grid2D g(nx, ny, 1.0, 2.0, Bc::Dirichlet, Bc::Dirichlet);
                DirichletPoissonPlan plan(g, s);
                std::vector<double> f_full = sample_full_lattice(g, m->f);
                std::vector<double> u_ring = sample_full_lattice(g, m->u);
                Field2D num = plan.solve(f_full, u_ring);
                Field2D exact(g);
                for (int j = 0; j < ny; ++j)
                    for (int i = 0; i < nx; ++i) exact(i, j) = m->u(g.x(i), g.y(j));
                return error_norms(num, exact).linf;
            });
        }
    }

    // Nonhomogeneous Neumann test; solution matched up to a constant.
    {
        auto u = [=](double x, double y) {
            return std::cos(pi * x) * std::cos(3.0 * pi * y) + std::sin(pi * y) + std::pow(x, 4);
        };
        auto f = [=](double x, double y) {
            return -10.0 * pi * pi * std::cos(pi * x) * std::cos(3.0 * pi * y) -
                   pi * pi * std::sin(pi * y) + 12.0 * x * x;
        };
        auto ux = [=](double x, double y) {
            return -pi * std::sin(pi * x) * std::cos(3.0 * pi * y) + 4.0 * std::pow(x, 3);
        };
        auto uy = [=](double x, double y) {
            return -3.0 * pi * std::cos(pi * x) * std::sin(3.0 * pi * y) + pi * std::cos(pi * y);
        };
        std::vector<std::pair<int, int>> ngrids;
        for (int nx : {11, 23, 47, 95}) ngrids.emplace_back(nx, 3 * (nx + 1) - 1);
        emit_series("neumann", "compact", "solution3", ngrids, [&](int nx, int ny) {
            Grid2D g(nx, ny, 1.0, 2.0, Bc::Neumann, Bc::Neumann);
            NeumannPoissonPlan plan(g);
            std::vector<double> f_full = sample_full_lattice(g, f);
            const double dx = g.dx(), dy = g.dy();
            std::vector<double> gl(ny + 2), gr(ny + 2), gb(nx + 2), gt(nx + 2);
            for (int j = 0; j < ny + 2; ++j) {
                gl[j] = ux(0.0, j * dy);
                gr[j] = ux(1.0, j * dy);
            }
            for (int i = 0; i < nx + 2; ++i) {
                gb[i] = uy(i * dx, 0.0);
                gt[i] = uy(i * dx, 2.0);
            }
            Field2D num = plan.solve(f_full, gl, gr, gb, gt);
            Field2D exact(g);
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) exact(i, j) = u(g.x(i), g.y(j));
            return mean_adjusted_linf(num, exact);
        });
    }

    // Periodic path on its smooth manufactured solution.
    for (PoissonScheme s : {PoissonScheme::Compact, PoissonScheme::NinePoint}) {
        const std::string sname = s == PoissonScheme::Compact ? "compact" : "ninepoint";
        std::vector<std::pair<int, int>> pgrids{{16, 16}, {32, 32}, {64, 64}, {128, 128}};
        emit_series("periodic", sname, "sinxsiny", pgrids, [&](int nx, int ny) {
            Grid2D g(nx, ny, kTwoPi, kTwoPi, Bc::Periodic, Bc::Periodic);
            PeriodicPoissonPlan plan(g, s);
            Field2D f(g), exact(g);
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    f(i, j) = -2.0 * std::sin(g.x(i)) * std::sin(g.y(j));
                    exact(i, j) = std::sin(g.x(i)) * std::sin(g.y(j));
                }
            Field2D num = plan.solve(f);
            return mean_adjusted_linf(num, exact);
        });
    }

    Manifest man;
    man.put("problem", "poisson_bench");
    man.put("version", kVersion);
    man.write(dir / "manifest");
    return kRunOk;
}

int run_heat_maxprin(const RunConfig& rc, std::string* err) {
    (void)err;
    require(rc.trials > 0, "heat_maxprin requires trials > 0");
    const int n = rc.nx > 0 ? rc.nx : 32;
    require(n >= 8, "heat_maxprin requires nx >= 8");
    Grid2D g(n, n, kTwoPi, kTwoPi, Bc::Periodic, Bc::Periodic);

    const fs::path dir(rc.out_dir);
    fs::create_directories(dir);
    std::ofstream out = open_out(dir / "heat_maxprin.csv");
    out << "method,dt_over_h2,guaranteed,trials,violations\n";

    struct Setting {
        HeatMethod method;
        double ratio;
        bool guaranteed;
    };
    const std::vector<Setting> settings{
        {HeatMethod::BackwardEuler, 5.0 / 48.0, true}, {HeatMethod::BackwardEuler, 1.0, true},
        {HeatMethod::BackwardEuler, 10.0, true},       {HeatMethod::CrankNicolson, 5.0 / 24.0, true},
        {HeatMethod::CrankNicolson, 5.0 / 12.0, true}, {HeatMethod::CrankNicolson, 0.5, false},
    };

    std::mt19937_64 rng(rc.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (const Setting& s : settings) {
        HeatPlan plan(g, s.method, s.ratio, s.guaranteed);
        long violations = 0;
        for (int trial = 0; trial < rc.trials; ++trial) {
            Field2D u0(g);
            for (double& v : u0.values()) v = unif(rng);
            const double lo = u0.min(), hi = u0.max();
            const double tol = 1e-13 * std::max(1.0, hi - lo);
            Field2D u1 = plan.step(u0);
            if (u1.min() < lo - tol || u1.max() > hi + tol) ++violations;
        }
        out << (s.method == HeatMethod::BackwardEuler ? "backward_euler" : "crank_nicolson") << ","
            << fmt17(s.ratio) << "," << (s.guaranteed ? "yes" : "no") << "," << rc.trials << ","
            << violations << "\n";
    }

    Manifest man;
    man.put("problem", "heat_maxprin");
    man.put("nx", static_cast<long long>(n));
    man.put("trials", static_cast<long long>(rc.trials));
    man.put("seed", static_cast<long long>(rc.seed));
    man.put("version", kVersion);
    man.write(dir / "manifest");
    return kRunOk;
}

}  // namespace

std::vector<double> parse_time_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        size_t pos = 0;
        double v = std::stod(item, &pos);
        if (pos != item.size()) throw std::invalid_argument("bad time value: " + item);
        out.push_back(v);
    }
    return out;
}

void apply_limiter_name(RunConfig& config, const std::string& name) {
    // Parse fully before touching config so a failed set leaves it unchanged.
    bool bp = false;
    TvbVariant tvb = TvbVariant::None;
    if (name == "none") {
    } else if (name == "bp") {
        bp = true;
    } else if (name == "tvb1") {
        tvb = TvbVariant::Tvb1;
    } else if (name == "tvb2") {
        tvb = TvbVariant::Tvb2;
    } else if (name == "bp+tvb1") {
        bp = true;
        tvb = TvbVariant::Tvb1;
    } else if (name == "bp+tvb2") {
        bp = true;
        tvb = TvbVariant::Tvb2;
    } else {
        throw std::invalid_argument("unknown limiter: " + name);
    }
    config.limiter_set = true;
    config.bp = bp;
    config.tvb = tvb;
}

int run_experiment(const RunConfig& config, std::string* error) {
    try {
        require(config.re >= 0.0, "re must be >= 0");
        if (config.problem == "accuracy") return run_accuracy(config, error);
        if (config.problem == "shear_layer" || config.problem == "vortex_patch")
            return run_flow(config, error);
        if (config.problem == "poisson_bench") return run_poisson_bench(config, error);
        if (config.problem == "heat_maxprin") return run_heat_maxprin(config, error);
        throw std::invalid_argument("unknown problem: " + config.problem);
    } catch (const std::invalid_argument& e) {
        if (error) *error = e.what();
        return kRunConfigError;
    } catch (const std::exception& e) {
        if (error) *error = e.what();
        return kRunInternalError;
    }
}

}  // namespace vort
