#include <algorithm>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "vort/vort.h"

int main(int argc, char** argv) {
    CLI::App app{"Fourth-order compact finite-difference solver for 2D incompressible flow "
                 "in vorticity form, with bound-preserving and TVB limiters"};
    app.set_config("--config", "", "Read options from an INI file (flags override)");

    std::string problem;
    app.add_option("problem", problem,
                   "accuracy | shear_layer | vortex_patch | poisson_bench | heat_maxprin")
        ->required();

    int nx = 0, ny = 0, trials = 0;
    long long seed = 0;
    double tfinal = 0.0, tvb_p = 0.0, cfl_fraction = 0.0, re = 0.0;
    std::string limiter, out_dir, snapshots;

    auto* o_nx = app.add_option("--nx", nx, "Grid points in x");
    auto* o_ny = app.add_option("--ny", ny, "Grid points in y");
    auto* o_tf = app.add_option("--tfinal", tfinal, "Final time");
    auto* o_lim = app.add_option("--limiter", limiter, "none|bp|tvb1|tvb2|bp+tvb1|bp+tvb2");
    auto* o_p = app.add_option("--tvb-p", tvb_p, "TVB minmod threshold constant P");
    auto* o_cfl = app.add_option("--cfl-fraction", cfl_fraction, "Time-step rule fraction");
    auto* o_re = app.add_option("--re", re, "Reynolds number (selects Navier-Stokes)");
    auto* o_out = app.add_option("--out", out_dir, "Output directory");
    auto* o_snap = app.add_option("--snapshot", snapshots, "Comma-separated output times");
    auto* o_seed = app.add_option("--seed", seed, "Random seed for trial-based runs");
    auto* o_trials = app.add_option("--trials", trials, "Trials per heat_maxprin setting");

    CLI11_PARSE(app, argc, argv);

    std::replace(problem.begin(), problem.end(), '-', '_');
    vort_run* run = vort_run_create(problem.c_str());
    if (!run) {
        std::fprintf(stderr, "error: out of memory\n");
        return VORT_ERR_INTERNAL;
    }

    int rc = VORT_OK;
    auto set = [&](int status) {
        if (status != VORT_OK && rc == VORT_OK) rc = status;
    };
    if (*o_nx) set(vort_run_set_int(run, "nx", nx));
    if (*o_ny) set(vort_run_set_int(run, "ny", ny));
    if (*o_seed) set(vort_run_set_int(run, "seed", seed));
    if (*o_trials) set(vort_run_set_int(run, "trials", trials));
    if (*o_tf) set(vort_run_set_real(run, "tfinal", tfinal));
    if (*o_p) set(vort_run_set_real(run, "tvb_p", tvb_p));
    if (*o_cfl) set(vort_run_set_real(run, "cfl_fraction", cfl_fraction));
    if (*o_re) set(vort_run_set_real(run, "re", re));
    if (*o_lim) set(vort_run_set_string(run, "limiter", limiter.c_str()));
    if (*o_out) set(vort_run_set_string(run, "out", out_dir.c_str()));
    if (*o_snap) set(vort_run_set_string(run, "snapshots", snapshots.c_str()));

    if (rc == VORT_OK) rc = vort_run_execute(run);
    if (rc != VORT_OK) std::fprintf(stderr, "error: %s\n", vort_run_error(run));
    vort_run_destroy(run);
    return rc;
}
