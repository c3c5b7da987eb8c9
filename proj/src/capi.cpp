#include "vort/vort.h"

#include <new>
#include <string>

#include "vort/runner.hpp"

struct vort_run {
    vort::RunConfig cfg;
    std::string error;
};

namespace {

int config_error(vort_run* run, const std::string& msg) {
    run->error = msg;
    return VORT_ERR_CONFIG;
}

}  // namespace

extern "C" {

vort_run* vort_run_create(const char* problem) {
    auto* run = new (std::nothrow) vort_run;
    if (run) run->cfg.problem = problem ? problem : "";
    return run;
}

void vort_run_destroy(vort_run* run) { delete run; }

int vort_run_set_int(vort_run* run, const char* key, long long value) {
    if (!run || !key) return VORT_ERR_CONFIG;
    const std::string k(key);
    if (k == "nx") {
        run->cfg.nx = static_cast<int>(value);
    } else if (k == "ny") {
        run->cfg.ny = static_cast<int>(value);
    } else if (k == "trials") {
        run->cfg.trials = static_cast<int>(value);
    } else if (k == "seed") {
        run->cfg.seed = static_cast<unsigned long long>(value);
    } else {
        return config_error(run, "unknown integer key: " + k);
    }
    return VORT_OK;
}

int vort_run_set_real(vort_run* run, const char* key, double value) {
    if (!run || !key) return VORT_ERR_CONFIG;
    const std::string k(key);
    if (k == "tfinal") {
        run->cfg.tfinal = value;
    } else if (k == "tvb_p") {
        run->cfg.tvb_p = value;
    } else if (k == "cfl_fraction") {
        run->cfg.cfl_fraction = value;
    } else if (k == "re") {
        run->cfg.re = value;
    } else {
        return config_error(run, "unknown real key: " + k);
    }
    return VORT_OK;
}

int vort_run_set_string(vort_run* run, const char* key, const char* value) {
    if (!run || !key || !value) return VORT_ERR_CONFIG;
    const std::string k(key), v(value);
    try {
        if (k == "limiter") {
            vort::apply_limiter_name(run->cfg, v);
        } else if (k == "out") {
            run->cfg.out_dir = v;
        } else if (k == "snapshots") {
            run->cfg.snapshots = vort::parse_time_list(v);
        } else {
            return config_error(run, "unknown string key: " + k);
        }
    } catch (const std::exception& e) {
        return config_error(run, e.what());
    }
    return VORT_OK;
}

int vort_run_execute(vort_run* run) {
    if (!run) return VORT_ERR_CONFIG;
    run->error.clear();
    return vort::run_experiment(run->cfg, &run->error);
}

const char* vort_run_error(const vort_run* run) { return run ? run->error.c_str() : ""; }

const char* vort_version(void) { return "1.0.0"; }

}  // extern "C"
