#pragma once

#include <functional>
#include <string>

#include "vort/bp_limiter.hpp"
#include "vort/grid.hpp"

namespace vort {

/// A periodic flow benchmark: initial vorticity on [0,lx]x[0,ly], optional
/// exact solution, and the global vorticity range its limiter should enforce.
struct ProblemSpec {
    std::string name;
    double lx = 0.0, ly = 0.0;
    std::function<double(double, double)> initial;
    std::function<double(double, double, double)> exact;  // (x, y, t); null if none
    BpBounds bounds{};
};

/// Steady vorticity -2 sin(2x) sin(y) on [0,2pi]^2; exact for all t.
ProblemSpec accuracy_problem();

/// Double shear layer: delta cos(x) -/+ sech^2 profiles around y = pi/2 and
/// 3pi/2, delta = 0.05, rho = pi/15; range +-(delta + 1/rho).
ProblemSpec shear_layer_problem();

/// Two opposite-sign rectangular patches; range [-1, 1].
ProblemSpec vortex_patch_problem();

/// Samples the initial condition at the periodic grid points.
Field2D sample_initial(const ProblemSpec& p, int nx, int ny);

ProblemSpec lookup_problem(const std::string& name);

}  // namespace vort
