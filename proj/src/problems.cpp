#include "vort/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vort {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sech(double x) { return 1.0 / std::cosh(x); }

}  // namespace

ProblemSpec accuracy_problem() {
    ProblemSpec p;
    p.name = "accuracy";
    p.lx = p.ly = kTwoPi;
    p.initial = [](double x, double y) { return -2.0 * std::sin(2.0 * x) * std::sin(y); };
    p.exact = [](double x, double y, double) { return -2.0 * std::sin(2.0 * x) * std::sin(y); };
    p.bounds = {-2.0, 2.0};
    return p;
}

ProblemSpec shear_layer_problem() {
    constexpr double delta = 0.05;
    const double rho = std::numbers::pi / 15.0;
    ProblemSpec p;
    p.name = "shear_layer";
    p.lx = p.ly = kTwoPi;
    p.initial = [rho](double x, double y) {
        const double pi = std::numbers::pi;
        if (y <= pi) {
            const double s = sech((y - pi / 2.0) / rho);
            return delta * std::cos(x) - s * s / rho;
        }
        const double s = sech((3.0 * pi / 2.0 - y) / rho);
        return delta * std::cos(x) + s * s / rho;
    };
    p.bounds = {-(delta + 1.0 / rho), delta + 1.0 / rho};
    return p;
}

ProblemSpec vortex_patch_problem() {
    ProblemSpec p;
    p.name = "vortex_patch";
    p.lx = p.ly = kTwoPi;
    p.initial = [](double x, double y) {
        const double pi = std::numbers::pi;
        const bool in_x = x >= pi / 2.0 && x <= 3.0 * pi / 2.0;
        if (in_x && y >= pi / 4.0 && y <= 3.0 * pi / 4.0) return -1.0;
        if (in_x && y >= 5.0 * pi / 4.0 && y <= 7.0 * pi / 4.0) return 1.0;
        return 0.0;
    };
    p.bounds = {-1.0, 1.0};
    return p;
}

Field2D sample_initial(const ProblemSpec& p, int nx, int ny) {
    Grid2D g(nx, ny, p.lx, p.ly, Bc::Periodic, Bc::Periodic);
    Field2D f(g);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) f(i, j) = p.initial(g.x(i), g.y(j));
    return f;
}

ProblemSpec lookup_problem(const std::string& name) {
    if (name == "accuracy") return accuracy_problem();
    if (name == "shear_layer") return shear_layer_problem();
    if (name == "vortex_patch") return vortex_patch_problem();
    throw std::invalid_argument("unknown flow problem: " + name);
}

}  // namespace vort
