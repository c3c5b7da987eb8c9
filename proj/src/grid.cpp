#include "vort/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vort {

Grid2D::Grid2D(int nx_, int ny_, double lx_, double ly_, Bc bx, Bc by)
    : nx(nx_), ny(ny_), lx(lx_), ly(ly_), bc_x(bx), bc_y(by) {
    if (nx < 3 || ny < 3)
        throw std::invalid_argument("Grid2D: nx, ny must be >= 3");
    if (!(lx > 0.0) || !(ly > 0.0))
        throw std::invalid_argument("Grid2D: lx, ly must be positive");
}

double Field2D::min() const { return *std::min_element(v_.begin(), v_.end()); }
double Field2D::max() const { return *std::max_element(v_.begin(), v_.end()); }
double Field2D::sum() const { return std::accumulate(v_.begin(), v_.end(), 0.0); }

bool Field2D::finite() const {
    return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

Field2D& Field2D::operator+=(const Field2D& o) {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("Field2D: grid mismatch");
    for (size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
    return *this;
}

Field2D& Field2D::operator-=(const Field2D& o) {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("Field2D: grid mismatch");
    for (size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
    return *this;
}

Field2D& Field2D::operator*=(double s) {
    for (double& x : v_) x *= s;
    return *this;
}

Field2D axpby(double a, const Field2D& x, double b, const Field2D& y) {
    if (!(x.grid() == y.grid())) throw std::invalid_argument("axpby: grid mismatch");
    Field2D r(x.grid());
    auto xs = x.values(), ys = y.values();
    auto rs = r.values();
    for (size_t k = 0; k < rs.size(); ++k) rs[k] = a * xs[k] + b * ys[k];
    return r;
}

ErrorNorms error_norms(const Field2D& a, const Field2D& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("error_norms: grid mismatch");
    const auto as = a.values(), bs = b.values();
    double s2 = 0.0, mx = 0.0;
    for (size_t k = 0; k < as.size(); ++k) {
        const double e = as[k] - bs[k];
        s2 += e * e;
        mx = std::max(mx, std::abs(e));
    }
    return {std::sqrt(a.grid().dx() * a.grid().dy() * s2), mx};
}

std::vector<double> convergence_order(const std::vector<std::pair<int, double>>& runs) {
    std::vector<double> p(runs.size(), std::nan(""));
    for (size_t k = 0; k < runs.size(); ++k) {
        if (runs[k].first <= 0 || !(runs[k].second > 0.0))
            throw std::invalid_argument("convergence_order: need n > 0 and err > 0");
        if (k == 0) continue;
        if (runs[k].first <= runs[k - 1].first)
            throw std::invalid_argument("convergence_order: n must increase");
        p[k] = std::log(runs[k - 1].second / runs[k].second) /
               std::log(double(runs[k].first) / runs[k - 1].first);
    }
    return p;
}

}  // namespace vort
