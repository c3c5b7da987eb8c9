#pragma once

#include <span>
#include <string>
#include <vector>

namespace vort {

/// Boundary treatment of one grid axis.
enum class Bc { Periodic, Dirichlet, Neumann };

/// Uniform 2D tensor grid.
///
/// Periodic axis: spacing dx = lx/nx, sample points x_i = (i+1)*dx for
/// i = 0..nx-1 (the point at 0 is identified with the one at lx).
/// Bounded axis (Dirichlet/Neumann): spacing dx = lx/(nx+1), the nx stored
/// points are the interior ones x_i = (i+1)*dx; the boundary lies at 0 and lx.
struct Grid2D {
    int nx = 0, ny = 0;
    double lx = 0.0, ly = 0.0;
    Bc bc_x = Bc::Periodic, bc_y = Bc::Periodic;

    Grid2D() = default;
    Grid2D(int nx_, int ny_, double lx_, double ly_,
           Bc bx = Bc::Periodic, Bc by = Bc::Periodic);

    double dx() const { return bc_x == Bc::Periodic ? lx / nx : lx / (nx + 1); }
    double dy() const { return bc_y == Bc::Periodic ? ly / ny : ly / (ny + 1); }
    double x(int i) const { return (i + 1) * dx(); }
    double y(int j) const { return (j + 1) * dy(); }
    int size() const { return nx * ny; }

    bool operator==(const Grid2D&) const = default;
};

/// Scalar field sampled on a Grid2D. Storage is x-fastest: index i + nx*j.
class Field2D {
  public:
    Field2D() = default;
    explicit Field2D(const Grid2D& g, double fill = 0.0)
        : grid_(g), v_(static_cast<size_t>(g.size()), fill) {}

    const Grid2D& grid() const { return grid_; }
    double& operator()(int i, int j) { return v_[idx(i, j)]; }
    double operator()(int i, int j) const { return v_[idx(i, j)]; }
    std::span<double> values() { return v_; }
    std::span<const double> values() const { return v_; }

    /// Periodic-wrapped accessor (both axes), for stencil code on periodic grids.
    double at_wrap(int i, int j) const {
        i %= grid_.nx; if (i < 0) i += grid_.nx;
        j %= grid_.ny; if (j < 0) j += grid_.ny;
        return v_[idx(i, j)];
    }

    double min() const;
    double max() const;
    double sum() const;
    double mean() const { return sum() / grid_.size(); }
    bool finite() const;

    Field2D& operator+=(const Field2D& o);
    Field2D& operator-=(const Field2D& o);
    Field2D& operator*=(double s);

  private:
    size_t idx(int i, int j) const { return static_cast<size_t>(i) + static_cast<size_t>(grid_.nx) * j; }
    Grid2D grid_;
    std::vector<double> v_;
};

/// a*x + b*y, grids must match.
Field2D axpby(double a, const Field2D& x, double b, const Field2D& y);

struct ErrorNorms {
    double l2 = 0.0;    // sqrt(dx*dy*sum e^2), area-weighted
    double linf = 0.0;  // max |e|
};

/// Norms of (a - b); throws std::invalid_argument on grid mismatch.
ErrorNorms error_norms(const Field2D& a, const Field2D& b);

/// Observed orders between successive (n, err) rows:
/// p_k = log(err_{k-1}/err_k) / log(n_k/n_{k-1}). Entry 0 has no order (NaN).
/// Throws std::invalid_argument for non-increasing n or non-positive err.
std::vector<double> convergence_order(const std::vector<std::pair<int, double>>& runs);

}  // namespace vort
