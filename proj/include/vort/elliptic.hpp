#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "vort/grid.hpp"

namespace vort {

/// RHS discretization paired with the shared fourth-order LHS:
///   Compact:   (1/144)(1,10,1)x(1,10,1) : f
///   NinePoint: (1/12)(0,1,0; 1,8,1; 0,1,0) : f
enum class PoissonScheme { Compact, NinePoint };

/// Solves (1/dx^2) W2x^{-1} Dxx u + (1/dy^2) W2y^{-1} Dyy u = f on a fully
/// periodic grid by 2D FFT diagonalization. The zero mode of the transformed
/// RHS is dropped, which yields the least-squares solution with zero mean.
class PeriodicPoissonPlan {
  public:
    explicit PeriodicPoissonPlan(const Grid2D& g, PoissonScheme s = PoissonScheme::Compact);
    ~PeriodicPoissonPlan();
    PeriodicPoissonPlan(const PeriodicPoissonPlan&) = delete;
    PeriodicPoissonPlan& operator=(const PeriodicPoissonPlan&) = delete;

    const Grid2D& grid() const;
    Field2D solve(const Field2D& f) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Dirichlet counterpart on the interior of a bounded grid, solved by DST-I
/// diagonalization. The source is sampled on the full (nx+2) x (ny+2)
/// lattice (x-fastest, ring included); nonhomogeneous boundary values of u
/// are read from the ring entries of `u_ring` (same layout, interior ignored)
/// and folded into the right-hand side.
class DirichletPoissonPlan {
  public:
    explicit DirichletPoissonPlan(const Grid2D& g, PoissonScheme s = PoissonScheme::Compact);
    ~DirichletPoissonPlan();
    DirichletPoissonPlan(const DirichletPoissonPlan&) = delete;
    DirichletPoissonPlan& operator=(const DirichletPoissonPlan&) = delete;

    const Grid2D& grid() const;
    Field2D solve(std::span<const double> f_full, std::span<const double> u_ring) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Neumann counterpart (compact scheme only). Boundary normal derivatives are
/// eliminated through the fourth-order one-sided closure
///   u_0 = (48 u_1 - 36 u_2 + 16 u_3 - 3 u_4 - 12 dx g_left)/25
/// (mirrored with +12 dx g_right at the far edge), giving modified 1D
/// operators whose small dense eigendecompositions are precomputed. The
/// singular constant mode is dropped and the solution returned with zero mean.
///
/// gl, gr sample du/dx on the left/right edges at y_j, j = 0..ny+1;
/// gb, gt sample du/dy on the bottom/top edges at x_i, i = 0..nx+1.
class NeumannPoissonPlan {
  public:
    explicit NeumannPoissonPlan(const Grid2D& g);
    ~NeumannPoissonPlan();
    NeumannPoissonPlan(const NeumannPoissonPlan&) = delete;
    NeumannPoissonPlan& operator=(const NeumannPoissonPlan&) = delete;

    const Grid2D& grid() const;
    Field2D solve(std::span<const double> f_full,
                  std::span<const double> gl, std::span<const double> gr,
                  std::span<const double> gb, std::span<const double> gt) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

enum class HeatMethod { BackwardEuler, CrankNicolson };

/// One implicit step of u_t = Lap u on a periodic square-spacing grid:
/// A u^{n+1} = B u^n with the compact spatial operator, solved by FFT
/// diagonalization. The constructor assembles the 3x3 stencils of A and B and
/// verifies the discrete maximum principle conditions by direct sign checks
/// (A an M-matrix, B nonnegative); outside the validity window it throws
/// std::invalid_argument unless enforce_window is false (experiments may
/// deliberately step outside and inspect window_ok()).
class HeatPlan {
  public:
    HeatPlan(const Grid2D& g, HeatMethod m, double dt_over_h2, bool enforce_window = true);
    ~HeatPlan();
    HeatPlan(const HeatPlan&) = delete;
    HeatPlan& operator=(const HeatPlan&) = delete;

    const Grid2D& grid() const;
    bool window_ok() const;
    Field2D step(const Field2D& u) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Sample fn(x, y) on the full bounded lattice (nx+2) x (ny+2), ring included.
std::vector<double> sample_full_lattice(const Grid2D& g,
                                        const std::function<double(double, double)>& fn);

}  // namespace vort
