#pragma once

#include <span>
#include <vector>

#include "vort/grid.hpp"

namespace vort {

/// Tridiagonal line operators of the fourth-order compact scheme.
///   W1  = tridiag(1, 4, 1)/6       weighted identity paired with Dx
///   W2  = tridiag(1, 10, 1)/12     weighted identity paired with Dxx
///   Dx  = tridiag(-1, 0, 1)/2      undivided centered first difference
///   Dxx = tridiag(1, -2, 1)        undivided centered second difference
/// Periodic versions are circulant; bounded versions are the plain
/// truncations used by the Dirichlet fast solver (W1/Dx have no bounded
/// variant here).
enum class OpKind { W1, W2, Dx, Dxx };

enum class Axis { X, Y };

struct LineWorkspace {
    std::vector<double> cp, dp, z, rhs;
};

class LineOp {
  public:
    /// Throws std::invalid_argument for n < 3 or an unsupported
    /// kind/bc combination (bounded W1/Dx).
    LineOp(OpKind kind, Bc bc, int n);

    OpKind kind() const { return kind_; }
    bool periodic() const { return wrap_; }
    int n() const { return n_; }

    /// out = A in. in and out must not alias.
    void apply(std::span<const double> in, std::span<double> out) const;

    /// out = A^{-1} in, W1/W2 only (throws std::domain_error otherwise).
    /// in and out may alias.
    void solve(std::span<const double> in, std::span<double> out, LineWorkspace& ws) const;

  private:
    OpKind kind_;
    int n_;
    bool wrap_;
    double sub_, diag_, sup_;
};

/// Apply/solve along one axis of a field; the axis boundary treatment is
/// taken from the field's grid (Dirichlet and Neumann axes both map to the
/// bounded truncation).
Field2D apply_op(OpKind kind, const Field2D& f, Axis axis);
Field2D solve_op(OpKind kind, const Field2D& f, Axis axis);

/// Fourth-order compact derivatives, periodic axes only:
///   derivative_1 = (1/h)   W1^{-1} Dx  f
///   derivative_2 = (1/h^2) W2^{-1} Dxx f
Field2D derivative_1(const Field2D& f, Axis axis);
Field2D derivative_2(const Field2D& f, Axis axis);

}  // namespace vort
