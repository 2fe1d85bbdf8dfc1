// Tensor-product polynomials on axis-aligned cells and the local L2
// projection onto them, in an orthonormal shifted-Legendre basis (diagonal
// Gram matrix, so projecting is a single quadrature pass).
#pragma once

#include <functional>
#include <span>

#include "mixext/geometry.hpp"
#include "mixext/multiindex.hpp"

namespace mixext {

/// A real-valued field sampled pointwise.
using ScalarField = std::function<double(std::span<const double>)>;

/// The cell x0 + delta * I^d.
struct Cell {
    int dim = 0;
    std::array<double, kMaxDim> x0{};
    std::array<double, kMaxDim> delta{};

    static Cell from_box(const Box& b);
    Box as_box() const;
    double measure() const;
};

/// Dyadic cube cell 2^{-kappa} nu + 2^{-kappa} I^d.
Cell cube_cell(const MultiIndex& kappa, const MultiIndex& nu);

/// Element of the coordinate-degree-l tensor polynomial space, stored as a
/// coefficient tensor over its cell's orthonormal Legendre basis (row-major
/// over Z_+^d(l)). Evaluation extends polynomially to all of R^d.
class TensorPolynomial {
public:
    TensorPolynomial() = default;
    TensorPolynomial(MultiIndex degree, Cell cell, std::vector<double> coeffs);

    const MultiIndex& degree() const { return degree_; }
    const Cell& cell() const { return cell_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    int dim() const { return degree_.dim(); }

    /// Value of D^lambda at x. Orders beyond the degree give zero.
    double eval(const MultiIndex& lambda, std::span<const double> x) const;
    double operator()(std::span<const double> x) const;

private:
    MultiIndex degree_;
    Cell cell_;
    std::vector<double> coeffs_;
};

/// L2(cell)-orthogonal projection of f onto the degree-l tensor polynomial
/// space, by tensor Gauss-Legendre quadrature with quad_order nodes per axis.
/// Exact (up to roundoff) whenever f restricted to the cell is a polynomial
/// of per-axis degree <= 2*quad_order - 1 - l_j. Requires
/// quad_order >= max_j l_j + 1; rejects non-finite samples.
TensorPolynomial project(const ScalarField& f, const Cell& cell, const MultiIndex& l,
                         int quad_order);

/// Default quadrature order for smooth inputs.
int default_quad_order(const MultiIndex& l);

/// L_p norm of f over the cell via tensor Gauss-Legendre applied to |f|^p
/// (p < infinity) or a node max (p = infinity).
double lp_norm_on_cell(const ScalarField& f, const Cell& cell, double p, int quad_order);

/// Ratios documenting projection stability and local approximation quality:
///   stability_ratio = |Pf|_Lp(Q) / |f|_Lp(Q),
///   jackson_lhs     = |f - Pf|_Lp(Q),
///   jackson_rhs     = sum_j delta_j^{-1/p} ( int_{|xi|<=delta_j}
///                     int_{Q shrunk by (l_j+1)xi e_j} |D_{xi e_j}^{l_j+1} f|^p )^{1/p}.
struct ProjectionDiagnostics {
    double stability_ratio = 0.0;
    double jackson_lhs = 0.0;
    double jackson_rhs = 0.0;
};

struct DiagnosticsOptions {
    int quad_order = 16;  // per-axis nodes for the norm quadratures
    int xi_nodes = 16;    // midpoint nodes for the step integral
};

ProjectionDiagnostics projection_diagnostics(const ScalarField& f, const Cell& cell,
                                             const MultiIndex& l, double p,
                                             const DiagnosticsOptions& opts = {});

}  // namespace mixext
