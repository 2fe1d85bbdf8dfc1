// Cardinal B-splines, their tensor products on dyadic lattices, and the
// two-scale refinement weights.
#pragma once

#include <span>
#include <vector>

#include "mixext/multiindex.hpp"

namespace mixext {

/// Largest supported per-axis smoothing order.
inline constexpr int kMaxSplineOrder = 16;

/// Value of the r-th derivative of the cardinal B-spline of smoothing order m
/// (support [0, m+1], unit integral) at x. At knots, discontinuous derivatives
/// take the right-hand limit. Requires 0 <= r <= m <= kMaxSplineOrder.
double eval_psi(int m, int r, double x);

/// Two-scale weights (a_0, ..., a_{m+1}) with a_mu = 2^{-m} C(m+1, mu).
/// Both the even- and odd-indexed weights sum to one exactly.
std::vector<double> refinement_coeffs(int m);

/// Product refinement weight over the axes of eps for a shift tuple mu,
/// A = prod_{j in s(eps)} a_{mu_j}^{m_j}. The empty mask gives 1.
double refinement_weight(const MultiIndex& mu, const SubsetMask& eps, const MultiIndex& m);

/// D^lambda of the dilated translate g_{kappa,nu}(x) = psi(2^kappa x - nu),
/// i.e. prod_j 2^{kappa_j lambda_j} psi^(lambda_j)(2^{kappa_j} x_j - nu_j).
/// Requires lambda <= m componentwise.
double eval_g(const MultiIndex& kappa, const MultiIndex& nu, const MultiIndex& m,
              const MultiIndex& lambda, std::span<const double> x);

/// Closed support box of g_{kappa,nu}: per-axis [2^{-kappa}nu, 2^{-kappa}(nu+m+1)].
struct SupportBox {
    int dim = 0;
    std::array<double, kMaxDim> lo{};
    std::array<double, kMaxDim> hi{};
};

SupportBox support_g(const MultiIndex& kappa, const MultiIndex& nu, const MultiIndex& m);

}  // namespace mixext
