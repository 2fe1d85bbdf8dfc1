// Mixed differences, sup and averaged mixed moduli of continuity, L_p norms
// on domains and boxes, and the mixed-smoothness norms built from them.
#pragma once

#include <functional>
#include <optional>

#include "mixext/domain.hpp"
#include "mixext/tensor_poly.hpp"
#include "mixext/test_functions.hpp"

namespace mixext {

/// Mixed difference of order l with step h at x, as the alternating sum over
/// the shift lattice. Callers restrict x to the matching shrunken set.
double mixed_difference(const ScalarField& f, const MultiIndex& l, std::span<const double> h,
                        std::span<const double> x);

/// Query for a modulus of continuity: difference orders, active axes, step
/// bounds on those axes, integral exponent, and quadrature resolutions.
struct ModulusQuery {
    MultiIndex l;               // per-axis difference orders
    SubsetMask J;               // active axes
    std::array<double, kMaxDim> t{};  // step bound per active axis
    double p = 2.0;
    int xi_nodes = 8;           // step-quadrature nodes per active axis
    int x_res_log2 = 7;         // spatial grid resolution 2^{-q}
};

/// Sup-modulus: maximum over a tensor grid of steps xi in prod [-t_j, t_j]
/// of the L_p norm of the mixed difference over the shrunken domain.
double omega_sup(const ScalarField& f, const DomainDescriptor& D, const ModulusQuery& q);

/// Averaged modulus: the L_p average over the step box of the same norms,
/// by a tensor midpoint rule in the step and Riemann sums in space. For
/// p = infinity this is the sup-modulus.
double omega_avg(const ScalarField& f, const DomainDescriptor& D, const ModulusQuery& q);

/// Riemann-sum L_p norm over the domain (grid max for p = infinity).
double lp_norm(const ScalarField& f, const DomainDescriptor& D, double p, int x_res_log2 = 7);

/// Same over an explicit box.
double lp_norm_box(const ScalarField& f, const Box& box, double p, int x_res_log2 = 7);

/// Dyadic step grid for the norm integrals: t = 2^{-k}, k = k_min .. k_max,
/// with the tail beyond the largest step folded in analytically.
struct BesovGrid {
    int k_min = -2;
    int k_max = 6;
};

struct NormResolution {
    int xi_nodes = 8;
    int x_res_log2 = 7;
};

/// Modulus samples on the dyadic step grid, reusable across several theta
/// values. Building the table is the expensive part; combining is cheap.
/// The step integral over (0, infinity) is truncated at 2^{-k_max}; beyond
/// the largest step 2^{-k_min} the spatial integral has saturated, and the
/// tail is folded in analytically (averaged moduli decay like t^{-1/p} per
/// saturated axis, sup moduli stay constant).
class MixedNormTable {
public:
    double combine(double theta) const;

    double base_norm() const { return base_norm_; }
    /// Modulus at the grid tuple (per-axis slots into the step grid) for the
    /// axis subset J.
    double modulus(const SubsetMask& J, std::span<const int> slots) const;

private:
    friend MixedNormTable build_prime_norm_table(const ScalarField&, const DomainDescriptor&,
                                                 std::span<const double>, double,
                                                 const BesovGrid&, const NormResolution&);
    friend MixedNormTable build_ell_norm_table(const TestFunction&, const DomainDescriptor&,
                                               std::span<const double>, double,
                                               const MultiIndex&, const BesovGrid&,
                                               const NormResolution&);

    int dim_ = 0;
    BesovGrid grid_;
    double p_ = 2.0;
    bool averaged_ = true;  // selects the tail decay profile
    double base_norm_ = 0.0;
    std::array<double, kMaxDim> beta_{};      // per-axis weight exponents
    std::vector<std::vector<double>> table_;  // per mask bits, flat over tuples
};

/// Table of averaged moduli of order l(alpha) of f itself.
MixedNormTable build_prime_norm_table(const ScalarField& f, const DomainDescriptor& D,
                                      std::span<const double> alpha, double p,
                                      const BesovGrid& grid = {}, const NormResolution& res = {});

/// Table of sup moduli of order (l - ell) chi_J of the derivatives
/// D^{ell chi_J} f, with weight exponents alpha - ell. Requires ell < alpha.
MixedNormTable build_ell_norm_table(const TestFunction& f, const DomainDescriptor& D,
                                    std::span<const double> alpha, double p,
                                    const MultiIndex& ell, const BesovGrid& grid = {},
                                    const NormResolution& res = {});

/// Mixed-smoothness norm built from averaged moduli: the maximum of the
/// L_p norm and, over every nonempty axis subset, the weighted theta-integral
/// (theta < infinity) or weighted sup (theta = infinity) of the averaged
/// modulus of order l(alpha) restricted to that subset.
double besov_prime_norm(const ScalarField& f, const DomainDescriptor& D,
                        std::span<const double> alpha, double p, double theta,
                        const BesovGrid& grid = {}, const NormResolution& res = {});

/// Variant measuring derivatives: moduli of order (l - ell) chi_J of the
/// derivative D^{ell chi_J} f, taken from the function's analytic derivative
/// oracle, with sup-moduli and weights alpha - ell. Requires ell < alpha.
double besov_ell_norm(const TestFunction& f, const DomainDescriptor& D,
                      std::span<const double> alpha, double p, double theta,
                      const MultiIndex& ell, const BesovGrid& grid = {},
                      const NormResolution& res = {});

/// The difference order vector l(alpha): l_j is the least integer strictly
/// above alpha_j.
MultiIndex difference_order(std::span<const double> alpha);

/// Wraps a field with a cache keyed on the half-step lattice of the 2^{-q}
/// grid. Off-lattice points bypass the cache, so wrapping is always safe;
/// it pays off for expensive integrands sampled at aligned grid points.
ScalarField memoized_on_lattice(ScalarField f, int res_log2);

}  // namespace mixext
