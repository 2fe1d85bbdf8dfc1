#include "mixext/bspline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mixext {

namespace {

// psi^{1,m} via the uniform-knot evaluation recurrence. Half-open spans make
// the value right-continuous at every knot.
double psi_value(int m, double x) {
    if (x < 0.0 || x >= static_cast<double>(m) + 1.0) return 0.0;
    if (m == 0) return 1.0;
    return (x * psi_value(m - 1, x) +
            (static_cast<double>(m) + 1.0 - x) * psi_value(m - 1, x - 1.0)) /
           static_cast<double>(m);
}

void check_order(int m) {
    if (m < 0 || m > kMaxSplineOrder) {
        throw std::invalid_argument("bspline: order m must be in [0, " +
                                    std::to_string(kMaxSplineOrder) + "]");
    }
}

}  // namespace

double eval_psi(int m, int r, double x) {
    check_order(m);
    if (r < 0 || r > m) {
        throw std::invalid_argument("eval_psi: derivative order r must satisfy 0 <= r <= m");
    }
    if (r == 0) return psi_value(m, x);
    // r-fold application of psi_m' = psi_{m-1}(.) - psi_{m-1}(. - 1).
    double s = 0.0;
    double sign = 1.0;
    for (int i = 0; i <= r; ++i) {
        s += sign * static_cast<double>(binomial(r, i)) * psi_value(m - r, x - static_cast<double>(i));
        sign = -sign;
    }
    return s;
}

std::vector<double> refinement_coeffs(int m) {
    check_order(m);
    std::vector<double> a(static_cast<std::size_t>(m) + 2);
    for (int mu = 0; mu <= m + 1; ++mu) {
        a[static_cast<std::size_t>(mu)] = std::ldexp(static_cast<double>(binomial(m + 1, mu)), -m);
    }
    return a;
}

double refinement_weight(const MultiIndex& mu, const SubsetMask& eps, const MultiIndex& m) {
    if (mu.dim() != m.dim() || eps.dim() != m.dim()) {
        throw std::invalid_argument("refinement_weight: dimension mismatch");
    }
    // Accumulate the integer binomial product and apply the power of two once,
    // keeping the weight an exactly represented dyadic rational.
    std::int64_t num = 1;
    int shift = 0;
    for (int j = 0; j < m.dim(); ++j) {
        if (!eps.contains(j)) continue;
        if (mu[j] < 0 || mu[j] > m[j] + 1) {
            throw std::domain_error("refinement_weight: shift out of range");
        }
        num *= binomial(m[j] + 1, mu[j]);
        shift += static_cast<int>(m[j]);
    }
    return std::ldexp(static_cast<double>(num), -shift);
}

double eval_g(const MultiIndex& kappa, const MultiIndex& nu, const MultiIndex& m,
              const MultiIndex& lambda, std::span<const double> x) {
    const int d = m.dim();
    if (kappa.dim() != d || nu.dim() != d || lambda.dim() != d ||
        static_cast<int>(x.size()) != d) {
        throw std::invalid_argument("eval_g: dimension mismatch");
    }
    if (!lambda.all_nonneg() || !componentwise_le(lambda, m)) {
        throw std::invalid_argument("eval_g: need 0 <= lambda <= m componentwise");
    }
    double v = 1.0;
    for (int j = 0; j < d; ++j) {
        const double t = std::ldexp(x[static_cast<std::size_t>(j)], static_cast<int>(kappa[j])) -
                         static_cast<double>(nu[j]);
        const double f = eval_psi(static_cast<int>(m[j]), static_cast<int>(lambda[j]), t);
        if (f == 0.0) return 0.0;
        v *= std::ldexp(f, static_cast<int>(kappa[j] * lambda[j]));
    }
    return v;
}

SupportBox support_g(const MultiIndex& kappa, const MultiIndex& nu, const MultiIndex& m) {
    const int d = m.dim();
    if (kappa.dim() != d || nu.dim() != d) {
        throw std::invalid_argument("support_g: dimension mismatch");
    }
    SupportBox box;
    box.dim = d;
    for (int j = 0; j < d; ++j) {
        box.lo[static_cast<std::size_t>(j)] =
            std::ldexp(static_cast<double>(nu[j]), -static_cast<int>(kappa[j]));
        box.hi[static_cast<std::size_t>(j)] =
            std::ldexp(static_cast<double>(nu[j] + m[j] + 1), -static_cast<int>(kappa[j]));
    }
    return box;
}

}  // namespace mixext
