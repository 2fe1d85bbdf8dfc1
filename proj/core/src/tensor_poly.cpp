#include "mixext/tensor_poly.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mixext/domain.hpp"
#include "mixext/quadrature.hpp"

namespace mixext {

namespace {

// Legendre values and derivatives at t: fills table[k][r] = P_k^{(r)}(t)
// for k <= nmax, r <= rmax, via the differentiated three-term recurrence.
void legendre_table(int nmax, int rmax, double t, std::vector<double>& table) {
    const int cols = rmax + 1;
    table.assign(static_cast<std::size_t>((nmax + 1) * cols), 0.0);
    auto at = [&](int k, int r) -> double& {
        return table[static_cast<std::size_t>(k * cols + r)];
    };
    at(0, 0) = 1.0;
    if (nmax >= 1) {
        at(1, 0) = t;
        if (rmax >= 1) at(1, 1) = 1.0;
    }
    for (int k = 1; k < nmax; ++k) {
        for (int r = 0; r <= rmax; ++r) {
            const double lower = (r >= 1) ? at(k, r - 1) : 0.0;
            at(k + 1, r) = ((2.0 * k + 1.0) * (t * at(k, r) + r * lower) - k * at(k - 1, r)) /
                           (k + 1.0);
        }
    }
}

std::size_t tensor_size(const MultiIndex& l) {
    std::size_t n = 1;
    for (int j = 0; j < l.dim(); ++j) n *= static_cast<std::size_t>(l[j] + 1);
    return n;
}

void check_cell(const Cell& c) {
    if (c.dim < 1 || c.dim > kMaxDim) throw std::invalid_argument("Cell: bad dimension");
    for (int j = 0; j < c.dim; ++j) {
        if (!(c.delta[static_cast<std::size_t>(j)] > 0.0)) {
            throw std::invalid_argument("Cell: edge lengths must be positive");
        }
    }
}

}  // namespace

Cell Cell::from_box(const Box& b) {
    Cell c;
    c.dim = b.dim;
    for (int j = 0; j < b.dim; ++j) {
        const auto k = static_cast<std::size_t>(j);
        c.x0[k] = b.lo[k];
        c.delta[k] = b.hi[k] - b.lo[k];
    }
    check_cell(c);
    return c;
}

Box Cell::as_box() const {
    Box b;
    b.dim = dim;
    for (int j = 0; j < dim; ++j) {
        const auto k = static_cast<std::size_t>(j);
        b.lo[k] = x0[k];
        b.hi[k] = x0[k] + delta[k];
    }
    return b;
}

double Cell::measure() const {
    double v = 1.0;
    for (int j = 0; j < dim; ++j) v *= delta[static_cast<std::size_t>(j)];
    return v;
}

Cell cube_cell(const MultiIndex& kappa, const MultiIndex& nu) {
    return Cell::from_box(dyadic_cube(kappa, nu));
}

TensorPolynomial::TensorPolynomial(MultiIndex degree, Cell cell, std::vector<double> coeffs)
    : degree_(degree), cell_(cell), coeffs_(std::move(coeffs)) {
    check_cell(cell_);
    if (cell_.dim != degree_.dim() || !degree_.all_nonneg()) {
        throw std::invalid_argument("TensorPolynomial: bad degree");
    }
    if (coeffs_.size() != tensor_size(degree_)) {
        throw std::invalid_argument("TensorPolynomial: coefficient tensor size mismatch");
    }
}

double TensorPolynomial::eval(const MultiIndex& lambda, std::span<const double> x) const {
    const int d = dim();
    if (lambda.dim() != d || static_cast<int>(x.size()) != d) {
        throw std::invalid_argument("TensorPolynomial::eval: dimension mismatch");
    }
    if (!lambda.all_nonneg()) throw std::invalid_argument("TensorPolynomial::eval: negative order");
    if (!componentwise_le(lambda, degree_)) return 0.0;

    // Per-axis derivative values of the orthonormal basis at x.
    std::array<std::vector<double>, kMaxDim> basis;
    std::vector<double> table;
    for (int j = 0; j < d; ++j) {
        const auto k = static_cast<std::size_t>(j);
        const int lj = static_cast<int>(degree_[j]);
        const int rj = static_cast<int>(lambda[j]);
        const double inv = 1.0 / cell_.delta[k];
        const double t = 2.0 * (x[k] - cell_.x0[k]) * inv - 1.0;
        legendre_table(lj, rj, t, table);
        basis[k].resize(static_cast<std::size_t>(lj + 1));
        const double chain = std::pow(2.0 * inv, rj);
        for (int n = 0; n <= lj; ++n) {
            basis[k][static_cast<std::size_t>(n)] =
                std::sqrt((2.0 * n + 1.0) * inv) * chain *
                table[static_cast<std::size_t>(n * (rj + 1) + rj)];
        }
    }

    double sum = 0.0;
    std::size_t idx = 0;
    MultiIndex k = MultiIndex::zeros(d);
    while (true) {
        double prod = coeffs_[idx];
        if (prod != 0.0) {
            for (int j = 0; j < d; ++j) {
                prod *= basis[static_cast<std::size_t>(j)][static_cast<std::size_t>(k[j])];
            }
            sum += prod;
        }
        ++idx;
        int j = d - 1;
        while (j >= 0) {
            if (k[j] < degree_[j]) {
                ++k[j];
                break;
            }
            k[j] = 0;
            --j;
        }
        if (j < 0) break;
    }
    return sum;
}

double TensorPolynomial::operator()(std::span<const double> x) const {
    return eval(MultiIndex::zeros(dim()), x);
}

int default_quad_order(const MultiIndex& l) { return static_cast<int>(l.max()) + 3; }

TensorPolynomial project(const ScalarField& f, const Cell& cell, const MultiIndex& l,
                         int quad_order) {
    check_cell(cell);
    const int d = cell.dim;
    if (l.dim() != d || !l.all_nonneg()) throw std::invalid_argument("project: bad degree");
    if (quad_order < static_cast<int>(l.max()) + 1) {
        throw std::invalid_argument("project: quad_order must be at least max_j l_j + 1");
    }

    const QuadratureRule& rule = gauss_legendre(quad_order);
    const int q = quad_order;

    // Per-axis orthonormal basis values at the mapped nodes.
    std::array<std::vector<double>, kMaxDim> basis;  // [axis][node * (l+1) + n]
    std::array<std::vector<double>, kMaxDim> nodes;
    std::vector<double> table;
    for (int j = 0; j < d; ++j) {
        const auto k = static_cast<std::size_t>(j);
        const int lj = static_cast<int>(l[j]);
        basis[k].resize(static_cast<std::size_t>(q * (lj + 1)));
        nodes[k].resize(static_cast<std::size_t>(q));
        const double inv = 1.0 / cell.delta[k];
        for (int i = 0; i < q; ++i) {
            const double u = rule.nodes[static_cast<std::size_t>(i)];
            nodes[k][static_cast<std::size_t>(i)] = cell.x0[k] + cell.delta[k] * u;
            legendre_table(lj, 0, 2.0 * u - 1.0, table);
            for (int n = 0; n <= lj; ++n) {
                basis[k][static_cast<std::size_t>(i * (lj + 1) + n)] =
                    std::sqrt((2.0 * n + 1.0) * inv) * table[static_cast<std::size_t>(n)];
            }
        }
    }

    std::vector<double> coeffs(tensor_size(l), 0.0);
    const double jac = cell.measure();
    std::array<double, kMaxDim> x{};
    MultiIndex node = MultiIndex::zeros(d);
    while (true) {
        double w = jac;
        for (int j = 0; j < d; ++j) {
            const auto k = static_cast<std::size_t>(j);
            x[k] = nodes[k][static_cast<std::size_t>(node[j])];
            w *= rule.weights[static_cast<std::size_t>(node[j])];
        }
        const double fx = f(std::span<const double>(x.data(), static_cast<std::size_t>(d)));
        if (!std::isfinite(fx)) {
            throw std::domain_error("project: non-finite sample of f inside the cell");
        }
        const double wf = w * fx;

        std::size_t idx = 0;
        MultiIndex lam = MultiIndex::zeros(d);
        while (true) {
            double prod = wf;
            for (int j = 0; j < d; ++j) {
                const auto k = static_cast<std::size_t>(j);
                prod *= basis[k][static_cast<std::size_t>(node[j] * (l[j] + 1) + lam[j])];
            }
            coeffs[idx] += prod;
            ++idx;
            int j = d - 1;
            while (j >= 0) {
                if (lam[j] < l[j]) {
                    ++lam[j];
                    break;
                }
                lam[j] = 0;
                --j;
            }
            if (j < 0) break;
        }

        int j = d - 1;
        while (j >= 0) {
            if (node[j] < q - 1) {
                ++node[j];
                break;
            }
            node[j] = 0;
            --j;
        }
        if (j < 0) break;
    }
    return TensorPolynomial(l, cell, std::move(coeffs));
}

double lp_norm_on_cell(const ScalarField& f, const Cell& cell, double p, int quad_order) {
    check_cell(cell);
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm_on_cell: need p >= 1");
    const QuadratureRule& rule = gauss_legendre(quad_order);
    const int d = cell.dim;
    const int q = quad_order;
    const double jac = cell.measure();
    std::array<double, kMaxDim> x{};
    MultiIndex node = MultiIndex::zeros(d);
    double acc = 0.0;
    const bool sup = std::isinf(p);
    while (true) {
        double w = jac;
        for (int j = 0; j < d; ++j) {
            const auto k = static_cast<std::size_t>(j);
            x[k] = cell.x0[k] + cell.delta[k] * rule.nodes[static_cast<std::size_t>(node[j])];
            w *= rule.weights[static_cast<std::size_t>(node[j])];
        }
        const double fx = f(std::span<const double>(x.data(), static_cast<std::size_t>(d)));
        if (sup) {
            acc = std::max(acc, std::abs(fx));
        } else {
            acc += w * std::pow(std::abs(fx), p);
        }
        int j = d - 1;
        while (j >= 0) {
            if (node[j] < q - 1) {
                ++node[j];
                break;
            }
            node[j] = 0;
            --j;
        }
        if (j < 0) break;
    }
    return sup ? acc : std::pow(acc, 1.0 / p);
}

ProjectionDiagnostics projection_diagnostics(const ScalarField& f, const Cell& cell,
                                             const MultiIndex& l, double p,
                                             const DiagnosticsOptions& opts) {
    check_cell(cell);
    if (!(p >= 1.0) || std::isinf(p)) {
        throw std::invalid_argument("projection_diagnostics: need finite p >= 1");
    }
    const int d = cell.dim;
    const TensorPolynomial pf = project(f, cell, l, std::max(opts.quad_order, default_quad_order(l)));

    const double norm_f = lp_norm_on_cell(f, cell, p, opts.quad_order);
    if (norm_f == 0.0) {
        throw std::domain_error("projection_diagnostics: f vanishes on the cell");
    }
    const double norm_pf = lp_norm_on_cell([&pf](std::span<const double> x) { return pf(x); },
                                           cell, p, opts.quad_order);
    const double lhs = lp_norm_on_cell(
        [&](std::span<const double> x) { return f(x) - pf(x); }, cell, p, opts.quad_order);

    // Averaged one-axis differences of order l_j + 1 over the step range
    // [-delta_j, delta_j], each on the matching shrunken sub-cell.
    double rhs = 0.0;
    for (int j = 0; j < d; ++j) {
        const auto kj = static_cast<std::size_t>(j);
        const int ord = static_cast<int>(l[j]) + 1;
        const int nxi = opts.xi_nodes;
        const double width = 2.0 * cell.delta[kj] / nxi;
        double integral = 0.0;
        for (int i = 0; i < nxi; ++i) {
            const double xi = -cell.delta[kj] + (i + 0.5) * width;
            Cell shrunk = cell;
            const double shift = ord * xi;
            if (shift >= 0.0) {
                shrunk.delta[kj] = cell.delta[kj] - shift;
            } else {
                shrunk.x0[kj] = cell.x0[kj] - shift;
                shrunk.delta[kj] = cell.delta[kj] + shift;
            }
            if (!(shrunk.delta[kj] > 0.0)) continue;
            const ScalarField diff = [&](std::span<const double> x) {
                double s = 0.0;
                double sign = (ord % 2 == 0) ? 1.0 : -1.0;
                std::array<double, kMaxDim> y{};
                for (int a = 0; a < d; ++a) y[static_cast<std::size_t>(a)] = x[static_cast<std::size_t>(a)];
                for (int i2 = 0; i2 <= ord; ++i2) {
                    y[kj] = x[kj] + i2 * xi;
                    s += sign * static_cast<double>(binomial(ord, i2)) *
                         f(std::span<const double>(y.data(), static_cast<std::size_t>(d)));
                    sign = -sign;
                }
                return s;
            };
            const double inner = lp_norm_on_cell(diff, shrunk, p, opts.quad_order);
            integral += width * std::pow(inner, p);
        }
        rhs += std::pow(cell.delta[kj], -1.0 / p) * std::pow(integral, 1.0 / p);
    }

    ProjectionDiagnostics out;
    out.stability_ratio = norm_pf / norm_f;
    out.jackson_lhs = lhs;
    out.jackson_rhs = rhs;
    return out;
}

}  // namespace mixext
