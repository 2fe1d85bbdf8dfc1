#include "mixext/moduli.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <unordered_map>

namespace mixext {

namespace {

constexpr double kLn2 = 0.6931471805599453;

struct GridSpec {
    int dim = 0;
    std::array<std::int64_t, kMaxDim> n{};
    std::array<double, kMaxDim> lo{};
    double h = 0.0;
    double cell = 0.0;
};

GridSpec make_grid(const Box& bb, int res_log2) {
    if (res_log2 < 0 || res_log2 > 20) throw std::invalid_argument("grid resolution out of range");
    GridSpec g;
    g.dim = bb.dim;
    g.h = std::ldexp(1.0, -res_log2);
    g.cell = 1.0;
    for (int j = 0; j < bb.dim; ++j) {
        const auto k = static_cast<std::size_t>(j);
        g.lo[k] = bb.lo[k];
        g.n[k] = static_cast<std::int64_t>(std::ceil((bb.hi[k] - bb.lo[k]) / g.h - 1e-9));
        if (g.n[k] < 1) g.n[k] = 1;
        g.cell *= g.h;
    }
    return g;
}

template <typename F>
void for_each_midpoint(const GridSpec& g, F&& f) {
    std::array<std::int64_t, kMaxDim> idx{};
    std::array<double, kMaxDim> x{};
    while (true) {
        for (int j = 0; j < g.dim; ++j) {
            const auto k = static_cast<std::size_t>(j);
            x[k] = g.lo[k] + (static_cast<double>(idx[k]) + 0.5) * g.h;
        }
        f(std::span<const double>(x.data(), static_cast<std::size_t>(g.dim)));
        int j = g.dim - 1;
        while (j >= 0) {
            const auto k = static_cast<std::size_t>(j);
            if (idx[k] + 1 < g.n[k]) {
                ++idx[k];
                break;
            }
            idx[k] = 0;
            --j;
        }
        if (j < 0) break;
    }
}

void check_query(const DomainDescriptor& D, const ModulusQuery& q) {
    const int d = D.dim();
    if (q.l.dim() != d || q.J.dim() != d) {
        throw std::invalid_argument("modulus query: dimension mismatch");
    }
    if (!(q.p >= 1.0)) throw std::invalid_argument("modulus query: need p >= 1");
    if (q.xi_nodes < 1) throw std::invalid_argument("modulus query: need xi_nodes >= 1");
    for (int j = 0; j < d; ++j) {
        if (q.J.contains(j) && !(q.t[static_cast<std::size_t>(j)] > 0.0)) {
            throw std::invalid_argument("modulus query: step bounds must be positive on active axes");
        }
    }
}

// L_p norm (p < inf) or grid sup of the mixed difference over the shrunken
// domain, on the midpoint grid.
double difference_norm(const ScalarField& f, const DomainDescriptor& D, const GridSpec& grid,
                       const MultiIndex& l_masked, std::span<const double> xi, double p) {
    const bool sup = std::isinf(p);
    double acc = 0.0;
    bool any = false;
    for_each_midpoint(grid, [&](std::span<const double> x) {
        if (!shrunken_contains(D, x, l_masked, xi)) return;
        const double dv = mixed_difference(f, l_masked, xi, x);
        any = true;
        if (sup) {
            acc = std::max(acc, std::abs(dv));
        } else {
            acc += std::pow(std::abs(dv), p);
        }
    });
    if (!any) return 0.0;
    return sup ? acc : std::pow(acc * grid.cell, 1.0 / p);
}

}  // namespace

double mixed_difference(const ScalarField& f, const MultiIndex& l, std::span<const double> h,
                        std::span<const double> x) {
    const int d = l.dim();
    if (static_cast<int>(h.size()) != d || static_cast<int>(x.size()) != d) {
        throw std::invalid_argument("mixed_difference: dimension mismatch");
    }
    if (!l.all_nonneg()) throw std::invalid_argument("mixed_difference: negative order");
    double sum = 0.0;
    const std::int64_t parity = l.sum();
    IndexBox shifts{MultiIndex::zeros(d), l};
    std::array<double, kMaxDim> y{};
    shifts.for_each([&](const MultiIndex& k) {
        for (int j = 0; j < d; ++j) {
            const auto a = static_cast<std::size_t>(j);
            y[a] = x[a] + static_cast<double>(k[j]) * h[a];
        }
        const double sign = (((parity - k.sum()) % 2) == 0) ? 1.0 : -1.0;
        sum += sign * static_cast<double>(tensor_binomial(l, k)) *
               f(std::span<const double>(y.data(), static_cast<std::size_t>(d)));
    });
    return sum;
}

double omega_sup(const ScalarField& f, const DomainDescriptor& D, const ModulusQuery& q) {
    check_query(D, q);
    const int d = D.dim();
    MultiIndex l_masked = MultiIndex::zeros(d);
    for (int j = 0; j < d; ++j) {
        if (q.J.contains(j)) l_masked[j] = q.l[j];
    }
    if (sigma(l_masked).is_empty()) {
        // Degenerate query: no active difference, the modulus is the norm.
        return lp_norm(f, D, q.p, q.x_res_log2);
    }
    const GridSpec grid = make_grid(D.bounding(), q.x_res_log2);

    // Step grid including the endpoints +-t.
    std::array<std::int64_t, kMaxDim> steps{};
    for (int j = 0; j < d; ++j) {
        steps[static_cast<std::size_t>(j)] = q.J.contains(j) ? 2 * q.xi_nodes : 0;
    }
    std::array<std::int64_t, kMaxDim> idx{};
    std::array<double, kMaxDim> xi{};
    double best = 0.0;
    while (true) {
        for (int j = 0; j < d; ++j) {
            const auto k = static_cast<std::size_t>(j);
            xi[k] = q.J.contains(j)
                        ? (static_cast<double>(idx[k] - q.xi_nodes) / q.xi_nodes) * q.t[k]
                        : 0.0;
        }
        best = std::max(best, difference_norm(f, D, grid, l_masked,
                                              std::span<const double>(xi.data(), static_cast<std::size_t>(d)),
                                              q.p));
        int j = d - 1;
        while (j >= 0) {
            const auto k = static_cast<std::size_t>(j);
            if (idx[k] < steps[k]) {
                ++idx[k];
                break;
            }
            idx[k] = 0;
            --j;
        }
        if (j < 0) break;
    }
    return best;
}

double omega_avg(const ScalarField& f, const DomainDescriptor& D, const ModulusQuery& q) {
    check_query(D, q);
    if (std::isinf(q.p)) return omega_sup(f, D, q);
    const int d = D.dim();
    MultiIndex l_masked = MultiIndex::zeros(d);
    int active = 0;
    for (int j = 0; j < d; ++j) {
        if (q.J.contains(j)) {
            l_masked[j] = q.l[j];
            ++active;
        }
    }
    if (sigma(l_masked).is_empty()) return lp_norm(f, D, q.p, q.x_res_log2);
    const GridSpec grid = make_grid(D.bounding(), q.x_res_log2);

    // Tensor midpoint rule over the step box; the box-volume normalization
    // cancels against the node weights, leaving n^{-|J|}.
    std::array<std::int64_t, kMaxDim> steps{};
    for (int j = 0; j < d; ++j) {
        steps[static_cast<std::size_t>(j)] = q.J.contains(j) ? q.xi_nodes - 1 : 0;
    }
    std::array<std::int64_t, kMaxDim> idx{};
    std::array<double, kMaxDim> xi{};
    double total = 0.0;
    while (true) {
        for (int j = 0; j < d; ++j) {
            const auto k = static_cast<std::size_t>(j);
            xi[k] = q.J.contains(j)
                        ? q.t[k] * ((2.0 * static_cast<double>(idx[k]) + 1.0) / q.xi_nodes - 1.0)
                        : 0.0;
        }
        double cellsum = 0.0;
        for_each_midpoint(grid, [&](std::span<const double> x) {
            if (!shrunken_contains(D, x,
                                   l_masked, std::span<const double>(xi.data(), static_cast<std::size_t>(d)))) {
                return;
            }
            const double dv = mixed_difference(
                f, l_masked, std::span<const double>(xi.data(), static_cast<std::size_t>(d)), x);
            cellsum += std::pow(std::abs(dv), q.p);
        });
        total += cellsum * grid.cell;
        int j = d - 1;
        while (j >= 0) {
            const auto k = static_cast<std::size_t>(j);
            if (idx[k] < steps[k]) {
                ++idx[k];
                break;
            }
            idx[k] = 0;
            --j;
        }
        if (j < 0) break;
    }
    total /= std::pow(static_cast<double>(q.xi_nodes), active);
    return std::pow(total, 1.0 / q.p);
}

double lp_norm(const ScalarField& f, const DomainDescriptor& D, double p, int x_res_log2) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: need p >= 1");
    const GridSpec grid = make_grid(D.bounding(), x_res_log2);
    const bool sup = std::isinf(p);
    double acc = 0.0;
    for_each_midpoint(grid, [&](std::span<const double> x) {
        if (!D.contains(x)) return;
        const double v = f(x);
        if (sup) {
            acc = std::max(acc, std::abs(v));
        } else {
            acc += std::pow(std::abs(v), p);
        }
    });
    return sup ? acc : std::pow(acc * grid.cell, 1.0 / p);
}

double lp_norm_box(const ScalarField& f, const Box& box, double p, int x_res_log2) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm_box: need p >= 1");
    const GridSpec grid = make_grid(box, x_res_log2);
    const bool sup = std::isinf(p);
    double acc = 0.0;
    for_each_midpoint(grid, [&](std::span<const double> x) {
        const double v = f(x);
        if (sup) {
            acc = std::max(acc, std::abs(v));
        } else {
            acc += std::pow(std::abs(v), p);
        }
    });
    return sup ? acc : std::pow(acc * grid.cell, 1.0 / p);
}

MultiIndex difference_order(std::span<const double> alpha) {
    MultiIndex l(static_cast<int>(alpha.size()), 0);
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        if (!(alpha[k] > 0.0)) throw std::invalid_argument("difference_order: need alpha > 0");
        l[static_cast<int>(k)] = static_cast<std::int64_t>(std::floor(alpha[k])) + 1;
    }
    return l;
}

namespace {

std::vector<int> mask_axes(const SubsetMask& J) {
    std::vector<int> axes;
    for (int j = 0; j < J.dim(); ++j) {
        if (J.contains(j)) axes.push_back(j);
    }
    return axes;
}

}  // namespace

double MixedNormTable::modulus(const SubsetMask& J, std::span<const int> slots) const {
    const auto axes = mask_axes(J);
    if (axes.empty() || axes.size() != slots.size()) {
        throw std::invalid_argument("MixedNormTable::modulus: bad query");
    }
    const int nk = grid_.k_max - grid_.k_min + 1;
    std::size_t flat = 0;
    for (const int sl : slots) {
        if (sl < 0 || sl >= nk) throw std::invalid_argument("MixedNormTable::modulus: bad slot");
        flat = flat * static_cast<std::size_t>(nk) + static_cast<std::size_t>(sl);
    }
    return table_[J.bits()][flat];
}

double MixedNormTable::combine(double theta) const {
    if (!(theta >= 1.0)) throw std::invalid_argument("MixedNormTable::combine: need theta >= 1");
    const bool is_sup = std::isinf(theta);
    const int nk = grid_.k_max - grid_.k_min + 1;
    const double t0 = std::ldexp(1.0, -grid_.k_min);

    double result = base_norm_;
    for (unsigned bits = 1; bits < (1u << dim_); ++bits) {
        const SubsetMask J(dim_, bits);
        const auto axes = mask_axes(J);
        const auto& values = table_[bits];

        double integral = 0.0;
        double supmax = 0.0;
        // Slot nk marks the analytic tail; the tail reuses the modulus at
        // the largest grid step, where the spatial integral has saturated.
        std::array<int, kMaxDim> slot{};
        while (true) {
            double weight = 1.0;
            bool has_tail = false;
            std::size_t flat = 0;
            for (std::size_t a = 0; a < axes.size(); ++a) {
                const auto k = static_cast<std::size_t>(axes[a]);
                const int sl = slot[a];
                const int lookup = (sl == nk) ? 0 : sl;
                flat = flat * static_cast<std::size_t>(nk) + static_cast<std::size_t>(lookup);
                const double b = beta_[k];
                if (sl < nk) {
                    const double t = std::ldexp(1.0, -(grid_.k_min + sl));
                    weight *= is_sup ? std::pow(t, -b) : kLn2 * std::pow(t, -theta * b);
                } else {
                    has_tail = true;
                    const double decay = averaged_ ? b + 1.0 / p_ : b;
                    weight *= std::pow(t0, -theta * b) / (theta * decay);
                }
            }
            if (!(is_sup && has_tail)) {
                const double v = values[flat];
                if (is_sup) {
                    supmax = std::max(supmax, weight * v);
                } else {
                    integral += weight * std::pow(v, theta);
                }
            }
            const int limit = is_sup ? nk - 1 : nk;  // sup tails peak on the grid
            int a = static_cast<int>(axes.size()) - 1;
            while (a >= 0) {
                if (slot[static_cast<std::size_t>(a)] < limit) {
                    ++slot[static_cast<std::size_t>(a)];
                    break;
                }
                slot[static_cast<std::size_t>(a)] = 0;
                --a;
            }
            if (a < 0) break;
        }
        result = std::max(result, is_sup ? supmax : std::pow(integral, 1.0 / theta));
    }
    return result;
}

namespace {

void check_norm_args(int d, std::span<const double> alpha, double p, const BesovGrid& grid) {
    if (static_cast<int>(alpha.size()) != d) {
        throw std::invalid_argument("mixed-smoothness norm: alpha dimension mismatch");
    }
    if (!(p >= 1.0) || std::isinf(p)) {
        throw std::invalid_argument("mixed-smoothness norm: need finite p >= 1");
    }
    if (grid.k_max < grid.k_min) {
        throw std::invalid_argument("mixed-smoothness norm: bad step grid");
    }
}

}  // namespace

MixedNormTable build_prime_norm_table(const ScalarField& f, const DomainDescriptor& D,
                                      std::span<const double> alpha, double p,
                                      const BesovGrid& grid, const NormResolution& res) {
    const int d = D.dim();
    check_norm_args(d, alpha, p, grid);
    const MultiIndex l = difference_order(alpha);

    MixedNormTable out;
    out.dim_ = d;
    out.grid_ = grid;
    out.p_ = p;
    out.averaged_ = true;
    for (int j = 0; j < d; ++j) out.beta_[static_cast<std::size_t>(j)] = alpha[static_cast<std::size_t>(j)];
    out.base_norm_ = lp_norm(f, D, p, res.x_res_log2);
    out.table_.resize(std::size_t{1} << d);

    const int nk = grid.k_max - grid.k_min + 1;
    for (unsigned bits = 1; bits < (1u << d); ++bits) {
        const SubsetMask J(d, bits);
        const auto axes = mask_axes(J);
        std::size_t count = 1;
        for (std::size_t a = 0; a < axes.size(); ++a) count *= static_cast<std::size_t>(nk);
        auto& values = out.table_[bits];
        values.resize(count);
        std::array<int, kMaxDim> slot{};
        for (std::size_t flat = 0; flat < count; ++flat) {
            ModulusQuery q;
            q.l = l;
            q.J = J;
            q.p = p;
            q.xi_nodes = res.xi_nodes;
            q.x_res_log2 = res.x_res_log2;
            std::size_t rem = flat;
            for (std::size_t a = axes.size(); a-- > 0;) {
                slot[a] = static_cast<int>(rem % static_cast<std::size_t>(nk));
                rem /= static_cast<std::size_t>(nk);
            }
            for (std::size_t a = 0; a < axes.size(); ++a) {
                q.t[static_cast<std::size_t>(axes[a])] =
                    std::ldexp(1.0, -(grid.k_min + slot[a]));
            }
            values[flat] = omega_avg(f, D, q);
        }
    }
    return out;
}

MixedNormTable build_ell_norm_table(const TestFunction& f, const DomainDescriptor& D,
                                    std::span<const double> alpha, double p,
                                    const MultiIndex& ell, const BesovGrid& grid,
                                    const NormResolution& res) {
    const int d = D.dim();
    check_norm_args(d, alpha, p, grid);
    if (ell.dim() != d || !ell.all_nonneg()) {
        throw std::invalid_argument("build_ell_norm_table: bad ell");
    }
    for (int j = 0; j < d; ++j) {
        if (!(static_cast<double>(ell[j]) < alpha[static_cast<std::size_t>(j)])) {
            throw std::invalid_argument("build_ell_norm_table: need ell < alpha componentwise");
        }
    }
    if (!f.deriv) throw std::invalid_argument("build_ell_norm_table: missing derivative oracle");
    const MultiIndex l = difference_order(alpha);

    MixedNormTable out;
    out.dim_ = d;
    out.grid_ = grid;
    out.p_ = p;
    out.averaged_ = false;
    for (int j = 0; j < d; ++j) {
        out.beta_[static_cast<std::size_t>(j)] =
            alpha[static_cast<std::size_t>(j)] - static_cast<double>(ell[j]);
    }
    out.base_norm_ = lp_norm(f.field(), D, p, res.x_res_log2);
    out.table_.resize(std::size_t{1} << d);

    const int nk = grid.k_max - grid.k_min + 1;
    for (unsigned bits = 1; bits < (1u << d); ++bits) {
        const SubsetMask J(d, bits);
        const auto axes = mask_axes(J);
        MultiIndex ell_masked = MultiIndex::zeros(d);
        for (int j = 0; j < d; ++j) {
            if (J.contains(j)) ell_masked[j] = ell[j];
        }
        const ScalarField df = f.derivative_field(ell_masked);

        std::size_t count = 1;
        for (std::size_t a = 0; a < axes.size(); ++a) count *= static_cast<std::size_t>(nk);
        auto& values = out.table_[bits];
        values.resize(count);
        std::array<int, kMaxDim> slot{};
        for (std::size_t flat = 0; flat < count; ++flat) {
            ModulusQuery q;
            q.l = l - ell;
            q.J = J;
            q.p = p;
            q.xi_nodes = res.xi_nodes;
            q.x_res_log2 = res.x_res_log2;
            std::size_t rem = flat;
            for (std::size_t a = axes.size(); a-- > 0;) {
                slot[a] = static_cast<int>(rem % static_cast<std::size_t>(nk));
                rem /= static_cast<std::size_t>(nk);
            }
            for (std::size_t a = 0; a < axes.size(); ++a) {
                q.t[static_cast<std::size_t>(axes[a])] =
                    std::ldexp(1.0, -(grid.k_min + slot[a]));
            }
            values[flat] = omega_sup(df, D, q);
        }
    }
    return out;
}

double besov_prime_norm(const ScalarField& f, const DomainDescriptor& D,
                        std::span<const double> alpha, double p, double theta,
                        const BesovGrid& grid, const NormResolution& res) {
    if (!(theta >= 1.0)) throw std::invalid_argument("besov_prime_norm: need theta >= 1");
    return build_prime_norm_table(f, D, alpha, p, grid, res).combine(theta);
}

double besov_ell_norm(const TestFunction& f, const DomainDescriptor& D,
                      std::span<const double> alpha, double p, double theta,
                      const MultiIndex& ell, const BesovGrid& grid, const NormResolution& res) {
    if (!(theta >= 1.0)) throw std::invalid_argument("besov_ell_norm: need theta >= 1");
    return build_ell_norm_table(f, D, alpha, p, ell, grid, res).combine(theta);
}

ScalarField memoized_on_lattice(ScalarField f, int res_log2) {
    if (res_log2 < 0 || res_log2 > 25) throw std::invalid_argument("memoized_on_lattice: bad resolution");
    struct Cache {
        ScalarField f;
        int shift;
        std::unordered_map<std::uint64_t, double> memo;
    };
    auto cache = std::make_shared<Cache>();
    cache->f = std::move(f);
    cache->shift = res_log2 + 1;
    return [cache](std::span<const double> x) -> double {
        const double scale = std::ldexp(1.0, cache->shift);
        std::uint64_t key = 0;
        for (const double v : x) {
            const double s = v * scale;
            const auto r = static_cast<std::int64_t>(std::llround(s));
            if (static_cast<double>(r) != s || r < -1048576 || r > 1048576) {
                return cache->f(x);  // off-lattice: bypass
            }
            key = key * 2097153u + static_cast<std::uint64_t>(r + 1048576);
        }
        const auto it = cache->memo.find(key);
        if (it != cache->memo.end()) return it->second;
        const double v = cache->f(x);
        cache->memo.emplace(key, v);
        return v;
    };
}

}  // namespace mixext
