#include "mixext/spline_expansion.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mixext/bspline.hpp"

namespace mixext {

PolyCoefficient::PolyCoefficient(std::shared_ptr<const TensorPolynomial> poly, double weight) {
    add_term(weight, std::move(poly));
}

void PolyCoefficient::add_term(double weight, std::shared_ptr<const TensorPolynomial> poly) {
    if (!poly) throw std::invalid_argument("PolyCoefficient: null polynomial");
    terms_.push_back(Term{weight, std::move(poly)});
}

void PolyCoefficient::add_scaled(double scale, const PolyCoefficient& other) {
    for (const Term& t : other.terms_) {
        terms_.push_back(Term{scale * t.weight, t.poly});
    }
}

double PolyCoefficient::eval(const MultiIndex& mu, std::span<const double> x) const {
    double s = 0.0;
    for (const Term& t : terms_) s += t.weight * t.poly->eval(mu, x);
    return s;
}

SplineExpansion::SplineExpansion(MultiIndex level, MultiIndex order, MultiIndex degree,
                                 std::shared_ptr<const DomainDescriptor> domain,
                                 std::map<MultiIndex, PolyCoefficient> coeffs)
    : level_(level), order_(order), degree_(degree), domain_(std::move(domain)),
      coeffs_(std::move(coeffs)) {
    if (!domain_) throw std::invalid_argument("SplineExpansion: null domain");
    const int d = domain_->dim();
    if (level_.dim() != d || order_.dim() != d || degree_.dim() != d) {
        throw std::invalid_argument("SplineExpansion: dimension mismatch");
    }
    if (!level_.all_nonneg() || !componentwise_le(MultiIndex::ones(d), order_) ||
        !degree_.all_nonneg()) {
        throw std::invalid_argument("SplineExpansion: need level >= 0, order >= 1, degree >= 0");
    }
    const auto active = active_indices(*domain_, level_, order_);
    if (active.size() != coeffs_.size()) {
        throw std::invalid_argument("SplineExpansion: coefficient keys do not match the active set");
    }
    auto it = coeffs_.begin();
    for (const MultiIndex& nu : active) {
        if (it->first != nu) {
            throw std::invalid_argument("SplineExpansion: coefficient keys do not match the active set");
        }
        ++it;
    }
}

double SplineExpansion::evaluate(const MultiIndex& lambda, std::span<const double> x) const {
    const int d = domain_->dim();
    if (lambda.dim() != d || static_cast<int>(x.size()) != d) {
        throw std::invalid_argument("SplineExpansion::evaluate: dimension mismatch");
    }
    if (!lambda.all_nonneg() || !componentwise_le(lambda, order_)) {
        throw std::invalid_argument("SplineExpansion::evaluate: need 0 <= lambda <= order");
    }

    // Candidate indices whose support contains x.
    IndexBox cands{MultiIndex::zeros(d), MultiIndex::zeros(d)};
    for (int j = 0; j < d; ++j) {
        const double t = std::ldexp(x[static_cast<std::size_t>(j)], static_cast<int>(level_[j]));
        cands.lo[j] = static_cast<std::int64_t>(std::ceil(t)) - order_[j] - 1;
        cands.hi[j] = static_cast<std::int64_t>(std::floor(t));
    }

    double sum = 0.0;
    cands.for_each([&](const MultiIndex& nu) {
        const auto it = coeffs_.find(nu);
        if (it == coeffs_.end()) return;
        // Product rule: spread the derivative across coefficient and basis.
        IndexBox mus{MultiIndex::zeros(d), lambda};
        mus.for_each([&](const MultiIndex& mu) {
            const double g = eval_g(level_, nu, order_, lambda - mu, x);
            if (g == 0.0) return;
            const double c = it->second.eval(mu, x);
            if (c == 0.0) return;
            sum += static_cast<double>(tensor_binomial(lambda, mu)) * c * g;
        });
    });
    return sum;
}

double SplineExpansion::operator()(std::span<const double> x) const {
    return evaluate(MultiIndex::zeros(domain_->dim()), x);
}

SplineExpansion SplineExpansion::refined_by(const SubsetMask& eps) const {
    const int d = domain_->dim();
    if (eps.dim() != d) throw std::invalid_argument("refined_by: mask dimension mismatch");
    if (eps.is_empty()) return *this;

    const MultiIndex target_level = level_ + eps.chi();
    std::map<MultiIndex, PolyCoefficient> out;
    std::size_t missing = 0;
    for (const MultiIndex& nu : active_indices(*domain_, target_level, order_)) {
        PolyCoefficient combo;
        for (const EvenShiftTerm& term : even_shift_decompositions(nu, eps, order_)) {
            const auto it = coeffs_.find(term.n);
            if (it == coeffs_.end()) {
                ++missing;  // source index outside the coarse active set
                continue;
            }
            combo.add_scaled(refinement_weight(term.mu, eps, order_), it->second);
        }
        out.emplace(nu, std::move(combo));
    }
    if (missing > 0) {
        std::cerr << "mixext: refinement at level " << target_level.str() << " skipped "
                  << missing << " source indices missing from the coarse active set\n";
    }
    return SplineExpansion(target_level, order_, degree_, domain_, std::move(out));
}

Box SplineExpansion::support_bounding_box() const {
    if (coeffs_.empty()) throw std::logic_error("support_bounding_box: empty expansion");
    std::vector<Box> boxes;
    boxes.reserve(coeffs_.size());
    for (const auto& [nu, c] : coeffs_) {
        const SupportBox s = support_g(level_, nu, order_);
        Box b;
        b.dim = s.dim;
        b.lo = s.lo;
        b.hi = s.hi;
        boxes.push_back(b);
    }
    return bounding_box(boxes);
}

void SplineExpansion::write(std::ostream& out) const {
    const int d = domain_->dim();
    out << d << '\n';
    for (int j = 0; j < d; ++j) out << (j ? " " : "") << level_[j];
    out << '\n';
    for (int j = 0; j < d; ++j) out << (j ? " " : "") << order_[j];
    out << '\n';
    for (int j = 0; j < d; ++j) out << (j ? " " : "") << degree_[j];
    out << '\n';
    out << coeffs_.size() << '\n';
    char buf[32];
    for (const auto& [nu, c] : coeffs_) {
        // Re-base the combination onto the index's own dyadic cube; the
        // integrand is a polynomial of matching degree, so the quadrature
        // below reproduces it exactly.
        const MultiIndex no_deriv = MultiIndex::zeros(d);
        const TensorPolynomial flat =
            project([&c, &no_deriv](std::span<const double> x) { return c.eval(no_deriv, x); },
                    cube_cell(level_, nu), degree_, static_cast<int>(degree_.max()) + 1);
        for (int j = 0; j < d; ++j) out << (j ? " " : "") << nu[j];
        for (const double v : flat.coeffs()) {
            std::snprintf(buf, sizeof buf, " %.17g", v);
            out << buf;
        }
        out << '\n';
    }
}

SplineExpansion SplineExpansion::read(std::istream& in,
                                      std::shared_ptr<const DomainDescriptor> domain) {
    if (!domain) throw std::invalid_argument("SplineExpansion::read: null domain");
    int d = 0;
    if (!(in >> d) || d != domain->dim()) {
        throw std::invalid_argument("SplineExpansion::read: bad or mismatched dimension");
    }
    auto read_vec = [&](const char* what) {
        MultiIndex v(d, 0);
        for (int j = 0; j < d; ++j) {
            if (!(in >> v[j])) throw std::invalid_argument(std::string("SplineExpansion::read: bad ") + what);
        }
        return v;
    };
    const MultiIndex level = read_vec("level");
    const MultiIndex order = read_vec("order");
    const MultiIndex degree = read_vec("degree");
    std::size_t count = 0;
    if (!(in >> count)) throw std::invalid_argument("SplineExpansion::read: bad coefficient count");

    std::size_t tensor = 1;
    for (int j = 0; j < d; ++j) tensor *= static_cast<std::size_t>(degree[j] + 1);

    std::map<MultiIndex, PolyCoefficient> coeffs;
    for (std::size_t i = 0; i < count; ++i) {
        const MultiIndex nu = read_vec("index");
        std::vector<double> c(tensor);
        for (double& v : c) {
            if (!(in >> v)) throw std::invalid_argument("SplineExpansion::read: bad coefficient");
        }
        coeffs.emplace(nu, PolyCoefficient(std::make_shared<TensorPolynomial>(
                               degree, cube_cell(level, nu), std::move(c))));
    }
    return SplineExpansion(level, order, degree, std::move(domain), std::move(coeffs));
}

MultiLevelExpansion::MultiLevelExpansion(std::vector<SplineExpansion> blocks)
    : blocks_(std::move(blocks)) {}

double MultiLevelExpansion::evaluate(const MultiIndex& lambda, std::span<const double> x) const {
    double s = 0.0;
    for (const SplineExpansion& b : blocks_) s += b.evaluate(lambda, x);
    return s;
}

double MultiLevelExpansion::operator()(std::span<const double> x) const {
    double s = 0.0;
    for (const SplineExpansion& b : blocks_) s += b(x);
    return s;
}

Box MultiLevelExpansion::support_bounding_box() const {
    if (blocks_.empty()) throw std::logic_error("support_bounding_box: no blocks");
    std::vector<Box> boxes;
    boxes.reserve(blocks_.size());
    for (const SplineExpansion& b : blocks_) boxes.push_back(b.support_bounding_box());
    return bounding_box(boxes);
}

}  // namespace mixext
