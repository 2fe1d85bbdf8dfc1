// Level-kappa piecewise-polynomial expansions sum_nu f_nu g_{kappa,nu},
// their derivative evaluation, dyadic refinement to finer levels, and a flat
// text serialization. Coefficient polynomials are kept as weighted
// combinations of projections on their original cells; they are only
// re-based when serializing.
#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <vector>

#include "mixext/domain.hpp"
#include "mixext/tensor_poly.hpp"

namespace mixext {

/// Weighted combination of tensor polynomials of a common degree. Evaluation
/// distributes derivatives over the terms; no basis change is performed.
class PolyCoefficient {
public:
    struct Term {
        double weight;
        std::shared_ptr<const TensorPolynomial> poly;
    };

    PolyCoefficient() = default;
    explicit PolyCoefficient(std::shared_ptr<const TensorPolynomial> poly, double weight = 1.0);

    void add_term(double weight, std::shared_ptr<const TensorPolynomial> poly);
    void add_scaled(double scale, const PolyCoefficient& other);

    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    double eval(const MultiIndex& mu, std::span<const double> x) const;

private:
    std::vector<Term> terms_;
};

/// f(x) = sum over the active index set of f_nu(x) g_{kappa,nu}(x); the key
/// set of the coefficient map always equals the active set exactly.
class SplineExpansion {
public:
    SplineExpansion(MultiIndex level, MultiIndex order, MultiIndex degree,
                    std::shared_ptr<const DomainDescriptor> domain,
                    std::map<MultiIndex, PolyCoefficient> coeffs);

    const MultiIndex& level() const { return level_; }
    const MultiIndex& order() const { return order_; }
    const MultiIndex& degree() const { return degree_; }
    const DomainDescriptor& domain() const { return *domain_; }
    std::shared_ptr<const DomainDescriptor> domain_ptr() const { return domain_; }
    const std::map<MultiIndex, PolyCoefficient>& coefficients() const { return coeffs_; }

    /// D^lambda f at x; only the basis functions whose support contains x
    /// contribute. Requires lambda <= order componentwise.
    double evaluate(const MultiIndex& lambda, std::span<const double> x) const;
    double operator()(std::span<const double> x) const;

    /// Dyadic refinement to level + eps; the refined expansion agrees with
    /// this one on the domain. Coefficients combine the sources whose halved
    /// index pairs with an admissible even shift; a missing source index
    /// indicates an active-set bug and is logged, never thrown.
    SplineExpansion refined_by(const SubsetMask& eps) const;

    /// Axis-aligned bounding box of the union of basis supports.
    Box support_bounding_box() const;

    void write(std::ostream& out) const;
    /// Reads the flat text format; coefficients come back as single
    /// polynomials based on their own dyadic cube.
    static SplineExpansion read(std::istream& in, std::shared_ptr<const DomainDescriptor> domain);

private:
    MultiIndex level_;
    MultiIndex order_;
    MultiIndex degree_;
    std::shared_ptr<const DomainDescriptor> domain_;
    std::map<MultiIndex, PolyCoefficient> coeffs_;
};

/// A finite sum of expansions at different levels (a truncated multilevel
/// representation). Evaluation and derivatives distribute over the blocks.
class MultiLevelExpansion {
public:
    MultiLevelExpansion() = default;
    explicit MultiLevelExpansion(std::vector<SplineExpansion> blocks);

    const std::vector<SplineExpansion>& blocks() const { return blocks_; }
    bool empty() const { return blocks_.empty(); }

    double evaluate(const MultiIndex& lambda, std::span<const double> x) const;
    double operator()(std::span<const double> x) const;

    Box support_bounding_box() const;

private:
    std::vector<SplineExpansion> blocks_;
};

}  // namespace mixext
