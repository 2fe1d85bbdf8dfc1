// Union-of-boxes domains with exact dyadic geometry: membership, the active
// basis-index set per dyadic level, interior-cube assignment maps with their
// validator, hull cells, and shrunken-set membership for mixed differences.
#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mixext/geometry.hpp"
#include "mixext/multiindex.hpp"

namespace mixext {

/// Assignment of interior dyadic cubes to active indices: two families of
/// maps defined for absolute levels >= base_level, plus the base level
/// itself. Maps receive the absolute level vector and the active index.
struct MTypeStructure {
    using IndexMap = std::function<MultiIndex(const MultiIndex& level, const MultiIndex& nu)>;
    MultiIndex base_level;  // levels below this have no assignment
    IndexMap nu_map;
    IndexMap n_map;
};

/// A bounded domain given as a finite union of open axis-aligned boxes with
/// dyadic corners. Immutable after construction; queries are exact.
class DomainDescriptor {
public:
    /// Built-ins: "cube1d", "cube2d", "cube3d" (unit cube) and "lshape2d",
    /// "lshape3d" (the doubled cube minus the shifted closed unit cube).
    static DomainDescriptor named(const std::string& name);
    static std::vector<std::string> builtin_names();

    /// Custom domain from explicit boxes. No cube-assignment maps attached.
    static DomainDescriptor from_boxes(std::string name, std::vector<Box> boxes);

    /// Text format: one box per line, "lo_1 ... lo_d hi_1 ... hi_d", each
    /// token a dyadic rational "p/2^q" or a plain integer.
    static DomainDescriptor parse(std::istream& in, std::string name);
    void write(std::ostream& out) const;

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }
    const std::vector<Box>& boxes() const { return boxes_; }
    const Box& bounding() const { return bounding_; }

    /// Exact membership in the open union.
    bool contains(std::span<const double> x) const;
    /// Exact containment of a flagged set in the open union.
    bool contains_set(const FlaggedBox& b) const;
    /// Exact containment of the open interior of b.
    bool contains_open_box(const Box& b) const;
    /// Exact: does the open interior of b meet the domain?
    bool intersects_open_box(const Box& b) const;

    bool has_mtype() const { return static_cast<bool>(mtype_.nu_map); }
    const MTypeStructure& mtype() const;
    /// Copy of this domain with replacement maps (used for custom domains
    /// and for deliberately broken assignments in validation tests).
    DomainDescriptor with_mtype(MTypeStructure maps) const;

private:
    DomainDescriptor() = default;

    std::string name_;
    int dim_ = 0;
    std::vector<Box> boxes_;
    Box bounding_{};
    MTypeStructure mtype_;
};

/// Open dyadic cube 2^{-kappa} nu + 2^{-kappa} I^d as a Box.
Box dyadic_cube(const MultiIndex& kappa, const MultiIndex& nu);

/// All nu whose basis support box meets the domain, in lexicographic order.
std::vector<MultiIndex> active_indices(const DomainDescriptor& D, const MultiIndex& kappa,
                                       const MultiIndex& m);

/// The two assigned interior-cube indices (nu-target, n-target) for an active
/// index at absolute level kappa. Throws if nu is not active.
std::pair<MultiIndex, MultiIndex> mtype_maps(const DomainDescriptor& D, const MultiIndex& m,
                                             const MultiIndex& kappa, const MultiIndex& nu);

/// The cell spanning the designated level-K cube of nu and the level-(K-eps)
/// cube of the halved index: per axis, lower end is the min of the two cube
/// lower ends and the upper end the max of the two upper ends.
struct HullCell {
    int dim = 0;
    std::array<double, kMaxDim> x{};      // lower corner
    std::array<double, kMaxDim> delta{};  // edge lengths

    Box as_box() const;
};

HullCell hull_cell(const DomainDescriptor& D, const MultiIndex& kappa_rel,
                   const MultiIndex& nu, const SubsetMask& eps, const MultiIndex& mu_eps);

/// Result of the exhaustive cube-assignment validation up to a level cap.
struct MTypeReport {
    bool pass = false;
    std::int64_t tuples_checked = 0;
    std::string first_failure;        // empty when pass
    std::vector<double> gamma0;       // smallest valid locality constant, per axis
    std::vector<double> gamma1;       // measured hull-cell size constant, per axis
};

/// Checks, for every relative level kappa with max_j kappa_j <= K, every
/// active index, every eps with s(eps) within s(kappa), and every admissible
/// shift tuple: both assigned cubes lie in D, the hull cell lies in D and
/// contains both generating cubes, and the nu-assignment commutes with
/// halving off the active axes. Failures are reported, not thrown.
MTypeReport validate_mtype(const DomainDescriptor& D, const MultiIndex& m, int K);

/// Membership of x in the shrunken set on which the mixed difference of
/// order l with step h is defined: the closed box swept by t -> x + t l h,
/// t in the closed unit cube, must lie in D. Exact for union-of-boxes.
bool shrunken_contains(const DomainDescriptor& D, std::span<const double> x,
                       const MultiIndex& l, std::span<const double> h);

}  // namespace mixext
