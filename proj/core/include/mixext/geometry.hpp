// Exact axis-aligned geometry on dyadic endpoints: intervals with open/closed
// end flags, boxes built from them, and set subtraction against unions of
// open boxes. All endpoint values used by the library are dyadic rationals,
// which doubles represent exactly, so comparisons decide membership exactly.
#pragma once

#include <array>
#include <span>
#include <vector>

#include "mixext/multiindex.hpp"

namespace mixext {

/// Plain axis-aligned box; whether faces belong to it is decided by context.
struct Box {
    int dim = 0;
    std::array<double, kMaxDim> lo{};
    std::array<double, kMaxDim> hi{};

    bool valid() const {
        for (int j = 0; j < dim; ++j) {
            if (!(lo[static_cast<std::size_t>(j)] < hi[static_cast<std::size_t>(j)])) return false;
        }
        return dim >= 1;
    }
    double volume() const {
        double v = 1.0;
        for (int j = 0; j < dim; ++j) {
            v *= hi[static_cast<std::size_t>(j)] - lo[static_cast<std::size_t>(j)];
        }
        return v;
    }
};

Box bounding_box(std::span<const Box> boxes);

/// One-dimensional interval with explicit end ownership.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_closed = false;
    bool hi_closed = false;

    bool empty() const { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }
};

Interval meet(const Interval& a, const Interval& b);

/// Product of flagged intervals; degenerate axes (single points) are allowed.
struct FlaggedBox {
    int dim = 0;
    std::array<Interval, kMaxDim> axis{};

    static FlaggedBox open_box(const Box& b);
    static FlaggedBox closed_box(const Box& b);
    /// Closed box spanned by two corner points; degenerate axes become points.
    static FlaggedBox closed_hull(std::span<const double> a, std::span<const double> b);
    static FlaggedBox point(std::span<const double> x);

    bool empty() const {
        for (int j = 0; j < dim; ++j) {
            if (axis[static_cast<std::size_t>(j)].empty()) return true;
        }
        return false;
    }
};

/// Exact test: is the flagged set contained in the union of the open boxes?
/// Decided by successive subtraction; the residual fragments stay flagged
/// boxes, so boundary pieces of measure zero are not lost.
bool covered_by_open_union(const FlaggedBox& seed, std::span<const Box> open_boxes);

/// Exact test: do the open interiors of two boxes intersect?
bool open_boxes_intersect(const Box& a, const Box& b);

}  // namespace mixext
