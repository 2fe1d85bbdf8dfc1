#include "mixext/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mixext {

Box bounding_box(std::span<const Box> boxes) {
    if (boxes.empty()) throw std::invalid_argument("bounding_box: empty list");
    Box bb = boxes.front();
    for (const Box& b : boxes.subspan(1)) {
        if (b.dim != bb.dim) throw std::invalid_argument("bounding_box: dimension mismatch");
        for (int j = 0; j < bb.dim; ++j) {
            const auto k = static_cast<std::size_t>(j);
            bb.lo[k] = std::min(bb.lo[k], b.lo[k]);
            bb.hi[k] = std::max(bb.hi[k], b.hi[k]);
        }
    }
    return bb;
}

Interval meet(const Interval& a, const Interval& b) {
    Interval r;
    if (a.lo > b.lo) {
        r.lo = a.lo;
        r.lo_closed = a.lo_closed;
    } else if (a.lo < b.lo) {
        r.lo = b.lo;
        r.lo_closed = b.lo_closed;
    } else {
        r.lo = a.lo;
        r.lo_closed = a.lo_closed && b.lo_closed;
    }
    if (a.hi < b.hi) {
        r.hi = a.hi;
        r.hi_closed = a.hi_closed;
    } else if (a.hi > b.hi) {
        r.hi = b.hi;
        r.hi_closed = b.hi_closed;
    } else {
        r.hi = a.hi;
        r.hi_closed = a.hi_closed && b.hi_closed;
    }
    return r;
}

FlaggedBox FlaggedBox::open_box(const Box& b) {
    FlaggedBox f;
    f.dim = b.dim;
    for (int j = 0; j < b.dim; ++j) {
        const auto k = static_cast<std::size_t>(j);
        f.axis[k] = Interval{b.lo[k], b.hi[k], false, false};
    }
    return f;
}

FlaggedBox FlaggedBox::closed_box(const Box& b) {
    FlaggedBox f;
    f.dim = b.dim;
    for (int j = 0; j < b.dim; ++j) {
        const auto k = static_cast<std::size_t>(j);
        f.axis[k] = Interval{b.lo[k], b.hi[k], true, true};
    }
    return f;
}

FlaggedBox FlaggedBox::closed_hull(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("closed_hull: size mismatch");
    FlaggedBox f;
    f.dim = static_cast<int>(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        f.axis[k] = Interval{std::min(a[k], b[k]), std::max(a[k], b[k]), true, true};
    }
    return f;
}

FlaggedBox FlaggedBox::point(std::span<const double> x) { return closed_hull(x, x); }

namespace {

// Pieces of F outside the open box O, disjoint, appended to out.
void subtract_open_box(const FlaggedBox& F, const Box& O, std::vector<FlaggedBox>& out) {
    const double inf = std::numeric_limits<double>::infinity();
    FlaggedBox inside = F;  // running prefix clipped to O on already-split axes
    for (int j = 0; j < F.dim; ++j) {
        const auto k = static_cast<std::size_t>(j);
        const Interval cur = inside.axis[k];
        const Interval left = meet(cur, Interval{-inf, O.lo[k], false, true});
        const Interval right = meet(cur, Interval{O.hi[k], inf, true, false});
        if (!left.empty()) {
            FlaggedBox piece = inside;
            piece.axis[k] = left;
            out.push_back(piece);
        }
        if (!right.empty()) {
            FlaggedBox piece = inside;
            piece.axis[k] = right;
            out.push_back(piece);
        }
        inside.axis[k] = meet(cur, Interval{O.lo[k], O.hi[k], false, false});
        if (inside.axis[k].empty()) return;  // nothing of F meets O past this axis
    }
}

}  // namespace

bool covered_by_open_union(const FlaggedBox& seed, std::span<const Box> open_boxes) {
    if (seed.empty()) return true;
    std::vector<FlaggedBox> residual{seed};
    std::vector<FlaggedBox> next;
    for (const Box& b : open_boxes) {
        if (b.dim != seed.dim) throw std::invalid_argument("covered_by_open_union: dimension mismatch");
        next.clear();
        for (const FlaggedBox& frag : residual) {
            subtract_open_box(frag, b, next);
        }
        residual.swap(next);
        if (residual.empty()) return true;
    }
    return false;
}

bool open_boxes_intersect(const Box& a, const Box& b) {
    if (a.dim != b.dim) throw std::invalid_argument("open_boxes_intersect: dimension mismatch");
    for (int j = 0; j < a.dim; ++j) {
        const auto k = static_cast<std::size_t>(j);
        if (!(std::max(a.lo[k], b.lo[k]) < std::min(a.hi[k], b.hi[k]))) return false;
    }
    return true;
}

}  // namespace mixext
