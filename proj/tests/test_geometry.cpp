#include <doctest.h>

#include "mixext/geometry.hpp"

using namespace mixext;

namespace {

Box box2(double ax, double ay, double bx, double by) {
    Box b;
    b.dim = 2;
    b.lo[0] = ax;
    b.lo[1] = ay;
    b.hi[0] = bx;
    b.hi[1] = by;
    return b;
}

Box box1(double a, double b) {
    Box r;
    r.dim = 1;
    r.lo[0] = a;
    r.hi[0] = b;
    return r;
}

}  // namespace

TEST_CASE("interval meet respects end ownership") {
    const Interval a{0.0, 1.0, true, true};
    const Interval b{1.0, 2.0, false, true};
    const Interval c = meet(a, b);
    CHECK(c.empty());  // {1} closed meets (1,2] in nothing

    const Interval d = meet(Interval{0.0, 1.0, true, true}, Interval{1.0, 2.0, true, true});
    CHECK_FALSE(d.empty());
    CHECK(d.lo == 1.0);
    CHECK(d.hi == 1.0);
}

TEST_CASE("open box covered by itself") {
    const Box b = box2(0, 0, 1, 1);
    CHECK(covered_by_open_union(FlaggedBox::open_box(b), std::span<const Box>(&b, 1)));
}

TEST_CASE("closed box not covered by its own interior") {
    const Box b = box2(0, 0, 1, 1);
    CHECK_FALSE(covered_by_open_union(FlaggedBox::closed_box(b), std::span<const Box>(&b, 1)));
}

TEST_CASE("glue face between abutting intervals is detected") {
    // (0,2) is not covered by (0,1) and (1,2): the point 1 is missing.
    const Box parts[2] = {box1(0, 1), box1(1, 2)};
    CHECK_FALSE(covered_by_open_union(FlaggedBox::open_box(box1(0, 2)),
                                      std::span<const Box>(parts, 2)));
    // But (0,2) is covered by (0,1.5) and (0.5,2).
    const Box overlap[2] = {box1(0, 1.5), box1(0.5, 2)};
    CHECK(covered_by_open_union(FlaggedBox::open_box(box1(0, 2)),
                                std::span<const Box>(overlap, 2)));
}

TEST_CASE("corner point membership in an L-shaped union") {
    const Box parts[2] = {box2(0, 0, 1, 2), box2(0, 0, 2, 1)};
    // The open square around the reentrant corner leaves the union.
    CHECK_FALSE(covered_by_open_union(FlaggedBox::open_box(box2(0.9, 0.9, 1.1, 1.1)),
                                      std::span<const Box>(parts, 2)));
    // A closed box crossing the seam x=1 below y=1 stays inside.
    CHECK(covered_by_open_union(FlaggedBox::closed_box(box2(0.5, 0.25, 1.5, 0.75)),
                                std::span<const Box>(parts, 2)));
    // A single point is decided exactly.
    const double corner[2] = {1.0, 1.0};
    CHECK_FALSE(covered_by_open_union(FlaggedBox::point(std::span<const double>(corner, 2)),
                                      std::span<const Box>(parts, 2)));
    const double seam[2] = {1.0, 0.5};
    CHECK(covered_by_open_union(FlaggedBox::point(std::span<const double>(seam, 2)),
                                std::span<const Box>(parts, 2)));
}

TEST_CASE("open box intersection is strict") {
    CHECK_FALSE(open_boxes_intersect(box1(0, 1), box1(1, 2)));
    CHECK(open_boxes_intersect(box1(0, 1.25), box1(1, 2)));
}
