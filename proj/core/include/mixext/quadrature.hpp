// Gauss-Legendre rules on [0, 1], cached per node count.
#pragma once

#include <span>
#include <vector>

namespace mixext {

struct QuadratureRule {
    std::vector<double> nodes;    // in (0, 1)
    std::vector<double> weights;  // sum to 1
};

/// Gauss-Legendre rule with n nodes on the unit interval; exact for
/// polynomials of degree <= 2n - 1. Cached and safe for concurrent use.
const QuadratureRule& gauss_legendre(int n);

}  // namespace mixext
