// Multi-index and coordinate-subset combinatorics: index vectors in Z^d,
// subset masks, tensor binomials and the even-shift decompositions that
// drive dyadic refinement.
#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mixext {

/// Maximum ambient dimension supported by the library.
inline constexpr int kMaxDim = 8;

/// A vector in Z^d with d fixed at construction (d <= kMaxDim).
/// Arithmetic is checked: overflow raises std::overflow_error.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(int dim, std::int64_t fill = 0);
    MultiIndex(std::initializer_list<std::int64_t> values);

    static MultiIndex zeros(int dim) { return MultiIndex(dim, 0); }
    static MultiIndex ones(int dim) { return MultiIndex(dim, 1); }
    /// Unit vector e_j (0-based axis).
    static MultiIndex unit(int dim, int axis);

    int dim() const { return dim_; }
    std::int64_t operator[](int j) const { return v_[static_cast<std::size_t>(j)]; }
    std::int64_t& operator[](int j) { return v_[static_cast<std::size_t>(j)]; }

    MultiIndex operator+(const MultiIndex& o) const;
    MultiIndex operator-(const MultiIndex& o) const;
    MultiIndex operator-() const;

    bool operator==(const MultiIndex& o) const;
    bool operator!=(const MultiIndex& o) const { return !(*this == o); }
    /// Lexicographic order, used for deterministic map keys.
    bool operator<(const MultiIndex& o) const;

    /// All components >= 0.
    bool all_nonneg() const;
    /// Componentwise positive part x_+.
    MultiIndex clamped_nonneg() const;
    std::int64_t sum() const;
    std::int64_t max() const;
    std::int64_t min() const;

    /// (this, w) = sum_j this_j * w_j with a real vector.
    double dot(std::span<const double> w) const;

    std::string str() const;

private:
    int dim_ = 0;
    std::array<std::int64_t, kMaxDim> v_{};
};

std::ostream& operator<<(std::ostream& os, const MultiIndex& v);

/// a <= b componentwise.
bool componentwise_le(const MultiIndex& a, const MultiIndex& b);

/// A subset J of {1,...,d} stored as a bit mask over axes 0..d-1.
class SubsetMask {
public:
    SubsetMask() = default;
    SubsetMask(int dim, unsigned bits);
    static SubsetMask empty(int dim) { return SubsetMask(dim, 0); }
    static SubsetMask full(int dim);
    /// All 2^d subsets of {1,...,d}, in increasing bit order.
    static std::vector<SubsetMask> enumerate(int dim);

    int dim() const { return dim_; }
    unsigned bits() const { return bits_; }
    bool contains(int axis) const { return (bits_ >> axis) & 1u; }
    bool is_empty() const { return bits_ == 0; }
    int count() const;
    bool subset_of(const SubsetMask& o) const;
    bool disjoint_from(const SubsetMask& o) const;
    SubsetMask united(const SubsetMask& o) const;
    /// (-1)^{|J|}.
    int sign() const { return (count() % 2 == 0) ? 1 : -1; }

    /// Indicator vector chi_J in {0,1}^d.
    MultiIndex chi() const;

    bool operator==(const SubsetMask& o) const { return dim_ == o.dim_ && bits_ == o.bits_; }

    std::string str() const;

private:
    int dim_ = 0;
    unsigned bits_ = 0;
};

/// Support set s(x) = { j : x_j != 0 }.
SubsetMask sigma(const MultiIndex& x);

/// Exact binomial coefficient C(n, k); throws on overflow or invalid input.
std::int64_t binomial(std::int64_t n, std::int64_t k);

/// Product of per-coordinate binomials C_l^k = prod_j C(l_j, k_j).
/// Requires 0 <= k <= l componentwise.
std::int64_t tensor_binomial(const MultiIndex& l, const MultiIndex& k);

/// The discrete box { nu : lo <= nu <= hi }, iterated lexicographically.
struct IndexBox {
    MultiIndex lo;
    MultiIndex hi;

    /// Number of lattice points; zero when empty on some axis.
    std::int64_t size() const;

    /// Visit every index in lexicographic order.
    template <typename F>
    void for_each(F&& f) const {
        const int d = lo.dim();
        for (int j = 0; j < d; ++j) {
            if (lo[j] > hi[j]) return;
        }
        MultiIndex cur = lo;
        while (true) {
            f(static_cast<const MultiIndex&>(cur));
            int j = d - 1;
            while (j >= 0) {
                if (cur[j] < hi[j]) {
                    ++cur[j];
                    break;
                }
                cur[j] = lo[j];
                --j;
            }
            if (j < 0) break;
        }
    }

    std::vector<MultiIndex> to_vector() const;
};

/// One term of an even-shift decomposition: the shift tuple mu (stored as a
/// full-length vector, zero off the active axes) and the coarse index n with
/// (nu_j - mu_j)/2 on active axes and nu_j elsewhere.
struct EvenShiftTerm {
    MultiIndex mu;
    MultiIndex n;
};

/// Enumerates all admissible shifts mu over the axes of eps: mu_j in
/// [0, m_j + 1] with nu_j - mu_j even, paired with the halved coarse index.
/// The empty mask yields the single term (0, nu). Requires m >= 1 on all axes.
std::vector<EvenShiftTerm> even_shift_decompositions(const MultiIndex& nu,
                                                     const SubsetMask& eps,
                                                     const MultiIndex& m);

}  // namespace mixext
