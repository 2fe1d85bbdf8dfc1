#include "mixext/multiindex.hpp"

#include <bit>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mixext {

namespace {

void check_dim(int dim) {
    if (dim < 1 || dim > kMaxDim) {
        throw std::invalid_argument("MultiIndex: dimension must be in [1, " +
                                    std::to_string(kMaxDim) + "], got " + std::to_string(dim));
    }
}

void check_same_dim(const MultiIndex& a, const MultiIndex& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("MultiIndex: dimension mismatch (" +
                                    std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
    }
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) {
        throw std::overflow_error("MultiIndex: integer overflow in addition");
    }
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw std::overflow_error("integer overflow in multiplication");
    }
    return r;
}

}  // namespace

MultiIndex::MultiIndex(int dim, std::int64_t fill) : dim_(dim) {
    check_dim(dim);
    v_.fill(0);
    for (int j = 0; j < dim_; ++j) v_[static_cast<std::size_t>(j)] = fill;
}

MultiIndex::MultiIndex(std::initializer_list<std::int64_t> values)
    : dim_(static_cast<int>(values.size())) {
    check_dim(dim_);
    v_.fill(0);
    int j = 0;
    for (std::int64_t x : values) v_[static_cast<std::size_t>(j++)] = x;
}

MultiIndex MultiIndex::unit(int dim, int axis) {
    check_dim(dim);
    if (axis < 0 || axis >= dim) throw std::invalid_argument("MultiIndex::unit: axis out of range");
    MultiIndex e(dim, 0);
    e[axis] = 1;
    return e;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
    check_same_dim(*this, o);
    MultiIndex r(dim_, 0);
    for (int j = 0; j < dim_; ++j) r[j] = checked_add((*this)[j], o[j]);
    return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& o) const {
    check_same_dim(*this, o);
    MultiIndex r(dim_, 0);
    for (int j = 0; j < dim_; ++j) r[j] = checked_add((*this)[j], -o[j]);
    return r;
}

MultiIndex MultiIndex::operator-() const {
    MultiIndex r(dim_, 0);
    for (int j = 0; j < dim_; ++j) r[j] = -(*this)[j];
    return r;
}

bool MultiIndex::operator==(const MultiIndex& o) const {
    if (dim_ != o.dim_) return false;
    for (int j = 0; j < dim_; ++j) {
        if ((*this)[j] != o[j]) return false;
    }
    return true;
}

bool MultiIndex::operator<(const MultiIndex& o) const {
    if (dim_ != o.dim_) return dim_ < o.dim_;
    for (int j = 0; j < dim_; ++j) {
        if ((*this)[j] != o[j]) return (*this)[j] < o[j];
    }
    return false;
}

bool MultiIndex::all_nonneg() const {
    for (int j = 0; j < dim_; ++j) {
        if ((*this)[j] < 0) return false;
    }
    return true;
}

MultiIndex MultiIndex::clamped_nonneg() const {
    MultiIndex r(dim_, 0);
    for (int j = 0; j < dim_; ++j) r[j] = (*this)[j] > 0 ? (*this)[j] : 0;
    return r;
}

std::int64_t MultiIndex::sum() const {
    std::int64_t s = 0;
    for (int j = 0; j < dim_; ++j) s = checked_add(s, (*this)[j]);
    return s;
}

std::int64_t MultiIndex::max() const {
    std::int64_t s = std::numeric_limits<std::int64_t>::min();
    for (int j = 0; j < dim_; ++j) s = s > (*this)[j] ? s : (*this)[j];
    return s;
}

std::int64_t MultiIndex::min() const {
    std::int64_t s = std::numeric_limits<std::int64_t>::max();
    for (int j = 0; j < dim_; ++j) s = s < (*this)[j] ? s : (*this)[j];
    return s;
}

double MultiIndex::dot(std::span<const double> w) const {
    if (static_cast<int>(w.size()) != dim_) {
        throw std::invalid_argument("MultiIndex::dot: size mismatch");
    }
    double s = 0.0;
    for (int j = 0; j < dim_; ++j) s += static_cast<double>((*this)[j]) * w[static_cast<std::size_t>(j)];
    return s;
}

std::string MultiIndex::str() const {
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const MultiIndex& v) {
    os << '(';
    for (int j = 0; j < v.dim(); ++j) {
        if (j) os << ',';
        os << v[j];
    }
    return os << ')';
}

bool componentwise_le(const MultiIndex& a, const MultiIndex& b) {
    check_same_dim(a, b);
    for (int j = 0; j < a.dim(); ++j) {
        if (a[j] > b[j]) return false;
    }
    return true;
}

SubsetMask::SubsetMask(int dim, unsigned bits) : dim_(dim), bits_(bits) {
    check_dim(dim);
    if (bits >= (1u << dim)) {
        throw std::invalid_argument("SubsetMask: bits out of range for dimension");
    }
}

SubsetMask SubsetMask::full(int dim) {
    check_dim(dim);
    return SubsetMask(dim, (1u << dim) - 1u);
}

std::vector<SubsetMask> SubsetMask::enumerate(int dim) {
    check_dim(dim);
    std::vector<SubsetMask> all;
    all.reserve(std::size_t{1} << dim);
    for (unsigned b = 0; b < (1u << dim); ++b) all.emplace_back(dim, b);
    return all;
}

int SubsetMask::count() const { return std::popcount(bits_); }

bool SubsetMask::subset_of(const SubsetMask& o) const {
    return dim_ == o.dim_ && (bits_ & ~o.bits_) == 0;
}

bool SubsetMask::disjoint_from(const SubsetMask& o) const {
    return dim_ == o.dim_ && (bits_ & o.bits_) == 0;
}

SubsetMask SubsetMask::united(const SubsetMask& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("SubsetMask: dimension mismatch");
    return SubsetMask(dim_, bits_ | o.bits_);
}

MultiIndex SubsetMask::chi() const {
    MultiIndex r(dim_, 0);
    for (int j = 0; j < dim_; ++j) r[j] = contains(j) ? 1 : 0;
    return r;
}

std::string SubsetMask::str() const {
    std::string s = "{";
    bool first = true;
    for (int j = 0; j < dim_; ++j) {
        if (!contains(j)) continue;
        if (!first) s += ',';
        s += std::to_string(j + 1);
        first = false;
    }
    return s + "}";
}

SubsetMask sigma(const MultiIndex& x) {
    unsigned bits = 0;
    for (int j = 0; j < x.dim(); ++j) {
        if (x[j] != 0) bits |= (1u << j);
    }
    return SubsetMask(x.dim(), bits);
}

std::int64_t binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n) {
        throw std::domain_error("binomial: need 0 <= k <= n");
    }
    if (k > n - k) k = n - k;
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        // r * (n - k + i) stays exact: divide after multiplying, the product
        // of i consecutive terms is divisible by i!.
        r = checked_mul(r, n - k + i);
        r /= i;
    }
    return r;
}

std::int64_t tensor_binomial(const MultiIndex& l, const MultiIndex& k) {
    check_same_dim(l, k);
    if (!k.all_nonneg() || !componentwise_le(k, l)) {
        throw std::domain_error("tensor_binomial: need 0 <= k <= l componentwise");
    }
    std::int64_t r = 1;
    for (int j = 0; j < l.dim(); ++j) r = checked_mul(r, binomial(l[j], k[j]));
    return r;
}

std::int64_t IndexBox::size() const {
    check_same_dim(lo, hi);
    std::int64_t n = 1;
    for (int j = 0; j < lo.dim(); ++j) {
        if (lo[j] > hi[j]) return 0;
        n = checked_mul(n, hi[j] - lo[j] + 1);
    }
    return n;
}

std::vector<MultiIndex> IndexBox::to_vector() const {
    std::vector<MultiIndex> out;
    out.reserve(static_cast<std::size_t>(size()));
    for_each([&out](const MultiIndex& v) { out.push_back(v); });
    return out;
}

std::vector<EvenShiftTerm> even_shift_decompositions(const MultiIndex& nu,
                                                     const SubsetMask& eps,
                                                     const MultiIndex& m) {
    check_same_dim(nu, m);
    if (eps.dim() != nu.dim()) throw std::invalid_argument("even_shift_decompositions: mask dimension mismatch");
    for (int j = 0; j < m.dim(); ++j) {
        if (m[j] < 1) throw std::domain_error("even_shift_decompositions: need m >= 1 componentwise");
    }

    const int d = nu.dim();
    std::vector<EvenShiftTerm> terms;
    terms.push_back(EvenShiftTerm{MultiIndex::zeros(d), nu});
    for (int j = 0; j < d; ++j) {
        if (!eps.contains(j)) continue;
        // Admissible shifts on this axis: same parity as nu_j within [0, m_j + 1].
        const std::int64_t parity = ((nu[j] % 2) + 2) % 2;
        std::vector<EvenShiftTerm> next;
        for (std::int64_t mu = parity; mu <= m[j] + 1; mu += 2) {
            for (const EvenShiftTerm& t : terms) {
                EvenShiftTerm ext = t;
                ext.mu[j] = mu;
                ext.n[j] = (nu[j] - mu) / 2;
                next.push_back(ext);
            }
        }
        terms = std::move(next);
    }
    return terms;
}

}  // namespace mixext
