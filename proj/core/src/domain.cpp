#include "mixext/domain.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mixext {

namespace {

MultiIndex clamp_map(const MultiIndex& /*level*/, const MultiIndex& nu) {
    return nu.clamped_nonneg();
}

MTypeStructure clamp_structure(int dim) {
    MTypeStructure s;
    s.base_level = MultiIndex::zeros(dim);
    s.nu_map = clamp_map;
    s.n_map = clamp_map;
    return s;
}

Box make_box(std::initializer_list<double> lo, std::initializer_list<double> hi) {
    Box b;
    b.dim = static_cast<int>(lo.size());
    int j = 0;
    for (double v : lo) b.lo[static_cast<std::size_t>(j++)] = v;
    j = 0;
    for (double v : hi) b.hi[static_cast<std::size_t>(j++)] = v;
    return b;
}

// Token is either an integer "p" or a dyadic rational "p/2^q".
double parse_dyadic(const std::string& tok) {
    const auto slash = tok.find('/');
    if (slash == std::string::npos) {
        std::size_t used = 0;
        const long long p = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("bad dyadic token: " + tok);
        return static_cast<double>(p);
    }
    const std::string num = tok.substr(0, slash);
    const std::string den = tok.substr(slash + 1);
    if (den.size() < 3 || den[0] != '2' || den[1] != '^') {
        throw std::invalid_argument("bad dyadic token (expected p/2^q): " + tok);
    }
    std::size_t used = 0;
    const long long p = std::stoll(num, &used);
    if (used != num.size()) throw std::invalid_argument("bad dyadic token: " + tok);
    const int q = std::stoi(den.substr(2), &used);
    if (used != den.size() - 2 || q < 0 || q > 60) {
        throw std::invalid_argument("bad dyadic exponent in token: " + tok);
    }
    return std::ldexp(static_cast<double>(p), -q);
}

void append_dyadic(std::ostream& out, double v) {
    // All stored bounds are dyadic; emit p/2^q with the smallest q <= 60.
    int q = 0;
    double scaled = v;
    while (scaled != std::floor(scaled) && q < 60) {
        scaled = std::ldexp(v, ++q);
    }
    const auto p = static_cast<long long>(scaled);
    if (q == 0) {
        out << p;
    } else {
        out << p << "/2^" << q;
    }
}

}  // namespace

DomainDescriptor DomainDescriptor::named(const std::string& name) {
    DomainDescriptor d;
    d.name_ = name;
    if (name == "cube1d") {
        d.dim_ = 1;
        d.boxes_ = {make_box({0.0}, {1.0})};
    } else if (name == "cube2d") {
        d.dim_ = 2;
        d.boxes_ = {make_box({0.0, 0.0}, {1.0, 1.0})};
    } else if (name == "cube3d") {
        d.dim_ = 3;
        d.boxes_ = {make_box({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0})};
    } else if (name == "lshape2d") {
        d.dim_ = 2;
        d.boxes_ = {make_box({0.0, 0.0}, {1.0, 2.0}), make_box({0.0, 0.0}, {2.0, 1.0})};
    } else if (name == "lshape3d") {
        d.dim_ = 3;
        d.boxes_ = {make_box({0.0, 0.0, 0.0}, {1.0, 2.0, 2.0}),
                    make_box({0.0, 0.0, 0.0}, {2.0, 1.0, 2.0}),
                    make_box({0.0, 0.0, 0.0}, {2.0, 2.0, 1.0})};
    } else {
        throw std::invalid_argument("unknown domain name: " + name);
    }
    d.bounding_ = bounding_box(d.boxes_);
    d.mtype_ = clamp_structure(d.dim_);
    return d;
}

std::vector<std::string> DomainDescriptor::builtin_names() {
    return {"cube1d", "cube2d", "cube3d", "lshape2d", "lshape3d"};
}

DomainDescriptor DomainDescriptor::from_boxes(std::string name, std::vector<Box> boxes) {
    if (boxes.empty()) throw std::invalid_argument("DomainDescriptor: no boxes");
    DomainDescriptor d;
    d.name_ = std::move(name);
    d.dim_ = boxes.front().dim;
    for (const Box& b : boxes) {
        if (b.dim != d.dim_ || !b.valid()) {
            throw std::invalid_argument("DomainDescriptor: invalid or mismatched box");
        }
    }
    d.boxes_ = std::move(boxes);
    d.bounding_ = bounding_box(d.boxes_);
    return d;
}

DomainDescriptor DomainDescriptor::parse(std::istream& in, std::string name) {
    std::vector<Box> boxes;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (toks.empty()) continue;
        if (toks.size() % 2 != 0 || toks.size() > 2 * kMaxDim) {
            throw std::invalid_argument("domain file: expected lo_1..lo_d hi_1..hi_d per line");
        }
        const int d = static_cast<int>(toks.size()) / 2;
        Box b;
        b.dim = d;
        for (int j = 0; j < d; ++j) {
            b.lo[static_cast<std::size_t>(j)] = parse_dyadic(toks[static_cast<std::size_t>(j)]);
            b.hi[static_cast<std::size_t>(j)] = parse_dyadic(toks[static_cast<std::size_t>(j + d)]);
        }
        boxes.push_back(b);
    }
    return from_boxes(std::move(name), std::move(boxes));
}

void DomainDescriptor::write(std::ostream& out) const {
    for (const Box& b : boxes_) {
        for (int j = 0; j < dim_; ++j) {
            if (j) out << ' ';
            append_dyadic(out, b.lo[static_cast<std::size_t>(j)]);
        }
        for (int j = 0; j < dim_; ++j) {
            out << ' ';
            append_dyadic(out, b.hi[static_cast<std::size_t>(j)]);
        }
        out << '\n';
    }
}

bool DomainDescriptor::contains(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) {
        throw std::invalid_argument("DomainDescriptor::contains: dimension mismatch");
    }
    for (const Box& b : boxes_) {
        bool inside = true;
        for (int j = 0; j < dim_ && inside; ++j) {
            const auto k = static_cast<std::size_t>(j);
            inside = b.lo[k] < x[k] && x[k] < b.hi[k];
        }
        if (inside) return true;
    }
    return false;
}

bool DomainDescriptor::contains_set(const FlaggedBox& f) const {
    if (f.dim != dim_) throw std::invalid_argument("DomainDescriptor::contains_set: dimension mismatch");
    if (f.empty()) return true;
    // Fast path: inside a single open box.
    for (const Box& b : boxes_) {
        bool inside = true;
        for (int j = 0; j < dim_ && inside; ++j) {
            const auto k = static_cast<std::size_t>(j);
            const Interval& iv = f.axis[k];
            const bool lo_ok = iv.lo > b.lo[k] || (iv.lo == b.lo[k] && !iv.lo_closed);
            const bool hi_ok = iv.hi < b.hi[k] || (iv.hi == b.hi[k] && !iv.hi_closed);
            inside = lo_ok && hi_ok;
        }
        if (inside) return true;
    }
    if (boxes_.size() == 1) return false;
    return covered_by_open_union(f, boxes_);
}

bool DomainDescriptor::contains_open_box(const Box& b) const {
    return contains_set(FlaggedBox::open_box(b));
}

bool DomainDescriptor::intersects_open_box(const Box& b) const {
    for (const Box& mine : boxes_) {
        if (open_boxes_intersect(mine, b)) return true;
    }
    return false;
}

const MTypeStructure& DomainDescriptor::mtype() const {
    if (!has_mtype()) {
        throw std::logic_error("domain '" + name_ + "' has no cube-assignment maps attached");
    }
    return mtype_;
}

DomainDescriptor DomainDescriptor::with_mtype(MTypeStructure maps) const {
    if (maps.base_level.dim() != dim_) {
        throw std::invalid_argument("with_mtype: base level dimension mismatch");
    }
    DomainDescriptor d = *this;
    d.mtype_ = std::move(maps);
    return d;
}

Box dyadic_cube(const MultiIndex& kappa, const MultiIndex& nu) {
    if (kappa.dim() != nu.dim()) throw std::invalid_argument("dyadic_cube: dimension mismatch");
    Box b;
    b.dim = kappa.dim();
    for (int j = 0; j < b.dim; ++j) {
        const auto k = static_cast<std::size_t>(j);
        b.lo[k] = std::ldexp(static_cast<double>(nu[j]), -static_cast<int>(kappa[j]));
        b.hi[k] = std::ldexp(static_cast<double>(nu[j] + 1), -static_cast<int>(kappa[j]));
    }
    return b;
}

std::vector<MultiIndex> active_indices(const DomainDescriptor& D, const MultiIndex& kappa,
                                       const MultiIndex& m) {
    const int d = D.dim();
    if (kappa.dim() != d || m.dim() != d) {
        throw std::invalid_argument("active_indices: dimension mismatch");
    }
    if (!kappa.all_nonneg() || kappa.max() > 30) {
        throw std::invalid_argument("active_indices: level out of supported range");
    }
    // Candidate range from the bounding box; exact per-candidate test below.
    IndexBox range{MultiIndex::zeros(d), MultiIndex::zeros(d)};
    const Box& bb = D.bounding();
    for (int j = 0; j < d; ++j) {
        const auto k = static_cast<std::size_t>(j);
        const double scale = std::ldexp(1.0, static_cast<int>(kappa[j]));
        range.lo[j] = static_cast<std::int64_t>(std::floor(bb.lo[k] * scale)) - m[j] - 1;
        range.hi[j] = static_cast<std::int64_t>(std::ceil(bb.hi[k] * scale));
    }
    std::vector<MultiIndex> out;
    range.for_each([&](const MultiIndex& nu) {
        Box s;
        s.dim = d;
        for (int j = 0; j < d; ++j) {
            const auto k = static_cast<std::size_t>(j);
            s.lo[k] = std::ldexp(static_cast<double>(nu[j]), -static_cast<int>(kappa[j]));
            s.hi[k] = std::ldexp(static_cast<double>(nu[j] + m[j] + 1), -static_cast<int>(kappa[j]));
        }
        if (D.intersects_open_box(s)) out.push_back(nu);
    });
    return out;
}

std::pair<MultiIndex, MultiIndex> mtype_maps(const DomainDescriptor& D, const MultiIndex& m,
                                             const MultiIndex& kappa, const MultiIndex& nu) {
    const MTypeStructure& s = D.mtype();
    if (!componentwise_le(s.base_level, kappa)) {
        throw std::invalid_argument("mtype_maps: level below the base level");
    }
    const auto active = active_indices(D, kappa, m);
    if (!std::binary_search(active.begin(), active.end(), nu)) {
        throw std::invalid_argument("mtype_maps: index " + nu.str() + " not active at level " +
                                    kappa.str());
    }
    return {s.nu_map(kappa, nu), s.n_map(kappa, nu)};
}

Box HullCell::as_box() const {
    Box b;
    b.dim = dim;
    for (int j = 0; j < dim; ++j) {
        const auto k = static_cast<std::size_t>(j);
        b.lo[k] = x[k];
        b.hi[k] = x[k] + delta[k];
    }
    return b;
}

HullCell hull_cell(const DomainDescriptor& D, const MultiIndex& kappa_rel,
                   const MultiIndex& nu, const SubsetMask& eps, const MultiIndex& mu_eps) {
    const MTypeStructure& s = D.mtype();
    const int d = D.dim();
    if (!eps.subset_of(sigma(kappa_rel))) {
        throw std::invalid_argument("hull_cell: eps must be supported on the positive axes of kappa");
    }
    const MultiIndex K = s.base_level + kappa_rel;
    const MultiIndex n_target = s.n_map(K, nu);

    // Coarse index paired with this shift tuple, then its assigned cube.
    MultiIndex n_eps = nu;
    for (int j = 0; j < d; ++j) {
        if (eps.contains(j)) n_eps[j] = (nu[j] - mu_eps[j]) / 2;
    }
    const MultiIndex K_eps = K - eps.chi();
    const MultiIndex nu_target = s.nu_map(K_eps, n_eps);

    HullCell cell;
    cell.dim = d;
    for (int j = 0; j < d; ++j) {
        const auto k = static_cast<std::size_t>(j);
        const int Kj = static_cast<int>(K[j]);
        const int Kej = static_cast<int>(K_eps[j]);
        const double a_lo = std::ldexp(static_cast<double>(n_target[j]), -Kj);
        const double a_hi = std::ldexp(static_cast<double>(n_target[j] + 1), -Kj);
        const double b_lo = std::ldexp(static_cast<double>(nu_target[j]), -Kej);
        const double b_hi = std::ldexp(static_cast<double>(nu_target[j] + 1), -Kej);
        cell.x[k] = std::min(a_lo, b_lo);
        cell.delta[k] = std::max(a_hi, b_hi) - cell.x[k];
    }
    return cell;
}

MTypeReport validate_mtype(const DomainDescriptor& D, const MultiIndex& m, int K) {
    const MTypeStructure& s = D.mtype();
    const int d = D.dim();
    if (m.dim() != d || !componentwise_le(MultiIndex::ones(d), m)) {
        throw std::invalid_argument("validate_mtype: need m >= 1 with matching dimension");
    }
    if (K < 0) throw std::invalid_argument("validate_mtype: need K >= 0");

    MTypeReport rep;
    rep.gamma0.assign(static_cast<std::size_t>(d), 0.0);
    rep.gamma1.assign(static_cast<std::size_t>(d), 0.0);
    rep.pass = true;

    const auto record_failure = [&](const std::string& what) {
        if (rep.pass) rep.first_failure = what;
        rep.pass = false;
    };

    IndexBox levels{MultiIndex::zeros(d), MultiIndex(d, K)};
    levels.for_each([&](const MultiIndex& kappa_rel) {
        if (!rep.first_failure.empty() && !rep.pass) return;  // keep the first witness only
        const MultiIndex Kabs = s.base_level + kappa_rel;
        const auto active = active_indices(D, Kabs, m);
        const auto masks = SubsetMask::enumerate(d);
        for (const MultiIndex& nu : active) {
            const MultiIndex w_nu = s.nu_map(Kabs, nu);
            const MultiIndex w_n = s.n_map(Kabs, nu);
            // Locality: both assigned cubes inside the domain; the smallest
            // ball-box constant is measured rather than prescribed.
            for (const MultiIndex* w : {&w_nu, &w_n}) {
                ++rep.tuples_checked;
                if (!D.contains_open_box(dyadic_cube(Kabs, *w))) {
                    record_failure("assigned cube " + w->str() + " at level " + Kabs.str() +
                                   " for index " + nu.str() + " is not inside the domain");
                    return;
                }
                for (int j = 0; j < d; ++j) {
                    const auto k = static_cast<std::size_t>(j);
                    const double need = std::max(static_cast<double>(nu[j] - (*w)[j]),
                                                 static_cast<double>((*w)[j] + 1 - nu[j]));
                    rep.gamma0[k] = std::max(rep.gamma0[k], need);
                }
            }
            for (const SubsetMask& eps : masks) {
                if (!eps.subset_of(sigma(kappa_rel))) continue;
                for (const EvenShiftTerm& term : even_shift_decompositions(nu, eps, m)) {
                    ++rep.tuples_checked;
                    const HullCell cell = hull_cell(D, kappa_rel, nu, eps, term.mu);
                    const Box cell_box = cell.as_box();
                    if (!D.contains_open_box(cell_box)) {
                        record_failure("hull cell for index " + nu.str() + " at level " +
                                       Kabs.str() + ", eps=" + eps.str() +
                                       ", shifts=" + term.mu.str() + " leaves the domain");
                        return;
                    }
                    const MultiIndex K_eps = Kabs - eps.chi();
                    const MultiIndex nu_target = s.nu_map(K_eps, term.n);
                    // Off the halved axes the assignment must be unchanged.
                    for (int j = 0; j < d; ++j) {
                        if (eps.contains(j)) continue;
                        if (nu_target[j] != w_nu[j]) {
                            record_failure("assignment does not commute with halving at index " +
                                           nu.str() + ", level " + Kabs.str() + ", eps=" +
                                           eps.str() + ", axis " + std::to_string(j + 1));
                            return;
                        }
                    }
                    // Hull must contain both generating cubes and stay within
                    // a level-size multiple.
                    const Box q_n = dyadic_cube(Kabs, w_n);
                    const Box q_nu = dyadic_cube(K_eps, nu_target);
                    for (int j = 0; j < d; ++j) {
                        const auto k = static_cast<std::size_t>(j);
                        if (cell_box.lo[k] > q_n.lo[k] || cell_box.hi[k] < q_n.hi[k] ||
                            cell_box.lo[k] > q_nu.lo[k] || cell_box.hi[k] < q_nu.hi[k]) {
                            record_failure("hull cell misses a generating cube at index " +
                                           nu.str() + ", level " + Kabs.str());
                            return;
                        }
                        const double unit = std::ldexp(1.0, -static_cast<int>(Kabs[j]));
                        if (cell.delta[k] < unit) {
                            record_failure("hull cell thinner than the level cube at index " +
                                           nu.str() + ", level " + Kabs.str());
                            return;
                        }
                        rep.gamma1[k] = std::max(rep.gamma1[k], cell.delta[k] / unit);
                    }
                }
            }
        }
    });
    return rep;
}

bool shrunken_contains(const DomainDescriptor& D, std::span<const double> x,
                       const MultiIndex& l, std::span<const double> h) {
    const int d = D.dim();
    if (static_cast<int>(x.size()) != d || static_cast<int>(h.size()) != d || l.dim() != d) {
        throw std::invalid_argument("shrunken_contains: dimension mismatch");
    }
    std::array<double, kMaxDim> far{};
    for (int j = 0; j < d; ++j) {
        const auto k = static_cast<std::size_t>(j);
        far[k] = x[k] + static_cast<double>(l[j]) * h[k];
    }
    return D.contains_set(
        FlaggedBox::closed_hull(x, std::span<const double>(far.data(), x.size())));
}

}  // namespace mixext
