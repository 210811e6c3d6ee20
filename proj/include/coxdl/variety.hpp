#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <vector>

#include "coxdl/grp.hpp"

namespace coxdl {

// Coordinate model of X_h. Coordinate i (0-based) carries precision h when
// i ≡ 0 mod n0 and h-1 otherwise; column i of g(x) is
// ϖ^{-⌊i k0/n0⌋} (bσ)^i(x) with b block diagonal in c^{k0},
// c(y_1..y_{n0}) = (ϖ y_{n0}, y_1, ..., y_{n0-1}).
//
// Points lie on X_h when det g(x) is a unit with σ(det) = s·det
// coefficientwise, s = (-1)^{n-1+(n0-1)κ}. For s = -1 this is the coset
// δ0·W_h^×(F_q) with δ0^{q-1} = -1 rather than W_h^×(F_q) itself.
struct PointModel {
    GroupSpec spec;
    std::vector<unsigned> prec;
    std::vector<unsigned> offset;
    unsigned D = 0;
    int sign = 1;

    explicit PointModel(const GroupSpec& s);
    unsigned work_prec() const { return spec.h + spec.n; }
};

template <class R>
using WVec = std::vector<series::vec<R>>;
template <class R>
using WMat = std::vector<std::vector<series::vec<R>>>;

namespace detail {

// b applied to a padded vector (all coordinates at working precision).
template <class R>
WVec<R> apply_b(const PointModel& M, const R& F, const WVec<R>& v) {
    const unsigned n0 = M.spec.n0, H = M.work_prec();
    WVec<R> cur = v;
    for (unsigned rep = 0; rep < M.spec.k0; ++rep) {
        WVec<R> nxt(cur.size());
        for (unsigned blk = 0; blk < M.spec.nprime; ++blk) {
            unsigned base = blk * n0;
            nxt[base] = series::shift(F, cur[base + n0 - 1], 1, H);
            for (unsigned i = 1; i < n0; ++i) nxt[base + i] = cur[base + i - 1];
        }
        cur = std::move(nxt);
    }
    return cur;
}

template <class R>
series::vec<R> shift_down(const R& F, const series::vec<R>& a, unsigned k) {
    series::vec<R> r = series::zero(F, unsigned(a.size()));
    for (std::size_t i = k; i < a.size(); ++i) r[i - k] = a[i];
    return r;
}

}  // namespace detail

// Pad each coordinate to working precision.
template <class R>
WVec<R> pad(const PointModel& M, const R& F, const WVec<R>& x) {
    WVec<R> r;
    for (auto& c : x) r.push_back(series::truncate(F, c, M.work_prec()));
    return r;
}

template <class R, class Sig>
WMat<R> column_matrix_t(const PointModel& M, const R& F, const WVec<R>& x, Sig sig) {
    const unsigned n = M.spec.n, h = M.spec.h;
    WMat<R> g(n, std::vector<series::vec<R>>(n));
    WVec<R> v = pad(M, F, x);
    for (unsigned i = 0; i < n; ++i) {
        unsigned sh = (i * M.spec.k0) / M.spec.n0;
        for (unsigned r = 0; r < n; ++r) g[r][i] = series::truncate(F, detail::shift_down(F, v[r], sh), h);
        if (i + 1 == n) break;
        for (auto& c : v)
            for (auto& e : c) e = sig(e);
        v = detail::apply_b(M, F, v);
    }
    return g;
}

template <class R>
series::vec<R> det_t(const R& F, const WMat<R>& m) {
    const std::size_t n = m.size();
    const unsigned h = unsigned(m[0][0].size());
    std::vector<unsigned> perm(n);
    for (unsigned i = 0; i < n; ++i) perm[i] = i;
    series::vec<R> acc = series::zero(F, h);
    do {
        int inv = 0;
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = i + 1; j < n; ++j) inv += perm[i] > perm[j];
        series::vec<R> t = m[0][perm[0]];
        for (unsigned i = 1; i < n; ++i) t = series::mul(F, t, m[i][perm[i]]);
        acc = inv % 2 ? series::sub(F, acc, t) : series::add(F, acc, t);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

// Points over F_{q^m} of a tower.
struct PointVector {
    const FieldTower* tower = nullptr;
    unsigned m = 1;
    std::vector<WittElem> x;
};

PointVector make_point(const PointModel& M, const FieldTower& T, unsigned m, const std::vector<std::vector<fe>>& coeffs);
std::vector<std::vector<WittElem>> column_matrix(const PointModel& M, const PointVector& x);
WittElem column_det(const PointModel& M, const PointVector& x);
bool in_Xh(const PointModel& M, const PointVector& x);
// β_0 and a_1..a_{n-1}, the latter as Witt vectors whose leading
// ⌊ik0/n0⌋ ... coefficients have been divided out; valid to precision h - ⌊ik0/n0⌋.
std::vector<WittElem> a_coeffs(const PointModel& M, const PointVector& x);
bool in_closed_stratum(const PointModel& M, const PointVector& x);

PointVector act_group(const PointModel& M, const Group& G, const Group::Elt& g, const PointVector& x);
PointVector act_torus(const PointModel& M, const Torus& T, std::uint64_t t, const PointVector& x);
PointVector act_frobenius(const PointVector& x, std::int64_t s);

// Fixed points of x ↦ g·σ^s(x)·t on the coefficient space. The set is an
// F_{q^s}-space of dimension D realized inside E^D for the degree-k
// extension E of F_{q^s} on which the fixed points are defined.
struct FixedSpace {
    std::shared_ptr<ExtField> E;
    unsigned k = 1;
    std::vector<std::vector<ExtField::elem>> basis;   // each: D coefficients
    std::vector<std::vector<fe>> A;                     // D×D over F_{q^s}
};

FixedSpace solve_twisted_fixed(const PointModel& M, const Group& G, const Group::Elt& g, const Torus& T,
                               std::uint64_t t, unsigned s, bool stratum_only = false);

// Linear map of x ↦ g·x·t on coefficient coordinates over F_{q^n}.
std::vector<std::vector<fe>> action_matrix(const PointModel& M, const Group& G, const Group::Elt& g, const Torus& T,
                                           std::uint64_t t);

struct CountOptions {
    std::uint64_t cap = std::uint64_t(1) << 28;
    bool prune = true;
};

std::uint64_t count_S(const PointModel& M, const Group& G, const Group::Elt& g, const Torus& T, std::uint64_t t,
                      const CountOptions& opt = {});
// #X_{h,n'}(F_{q^m}) by direct enumeration.
std::uint64_t count_points(const PointModel& M, const FieldTower& tower, unsigned m, std::uint64_t cap = 1u << 24);

// S-counts per (class, t), t over all torus indices.
struct SCountTable {
    GroupSpec spec;
    std::size_t classes = 0;
    std::uint64_t tcount = 0;
    std::vector<std::uint64_t> counts;   // class-major
    std::uint64_t at(std::size_t cls, std::uint64_t t) const { return counts[cls * tcount + t]; }
};

}  // namespace coxdl
