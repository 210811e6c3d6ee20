#pragma once

#include <vector>

#include "coxdl/gf.hpp"

namespace coxdl {

// Truncated power series sum c[j] ϖ^j over a field policy R (GF or
// ExtField). Length of the vector is the precision.
namespace series {

template <class R>
using vec = std::vector<typename R::elem>;

template <class R>
vec<R> zero(const R& F, unsigned h) { return vec<R>(h, F.zero()); }

template <class R>
vec<R> one(const R& F, unsigned h) {
    vec<R> r = zero(F, h);
    if (h) r[0] = F.one();
    return r;
}

template <class R>
vec<R> add(const R& F, const vec<R>& a, const vec<R>& b) {
    vec<R> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.add(a[i], b[i]);
    return r;
}

template <class R>
vec<R> sub(const R& F, const vec<R>& a, const vec<R>& b) {
    vec<R> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.sub(a[i], b[i]);
    return r;
}

template <class R>
vec<R> neg(const R& F, const vec<R>& a) {
    vec<R> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.neg(a[i]);
    return r;
}

template <class R>
vec<R> mul(const R& F, const vec<R>& a, const vec<R>& b) {
    std::size_t h = a.size();
    vec<R> r = zero(F, unsigned(h));
    for (std::size_t i = 0; i < h; ++i) {
        if (F.is_zero(a[i])) continue;
        for (std::size_t j = 0; i + j < h; ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    return r;
}

template <class R>
bool is_zero(const R& F, const vec<R>& a) {
    for (auto& c : a)
        if (!F.is_zero(c)) return false;
    return true;
}

// Inverse of a unit in a field where the leading coefficient can be
// inverted by `inv0`.
template <class R, class Inv>
vec<R> inv(const R& F, const vec<R>& a, Inv inv0) {
    std::size_t h = a.size();
    vec<R> r = zero(F, unsigned(h));
    auto a0i = inv0(a[0]);
    r[0] = a0i;
    for (std::size_t k = 1; k < h; ++k) {
        auto s = F.zero();
        for (std::size_t j = 1; j <= k; ++j) s = F.add(s, F.mul(a[j], r[k - j]));
        r[k] = F.neg(F.mul(s, a0i));
    }
    return r;
}

// Multiply by ϖ^k and keep precision h.
template <class R>
vec<R> shift(const R& F, const vec<R>& a, unsigned k, unsigned h) {
    vec<R> r = zero(F, h);
    for (std::size_t i = 0; i < a.size() && i + k < h; ++i) r[i + k] = a[i];
    return r;
}

template <class R>
vec<R> truncate(const R& F, vec<R> a, unsigned h) {
    a.resize(h, F.zero());
    return a;
}

}  // namespace series

// Element of W_h(F_{q^m}) = F_{q^m}[ϖ]/(ϖ^h).
struct WittElem {
    const FieldTower* tower = nullptr;
    unsigned m = 1;
    std::vector<fe> c;

    unsigned h() const { return unsigned(c.size()); }
    const GF& F() const { return tower->field(m); }
    bool operator==(const WittElem& o) const { return m == o.m && c == o.c; }
    bool operator!=(const WittElem& o) const { return !(*this == o); }
};

WittElem witt_zero(const FieldTower& T, unsigned m, unsigned h);
WittElem witt_one(const FieldTower& T, unsigned m, unsigned h);
WittElem witt_from(const FieldTower& T, unsigned m, std::vector<fe> coeffs);

WittElem operator+(const WittElem& a, const WittElem& b);
WittElem operator-(const WittElem& a, const WittElem& b);
WittElem operator-(const WittElem& a);
WittElem operator*(const WittElem& a, const WittElem& b);
bool is_unit(const WittElem& a);
WittElem inv(const WittElem& a);
bool is_zero(const WittElem& a);

WittElem witt_sigma(const WittElem& x, std::int64_t i);
// prod_{i < r/s} σ^{si}(x)
WittElem nm(const WittElem& x, unsigned r, unsigned s);
// sum_{i < s} σ^i(x)
WittElem tr_additive(const WittElem& x, unsigned s);
FqElem tr_additive(const FqElem& x, unsigned s);
// Largest a with x ≡ 1 mod ϖ^a; h for x = 1.
unsigned unit_filtration_level(const WittElem& x);

// ϖ·x for x of precision h-1, read in precision h.
WittElem lift_mul_pi(const WittElem& x);
WittElem truncate(const WittElem& x, unsigned h);
WittElem embed(const WittElem& x, unsigned m);

}  // namespace coxdl
