#include "coxdl/witt.hpp"

#include <stdexcept>

namespace coxdl {

namespace {

void same_ring(const WittElem& a, const WittElem& b) {
    if (a.m != b.m || a.h() != b.h() || a.tower != b.tower)
        throw std::invalid_argument("Witt operands over different rings");
}

}  // namespace

WittElem witt_zero(const FieldTower& T, unsigned m, unsigned h) {
    return {&T, m, std::vector<fe>(h, T.field(m).zero())};
}

WittElem witt_one(const FieldTower& T, unsigned m, unsigned h) {
    WittElem r = witt_zero(T, m, h);
    if (h) r.c[0] = 0;
    return r;
}

WittElem witt_from(const FieldTower& T, unsigned m, std::vector<fe> coeffs) {
    return {&T, m, std::move(coeffs)};
}

WittElem operator+(const WittElem& a, const WittElem& b) {
    same_ring(a, b);
    return {a.tower, a.m, series::add(a.F(), a.c, b.c)};
}

WittElem operator-(const WittElem& a, const WittElem& b) {
    same_ring(a, b);
    return {a.tower, a.m, series::sub(a.F(), a.c, b.c)};
}

WittElem operator-(const WittElem& a) { return {a.tower, a.m, series::neg(a.F(), a.c)}; }

WittElem operator*(const WittElem& a, const WittElem& b) {
    same_ring(a, b);
    return {a.tower, a.m, series::mul(a.F(), a.c, b.c)};
}

bool is_unit(const WittElem& a) { return a.h() > 0 && !a.F().is_zero(a.c[0]); }

bool is_zero(const WittElem& a) { return series::is_zero(a.F(), a.c); }

WittElem inv(const WittElem& a) {
    if (!is_unit(a)) throw std::domain_error("inverting a non-unit Witt vector");
    const GF& F = a.F();
    return {a.tower, a.m, series::inv(F, a.c, [&](fe x) { return F.inv(x); })};
}

WittElem witt_sigma(const WittElem& x, std::int64_t i) {
    WittElem r = x;
    for (auto& v : r.c) v = x.tower->frobenius(x.m, v, i);
    return r;
}

WittElem nm(const WittElem& x, unsigned r, unsigned s) {
    if (s == 0 || r % s) throw std::domain_error("nm: s must divide r");
    WittElem acc = witt_one(*x.tower, x.m, x.h());
    for (unsigned i = 0; i < r / s; ++i) acc = acc * witt_sigma(x, std::int64_t(s) * i);
    return acc;
}

WittElem tr_additive(const WittElem& x, unsigned s) {
    WittElem acc = witt_zero(*x.tower, x.m, x.h());
    for (unsigned i = 0; i < s; ++i) acc = acc + witt_sigma(x, i);
    return acc;
}

FqElem tr_additive(const FqElem& x, unsigned s) {
    FqElem acc{x.tower, x.level, x.F().zero()};
    for (unsigned i = 0; i < s; ++i) acc = acc + frobenius(x, i);
    return acc;
}

unsigned unit_filtration_level(const WittElem& x) {
    if (!is_unit(x)) throw std::domain_error("filtration level of a non-unit");
    if (x.c[0] != 0) return 0;
    unsigned a = 1;
    while (a < x.h() && x.F().is_zero(x.c[a])) ++a;
    return a;
}

WittElem lift_mul_pi(const WittElem& x) {
    return {x.tower, x.m, series::shift(x.F(), x.c, 1, x.h() + 1)};
}

WittElem truncate(const WittElem& x, unsigned h) {
    return {x.tower, x.m, series::truncate(x.F(), x.c, h)};
}

WittElem embed(const WittElem& x, unsigned m) {
    WittElem r{x.tower, m, {}};
    for (fe v : x.c) r.c.push_back(x.tower->embed(x.m, v, m));
    return r;
}

}  // namespace coxdl
