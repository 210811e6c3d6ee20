#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <vector>

namespace coxdl {

struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Field elements are stored as discrete logarithms to a fixed primitive
// element; zero is the sentinel value `ord()`.
using fe = std::uint32_t;

// F_{p^deg} with Zech tables. The defining polynomial is the monic
// irreducible of degree `deg` whose coefficient word (c_{deg-1},...,c_0) is
// lexicographically least; the generator is the first primitive element in
// packed-integer order.
class GF {
public:
    static constexpr std::uint64_t table_cap = 1u << 20;

    using elem = fe;

    GF(unsigned p, unsigned deg);

    unsigned p() const { return p_; }
    unsigned deg() const { return deg_; }
    std::uint64_t size() const { return size_; }
    fe ord() const { return ord_; }

    fe zero() const { return ord_; }
    fe one() const { return 0; }
    bool is_zero(fe a) const { return a == ord_; }

    fe add(fe a, fe b) const {
        if (a == ord_) return b;
        if (b == ord_) return a;
        std::uint32_t d = b >= a ? b - a : b + ord_ - a;
        fe z = zech_[d];
        if (z == ord_) return ord_;
        std::uint64_t s = std::uint64_t(a) + z;
        return fe(s >= ord_ ? s - ord_ : s);
    }
    fe neg(fe a) const {
        if (a == ord_ || p_ == 2) return a;
        std::uint64_t s = std::uint64_t(a) + ord_ / 2;
        return fe(s >= ord_ ? s - ord_ : s);
    }
    fe sub(fe a, fe b) const { return add(a, neg(b)); }
    fe mul(fe a, fe b) const {
        if (a == ord_ || b == ord_) return ord_;
        std::uint64_t s = std::uint64_t(a) + b;
        return fe(s >= ord_ ? s - ord_ : s);
    }
    fe inv(fe a) const {
        if (a == ord_) throw std::domain_error("inverse of zero");
        return a == 0 ? 0 : ord_ - a;
    }
    fe div(fe a, fe b) const { return mul(a, inv(b)); }
    fe pow(fe a, std::int64_t e) const;
    // a^(p^k), k may be negative.
    fe frob_p(fe a, std::int64_t k) const;

    fe from_int(std::int64_t v) const;          // image of an integer
    fe from_packed(std::uint32_t w) const { return log_[w]; }
    std::uint32_t packed(fe a) const { return a == ord_ ? 0 : exp_[a]; }
    std::vector<unsigned> coeffs(fe a) const;   // low to high, length deg
    fe from_coeffs(const std::vector<unsigned>& c) const;
    const std::vector<unsigned>& poly() const { return poly_; }
    // Is `a` in the subfield F_{p^d}?
    bool in_subfield(fe a, unsigned d) const;
    // Trace to the prime field, as an integer in [0, p).
    unsigned trace_prime(fe a) const;

private:
    unsigned p_, deg_;
    std::uint64_t size_;
    fe ord_;
    std::vector<unsigned> poly_;
    std::vector<fe> zech_;
    std::vector<std::uint32_t> exp_;
    std::vector<fe> log_;
};

// Polynomials over F_p, coefficient lists low to high.
namespace fp_poly {
using poly = std::vector<unsigned>;
void trim(poly& a);
poly mulmod(const poly& a, const poly& b, const poly& m, unsigned p);
poly powmod(const poly& a, std::uint64_t e, const poly& m, unsigned p);
poly gcd(poly a, poly b, unsigned p);
bool irreducible(const poly& f, unsigned p);
poly least_irreducible(unsigned p, unsigned deg);
}  // namespace fp_poly

// Compatible tower of F_{q^m}, q = p^f, over a divisor/lcm closed set of m.
// All levels embed into the top level; embed_{a->b} is defined through the
// top field, which makes the system compatible by construction.
class FieldTower {
public:
    FieldTower(unsigned p, unsigned f, const std::set<unsigned>& degrees);

    unsigned p() const { return p_; }
    unsigned f() const { return f_; }
    std::uint64_t q() const { return q_; }
    unsigned top() const { return top_; }
    const std::set<unsigned>& degrees() const { return degs_; }
    bool supports(unsigned m) const { return degs_.count(m) != 0; }
    const GF& field(unsigned m) const;

    fe frobenius(unsigned m, fe x, std::int64_t i) const;   // x^(q^i)
    fe embed(unsigned from, fe x, unsigned to) const;
    std::vector<fe> enumerate(unsigned m) const;

private:
    unsigned p_, f_, top_;
    std::uint64_t q_;
    std::set<unsigned> degs_;
    std::map<unsigned, std::unique_ptr<GF>> fields_;
    std::map<unsigned, std::uint64_t> twist_;   // image of g_m is g_top^(c_m * twist)
};

std::shared_ptr<FieldTower> build_tower(unsigned p, unsigned f, const std::set<unsigned>& degrees);

// Light value wrapper used by the public API and tests.
struct FqElem {
    const FieldTower* tower = nullptr;
    unsigned level = 1;
    fe v = 0;
    const GF& F() const { return tower->field(level); }
    FqElem operator+(const FqElem& o) const { return {tower, level, F().add(v, o.v)}; }
    FqElem operator-(const FqElem& o) const { return {tower, level, F().sub(v, o.v)}; }
    FqElem operator*(const FqElem& o) const { return {tower, level, F().mul(v, o.v)}; }
    bool operator==(const FqElem& o) const { return level == o.level && v == o.v; }
    bool operator!=(const FqElem& o) const { return !(*this == o); }
    bool is_zero() const { return F().is_zero(v); }
};

FqElem frobenius(const FqElem& x, std::int64_t i);
FqElem embed(const FqElem& x, unsigned m);
std::vector<FqElem> enumerate_field(const FieldTower& T, unsigned m);

// Degree-k extension E = F[y]/(mu) of a table field F, elements as
// coefficient vectors over F. Used where F_{q^n}-linear structure matters
// and the absolute field is beyond table size.
class ExtField {
public:
    using elem = std::vector<fe>;
    ExtField(const GF& base, unsigned k, unsigned qpow);   // qpow: log_p q

    const GF& base() const { return *F_; }
    unsigned k() const { return k_; }
    elem zero() const { return elem(k_, F_->zero()); }
    elem one() const { elem r = zero(); r[0] = F_->one(); return r; }
    elem scalar(fe a) const { elem r = zero(); r[0] = a; return r; }
    bool is_zero(const elem& a) const;
    elem add(const elem& a, const elem& b) const;
    elem sub(const elem& a, const elem& b) const;
    elem neg(const elem& a) const;
    elem mul(const elem& a, const elem& b) const;
    elem smul(fe c, const elem& a) const;
    // q-power Frobenius, applied i >= 0 times.
    elem frob(const elem& a, unsigned i = 1) const;
    // Is `a` in the base field?
    bool in_base(const elem& a) const;
    // x -> x^{|F|} as an F-linear k x k matrix (column j = image of y^j).
    const std::vector<elem>& base_frobenius_matrix() const { return frobF_; }

private:
    const GF* F_;
    unsigned k_, qpow_;
    std::vector<fe> mu_;               // monic, low to high, length k+1
    std::vector<elem> ypow_;           // (y^q)^j
    std::vector<elem> frobF_;          // (y^{|F|})^j
    elem reduce(std::vector<fe>& c) const;
};

}  // namespace coxdl
