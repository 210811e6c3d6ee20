#include "coxdl/gf.hpp"

namespace coxdl {

namespace {

using fpoly = std::vector<fe>;

void trim(const GF& F, fpoly& a) {
    while (!a.empty() && F.is_zero(a.back())) a.pop_back();
}

fpoly pmod(const GF& F, fpoly a, const fpoly& m) {
    trim(F, a);
    std::size_t dm = m.size() - 1;
    fe li = F.inv(m.back());
    while (a.size() > dm) {
        fe c = F.mul(a.back(), li);
        std::size_t sh = a.size() - 1 - dm;
        for (std::size_t i = 0; i <= dm; ++i) a[sh + i] = F.sub(a[sh + i], F.mul(c, m[i]));
        trim(F, a);
    }
    return a;
}

fpoly pmulmod(const GF& F, const fpoly& a, const fpoly& b, const fpoly& m) {
    if (a.empty() || b.empty()) return {};
    fpoly r(a.size() + b.size() - 1, F.zero());
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!F.is_zero(a[i]))
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    return pmod(F, r, m);
}

fpoly ppowmod(const GF& F, fpoly a, std::uint64_t e, const fpoly& m) {
    fpoly r = pmod(F, {F.one()}, m);
    a = pmod(F, a, m);
    while (e) {
        if (e & 1) r = pmulmod(F, r, a, m);
        a = pmulmod(F, a, a, m);
        e >>= 1;
    }
    return r;
}

fpoly pgcd(const GF& F, fpoly a, fpoly b) {
    trim(F, a);
    trim(F, b);
    while (!b.empty()) {
        a = pmod(F, a, b);
        std::swap(a, b);
    }
    return a;
}

// Apply the F-linear map given by columns `cols` (images of y^j) to a.
fpoly apply_cols(const GF& F, const std::vector<fpoly>& cols, const fpoly& a, unsigned k) {
    fpoly r(k, F.zero());
    for (std::size_t j = 0; j < a.size(); ++j)
        if (!F.is_zero(a[j]))
            for (std::size_t i = 0; i < cols[j].size(); ++i) r[i] = F.add(r[i], F.mul(a[j], cols[j][i]));
    return r;
}

std::vector<fpoly> power_columns(const GF& F, const fpoly& base, const fpoly& mu, unsigned k) {
    std::vector<fpoly> cols(k);
    fpoly cur = {F.one()};
    for (unsigned j = 0; j < k; ++j) {
        cur.resize(k, F.zero());
        cols[j] = cur;
        cur = pmulmod(F, cur, base, mu);
    }
    return cols;
}

bool rel_irreducible(const GF& F, const fpoly& mu, unsigned k) {
    if (k == 1) return true;
    fpoly y = {F.zero(), F.one()};
    fpoly yQ = ppowmod(F, y, F.size(), mu);
    auto M = power_columns(F, yQ, mu, k);
    fpoly yv = y;
    yv.resize(k, F.zero());
    std::vector<fpoly> iter(k + 1);
    iter[0] = yv;
    for (unsigned j = 1; j <= k; ++j) iter[j] = apply_cols(F, M, iter[j - 1], k);
    if (iter[k] != yv) return false;
    for (unsigned r = 2; r <= k; ++r) {
        if (k % r) continue;
        bool prime = true;
        for (unsigned d = 2; d * d <= r; ++d)
            if (r % d == 0) prime = false;
        if (!prime) continue;
        fpoly z = iter[k / r];
        z[1] = F.sub(z[1], F.one());
        if (pgcd(F, z, mu).size() != 1) return false;
    }
    return true;
}

}  // namespace

ExtField::ExtField(const GF& base, unsigned k, unsigned qpow) : F_(&base), k_(k), qpow_(qpow) {
    const GF& F = base;
    if (k == 0) throw std::invalid_argument("extension degree 0");
    // Lex-least monic irreducible; F elements ordered as (0, g^0, g^1, ...).
    std::vector<std::uint64_t> idx(k, 0);
    auto to_fe = [&](std::uint64_t i) { return i == 0 ? F.zero() : fe(i - 1); };
    for (;;) {
        fpoly mu(k + 1);
        for (unsigned i = 0; i < k; ++i) mu[i] = to_fe(idx[i]);
        mu[k] = F.one();
        if ((k == 1 || !F.is_zero(mu[0])) && rel_irreducible(F, mu, k)) {
            mu_ = mu;
            break;
        }
        unsigned i = 0;
        while (i < k && ++idx[i] == F.size()) idx[i++] = 0;
        if (i == k) throw std::logic_error("no irreducible relative polynomial");
    }
    fpoly y = {F.zero(), F.one()};
    std::uint64_t q = 1;
    for (unsigned i = 0; i < qpow; ++i) q *= F.p();
    fpoly yq = k == 1 ? fpoly{F.zero()} : ppowmod(F, y, q, mu_);
    if (k == 1) yq = {F.one()};
    ypow_ = power_columns(F, yq, mu_, k);
    fpoly yF = k == 1 ? fpoly{F.one()} : ppowmod(F, y, F.size(), mu_);
    frobF_ = power_columns(F, yF, mu_, k);
}

bool ExtField::is_zero(const elem& a) const {
    for (fe c : a)
        if (!F_->is_zero(c)) return false;
    return true;
}

ExtField::elem ExtField::add(const elem& a, const elem& b) const {
    elem r(k_);
    for (unsigned i = 0; i < k_; ++i) r[i] = F_->add(a[i], b[i]);
    return r;
}

ExtField::elem ExtField::sub(const elem& a, const elem& b) const {
    elem r(k_);
    for (unsigned i = 0; i < k_; ++i) r[i] = F_->sub(a[i], b[i]);
    return r;
}

ExtField::elem ExtField::neg(const elem& a) const {
    elem r(k_);
    for (unsigned i = 0; i < k_; ++i) r[i] = F_->neg(a[i]);
    return r;
}

ExtField::elem ExtField::reduce(std::vector<fe>& c) const {
    for (std::size_t i = c.size(); i-- > k_;) {
        fe t = c[i];
        if (F_->is_zero(t)) continue;
        for (unsigned j = 0; j < k_; ++j) c[i - k_ + j] = F_->sub(c[i - k_ + j], F_->mul(t, mu_[j]));
    }
    c.resize(k_);
    return c;
}

ExtField::elem ExtField::mul(const elem& a, const elem& b) const {
    std::vector<fe> c(2 * k_ - 1, F_->zero());
    for (unsigned i = 0; i < k_; ++i) {
        if (F_->is_zero(a[i])) continue;
        for (unsigned j = 0; j < k_; ++j)
            if (!F_->is_zero(b[j])) c[i + j] = F_->add(c[i + j], F_->mul(a[i], b[j]));
    }
    return reduce(c);
}

ExtField::elem ExtField::smul(fe s, const elem& a) const {
    elem r(k_);
    for (unsigned i = 0; i < k_; ++i) r[i] = F_->mul(s, a[i]);
    return r;
}

ExtField::elem ExtField::frob(const elem& a, unsigned times) const {
    elem cur = a;
    for (unsigned t = 0; t < times; ++t) {
        elem r = zero();
        for (unsigned j = 0; j < k_; ++j) {
            if (F_->is_zero(cur[j])) continue;
            fe c = F_->frob_p(cur[j], qpow_);
            for (unsigned i = 0; i < k_; ++i) r[i] = F_->add(r[i], F_->mul(c, ypow_[j][i]));
        }
        cur = std::move(r);
    }
    return cur;
}

bool ExtField::in_base(const elem& a) const {
    for (unsigned i = 1; i < k_; ++i)
        if (!F_->is_zero(a[i])) return false;
    return true;
}

}  // namespace coxdl
