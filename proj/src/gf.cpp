#include "coxdl/gf.hpp"

#include <numeric>
#include <string>
#include <tuple>

namespace coxdl {

namespace {

std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> r;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            r.push_back(d);
            while (n % d == 0) n /= d;
        }
    if (n > 1) r.push_back(n);
    return r;
}

}  // namespace

namespace fp_poly {

void trim(poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

static poly mod(poly a, const poly& m, unsigned p) {
    trim(a);
    std::size_t dm = m.size() - 1;
    unsigned lead_inv = 1;
    while (lead_inv * m.back() % p != 1) ++lead_inv;
    while (a.size() > dm) {
        unsigned c = a.back() * lead_inv % p;
        std::size_t sh = a.size() - 1 - dm;
        for (std::size_t i = 0; i <= dm; ++i) a[sh + i] = (a[sh + i] + (p - c) * m[i]) % p;
        trim(a);
    }
    return a;
}

poly mulmod(const poly& a, const poly& b, const poly& m, unsigned p) {
    if (a.empty() || b.empty()) return {};
    poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return mod(r, m, p);
}

poly powmod(const poly& a, std::uint64_t e, const poly& m, unsigned p) {
    poly r = mod({1}, m, p), b = mod(a, m, p);
    while (e) {
        if (e & 1) r = mulmod(r, b, m, p);
        b = mulmod(b, b, m, p);
        e >>= 1;
    }
    return r;
}

poly gcd(poly a, poly b, unsigned p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        a = mod(a, b, p);
        std::swap(a, b);
    }
    return a;
}

bool irreducible(const poly& f, unsigned p) {
    unsigned d = unsigned(f.size() - 1);
    if (d == 1) return true;
    poly x = {0, 1};
    // x^(p^d) == x mod f, and gcd(x^(p^(d/r)) - x, f) = 1 for primes r | d.
    auto frob_pow = [&](unsigned k) {
        poly y = x;
        for (unsigned i = 0; i < k; ++i) y = powmod(y, p, f, p);
        return y;
    };
    poly y = frob_pow(d);
    poly diff = y;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    if (!diff.empty()) return false;
    for (auto r : prime_factors(d)) {
        poly z = frob_pow(d / unsigned(r));
        z.resize(std::max<std::size_t>(z.size(), 2), 0);
        z[1] = (z[1] + p - 1) % p;
        trim(z);
        poly g = gcd(z, f, p);
        if (g.size() != 1) return false;
    }
    return true;
}

poly least_irreducible(unsigned p, unsigned deg) {
    std::uint64_t total = ipow(p, deg);
    for (std::uint64_t w = 0; w < total; ++w) {
        poly f(deg + 1, 0);
        f[deg] = 1;
        std::uint64_t v = w;
        for (unsigned i = 0; i < deg; ++i) {
            f[i] = unsigned(v % p);
            v /= p;
        }
        if (deg > 1 && f[0] == 0) continue;
        if (irreducible(f, p)) return f;
    }
    throw std::logic_error("no irreducible polynomial found");
}

}  // namespace fp_poly

GF::GF(unsigned p, unsigned deg) : p_(p), deg_(deg) {
    size_ = ipow(p, deg);
    if (size_ > table_cap) throw capacity_error("field of size " + std::to_string(size_) + " exceeds table cap");
    ord_ = fe(size_ - 1);
    poly_ = fp_poly::least_irreducible(p, deg);

    auto unpack = [&](std::uint32_t w) {
        fp_poly::poly c(deg, 0);
        for (unsigned i = 0; i < deg; ++i) {
            c[i] = w % p;
            w /= p;
        }
        fp_poly::trim(c);
        return c;
    };
    auto pack = [&](const fp_poly::poly& c) {
        std::uint32_t w = 0;
        for (std::size_t i = c.size(); i-- > 0;) w = w * p + c[i];
        return w;
    };

    // First primitive element in packed order.
    auto factors = prime_factors(ord_);
    fp_poly::poly gen;
    for (std::uint32_t w = 1; w < size_; ++w) {
        auto c = unpack(w);
        bool prim = true;
        for (auto r : factors)
            if (fp_poly::powmod(c, ord_ / r, poly_, p) == fp_poly::poly{1}) {
                prim = false;
                break;
            }
        if (ord_ == 1 || prim) {
            gen = c;
            break;
        }
    }

    exp_.assign(ord_, 0);
    log_.assign(size_, ord_);
    // Multiplication by gen on packed vectors: precompute gen * x^i.
    std::vector<fp_poly::poly> gx(deg);
    for (unsigned i = 0; i < deg; ++i) {
        fp_poly::poly xi(i + 1, 0);
        xi[i] = 1;
        gx[i] = fp_poly::mulmod(gen, xi, poly_, p);
        gx[i].resize(deg, 0);
    }
    std::vector<unsigned> cur(deg, 0), nxt(deg);
    cur[0] = 1;
    for (fe e = 0; e < ord_; ++e) {
        std::uint32_t w = pack(cur);
        exp_[e] = w;
        log_[w] = e;
        std::fill(nxt.begin(), nxt.end(), 0);
        for (unsigned i = 0; i < deg; ++i)
            if (cur[i])
                for (unsigned j = 0; j < deg; ++j) nxt[j] = (nxt[j] + cur[i] * gx[i][j]) % p;
        cur.swap(nxt);
    }
    zech_.assign(ord_, ord_);
    for (fe e = 0; e < ord_; ++e) {
        std::uint32_t w = exp_[e];
        std::uint32_t c0 = w % p;
        std::uint32_t w1 = w - c0 + (c0 + 1) % p;
        zech_[e] = log_[w1];
    }
}

fe GF::pow(fe a, std::int64_t e) const {
    if (a == ord_) {
        if (e == 0) return 0;
        if (e < 0) throw std::domain_error("inverse of zero");
        return ord_;
    }
    std::int64_t r = (std::int64_t(a) * (e % std::int64_t(ord_))) % std::int64_t(ord_);
    if (r < 0) r += ord_;
    return fe(r);
}

fe GF::frob_p(fe a, std::int64_t k) const {
    if (a == ord_ || ord_ == 1) return a;
    k %= std::int64_t(deg_);
    if (k < 0) k += deg_;
    std::uint64_t m = 1;
    for (std::int64_t i = 0; i < k; ++i) m = m * p_ % ord_;
    return fe(std::uint64_t(a) * m % ord_);
}

fe GF::from_int(std::int64_t v) const {
    std::int64_t r = v % std::int64_t(p_);
    if (r < 0) r += p_;
    return log_[std::uint32_t(r)];
}

std::vector<unsigned> GF::coeffs(fe a) const {
    std::vector<unsigned> c(deg_, 0);
    std::uint32_t w = packed(a);
    for (unsigned i = 0; i < deg_; ++i) {
        c[i] = w % p_;
        w /= p_;
    }
    return c;
}

fe GF::from_coeffs(const std::vector<unsigned>& c) const {
    std::uint32_t w = 0;
    for (std::size_t i = std::min<std::size_t>(c.size(), deg_); i-- > 0;) w = w * p_ + c[i] % p_;
    return log_[w];
}

bool GF::in_subfield(fe a, unsigned d) const {
    if (deg_ % d) return false;
    if (a == ord_) return true;
    std::uint64_t c = ord_ / (ipow(p_, d) - 1);
    return a % c == 0;
}

unsigned GF::trace_prime(fe a) const {
    fe s = zero();
    for (unsigned i = 0; i < deg_; ++i) s = add(s, frob_p(a, i));
    return packed(s);
}

FieldTower::FieldTower(unsigned p, unsigned f, const std::set<unsigned>& degrees) : p_(p), f_(f) {
    if (degrees.empty()) throw std::invalid_argument("empty degree set");
    q_ = ipow(p, f);
    top_ = 1;
    for (auto d : degrees) {
        if (d == 0) throw std::invalid_argument("degree 0");
        top_ = std::lcm(top_, d);
    }
    if (f * top_ > 64 || ipow(p, f * top_) > GF::table_cap)
        throw capacity_error("tower top F_{" + std::to_string(q_) + "^" + std::to_string(top_) + "} exceeds table cap");
    for (unsigned d = 1; d <= top_; ++d)
        if (top_ % d == 0) degs_.insert(d);
    for (auto d : degs_) fields_[d] = std::make_unique<GF>(p, f * d);

    const GF& T = *fields_[top_];
    for (auto d : degs_) {
        const GF& F = *fields_[d];
        std::uint64_t c = T.ord() / F.ord();
        // A root of F's defining polynomial inside the order-(q^d - 1) subgroup.
        const auto& poly = F.poly();
        auto eval = [&](fe r) {
            fe s = T.zero();
            for (std::size_t i = poly.size(); i-- > 0;) s = T.add(T.mul(s, r), T.from_int(poly[i]));
            return s;
        };
        fe root = T.zero();
        if (F.deg() == 1) {
            root = T.zero();  // unused; prime field maps identically
        } else {
            for (std::uint64_t e = 0; e < F.ord(); ++e) {
                fe r = fe(e * c);
                if (T.is_zero(eval(r))) {
                    root = r;
                    break;
                }
            }
        }
        // Image of F's generator.
        fe g_img;
        if (F.ord() == 1) {
            g_img = 0;
        } else if (F.deg() == 1) {
            g_img = T.from_int(F.packed(1 % F.ord()));
        } else {
            auto cf = F.coeffs(1 % F.ord());
            fe s = T.zero();
            for (std::size_t i = cf.size(); i-- > 0;) s = T.add(T.mul(s, root), T.from_int(cf[i]));
            g_img = s;
        }
        twist_[d] = F.ord() == 1 ? 0 : g_img / c;
    }
}

const GF& FieldTower::field(unsigned m) const {
    auto it = fields_.find(m);
    if (it == fields_.end()) throw std::domain_error("degree " + std::to_string(m) + " not in tower");
    return *it->second;
}

fe FieldTower::frobenius(unsigned m, fe x, std::int64_t i) const {
    return field(m).frob_p(x, i * std::int64_t(f_));
}

fe FieldTower::embed(unsigned from, fe x, unsigned to) const {
    if (to % from) throw std::domain_error("embedding target is not a multiple of the source degree");
    const GF& A = field(from);
    const GF& B = field(to);
    if (A.is_zero(x)) return B.zero();
    if (from == to) return x;
    const GF& T = field(top_);
    std::uint64_t cA = T.ord() / A.ord(), cB = T.ord() / B.ord();
    std::uint64_t e_top = (std::uint64_t(x) * twist_.at(from) % A.ord()) * cA % T.ord();
    // e_top = cB * j, invert B's twist modulo B.ord().
    std::uint64_t j = e_top / cB;
    std::int64_t u = twist_.at(to), mB = std::int64_t(B.ord());
    // modular inverse of u mod mB
    std::int64_t a = u % mB, b = mB, x0 = 1, x1 = 0;
    while (b) {
        std::int64_t qq = a / b;
        std::tie(a, b) = std::make_pair(b, a - qq * b);
        std::tie(x0, x1) = std::make_pair(x1, x0 - qq * x1);
    }
    std::int64_t inv = ((x0 % mB) + mB) % mB;
    return fe((__int128)j * inv % mB);
}

std::vector<fe> FieldTower::enumerate(unsigned m) const {
    const GF& F = field(m);
    std::vector<fe> r;
    r.reserve(F.size());
    r.push_back(F.zero());
    for (fe e = 0; e < F.ord(); ++e) r.push_back(e);
    return r;
}

std::shared_ptr<FieldTower> build_tower(unsigned p, unsigned f, const std::set<unsigned>& degrees) {
    return std::make_shared<FieldTower>(p, f, degrees);
}

FqElem frobenius(const FqElem& x, std::int64_t i) {
    return {x.tower, x.level, x.tower->frobenius(x.level, x.v, i)};
}

FqElem embed(const FqElem& x, unsigned m) {
    return {x.tower, m, x.tower->embed(x.level, x.v, m)};
}

std::vector<FqElem> enumerate_field(const FieldTower& T, unsigned m) {
    std::vector<FqElem> r;
    for (fe v : T.enumerate(m)) r.push_back({&T, m, v});
    return r;
}

}  // namespace coxdl
