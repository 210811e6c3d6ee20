#include "coxdl/torus.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace coxdl {

namespace {

using i64 = long long;

i64 md(i64 a, i64 m) { return ((a % m) + m) % m; }

unsigned val_p(i64 a, unsigned p, unsigned k) {
    if (a == 0) return k;
    unsigned v = 0;
    while (a % p == 0 && v < k) {
        a /= p;
        ++v;
    }
    return v;
}

i64 inv_mod(i64 a, i64 m) {
    i64 g = m, x = 0, x1 = 1, b = md(a, m);
    while (b) {
        i64 q = g / b;
        std::tie(g, b) = std::make_pair(b, g - q * b);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    return md(x, m);
}

std::vector<unsigned> divisors(unsigned n) {
    std::vector<unsigned> r;
    for (unsigned d = 1; d <= n; ++d)
        if (n % d == 0) r.push_back(d);
    return r;
}

}  // namespace

Torus::Torus(const GroupSpec& spec, std::shared_ptr<const FieldTower> tower) : spec_(spec), tower_(std::move(tower)) {
    const GF& F = tower_->field(spec.n);
    const unsigned h = spec.h, p = spec.p;
    Q_ = F.size();
    P_ = ipow64(Q_, h - 1);
    order_ = (Q_ - 1) * P_;
    E_ = unsigned((Q_ - 1) * ipow64(p, h - 1));

    d_ = {Q_ - 1};
    WittElem g0 = witt_zero(*tower_, spec.n, h);
    g0.c[0] = 1 % F.ord();
    gens_ = {g0};

    principal_elems_.resize(P_);
    for (std::uint64_t u = 0; u < P_; ++u) {
        WittElem x = witt_one(*tower_, spec.n, h);
        std::uint64_t w = u;
        for (unsigned j = 1; j < h; ++j) {
            x.c[j] = F.from_packed(std::uint32_t(w % Q_));
            w /= Q_;
        }
        principal_elems_[u] = x;
    }
    auto pindex = [&](const WittElem& x) {
        std::uint64_t u = 0;
        for (unsigned j = h; j-- > 1;) u = u * Q_ + F.packed(x.c[j]);
        return u;
    };

    pmixed_.assign(P_, 0);
    pidx_of_.assign(P_, 0);
    if (h >= 2) {
        const unsigned k = h - 1;
        const i64 M = i64(ipow64(p, k));
        const unsigned deg = F.deg();
        std::vector<WittElem> g;
        for (unsigned j = 1; j < h; ++j)
            for (unsigned b = 0; b < deg; ++b) {
                std::vector<unsigned> e(deg, 0);
                e[b] = 1;
                WittElem x = witt_one(*tower_, spec.n, h);
                x.c[j] = F.from_coeffs(e);
                g.push_back(x);
            }
        const std::size_t N = g.size();

        // Echelon form of the relation module over Z/M.
        std::vector<std::vector<i64>> H(N, std::vector<i64>(N, 0));
        std::vector<unsigned> piv(N, k);
        auto insert = [&](std::vector<i64> r) {
            for (std::size_t i = 0; i < N; ++i) {
                r[i] = md(r[i], M);
                unsigned v = val_p(r[i], p, k);
                if (v >= k) continue;
                if (v < piv[i]) {
                    i64 unit = r[i] / i64(ipow64(p, v));
                    i64 ui = inv_mod(unit, M);
                    for (auto& x : r) x = md(x * ui, M);
                    std::swap(H[i], r);
                    unsigned old = piv[i];
                    piv[i] = v;
                    if (old >= k) return;
                }
                i64 c = r[i] / i64(ipow64(p, piv[i]));
                for (std::size_t j = 0; j < N; ++j) r[j] = md(r[j] - c * H[i][j], M);
            }
        };

        std::map<std::uint64_t, std::vector<i64>> xv;
        std::queue<std::uint64_t> bfs;
        xv[0] = std::vector<i64>(N, 0);
        bfs.push(0);
        while (!bfs.empty()) {
            std::uint64_t u = bfs.front();
            bfs.pop();
            const auto xu = xv[u];
            for (std::size_t i = 0; i < N; ++i) {
                std::uint64_t v = pindex(principal_elems_[u] * g[i]);
                std::vector<i64> xn = xu;
                xn[i] = md(xn[i] + 1, M);
                auto it = xv.find(v);
                if (it == xv.end()) {
                    xv[v] = xn;
                    bfs.push(v);
                } else {
                    std::vector<i64> rel(N);
                    for (std::size_t j = 0; j < N; ++j) rel[j] = xn[j] - it->second[j];
                    insert(rel);
                }
            }
        }
        if (xv.size() != P_) throw std::logic_error("principal unit generators do not generate");

        // Smith form over Z/M with column transforms V and V^{-1}.
        auto A = H;
        std::vector<std::vector<i64>> V(N, std::vector<i64>(N, 0)), Vi = V;
        for (std::size_t i = 0; i < N; ++i) V[i][i] = Vi[i][i] = 1;
        std::vector<i64> dd(N, M);
        for (std::size_t t = 0; t < N; ++t) {
            unsigned best = k;
            std::size_t bi = t, bj = t;
            for (std::size_t i = t; i < N; ++i)
                for (std::size_t j = t; j < N; ++j) {
                    unsigned v = val_p(A[i][j], p, k);
                    if (v < best) {
                        best = v;
                        bi = i;
                        bj = j;
                    }
                }
            if (best >= k) break;
            std::swap(A[t], A[bi]);
            for (auto& row : A) std::swap(row[t], row[bj]);
            for (auto& row : V) std::swap(row[t], row[bj]);
            std::swap(Vi[t], Vi[bj]);
            i64 pv = i64(ipow64(p, best));
            i64 ui = inv_mod(A[t][t] / pv, M);
            for (auto& x : A[t]) x = md(x * ui, M);
            for (std::size_t i = 0; i < N; ++i) {
                if (i == t || A[i][t] == 0) continue;
                i64 c = A[i][t] / pv;
                for (std::size_t j = 0; j < N; ++j) A[i][j] = md(A[i][j] - c * A[t][j], M);
            }
            for (std::size_t j = 0; j < N; ++j) {
                if (j == t || A[t][j] == 0) continue;
                i64 c = A[t][j] / pv;
                for (std::size_t i = 0; i < N; ++i) A[i][j] = md(A[i][j] - c * A[i][t], M);
                for (std::size_t i = 0; i < N; ++i) V[i][j] = md(V[i][j] - c * V[i][t], M);
                for (std::size_t l = 0; l < N; ++l) Vi[t][l] = md(Vi[t][l] + c * Vi[j][l], M);
            }
            dd[t] = pv;
        }
        std::vector<std::size_t> keep;
        for (std::size_t t = 0; t < N; ++t)
            if (dd[t] > 1) keep.push_back(t);
        std::stable_sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) { return dd[a] > dd[b]; });
        std::vector<std::uint64_t> stride(keep.size());
        std::uint64_t total = 1;
        for (std::size_t s = keep.size(); s-- > 0;) {
            stride[s] = total;
            total *= std::uint64_t(dd[keep[s]]);
        }
        if (total != P_) throw std::logic_error("Smith invariants do not multiply to the group order");
        for (std::size_t s = 0; s < keep.size(); ++s) {
            std::size_t t = keep[s];
            d_.push_back(std::uint64_t(dd[t]));
            WittElem gen = witt_one(*tower_, spec.n, h);
            for (std::size_t i = 0; i < N; ++i)
                for (i64 e = 0; e < Vi[t][i]; ++e) gen = gen * g[i];
            gens_.push_back(gen);
        }
        std::vector<char> seen(P_, 0);
        for (auto& [u, x] : xv) {
            std::uint64_t mixed = 0;
            for (std::size_t s = 0; s < keep.size(); ++s) {
                std::size_t t = keep[s];
                i64 y = 0;
                for (std::size_t i = 0; i < N; ++i) y = md(y + x[i] * V[i][t], dd[t]);
                mixed += std::uint64_t(y) * stride[s];
            }
            if (seen[mixed]) throw std::logic_error("Smith coordinates are not injective");
            seen[mixed] = 1;
            pmixed_[u] = mixed;
            pidx_of_[mixed] = u;
        }
        // Generators must sit at unit coordinate vectors.
        for (std::size_t s = 0; s < keep.size(); ++s)
            if (pmixed_[pindex(gens_[s + 1])] != stride[s]) throw std::logic_error("Smith generator mismatch");
    }

    sigma1_.resize(order_);
    for (std::uint64_t i = 0; i < order_; ++i) sigma1_[i] = index(witt_sigma(element(i), 1));
}

WittElem Torus::element(std::uint64_t idx) const {
    const GF& F = tower_->field(spec_.n);
    fe r = fe(idx % (Q_ - 1));
    WittElem x = principal_elems_[idx / (Q_ - 1)];
    for (auto& c : x.c) c = F.mul(c, r);
    return x;
}

std::uint64_t Torus::index(const WittElem& t) const {
    const GF& F = tower_->field(spec_.n);
    if (t.h() != spec_.h || t.m != spec_.n || F.is_zero(t.c[0])) throw std::domain_error("not an element of T_h");
    fe r = t.c[0], ri = F.inv(r);
    std::uint64_t u = 0;
    for (unsigned j = spec_.h; j-- > 1;) u = u * Q_ + F.packed(F.mul(t.c[j], ri));
    return r + (Q_ - 1) * u;
}

std::vector<std::uint64_t> Torus::coords(std::uint64_t idx) const {
    std::vector<std::uint64_t> y(d_.size());
    y[0] = idx % (Q_ - 1);
    std::uint64_t m = pmixed_[idx / (Q_ - 1)];
    for (std::size_t s = d_.size(); s-- > 1;) {
        y[s] = m % d_[s];
        m /= d_[s];
    }
    return y;
}

std::uint64_t Torus::from_coords(const std::vector<std::uint64_t>& y) const {
    std::uint64_t m = 0;
    for (std::size_t s = 1; s < d_.size(); ++s) m = m * d_[s] + y[s] % d_[s];
    return y[0] % (Q_ - 1) + (Q_ - 1) * pidx_of_[m];
}

std::uint64_t Torus::mul(std::uint64_t a, std::uint64_t b) const {
    auto x = coords(a), y = coords(b);
    for (std::size_t s = 0; s < x.size(); ++s) x[s] = (x[s] + y[s]) % d_[s];
    return from_coords(x);
}

std::uint64_t Torus::inv(std::uint64_t a) const {
    auto x = coords(a);
    for (std::size_t s = 0; s < x.size(); ++s) x[s] = (d_[s] - x[s]) % d_[s];
    return from_coords(x);
}

std::uint64_t Torus::sigma(std::uint64_t a, std::int64_t s) const {
    s = md(s, spec_.n);
    for (std::int64_t i = 0; i < s; ++i) a = sigma1_[a];
    return a;
}

fe Torus::residue(std::uint64_t a) const { return fe(a % (Q_ - 1)); }

unsigned Torus::level_of(std::uint64_t a) const {
    if (a % (Q_ - 1)) return 0;
    std::uint64_t u = a / (Q_ - 1);
    if (u == 0) return spec_.h;
    unsigned j = 1;
    while (u % Q_ == 0) {
        u /= Q_;
        ++j;
    }
    return j;
}

bool Torus::in_norm_kernel(std::uint64_t a, unsigned r) const {
    WittElem x = nm(element(a), spec_.n, r);
    return index(x) == identity();
}

bool TorusChar::is_trivial() const {
    return std::all_of(a.begin(), a.end(), [](std::uint64_t x) { return x == 0; });
}

std::vector<TorusChar> all_characters(const Torus& T) {
    std::vector<TorusChar> r;
    const auto& d = T.gen_orders();
    std::vector<std::uint64_t> a(d.size(), 0);
    for (;;) {
        r.push_back({&T, a});
        std::size_t i = a.size();
        while (i-- > 0) {
            if (++a[i] < d[i]) break;
            a[i] = 0;
        }
        if (i == std::size_t(-1)) break;
    }
    return r;
}

TorusChar trivial_character(const Torus& T) { return {&T, std::vector<std::uint64_t>(T.gen_orders().size(), 0)}; }

std::uint64_t char_exp(const TorusChar& th, std::uint64_t t) {
    const Torus& T = *th.torus;
    auto y = T.coords(t);
    const auto& d = T.gen_orders();
    std::uint64_t E = T.conductor(), k = 0;
    for (std::size_t s = 0; s < y.size(); ++s) k = (k + (th.a[s] * y[s] % d[s]) * (E / d[s])) % E;
    return k;
}

Cyclotomic char_eval(const TorusChar& th, std::uint64_t t) {
    return Cyclotomic::zeta_pow(th.torus->conductor(), (long)char_exp(th, t));
}

TorusChar char_mul(const TorusChar& a, const TorusChar& b) {
    TorusChar r = a;
    const auto& d = a.torus->gen_orders();
    for (std::size_t s = 0; s < d.size(); ++s) r.a[s] = (a.a[s] + b.a[s]) % d[s];
    return r;
}

TorusChar char_inv(const TorusChar& a) {
    TorusChar r = a;
    const auto& d = a.torus->gen_orders();
    for (std::size_t s = 0; s < d.size(); ++s) r.a[s] = (d[s] - a.a[s]) % d[s];
    return r;
}

TorusChar char_sigma(const TorusChar& th, std::int64_t s) {
    const Torus& T = *th.torus;
    const auto& d = T.gen_orders();
    TorusChar r = th;
    for (std::size_t j = 0; j < d.size(); ++j) {
        std::vector<std::uint64_t> e(d.size(), 0);
        e[j] = 1;
        std::uint64_t img = T.sigma(T.from_coords(e), s);
        r.a[j] = char_exp(th, img) / (T.conductor() / d[j]);
    }
    return r;
}

namespace {

bool trivial_on(const TorusChar& th, unsigned a, int norm_r) {
    const Torus& T = *th.torus;
    for (std::uint64_t i = 0; i < T.order(); ++i) {
        if (T.level_of(i) < a) continue;
        if (norm_r > 0 && !T.in_norm_kernel(i, unsigned(norm_r))) continue;
        if (char_exp(th, i) != 0) return false;
    }
    return true;
}

}  // namespace

unsigned char_level(const TorusChar& th) {
    for (unsigned a = 0; a <= th.torus->spec().h; ++a)
        if (trivial_on(th, a, 0)) return a;
    return th.torus->spec().h;
}

bool is_general_position(const TorusChar& th, bool restrict_to_U1) {
    const Torus& T = *th.torus;
    const unsigned n = T.spec().n;
    bool by_stabilizer = true;
    for (unsigned s = 1; s < n; ++s) {
        TorusChar tw = char_sigma(th, s);
        bool eq = restrict_to_U1 ? std::equal(tw.a.begin() + 1, tw.a.end(), th.a.begin() + 1) : tw == th;
        if (eq) by_stabilizer = false;
    }
    bool by_norm = true;
    for (unsigned r : divisors(n)) {
        if (r == n) continue;
        if (trivial_on(th, restrict_to_U1 ? 1 : 0, int(r))) by_norm = false;
    }
    if (by_stabilizer != by_norm) throw std::logic_error("general position criteria disagree for " + format_theta(th));
    return by_stabilizer;
}

std::vector<TorusChar> galois_orbit(const TorusChar& th) {
    std::set<TorusChar> s;
    for (unsigned i = 0; i < th.torus->spec().n; ++i) s.insert(char_sigma(th, i));
    return {s.begin(), s.end()};
}

TorusChar parse_theta(const Torus& T, const std::string& text) {
    std::string s = text;
    if (s.rfind("theta=", 0) == 0) s = s.substr(6);
    TorusChar th = trivial_character(T);
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos || item[0] != 'g') throw std::invalid_argument("bad theta item '" + item + "'");
        std::size_t g = std::stoul(item.substr(1, colon - 1));
        long long e = std::stoll(item.substr(colon + 1));
        if (g >= th.a.size()) throw std::invalid_argument("theta generator index out of range");
        long long d = (long long)T.gen_orders()[g];
        th.a[g] = std::uint64_t(((e % d) + d) % d);
    }
    return th;
}

std::string format_theta(const TorusChar& th) {
    std::string r;
    for (std::size_t i = 0; i < th.a.size(); ++i) {
        if (i) r += ",";
        r += "g" + std::to_string(i) + ":" + std::to_string(th.a[i]);
    }
    return r;
}

HoweDecomposition howe_decompose(const TorusChar& th) {
    const Torus& T = *th.torus;
    const unsigned n = T.spec().n, h = T.spec().h;
    HoweDecomposition hd;
    hd.r_of_a.resize(h);
    for (unsigned a = 0; a < h; ++a) {
        unsigned r = n;
        for (unsigned d : divisors(n))
            if (trivial_on(th, a, int(d))) {
                r = d;
                break;
            }
        hd.r_of_a[a] = r;
    }
    std::set<unsigned> steps;
    for (unsigned r : hd.r_of_a)
        if (r > 1) steps.insert(r);
    if (steps.empty()) {
        hd.t = 1;
        hd.r = {n};
        hd.levels = {char_level(th)};
        hd.d = {1};
        hd.norm_only = true;
        return hd;
    }
    hd.r.assign(steps.begin(), steps.end());
    hd.t = unsigned(hd.r.size());
    for (unsigned rk : hd.r) {
        unsigned top = 0;
        for (unsigned a = 0; a < h; ++a)
            if (hd.r_of_a[a] >= rk) top = a;
        hd.levels.push_back(top + 1);
        hd.d.push_back(n / rk);
    }
    hd.top_field_proper = hd.r.back() != n;
    return hd;
}

long r_theta(const HoweDecomposition& hd, const GroupSpec& spec) {
    // Level 0 (trivial θ) behaves like level 1 in both closed forms.
    const long n = spec.n, np = spec.nprime, h1 = std::max(1u, hd.levels.front()), ht = std::max(1u, hd.levels.back());
    long r = (np - n) + ht + (n - 2) * h1;
    for (unsigned k = 0; k + 1 < hd.t; ++k) r += long(hd.d[k]) * (long(hd.levels[k]) - long(hd.levels[k + 1]));
    return r;
}

mpz_class degree_formula(const HoweDecomposition& hd, const GroupSpec& spec) {
    const long n = spec.n, h1 = std::max(1u, hd.levels.front()), ht = std::max(1u, hd.levels.back());
    long inner = n * (h1 - 1) - (ht - 1);
    for (unsigned k = 0; k + 1 < hd.t; ++k) inner -= long(hd.d[k]) * (long(hd.levels[k]) - long(hd.levels[k + 1]));
    long twice = n * inner;
    if (twice % 2 || twice < 0) throw std::logic_error("degree formula exponent is not a natural number");
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), spec.q, unsigned(twice / 2));
    for (unsigned i = 1; i < spec.nprime; ++i) {
        mpz_class t;
        mpz_ui_pow_ui(t.get_mpz_t(), spec.q, spec.n0 * (spec.nprime - i));
        r *= t - 1;
    }
    return r;
}

}  // namespace coxdl
