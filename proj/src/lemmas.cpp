#include "coxdl/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace coxdl {

namespace {

struct PF {
    unsigned p, f;
};

PF split_q(unsigned q) {
    for (unsigned p = 2; p <= q; ++p)
        if (q % p == 0) {
            unsigned f = 0, r = q;
            while (r % p == 0) r /= p, ++f;
            if (r != 1) throw std::invalid_argument("q must be a prime power");
            return {p, f};
        }
    throw std::invalid_argument("q must be a prime power");
}

std::string tuple_str(std::initializer_list<long> v) {
    std::ostringstream o;
    o << '(';
    bool first = true;
    for (long x : v) o << (first ? "" : ",") << x, first = false;
    o << ')';
    return o.str();
}

std::string key_of(const std::vector<fe>& c) {
    return std::string(reinterpret_cast<const char*>(c.data()), c.size() * sizeof(fe));
}

// All c_0 = 1 units of precision h over F_{q^m}.
template <class Fn>
void for_each_U1(const FieldTower& T, unsigned m, unsigned h, Fn fn) {
    auto elems = T.enumerate(m);
    std::vector<std::size_t> idx(h > 0 ? h - 1 : 0, 0);
    while (true) {
        std::vector<fe> c(h, T.field(m).zero());
        c[0] = T.field(m).one();
        for (unsigned j = 1; j < h; ++j) c[j] = elems[idx[j - 1]];
        fn(witt_from(T, m, c));
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == elems.size()) idx[k++] = 0;
        if (k == idx.size()) break;
    }
}

bool is_rational(const WittElem& x) {
    for (fe c : x.c)
        if (!x.F().in_subfield(c, x.tower->f())) return false;
    return true;
}

std::string witt_str(const WittElem& x) {
    std::ostringstream o;
    o << '[';
    for (std::size_t i = 0; i < x.c.size(); ++i) o << (i ? " " : "") << x.F().packed(x.c[i]);
    o << ']';
    return o.str();
}

}  // namespace

// ---------------------------------------------------------------- norm image

LemmaVerdict verify_norm_image(unsigned q, unsigned n, unsigned m, unsigned h) {
    LemmaVerdict v;
    v.id = "norm-image";
    v.params = tuple_str({long(q), long(n), long(m), long(h)});
    auto [p, f] = split_q(q);
    if (n % p == 0) {
        v.skipped = true, v.pass = true;
        v.reason = "(n,p) != 1";
        return v;
    }
    if (m < 1 || m >= n || h < 2) {
        v.skipped = true, v.pass = true;
        v.reason = "need 1 <= m <= n-1 and h >= 2";
        return v;
    }
    if (std::pow(double(q), double(n * (h - 1))) > double(1u << 22)) throw capacity_error("norm-image: U^1/U^h too large");
    auto T = build_tower(p, f, {n});
    const unsigned g = std::gcd(n, m);

    std::set<std::string> image, kernel_N;
    std::size_t ker_alpha = 0, source = 0, rational = 0;
    for_each_U1(*T, n, h, [&](const WittElem& y) {
        WittElem N = nm(y, n, g);
        if (N == witt_one(*T, n, h)) kernel_N.insert(key_of(y.c));
        if (is_rational(y)) ++rational;
        if (!is_rational(N)) return;
        ++source;
        WittElem a = witt_sigma(y, std::int64_t(n - m)) * inv(y);
        image.insert(key_of(a.c));
        if (a == witt_one(*T, n, h)) ++ker_alpha;
    });
    v.pass = image == kernel_N && ker_alpha == rational;
    std::ostringstream d;
    d << "#source=" << source << " #im=" << image.size() << " #kerN=" << kernel_N.size() << " #ker(alpha)=" << ker_alpha
      << " #U_K^1/U_K^h=" << rational;
    v.detail = d.str();
    if (!v.pass) {
        for (auto& k : image)
            if (!kernel_N.count(k)) { v.witness = "image element outside ker N"; break; }
        if (v.witness.empty()) v.witness = "ker N element not hit, or ker(alpha) size mismatch";
    }
    return v;
}

// ----------------------------------------------------------------- R_h fibers

LemmaVerdict verify_Rh_fibers(unsigned q, unsigned r, unsigned s, unsigned h, unsigned m_max) {
    LemmaVerdict v;
    v.id = "rh-fibers";
    v.params = tuple_str({long(q), long(r), long(s), long(h), long(m_max)});
    auto [p, f] = split_q(q);
    if (std::gcd(r, s) != 1 || !(r > s && s >= 1)) {
        v.skipped = true, v.pass = true;
        v.reason = "need gcd(r,s) = 1 and r > s >= 1";
        return v;
    }
    const bool gated = p <= s;
    v.pass = true;
    std::ostringstream d;
    for (unsigned m = 1; m <= m_max; ++m) {
        auto T = build_tower(p, f, {m});
        const GF& F = T->field(m);
        const std::uint64_t qm = F.size();
        auto elems = T->enumerate(m);
        // R_1 is the single point (1,1); lift level by level.
        std::vector<std::pair<WittElem, WittElem>> level{{witt_one(*T, m, 1), witt_one(*T, m, 1)}};
        for (unsigned k = 2; k <= h; ++k) {
            if (double(level.size()) * double(qm) * double(qm) > double(1u << 26))
                throw capacity_error("rh-fibers: enumeration too large");
            std::vector<std::pair<WittElem, WittElem>> next;
            for (auto& [y0, x0] : level) {
                std::size_t lifts = 0;
                for (fe a : elems)
                    for (fe b : elems) {
                        auto yc = y0.c, xc = x0.c;
                        yc.push_back(a), xc.push_back(b);
                        WittElem y = witt_from(*T, m, yc), x = witt_from(*T, m, xc);
                        if (nm(witt_sigma(y, 1) * inv(y), r, 1) == nm(x, s, 1)) {
                            next.push_back({y, x});
                            ++lifts;
                        }
                    }
                if (lifts != qm && v.pass) {
                    v.pass = false;
                    v.witness = "m=" + std::to_string(m) + " level " + std::to_string(k) + " base y=" + witt_str(y0) +
                                " x=" + witt_str(x0) + " has " + std::to_string(lifts) + " lifts";
                }
            }
            d << "m=" << m << " #R_" << k << "=" << next.size() << "; ";
            level = std::move(next);
        }
    }
    v.detail = d.str();
    if (gated) {
        // Outside p > s the fiber can split into several affine lines; the
        // counts are kept for the record.
        v.skipped = true;
        v.reason = "hypothesis p > s fails; measured " + (v.pass ? std::string("q^m lifts") : v.witness);
        v.pass = true;
        v.witness.clear();
    }
    return v;
}

// ----------------------------------------------------------- curve reduction

namespace {

// #{(x,y) ∈ F_{q^m}^2 : a tr_c(x) + b tr_d(x) = tr_d(y^q - y)}
std::uint64_t curve_count(const FieldTower& T, unsigned m, long a, long b, unsigned c, unsigned d) {
    const GF& F = T.field(m);
    auto elems = T.enumerate(m);
    auto tr = [&](fe x, unsigned k) {
        fe s = F.zero();
        for (unsigned i = 0; i < k; ++i) s = F.add(s, T.frobenius(m, x, i));
        return s;
    };
    std::map<fe, std::uint64_t> rhs;
    for (fe y : elems) ++rhs[tr(F.sub(T.frobenius(m, y, 1), y), d)];
    fe A = F.from_int(a), B = F.from_int(b);
    std::uint64_t n = 0;
    for (fe x : elems) {
        fe l = F.add(F.mul(A, tr(x, c)), F.mul(B, tr(x, d)));
        auto it = rhs.find(l);
        if (it != rhs.end()) n += it->second;
    }
    return n;
}

}  // namespace

LemmaVerdict verify_curve_reduction(unsigned q, unsigned a, unsigned b, unsigned c, unsigned d, unsigned m_max) {
    LemmaVerdict v;
    v.id = "curve-reduction";
    v.params = tuple_str({long(q), long(a), long(b), long(c), long(d), long(m_max)});
    auto [p, f] = split_q(q);
    if (!(a > 0 && b > 0 && a < p && b < p && c > 0 && c < d)) {
        v.skipped = true, v.pass = true;
        v.reason = "need 0 < a,b < p and 0 < c < d";
        return v;
    }
    v.pass = true;
    std::ostringstream d_;
    for (unsigned m = 1; m <= m_max; ++m) {
        auto T = build_tower(p, f, {m});
        const std::uint64_t qm = T->field(m).size();
        long A = a, B = b;
        unsigned C = c, D = d;
        std::uint64_t first = curve_count(*T, m, A, B, C, D);
        d_ << "m=" << m << ":" << first;
        // Step while the hypotheses hold; each step must preserve the count.
        while (C > 0 && C < D && A % long(p) && B % long(p)) {
            unsigned gamma = D / C, rr = D % C;
            long A2 = B, B2 = A + B * long(gamma);
            std::uint64_t cnt = curve_count(*T, m, A2, B2, rr, C);
            d_ << "->" << cnt;
            if (cnt != first && v.pass) {
                v.pass = false;
                v.witness = "m=" + std::to_string(m) + " (" + std::to_string(A) + "," + std::to_string(B) + "," +
                            std::to_string(C) + "," + std::to_string(D) + ") count " + std::to_string(first) +
                            " vs reduced " + std::to_string(cnt);
            }
            D = C, C = rr, A = A2, B = B2;
        }
        // Terminal form b x = y^q - y has q^m points when b is a unit.
        bool terminal = C == 0 && D == 1 && B % long(p) != 0;
        if (terminal && first != qm && v.pass) {
            v.pass = false;
            v.witness = "m=" + std::to_string(m) + " terminal count " + std::to_string(first) + " != q^m";
        }
        if (!terminal) v.reason = "chain leaves the hypothesis range before the terminal form";
        d_ << (terminal ? " (terminal) " : " (stopped) ");
    }
    v.detail = d_.str();
    return v;
}

// ------------------------------------------------------------ minor identity

namespace {

using Ser = series::vec<GF>;

struct SigmaOf {
    const FieldTower* T;
    unsigned m;
    fe operator()(fe e) const { return T->frobenius(m, e, 1); }
};

Ser sigma_ser(const SigmaOf& sg, Ser a, unsigned k = 1) {
    for (unsigned i = 0; i < k; ++i)
        for (auto& e : a) e = sg(e);
    return a;
}

// Square submatrix of rows `rows` and the first rows.size() columns.
WMat<GF> sub_rows(const WMat<GF>& g, const std::vector<unsigned>& rows) {
    WMat<GF> r;
    for (unsigned i : rows) r.push_back(std::vector<Ser>(g[i].begin(), g[i].begin() + rows.size()));
    return r;
}

struct MinorData {
    Ser lhs, det_full, det_tail;
    std::vector<Ser> m;   // m_1 .. m_s
};

// Minors m_i (rows {i, s+1..n}, first n-s+1 columns) and the three
// determinants of the identity, for the model of `spec` with s = n0·i0.
MinorData minor_data(const GroupSpec& spec, unsigned i0, const FieldTower& T, unsigned M, const WVec<GF>& x) {
    const GF& F = T.field(M);
    SigmaOf sg{&T, M};
    PointModel full(spec);
    const unsigned n = spec.n, s = spec.n0 * i0;
    WMat<GF> g = column_matrix_t(full, F, x, sg);
    MinorData d;
    d.det_full = det_t(F, g);
    PointModel head(GroupSpec::make(spec.q, s, spec.k0 * i0, spec.h));
    PointModel tail(GroupSpec::make(spec.q, n - s, spec.k0 * (spec.nprime - i0), spec.h));
    WVec<GF> mvec;
    for (unsigned i = 0; i < s; ++i) {
        std::vector<unsigned> rows{i};
        for (unsigned j = s; j < n; ++j) rows.push_back(j);
        Ser mi = det_t(F, sub_rows(g, rows));
        mvec.push_back(series::truncate(F, mi, head.prec[i]));
    }
    d.m = mvec;
    WVec<GF> xt(x.begin() + s, x.end());
    for (unsigned i = 0; i < n - s; ++i) xt[i] = series::truncate(F, xt[i], tail.prec[i]);
    d.det_tail = det_t(F, column_matrix_t(tail, F, xt, sg));
    d.lhs = det_t(F, column_matrix_t(head, F, mvec, sg));
    return d;
}

Ser sigma_product(const GF& F, const SigmaOf& sg, const Ser& a, unsigned upto) {
    Ser r = series::one(F, unsigned(a.size()));
    for (unsigned j = 1; j <= upto; ++j) r = series::mul(F, r, sigma_ser(sg, a, j));
    return r;
}

std::string ser_str(const GF& F, const Ser& a) {
    std::ostringstream o;
    o << '[';
    for (std::size_t i = 0; i < a.size(); ++i) o << (i ? " " : "") << F.packed(a[i]);
    o << ']';
    return o.str();
}

}  // namespace

LemmaVerdict verify_minor_identity(const GroupSpec& spec, unsigned i0, SampleMode mode, unsigned samples, unsigned M,
                                   std::uint64_t seed) {
    LemmaVerdict v;
    v.id = "minor-identity";
    v.params = spec.str() + " i0=" + std::to_string(i0) + " M=" + std::to_string(M);
    v.seed = seed;
    if (i0 < 1 || i0 >= spec.nprime) {
        v.skipped = true, v.pass = true;
        v.reason = "need 1 <= i0 <= n'-1";
        return v;
    }
    auto T = build_tower(spec.p, spec.f, {M});
    const GF& F = T->field(M);
    SigmaOf sg{T.get(), M};
    PointModel PM(spec);
    auto elems = T->enumerate(M);
    const unsigned s = spec.n0 * i0;

    // Two exponents appear for general κ: Σ_{j<i0} σ^j and Σ_{j<s} σ^j. They
    // coincide for κ = 0; both are tested.
    std::uint64_t tested = 0, fail_i0 = 0, fail_s = 0;
    std::string wit_i0, wit_s;
    auto check = [&](const WVec<GF>& x) {
        MinorData d = minor_data(spec, i0, *T, M, x);
        if (F.is_zero(d.det_full[0])) return;
        ++tested;
        Ser r_i0 = series::mul(F, d.det_full, sigma_product(F, sg, d.det_tail, i0 - 1));
        Ser r_s = series::mul(F, d.det_full, sigma_product(F, sg, d.det_tail, s - 1));
        auto describe = [&] {
            std::ostringstream o;
            o << "x=";
            for (auto& c : x) o << ser_str(F, c);
            o << " lhs=" << ser_str(F, d.lhs);
            return o.str();
        };
        if (d.lhs != r_i0 && fail_i0++ == 0) wit_i0 = describe() + " rhs=" + ser_str(F, r_i0);
        if (d.lhs != r_s && fail_s++ == 0) wit_s = describe() + " rhs=" + ser_str(F, r_s);
    };

    std::mt19937_64 rng(seed);
    auto random_point = [&] {
        WVec<GF> x;
        for (unsigned i = 0; i < spec.n; ++i) {
            Ser c;
            for (unsigned j = 0; j < PM.prec[i]; ++j) c.push_back(elems[rng() % elems.size()]);
            x.push_back(c);
        }
        return x;
    };
    const double total = std::pow(double(elems.size()), double(PM.D));
    if (mode == SampleMode::exhaustive && total <= double(1u << 22)) {
        std::vector<std::size_t> idx(PM.D, 0);
        while (true) {
            WVec<GF> x;
            for (unsigned i = 0; i < spec.n; ++i) {
                Ser c;
                for (unsigned j = 0; j < PM.prec[i]; ++j) c.push_back(elems[idx[PM.offset[i] + j]]);
                x.push_back(c);
            }
            check(x);
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == elems.size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    } else {
        if (mode == SampleMode::exhaustive) v.reason = "exhaustive space too large; sampled";
        // Keep drawing until `samples` points with unit determinant were tested.
        for (std::uint64_t tries = 0; tested < samples && tries < 100ull * samples; ++tries) check(random_point());
    }
    std::ostringstream d;
    d << "tested=" << tested << " failures(sum to i0-1)=" << fail_i0 << " failures(sum to s-1)=" << fail_s;
    v.detail = d.str();
    // Σ_{j<s} is the exponent that holds; Σ_{j<i0} is kept as a diagnostic.
    v.pass = tested > 0 && fail_s == 0;
    if (!v.pass) v.witness = wit_s.empty() ? "no sample had a unit determinant" : wit_s;
    if (fail_i0 && s != i0) v.reason = "exponent sum over j < i0 fails; sum over j < n0*i0 holds";
    return v;
}

// ----------------------------------------------------------- quotient fibers

namespace {

// Solve A z = b over F_p; A given column-wise as images of basis vectors.
// Returns a particular solution and a kernel basis, or nothing.
struct AffineSol {
    bool ok = false;
    std::vector<unsigned> z0;
    std::vector<std::vector<unsigned>> ker;
};

AffineSol solve_fp(std::vector<std::vector<unsigned>> cols, std::vector<unsigned> b, unsigned p) {
    const std::size_t n = cols.size(), m = b.size();
    // rows x (n + 1) augmented matrix
    std::vector<std::vector<long>> A(m, std::vector<long>(n + 1));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) A[i][j] = cols[j][i];
    for (std::size_t i = 0; i < m; ++i) A[i][n] = b[i];
    auto inv = [&](long a) {
        long r = 1, e = long(p) - 2, x = a % long(p);
        while (e) {
            if (e & 1) r = r * x % long(p);
            x = x * x % long(p), e >>= 1;
        }
        return r;
    };
    std::vector<long> pivcol;
    std::size_t row = 0;
    for (std::size_t c = 0; c < n && row < m; ++c) {
        std::size_t piv = row;
        while (piv < m && A[piv][c] % long(p) == 0) ++piv;
        if (piv == m) continue;
        std::swap(A[piv], A[row]);
        long iv = inv(A[row][c]);
        for (auto& e : A[row]) e = e * iv % long(p);
        for (std::size_t i = 0; i < m; ++i)
            if (i != row && A[i][c] % long(p)) {
                long f = A[i][c];
                for (std::size_t k = 0; k <= n; ++k) A[i][k] = ((A[i][k] - f * A[row][k]) % long(p) + long(p)) % long(p);
            }
        pivcol.push_back(long(c));
        ++row;
    }
    AffineSol s;
    for (std::size_t i = row; i < m; ++i)
        if (A[i][n] % long(p)) return s;
    s.ok = true;
    s.z0.assign(n, 0);
    for (std::size_t i = 0; i < pivcol.size(); ++i) s.z0[pivcol[i]] = unsigned(A[i][n]);
    std::vector<bool> is_piv(n, false);
    for (long c : pivcol) is_piv[c] = true;
    for (std::size_t fcol = 0; fcol < n; ++fcol) {
        if (is_piv[fcol]) continue;
        std::vector<unsigned> k(n, 0);
        k[fcol] = 1;
        for (std::size_t i = 0; i < pivcol.size(); ++i) k[pivcol[i]] = unsigned((long(p) - A[i][fcol] % long(p)) % long(p));
        s.ker.push_back(k);
    }
    return s;
}

// Level-by-level solutions of m_i(x_i, x') = target over F_{q^E}. Counts all
// solutions (up to `limit`) and reports the kernel dimension seen per level.
struct FiberSolve {
    std::uint64_t solutions = 0;
    bool full_rank_defect = true;   // every level had kernel of size q^{n-i0}
    std::vector<WVec<GF>> points;
};

}  // namespace

LemmaVerdict verify_quotient_fibers(const GroupSpec& spec, unsigned i0, const std::vector<unsigned>& M_schedule,
                                    std::uint64_t seed) {
    LemmaVerdict v;
    v.id = "quotient-fibers";
    v.params = spec.str() + " i0=" + std::to_string(i0);
    v.seed = seed;
    if (spec.kappa != 0) {
        v.skipped = true, v.pass = true;
        v.reason = "implemented for kappa = 0";
        return v;
    }
    if (i0 < 1 || i0 >= spec.n || M_schedule.empty()) {
        v.skipped = true, v.pass = true;
        v.reason = "need 1 <= i0 <= n-1 and a nonempty field schedule";
        return v;
    }
    const unsigned n = spec.n, h = spec.h, q = spec.q;
    const std::uint64_t NN = ipow64(q, i0 * (n - i0) * h);
    PointModel PM(spec);
    std::mt19937_64 rng(seed);
    v.pass = true;
    std::ostringstream d;
    d << "#N=" << NN << "; ";

    auto alpha_key = [&](const FieldTower& T, unsigned M, const WVec<GF>& x) {
        MinorData md = minor_data(spec, i0, T, M, x);
        std::vector<fe> k;
        for (auto& c : md.m) k.insert(k.end(), c.begin(), c.end());
        for (unsigned i = i0; i < n; ++i) k.insert(k.end(), x[i].begin(), x[i].end());
        return k;
    };
    auto to_point = [&](const FieldTower& T, unsigned M, const WVec<GF>& x) {
        std::vector<std::vector<fe>> co(x.begin(), x.end());
        return make_point(PM, T, M, co);
    };

    const unsigned Mtop = *std::max_element(M_schedule.begin(), M_schedule.end());
    std::map<std::vector<fe>, std::vector<WVec<GF>>> top_buckets;
    std::shared_ptr<FieldTower> Ttop;

    for (unsigned M : M_schedule) {
        auto T = build_tower(spec.p, spec.f, {M});
        const GF& F = T->field(M);
        auto elems = T->enumerate(M);
        if (std::pow(double(elems.size()), double(PM.D)) > double(1u << 24)) throw capacity_error("quotient-fibers: enumeration too large");
        std::map<std::vector<fe>, std::vector<WVec<GF>>> buckets;
        std::uint64_t points = 0;
        std::vector<std::size_t> idx(PM.D, 0);
        while (true) {
            WVec<GF> x(n);
            for (unsigned i = 0; i < n; ++i)
                for (unsigned j = 0; j < PM.prec[i]; ++j) x[i].push_back(elems[idx[PM.offset[i] + j]]);
            if (in_Xh(PM, to_point(*T, M, x))) {
                ++points;
                buckets[alpha_key(*T, M, x)].push_back(x);
            }
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == elems.size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
        // (i) invariance under random u ∈ N_h, x ↦ u·x with u_ij ∈ W_h(F_q), i ≤ i0 < j.
        std::vector<fe> rat;
        for (fe e : elems)
            if (F.in_subfield(e, spec.f)) rat.push_back(e);
        std::size_t inv_checks = 0;
        for (auto& [key, pts] : buckets) {
            if (inv_checks >= 64) break;
            const WVec<GF>& x = pts[rng() % pts.size()];
            WVec<GF> y = x;
            for (unsigned i = 0; i < i0; ++i)
                for (unsigned j = i0; j < n; ++j) {
                    Ser u;
                    for (unsigned l = 0; l < h; ++l) u.push_back(rat[rng() % rat.size()]);
                    y[i] = series::add(F, y[i], series::mul(F, u, x[j]));
                }
            ++inv_checks;
            if (!in_Xh(PM, to_point(*T, M, y)) || alpha_key(*T, M, y) != key) {
                v.pass = false;
                v.witness = "N_h-invariance fails at M=" + std::to_string(M);
            }
        }
        // (ii) bucket sizes divide #N; Σ sizes = #X.
        std::uint64_t sum = 0, full = 0;
        std::map<std::size_t, std::size_t> hist;
        for (auto& [key, pts] : buckets) {
            sum += pts.size();
            ++hist[pts.size()];
            if (pts.size() == NN) ++full;
            if (NN % pts.size() && v.pass) {
                v.pass = false;
                v.witness = "bucket of size " + std::to_string(pts.size()) + " does not divide #N at M=" + std::to_string(M);
            }
        }
        if (sum != points && v.pass) v.pass = false, v.witness = "bucket sizes do not sum to #X";
        d << "M=" << M << ": #X=" << points << " buckets=" << buckets.size() << " full=" << full << " sizes{";
        for (auto& [sz, c] : hist) d << sz << ":" << c << " ";
        d << "}; ";
        if (M == Mtop) top_buckets = std::move(buckets), Ttop = T;
    }

    // (iii) certify each short bucket at the largest M, and a sample of full
    // ones, by solving m_i(x_i, x') = m_i level by level over F_{q^{M K}}.
    std::size_t flagged = 0, certified = 0, sampled_full = 0;
    for (auto& [key, pts] : top_buckets) {
        bool short_bucket = pts.size() < NN;
        if (!short_bucket && sampled_full >= 8) continue;
        if (short_bucket) ++flagged;
        else ++sampled_full;
        bool done = false;
        for (unsigned K = 1; !done && Mtop * K <= 16 && ipow64(q, Mtop * K) <= GF::table_cap; K *= 2) {
            const unsigned E = Mtop * K;
            auto TE = build_tower(spec.p, spec.f, {E});
            const GF& FE = TE->field(E);
            // lift the target into F_{q^E}
            const WVec<GF>& x0 = pts.front();
            // both towers use the same defining polynomials, so packed words agree
            auto TB = build_tower(spec.p, spec.f, {Mtop, E});
            WVec<GF> xe(n);
            for (unsigned i = 0; i < n; ++i)
                for (fe c : x0[i]) {
                    fe in_top = TB->field(Mtop).from_packed(Ttop->field(Mtop).packed(c));
                    xe[i].push_back(FE.from_packed(TB->field(E).packed(TB->embed(Mtop, in_top, E))));
                }
            MinorData target = minor_data(spec, i0, *TE, E, xe);
            const unsigned bits = FE.deg();
            std::uint64_t total = 1, rational = 0;
            bool all_full = true, all_in_X = true;
            std::vector<std::vector<Ser>> sols_per_i(i0);
            for (unsigned i = 0; i < i0; ++i) {
                // DFS over digits of x_i.
                std::vector<Ser> sols;
                std::function<void(Ser)> dfs = [&](Ser pre) {
                    unsigned j = unsigned(pre.size());
                    if (j == h) { sols.push_back(pre); return; }
                    auto coeff = [&](fe z) {
                        WVec<GF> x = xe;
                        Ser c = pre;
                        c.push_back(z);
                        c.resize(h, FE.zero());
                        x[i] = c;
                        return minor_data(spec, i0, *TE, E, x).m[i][j];
                    };
                    fe c0 = coeff(FE.zero());
                    std::vector<std::vector<unsigned>> cols;
                    for (unsigned b = 0; b < bits; ++b) {
                        std::vector<unsigned> e(bits, 0);
                        e[b] = 1;
                        cols.push_back(FE.coeffs(FE.sub(coeff(FE.from_coeffs(e)), c0)));
                    }
                    auto rhs = FE.coeffs(FE.sub(target.m[i][j], c0));
                    AffineSol sol = solve_fp(cols, rhs, spec.p);
                    std::uint64_t expect_dim = std::uint64_t(spec.f) * (n - i0);
                    if (!sol.ok || sol.ker.size() != expect_dim) { all_full = false; return; }
                    std::uint64_t cnt = ipow64(spec.p, unsigned(sol.ker.size()));
                    for (std::uint64_t t = 0; t < cnt; ++t) {
                        std::vector<unsigned> z = sol.z0;
                        std::uint64_t r = t;
                        for (auto& kv : sol.ker) {
                            unsigned a = unsigned(r % spec.p);
                            r /= spec.p;
                            for (unsigned b = 0; b < bits; ++b) z[b] = (z[b] + a * kv[b]) % spec.p;
                        }
                        Ser nxt = pre;
                        nxt.push_back(FE.from_coeffs(z));
                        dfs(nxt);
                    }
                };
                dfs({});
                total *= sols.size();
                sols_per_i[i] = std::move(sols);
            }
            if (!all_full || total != NN) continue;
            // every combination must lie on X_h; count those defined over F_{q^M}
            std::vector<std::size_t> pick(i0, 0);
            while (true) {
                WVec<GF> x = xe;
                bool over_M = true;
                for (unsigned i = 0; i < i0; ++i) {
                    x[i] = sols_per_i[i][pick[i]];
                    for (fe c : x[i]) over_M = over_M && FE.in_subfield(c, spec.f * Mtop);
                }
                if (!in_Xh(PM, to_point(*TE, E, x))) all_in_X = false;
                rational += over_M;
                std::size_t k = 0;
                while (k < i0 && ++pick[k] == sols_per_i[k].size()) pick[k++] = 0;
                if (k == i0) break;
            }
            if (all_in_X && rational == pts.size()) done = true;
            else {
                v.pass = false;
                v.witness = "extension solve inconsistent with bucket of size " + std::to_string(pts.size());
                done = true;
            }
        }
        if (done) ++certified;
        else if (v.pass) {
            v.pass = false;
            v.witness = "bucket of size " + std::to_string(pts.size()) + " could not be certified up to degree 16";
        }
    }
    d << "flagged (field too small)=" << flagged << " certified=" << certified;
    v.detail = d.str();
    return v;
}

// ------------------------------------------------------------------ Turnbull

namespace {

using Vec = std::vector<fe>;

fe det_dense(const GF& F, std::vector<Vec> cols) {
    const std::size_t n = cols.size();
    fe det = F.one();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && F.is_zero(cols[piv][c])) ++piv;
        if (piv == n) return F.zero();
        if (piv != c) std::swap(cols[piv], cols[c]), det = F.neg(det);
        det = F.mul(det, cols[c][c]);
        fe iv = F.inv(cols[c][c]);
        for (std::size_t k = c + 1; k < n; ++k) {
            fe f = F.mul(cols[k][c], iv);
            if (F.is_zero(f)) continue;
            for (std::size_t r = c; r < n; ++r) cols[k][r] = F.sub(cols[k][r], F.mul(f, cols[c][r]));
        }
    }
    return det;
}

}  // namespace

namespace {

// Tableau: rows of column vectors; boxes are (row, position) pairs. The
// value is Σ over distributions of the boxed entries to rows (keeping each
// row's box count, canonical order inside a row) of sign · ∏ row dets.
fe tableau_value(const GF& F, const std::vector<std::vector<Vec>>& rows, const std::vector<std::pair<unsigned, unsigned>>& boxes) {
    const std::size_t k = boxes.size();
    std::vector<Vec> entries;
    for (auto& b : boxes) entries.push_back(rows[b.first][b.second]);
    // slots sorted by (row, position); assignment = permutation of entries to slots
    std::vector<std::size_t> slot_order(k);
    std::iota(slot_order.begin(), slot_order.end(), 0);
    std::sort(slot_order.begin(), slot_order.end(), [&](std::size_t a, std::size_t b) { return boxes[a] < boxes[b]; });
    std::vector<unsigned> perm(k);
    std::iota(perm.begin(), perm.end(), 0u);
    fe acc = F.zero();
    do {
        // canonical coset representative: increasing entry index within each row
        bool canon = true;
        for (std::size_t a = 0; a + 1 < k && canon; ++a) {
            auto s1 = slot_order[a], s2 = slot_order[a + 1];
            if (boxes[s1].first == boxes[s2].first && perm[s1] > perm[s2]) canon = false;
        }
        if (!canon) continue;
        int inv = 0;
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b) inv += perm[a] > perm[b];
        auto T = rows;
        for (std::size_t a = 0; a < k; ++a) T[boxes[a].first][boxes[a].second] = entries[perm[a]];
        fe prod = F.one();
        for (auto& r : T) prod = F.mul(prod, det_dense(F, r));
        acc = inv % 2 ? F.sub(acc, prod) : F.add(acc, prod);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

}  // namespace

LemmaVerdict verify_turnbull(unsigned trials, std::uint64_t seed) {
    LemmaVerdict v;
    v.id = "turnbull";
    v.params = "trials=" + std::to_string(trials) + " field=F_2^12";
    v.seed = seed;
    GF F(2, 12);
    std::mt19937_64 rng(seed);
    auto rnd = [&] { return fe(rng() % (std::uint64_t(F.ord()) + 1)); };   // ord() encodes zero
    auto rvec = [&](unsigned n) {
        Vec x(n);
        for (auto& e : x) e = rnd();
        return x;
    };
    auto unit = [&](unsigned n, unsigned i) {
        Vec e(n, F.zero());
        e[i] = F.one();
        return e;
    };
    std::uint64_t fails = 0, checks = 0, nonzero_controls = 0;
    auto record = [&](bool ok, const std::string& what) {
        ++checks;
        if (!ok && fails++ == 0) v.witness = what;
    };
    for (unsigned t = 0; t < trials; ++t) {
        unsigned n = 2 + t % 4;   // 2..5
        // (i) k > n boxes vanish, k <= n generally does not.
        {
            std::vector<std::vector<Vec>> rows(2);
            for (auto& r : rows)
                for (unsigned j = 0; j < n; ++j) r.push_back(rvec(n));
            std::vector<std::pair<unsigned, unsigned>> boxes;
            unsigned k = n + 1;
            for (unsigned a = 0; a < k; ++a) boxes.push_back({a < (k + 1) / 2 ? 0u : 1u, a < (k + 1) / 2 ? a : a - (k + 1) / 2});
            record(F.is_zero(tableau_value(F, rows, boxes)), "vanishing, n=" + std::to_string(n) + " trial " + std::to_string(t));
            boxes.pop_back();
            nonzero_controls += !F.is_zero(tableau_value(F, rows, boxes));
        }
        // (ii) the 2x4 example: boxes {a1, b3, b4} = T - T(a1<->b3) - T(a1<->b4).
        if (t % 4 == 0) {
            std::vector<std::vector<Vec>> rows(2);
            for (auto& r : rows)
                for (unsigned j = 0; j < 4; ++j) r.push_back(rvec(4));
            fe lhs = tableau_value(F, rows, {{0, 0}, {1, 2}, {1, 3}});
            auto val = [&](const std::vector<std::vector<Vec>>& r) { return F.mul(det_dense(F, r[0]), det_dense(F, r[1])); };
            auto s1 = rows, s2 = rows;
            std::swap(s1[0][0], s1[1][2]);
            std::swap(s2[0][0], s2[1][3]);
            fe rhs = F.sub(F.sub(val(rows), val(s1)), val(s2));
            record(lhs == rhs, "2x4 example, trial " + std::to_string(t));
        }
        // (iii) box transport: row 1 = (e_1..e_{i0}, y_1..y_{n-i0}), row 2 = (y_0..y_{n-1}),
        // boxes on e_1..e_{i0} and y_0; boxing the copies y_1..y_{n-i0} in row 1
        // leaves the value unchanged, and the enlarged tableau has n+1 boxes.
        for (unsigned i0 = 1; i0 < n; ++i0) {
            std::vector<Vec> y;
            for (unsigned j = 0; j < n; ++j) y.push_back(rvec(n));
            std::vector<std::vector<Vec>> rows(2);
            for (unsigned j = 0; j < i0; ++j) rows[0].push_back(unit(n, j));
            for (unsigned j = 1; j <= n - i0; ++j) rows[0].push_back(y[j]);
            rows[1] = y;
            std::vector<std::pair<unsigned, unsigned>> boxes;
            for (unsigned j = 0; j < i0; ++j) boxes.push_back({0, j});
            boxes.push_back({1, 0});
            fe a = tableau_value(F, rows, boxes);
            for (unsigned j = i0; j < n; ++j) boxes.push_back({0, j});
            fe b = tableau_value(F, rows, boxes);
            record(a == b && F.is_zero(b), "transport n=" + std::to_string(n) + " i0=" + std::to_string(i0));
        }
        // (iv) the intermediate identity on genuine Frobenius columns:
        // |g_n(x)| σ|g_{n-i0}(x')| = Σ_{i ≤ i0} (-1)^{i+1} m_i σ|g_{n-1}(x^{(i)})|.
        {
            Vec x = rvec(n);
            auto frob = [&](const Vec& u, unsigned k) {
                Vec r = u;
                for (auto& e : r) e = F.frob_p(e, k);
                return r;
            };
            auto gdet = [&](const Vec& u) {
                std::vector<Vec> cols;
                for (unsigned k = 0; k < u.size(); ++k) cols.push_back(frob(u, k));
                return det_dense(F, cols);
            };
            for (unsigned i0 = 1; i0 < n; ++i0) {
                Vec xp(x.begin() + i0, x.end());
                fe lhs = F.mul(gdet(x), F.frob_p(gdet(xp), 1));
                fe rhs = F.zero();
                for (unsigned i = 0; i < i0; ++i) {
                    Vec row{x[i]};
                    row.insert(row.end(), xp.begin(), xp.end());
                    fe mi = gdet(row);
                    Vec xi = x;
                    xi.erase(xi.begin() + i);
                    fe term = F.mul(mi, F.frob_p(gdet(xi), 1));
                    rhs = i % 2 ? F.sub(rhs, term) : F.add(rhs, term);
                }
                record(lhs == rhs, "intermediate identity n=" + std::to_string(n) + " i0=" + std::to_string(i0));
            }
        }
    }
    v.pass = fails == 0;
    std::ostringstream d;
    d << "checks=" << checks << " failures=" << fails << " nonzero controls (k=n)=" << nonzero_controls << "/" << trials
      << " per-trial false-pass bound <= 10/4096";
    v.detail = d.str();
    return v;
}

// --------------------------------------------------------- Σ_w combinatorics

namespace {

unsigned bracket(long a, unsigned n) { return unsigned(((a - 1) % long(n) + long(n)) % long(n)) + 1; }

}  // namespace

bool sigma_w_empty_predicate(const std::vector<unsigned>& w) {
    const unsigned n = unsigned(w.size());
    for (unsigned i = 2; i <= n; ++i) {
        unsigned a = bracket(w[i - 1], n), b = bracket(long(w[i - 2]) + 1, n);
        if (a > b && b > 1) return true;
    }
    return false;
}

std::vector<unsigned> staircase(const std::vector<unsigned>& w) {
    const unsigned n = unsigned(w.size());
    std::vector<unsigned> br;
    unsigned prev = 0;
    while (prev < n) {
        unsigned top = n - prev, ij = 0;
        for (unsigned i = prev + 1; i <= n; ++i)
            if (w[i - 1] == top) ij = i;
        if (!ij) return {};
        for (unsigned i = prev + 1; i <= ij; ++i)
            if (w[i - 1] != n - prev - (ij - i)) return {};
        br.push_back(ij);
        prev = ij;
    }
    return br;
}

bool regular_torus_sum_nonzero(const std::vector<int>& delta, unsigned i, unsigned j, long q) {
    const long n = long(delta.size());
    auto at = [&](long a) { return delta[std::size_t(((a - 1) % n + n) % n)]; };
    long sum = 0, pw = 1;
    for (long k = 0; k < n; ++k, pw *= q) sum += pw * (at(long(i) - k) - at(long(j) - k));
    return sum != 0;
}

SigmaWReport sigma_w_criteria(unsigned n, unsigned kappa) {
    SigmaWReport rep;
    rep.n = n, rep.kappa = kappa;
    const unsigned n0 = n / std::gcd(n, kappa == 0 ? n : kappa);
    std::vector<unsigned> w(n);
    std::iota(w.begin(), w.end(), 1u);
    auto fail = [&](const std::string& s) {
        if (rep.pass) rep.witness = s;
        rep.pass = false;
    };
    auto wstr = [&] {
        std::string s;
        for (unsigned a : w) s += std::to_string(a);
        return s;
    };
    do {
        bool in_WO = true;
        for (unsigned i = 1; i <= n; ++i) in_WO = in_WO && (w[i - 1] % n0) == (i % n0);
        if (!in_WO) continue;
        ++rep.elements;
        bool pred = sigma_w_empty_predicate(w);
        auto st = staircase(w);
        rep.predicate_true += pred;
        if (pred == !st.empty()) fail("staircase/predicate mismatch at w=" + wstr());
        if (pred || st.empty()) continue;
        bool identity = st.size() == 1;
        if (identity) continue;
        ++rep.staircases;
        // the reconstruction from the breakpoints
        unsigned prev = 0;
        for (unsigned ij : st) {
            for (unsigned i = prev + 1; i <= ij; ++i)
                if (w[i - 1] != n - prev - (ij - i)) fail("reconstruction fails at w=" + wstr());
            prev = ij;
        }
        std::vector<int> delta(n, 0);
        for (unsigned i = 1; i <= st[0]; ++i) delta[i - 1] = 1;
        for (unsigned i = 1; i <= n; ++i)
            for (unsigned j = 1; j < i; ++j) {
                unsigned g = std::gcd(n, i - j);
                bool factors = true;
                for (unsigned a = 0; a < n; ++a) factors = factors && delta[a] == delta[(a + g) % n];
                if (factors) continue;
                ++rep.delta_pairs;
                for (long q : {2L, 3L, 4L, 5L, 7L})
                    if (!regular_torus_sum_nonzero(delta, i, j, q)) fail("regular-torus sum vanishes at w=" + wstr());
            }
    } while (std::next_permutation(w.begin(), w.end()));
    return rep;
}

// Σ̂_w at h = 1, κ = 0 inside GL_n with F(X) = C σ(X) C^{-1}, C e_j = e_{j+1}:
// #{(x, y1, τ, y2) ∈ FU × U × T × U : x F(τ ẇ) ∈ y1 τ ẇ y2 FU}.
std::uint64_t sigma_hat_points(unsigned q, unsigned n, unsigned m, const std::vector<unsigned>& w) {
    auto [p, f] = split_q(q);
    auto T = build_tower(p, f, {m});
    const GF& F = T->field(m);
    auto elems = T->enumerate(m);
    std::vector<fe> units;
    for (fe e : elems)
        if (!F.is_zero(e)) units.push_back(e);
    using Mat = std::vector<std::vector<fe>>;
    auto ident = [&] {
        Mat I(n, std::vector<fe>(n, F.zero()));
        for (unsigned i = 0; i < n; ++i) I[i][i] = F.one();
        return I;
    };
    auto mul = [&](const Mat& a, const Mat& b) {
        Mat r(n, std::vector<fe>(n, F.zero()));
        for (unsigned i = 0; i < n; ++i)
            for (unsigned k = 0; k < n; ++k) {
                if (F.is_zero(a[i][k])) continue;
                for (unsigned j = 0; j < n; ++j) r[i][j] = F.add(r[i][j], F.mul(a[i][k], b[k][j]));
            }
        return r;
    };
    // C X C^{-1}: entry (i,j) moves to (i+1, j+1)
    auto conjC = [&](const Mat& X, int dir) {
        Mat r(n, std::vector<fe>(n));
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j) r[(i + n + dir) % n][(j + n + dir) % n] = X[i][j];
        return r;
    };
    auto Fr = [&](const Mat& X) {
        Mat s = X;
        for (auto& row : s)
            for (auto& e : row) e = T->frobenius(m, e, 1);
        return conjC(s, 1);
    };
    auto inv_unip_upper = [&](const Mat& U) {
        // back substitution for upper unitriangular
        Mat r = ident();
        for (int j = 0; j < int(n); ++j)
            for (int i = j - 1; i >= 0; --i) {
                fe s = F.zero();
                for (int k = i + 1; k <= j; ++k) s = F.add(s, F.mul(U[i][k], r[k][j]));
                r[i][j] = F.neg(s);
            }
        return r;
    };
    const unsigned nu = n * (n - 1) / 2;
    if (std::pow(double(elems.size()), 3.0 * nu) * std::pow(double(units.size()), double(n)) > double(1ull << 30))
        throw capacity_error("sigma-hat enumeration too large");
    auto unip = [&](std::uint64_t code) {
        Mat U = ident();
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = i + 1; j < n; ++j) U[i][j] = elems[code % elems.size()], code /= elems.size();
        return U;
    };
    std::uint64_t nU = ipow64(unsigned(elems.size()), nu), nT = ipow64(unsigned(units.size()), n);
    Mat P(n, std::vector<fe>(n, F.zero()));
    for (unsigned i = 0; i < n; ++i) P[w[i] - 1][i] = F.one();
    std::vector<Mat> Us, Uinv;
    for (std::uint64_t c = 0; c < nU; ++c) Us.push_back(unip(c)), Uinv.push_back(inv_unip_upper(Us.back()));
    std::uint64_t count = 0;
    for (std::uint64_t tc = 0; tc < nT; ++tc) {
        Mat tau(n, std::vector<fe>(n, F.zero()));
        std::uint64_t c = tc;
        for (unsigned i = 0; i < n; ++i) tau[i][i] = units[c % units.size()], c /= units.size();
        Mat tw = mul(tau, P), Ftw = Fr(tw);
        // (τP)^{-1} = P^T τ^{-1}
        Mat twinv(n, std::vector<fe>(n, F.zero()));
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j)
                if (!F.is_zero(P[j][i])) twinv[i][j] = F.inv(tau[j][j]);
        for (std::uint64_t a = 0; a < nU; ++a) {
            Mat xF = mul(conjC(Us[a], 1), Ftw);   // x ∈ FU
            for (std::uint64_t b = 0; b < nU; ++b) {
                Mat l = mul(twinv, mul(Uinv[b], xF));   // (τẇ)^{-1} y1^{-1} x F(τẇ)
                for (std::uint64_t c2 = 0; c2 < nU; ++c2) {
                    Mat r = conjC(mul(Uinv[c2], l), -1);   // must be upper unitriangular
                    bool ok = true;
                    for (unsigned i = 0; i < n && ok; ++i)
                        for (unsigned j = 0; j <= i && ok; ++j) ok = r[i][j] == (i == j ? F.one() : F.zero());
                    count += ok;
                }
            }
        }
    }
    return count;
}

LemmaVerdict verify_sigma_w(unsigned n_max) {
    LemmaVerdict v;
    v.id = "sigma-w";
    v.params = "n<=" + std::to_string(n_max);
    v.pass = true;
    std::ostringstream d;
    for (unsigned n = 2; n <= n_max; ++n) {
        std::vector<unsigned> kappas{0};
        if (n % 2 == 0) kappas.push_back(n / 2);
        for (unsigned k : kappas) {
            auto r = sigma_w_criteria(n, k);
            d << "n=" << n << ",k=" << k << ": |W_O|=" << r.elements << " pred=" << r.predicate_true
              << " stair=" << r.staircases << " pairs=" << r.delta_pairs << "; ";
            if (!r.pass && v.pass) v.pass = false, v.witness = r.witness;
        }
    }
    // direct enumeration at h = 1
    struct Run { unsigned q, n, m; };
    for (Run run : {Run{2, 2, 1}, Run{2, 2, 2}, Run{2, 3, 1}, Run{2, 4, 1}}) {
        std::vector<unsigned> w(run.n);
        std::iota(w.begin(), w.end(), 1u);
        std::size_t empty_ok = 0, pred = 0;
        std::uint64_t other_points = 0;
        do {
            if (!sigma_w_empty_predicate(w)) {
                other_points += sigma_hat_points(run.q, run.n, run.m, w);
                continue;
            }
            ++pred;
            std::uint64_t c = sigma_hat_points(run.q, run.n, run.m, w);
            if (c == 0) ++empty_ok;
            else if (v.pass) {
                v.pass = false;
                std::string ws;
                for (unsigned a : w) ws += std::to_string(a);
                v.witness = "predicate-true w=" + ws + " has " + std::to_string(c) + " points";
            }
        } while (std::next_permutation(w.begin(), w.end()));
        d << "sigma-hat (q,n,m)=(" << run.q << "," << run.n << "," << run.m << "): " << empty_ok << "/" << pred
          << " predicate-true empty, " << other_points << " points on the rest; ";
    }
    v.detail = d.str();
    return v;
}

}  // namespace coxdl
