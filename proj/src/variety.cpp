#include "coxdl/variety.hpp"

#include <stdexcept>

namespace coxdl {

PointModel::PointModel(const GroupSpec& s) : spec(s) {
    for (unsigned i = 0; i < s.n; ++i) {
        offset.push_back(D);
        prec.push_back(i % s.n0 == 0 ? s.h : s.h - 1);
        D += prec.back();
    }
    unsigned e = (s.n - 1) + (s.n0 - 1) * s.kappa;
    sign = (s.p == 2 || e % 2 == 0) ? 1 : -1;
}

namespace {

WVec<GF> to_wvec(const PointVector& x) {
    WVec<GF> r;
    for (auto& c : x.x) r.push_back(c.c);
    return r;
}

auto gf_sigma(const FieldTower& T, unsigned m) {
    const GF* F = &T.field(m);
    unsigned f = T.f();
    return [F, f](fe a) { return F->frob_p(a, f); };
}

template <class R, class IsQ>
bool det_condition(const R& F, const series::vec<R>& d, IsQ coefficient_ok) {
    if (F.is_zero(d[0])) return false;
    for (auto& c : d)
        if (!coefficient_ok(c)) return false;
    return true;
}

}  // namespace

PointVector make_point(const PointModel& M, const FieldTower& T, unsigned m, const std::vector<std::vector<fe>>& coeffs) {
    if (coeffs.size() != M.spec.n) throw std::invalid_argument("point needs n coordinates");
    PointVector p{&T, m, {}};
    for (unsigned i = 0; i < M.spec.n; ++i) {
        auto c = coeffs[i];
        c.resize(M.prec[i], T.field(m).zero());
        p.x.push_back(witt_from(T, m, c));
    }
    return p;
}

std::vector<std::vector<WittElem>> column_matrix(const PointModel& M, const PointVector& x) {
    const GF& F = x.tower->field(x.m);
    auto g = column_matrix_t(M, F, to_wvec(x), gf_sigma(*x.tower, x.m));
    std::vector<std::vector<WittElem>> r(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        for (auto& e : g[i]) r[i].push_back(witt_from(*x.tower, x.m, e));
    return r;
}

WittElem column_det(const PointModel& M, const PointVector& x) {
    const GF& F = x.tower->field(x.m);
    auto g = column_matrix_t(M, F, to_wvec(x), gf_sigma(*x.tower, x.m));
    return witt_from(*x.tower, x.m, det_t(F, g));
}

bool in_Xh(const PointModel& M, const PointVector& x) {
    const GF& F = x.tower->field(x.m);
    WittElem d = column_det(M, x);
    unsigned f = x.tower->f();
    return det_condition(F, d.c, [&](fe c) { return F.frob_p(c, f) == (M.sign == 1 ? c : F.neg(c)); });
}

std::vector<WittElem> a_coeffs(const PointModel& M, const PointVector& x) {
    const GF& F = x.tower->field(x.m);
    const unsigned n = M.spec.n, h = M.spec.h;
    auto sig = gf_sigma(*x.tower, x.m);
    auto g = column_matrix_t(M, F, to_wvec(x), sig);
    auto d = det_t(F, g);
    if (F.is_zero(d[0])) throw std::domain_error("column matrix is singular");
    WVec<GF> v = pad(M, F, to_wvec(x));
    WVec<GF> w = v;
    for (unsigned s = 0; s < n; ++s)
        for (auto& c : w)
            for (auto& e : c) e = sig(e);
    auto dinv = series::inv(F, d, [&](fe a) { return F.inv(a); });
    std::vector<WittElem> beta;
    for (unsigned i = 0; i < n; ++i) {
        auto gi = g;
        for (unsigned r = 0; r < n; ++r) gi[r][i] = series::truncate(F, series::sub(F, w[r], v[r]), h);
        beta.push_back(witt_from(*x.tower, x.m, series::mul(F, det_t(F, gi), dinv)));
    }
    return beta;
}

bool in_closed_stratum(const PointModel& M, const PointVector& x) {
    if (M.spec.h == 1 || M.spec.nprime == 1) return true;
    auto beta = a_coeffs(M, x);
    const GF& F = x.tower->field(x.m);
    for (unsigned i = 1; i < M.spec.n; ++i) {
        unsigned need = 1 + (i * M.spec.k0) / M.spec.n0;
        for (unsigned j = 0; j < need && j < M.spec.h; ++j)
            if (!F.is_zero(beta[i].c[j])) return false;
    }
    return true;
}

PointVector act_group(const PointModel& M, const Group& G, const Group::Elt& g, const PointVector& x) {
    const FieldTower& T = *x.tower;
    const GF& F = T.field(x.m);
    const unsigned n = M.spec.n, h = M.spec.h;
    PointVector y = x;
    if (G.is_matrix_model()) {
        for (unsigned r = 0; r < n; ++r) {
            series::vec<GF> acc = series::zero(F, h);
            for (unsigned c = 0; c < n; ++c) {
                WittElem e = G.entry(g, r, c);
                series::vec<GF> ee;
                for (fe v : e.c) ee.push_back(T.embed(1, v, x.m));
                acc = series::add(F, acc, series::mul(F, ee, x.x[c].c));
            }
            y.x[r].c = acc;
        }
        return y;
    }
    // Σ_j diag(u_j) c^j x, u_j at position l·k0 mod n equal to σ^l(a_j).
    const unsigned H = M.work_prec();
    WVec<GF> cur = pad(M, F, to_wvec(x));
    WVec<GF> acc(n, series::zero(F, H));
    GroupSpec one_block = M.spec;
    for (unsigned j = 0; j < G.length(); ++j) {
        if (!F.is_zero(T.embed(n, g[j], x.m))) {
            for (unsigned l = 0; l < n; ++l) {
                unsigned pos = (l * M.spec.k0) % n;
                fe u = T.embed(n, T.frobenius(n, g[j], l), x.m);
                for (unsigned s = 0; s < H; ++s) acc[pos][s] = F.add(acc[pos][s], F.mul(u, cur[pos][s]));
            }
        }
        WVec<GF> nxt(n);
        nxt[0] = series::shift(F, cur[n - 1], 1, H);
        for (unsigned i = 1; i < n; ++i) nxt[i] = cur[i - 1];
        cur = std::move(nxt);
    }
    for (unsigned i = 0; i < n; ++i) y.x[i].c = series::truncate(F, acc[i], M.prec[i]);
    return y;
}

PointVector act_torus(const PointModel& M, const Torus& T, std::uint64_t t, const PointVector& x) {
    const FieldTower& TW = *x.tower;
    const GF& F = TW.field(x.m);
    WittElem te = T.element(t);
    series::vec<GF> tv;
    for (fe v : te.c) tv.push_back(TW.embed(M.spec.n, v, x.m));
    PointVector y = x;
    for (unsigned i = 0; i < M.spec.n; ++i) {
        unsigned p = M.prec[i];
        y.x[i].c = series::mul(F, x.x[i].c, series::truncate(F, tv, p));
    }
    return y;
}

PointVector act_frobenius(const PointVector& x, std::int64_t s) {
    PointVector y = x;
    for (auto& c : y.x) c = witt_sigma(c, s);
    return y;
}

std::vector<std::vector<fe>> action_matrix(const PointModel& M, const Group& G, const Group::Elt& g, const Torus& T,
                                           std::uint64_t t) {
    const FieldTower& TW = T.tower();
    const unsigned n = M.spec.n;
    const GF& F = TW.field(n);
    std::vector<std::vector<fe>> A(M.D, std::vector<fe>(M.D, F.zero()));
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < M.prec[i]; ++j) {
            std::vector<std::vector<fe>> co(n);
            for (unsigned a = 0; a < n; ++a) co[a].assign(M.prec[a], F.zero());
            co[i][j] = F.one();
            PointVector y = act_group(M, G, g, act_torus(M, T, t, make_point(M, TW, n, co)));
            unsigned col = M.offset[i] + j;
            for (unsigned a = 0; a < n; ++a)
                for (unsigned b = 0; b < M.prec[a]; ++b) A[M.offset[a] + b][col] = y.x[a].c[b];
        }
    return A;
}

namespace {

using Mat = std::vector<std::vector<fe>>;

Mat matmul(const GF& F, const Mat& a, const Mat& b) {
    std::size_t n = a.size();
    Mat r(n, std::vector<fe>(n, F.zero()));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (F.is_zero(a[i][k])) continue;
            for (std::size_t j = 0; j < n; ++j) r[i][j] = F.add(r[i][j], F.mul(a[i][k], b[k][j]));
        }
    return r;
}

bool is_identity(const GF& F, const Mat& a) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if (a[i][j] != (i == j ? F.one() : F.zero())) return false;
    return true;
}

// Nullspace of the rows (each of length N) over F.
std::vector<std::vector<fe>> nullspace(const GF& F, Mat rows, std::size_t N) {
    std::vector<int> pivcol;
    std::size_t r = 0;
    for (std::size_t c = 0; c < N && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && F.is_zero(rows[p][c])) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[r], rows[p]);
        fe iv = F.inv(rows[r][c]);
        for (auto& x : rows[r]) x = F.mul(x, iv);
        for (std::size_t o = 0; o < rows.size(); ++o) {
            if (o == r || F.is_zero(rows[o][c])) continue;
            fe f = rows[o][c];
            for (std::size_t j = c; j < N; ++j) rows[o][j] = F.sub(rows[o][j], F.mul(f, rows[r][j]));
        }
        pivcol.push_back(int(c));
        ++r;
    }
    std::vector<char> is_piv(N, 0);
    for (int c : pivcol) is_piv[c] = 1;
    std::vector<std::vector<fe>> basis;
    for (std::size_t free = 0; free < N; ++free) {
        if (is_piv[free]) continue;
        std::vector<fe> v(N, F.zero());
        v[free] = F.one();
        for (std::size_t i = 0; i < pivcol.size(); ++i) v[pivcol[i]] = F.neg(rows[i][free]);
        basis.push_back(v);
    }
    return basis;
}

}  // namespace

FixedSpace solve_twisted_fixed(const PointModel& M, const Group& G, const Group::Elt& g, const Torus& T,
                               std::uint64_t t, unsigned s, bool stratum_only) {
    const FieldTower& TW = T.tower();
    const unsigned n = M.spec.n;
    if (s % n) throw std::domain_error("Frobenius power must be a multiple of n");
    const GF& F = TW.field(s);
    FixedSpace fs;
    auto An = action_matrix(M, G, g, T, t);
    const unsigned D = M.D;
    fs.A.assign(D, std::vector<fe>(D));
    for (unsigned i = 0; i < D; ++i)
        for (unsigned j = 0; j < D; ++j) fs.A[i][j] = TW.embed(n, An[i][j], s);
    // The σ^s-semilinear map has finite order k; its fixed points live over F_{q^{sk}}.
    Mat P = fs.A;
    unsigned k = 1;
    while (!is_identity(F, P)) {
        P = matmul(F, P, fs.A);
        if (++k > 4096) throw capacity_error("twisted Frobenius has order above 4096");
    }
    fs.k = k;
    fs.E = std::make_shared<ExtField>(F, k, TW.f());
    const auto& fr = fs.E->base_frobenius_matrix();
    const std::size_t N = std::size_t(D) * k;
    Mat rows;
    for (unsigned d = 0; d < D; ++d)
        for (unsigned l = 0; l < k; ++l) {
            std::vector<fe> row(N, F.zero());
            row[d * k + l] = F.one();
            for (unsigned e = 0; e < D; ++e) {
                if (F.is_zero(fs.A[d][e])) continue;
                for (unsigned l2 = 0; l2 < k; ++l2) {
                    fe m = fr[l2][l];
                    if (F.is_zero(m)) continue;
                    row[e * k + l2] = F.sub(row[e * k + l2], F.mul(fs.A[d][e], m));
                }
            }
            rows.push_back(std::move(row));
        }
    if (!stratum_only) {
        auto check = nullspace(F, rows, N);
        if (check.size() != D) throw std::logic_error("fixed space has the wrong dimension");
    }
    if (stratum_only && M.spec.kappa == 0 && M.spec.h >= 2) {
        for (unsigned i = 0; i < n; ++i)
            for (unsigned l = 1; l < k; ++l) {
                std::vector<fe> row(N, F.zero());
                row[M.offset[i] * k + l] = F.one();
                rows.push_back(std::move(row));
            }
    }
    for (auto& v : nullspace(F, rows, N)) {
        std::vector<ExtField::elem> b(D, fs.E->zero());
        for (unsigned d = 0; d < D; ++d)
            for (unsigned l = 0; l < k; ++l) b[d][l] = v[d * k + l];
        fs.basis.push_back(std::move(b));
    }
    return fs;
}

std::uint64_t count_S(const PointModel& M, const Group& G, const Group::Elt& g, const Torus& T, std::uint64_t t,
                      const CountOptions& opt) {
    const FieldTower& TW = T.tower();
    const unsigned n = M.spec.n;
    const GF& F = TW.field(n);
    FixedSpace fs = solve_twisted_fixed(M, G, g, T, t, n, true);
    const ExtField& E = *fs.E;
    const std::size_t dim = fs.basis.size();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < dim; ++i) {
        total *= F.size();
        if (total > opt.cap) throw capacity_error("S-count for " + M.spec.str() + " needs more than cap candidates");
    }
    auto vals = TW.enumerate(n);
    const unsigned f = TW.f();
    auto sig = [&](const ExtField::elem& a) { return E.frob(a, 1); };
    auto ok = [&](const ExtField::elem& c) {
        if (!E.in_base(c)) return false;
        fe c0 = c[0];
        return F.frob_p(c0, f) == (M.sign == 1 ? c0 : F.neg(c0));
    };
    std::vector<std::size_t> dig(dim, 0);
    std::vector<ExtField::elem> x(M.D, E.zero());
    std::uint64_t count = 0;
    for (;;) {
        WVec<ExtField> pt(n);
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < M.prec[i]; ++j) pt[i].push_back(x[M.offset[i] + j]);
        auto gm = column_matrix_t(M, E, pt, sig);
        auto d = det_t(E, gm);
        if (det_condition(E, d, ok)) ++count;
        // odometer step, updating x incrementally
        std::size_t i = 0;
        for (; i < dim; ++i) {
            fe old = vals[dig[i]];
            dig[i] = (dig[i] + 1) % vals.size();
            fe nw = vals[dig[i]];
            fe delta = F.sub(nw, old);
            for (unsigned c = 0; c < M.D; ++c) x[c] = E.add(x[c], E.smul(delta, fs.basis[i][c]));
            if (dig[i] != 0) break;
        }
        if (i == dim) break;
    }
    return count;
}

std::uint64_t count_points(const PointModel& M, const FieldTower& tower, unsigned m, std::uint64_t cap) {
    const GF& F = tower.field(m);
    std::uint64_t total = 1;
    for (unsigned i = 0; i < M.D; ++i) {
        total *= F.size();
        if (total > cap) throw capacity_error("point count over F_{q^" + std::to_string(m) + "} exceeds cap");
    }
    auto vals = tower.enumerate(m);
    std::vector<std::size_t> dig(M.D, 0);
    std::uint64_t count = 0;
    for (;;) {
        std::vector<std::vector<fe>> co(M.spec.n);
        for (unsigned i = 0; i < M.spec.n; ++i)
            for (unsigned j = 0; j < M.prec[i]; ++j) co[i].push_back(vals[dig[M.offset[i] + j]]);
        PointVector p = make_point(M, tower, m, co);
        if (in_Xh(M, p) && in_closed_stratum(M, p)) ++count;
        std::size_t i = 0;
        for (; i < M.D; ++i) {
            if (++dig[i] < vals.size()) break;
            dig[i] = 0;
        }
        if (i == M.D) break;
    }
    return count;
}

}  // namespace coxdl
