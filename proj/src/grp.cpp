#include "coxdl/grp.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace coxdl {

mpz_class group_order(const GroupSpec& s) {
    mpz_class r, t;
    mpz_ui_pow_ui(r.get_mpz_t(), s.q, s.n * s.n * (s.h - 1));
    for (unsigned i = 0; i < s.nprime; ++i) {
        mpz_class a, b;
        mpz_ui_pow_ui(a.get_mpz_t(), s.q, s.n0 * s.nprime);
        mpz_ui_pow_ui(b.get_mpz_t(), s.q, s.n0 * i);
        r *= a - b;
    }
    return r;
}

Group::Group(const GroupSpec& spec, std::shared_ptr<const FieldTower> tower) : spec_(spec), tower_(std::move(tower)) {
    if (!spec.group_supported())
        throw unsupported_model("group model for " + spec.str() + " (1 < n' < n) is not implemented");
    mpz_class ord = group_order(spec);
    if (ord > cap) throw capacity_error("group " + spec.str() + " has order " + ord.get_str() + " above cap");
    const unsigned n = spec.n, h = spec.h;
    if (is_matrix_model()) {
        const GF& F = tower_->field(1);
        len_ = n * n * h;
        std::vector<fe> vals = tower_->enumerate(1);
        // Enumerate residue matrices, keep invertible ones, then all lifts.
        std::vector<std::size_t> digit(len_, 0);
        std::size_t qsz = vals.size();
        for (;;) {
            Elt g(len_);
            for (unsigned i = 0; i < len_; ++i) g[i] = vals[digit[i]];
            // quick residue determinant via Gaussian elimination
            std::vector<fe> m(n * n);
            for (unsigned i = 0; i < n * n; ++i) m[i] = g[i * h];
            bool inv = true;
            for (unsigned c = 0; c < n && inv; ++c) {
                unsigned r = c;
                while (r < n && F.is_zero(m[r * n + c])) ++r;
                if (r == n) {
                    inv = false;
                    break;
                }
                for (unsigned k = 0; k < n; ++k) std::swap(m[c * n + k], m[r * n + k]);
                for (unsigned r2 = c + 1; r2 < n; ++r2) {
                    fe f = F.div(m[r2 * n + c], m[c * n + c]);
                    for (unsigned k = 0; k < n; ++k) m[r2 * n + k] = F.sub(m[r2 * n + k], F.mul(f, m[c * n + k]));
                }
            }
            if (inv) {
                idx_[g] = elts_.size();
                elts_.push_back(g);
            }
            std::size_t i = len_;
            while (i-- > 0) {
                if (++digit[i] < qsz) break;
                digit[i] = 0;
            }
            if (i == std::size_t(-1)) break;
        }
    } else {
        const GF& F = tower_->field(n);
        len_ = n * (h - 1) + 1;
        unsigned k0i = 0;
        for (unsigned x = 0; x < n; ++x)
            if ((x * spec.k0) % n == 1 % n) k0i = x;
        e_ = (n - k0i) % n;
        std::vector<fe> vals = tower_->enumerate(n);
        std::vector<std::size_t> digit(len_, 0);
        digit[0] = 1;
        for (;;) {
            Elt g(len_);
            for (unsigned i = 0; i < len_; ++i) g[i] = vals[digit[i]];
            idx_[g] = elts_.size();
            elts_.push_back(g);
            std::size_t i = len_;
            while (i-- > 0) {
                if (++digit[i] < vals.size()) break;
                digit[i] = i == 0 ? 1 : 0;
            }
            if (i == std::size_t(-1)) break;
        }
        (void)F;
    }
    if (mpz_class(elts_.size()) != ord) throw std::logic_error("enumeration does not match the group order");
    id_ = index_of(identity());
}

std::size_t Group::index_of(const Elt& g) const {
    auto it = idx_.find(g);
    if (it == idx_.end()) throw std::domain_error("not a group element");
    return it->second;
}

Group::Elt Group::identity() const {
    const unsigned n = spec_.n, h = spec_.h;
    if (is_matrix_model()) {
        const GF& F = tower_->field(1);
        Elt g(len_, F.zero());
        for (unsigned i = 0; i < n; ++i) g[(i * n + i) * h] = F.one();
        return g;
    }
    const GF& F = tower_->field(n);
    Elt g(len_, F.zero());
    g[0] = F.one();
    return g;
}

Group::Elt Group::mul(const Elt& a, const Elt& b) const {
    const unsigned n = spec_.n, h = spec_.h;
    if (is_matrix_model()) {
        const GF& F = tower_->field(1);
        Elt r(len_, F.zero());
        for (unsigned i = 0; i < n; ++i)
            for (unsigned k = 0; k < n; ++k) {
                const fe* x = &a[(i * n + k) * h];
                for (unsigned j = 0; j < n; ++j) {
                    const fe* y = &b[(k * n + j) * h];
                    fe* z = &r[(i * n + j) * h];
                    for (unsigned s = 0; s < h; ++s) {
                        if (F.is_zero(x[s])) continue;
                        for (unsigned t = 0; s + t < h; ++t) z[s + t] = F.add(z[s + t], F.mul(x[s], y[t]));
                    }
                }
            }
        return r;
    }
    const GF& F = tower_->field(n);
    Elt r(len_, F.zero());
    for (unsigned i = 0; i < len_; ++i) {
        if (F.is_zero(a[i])) continue;
        std::int64_t tw = std::int64_t(e_) * i * spec_.f;
        for (unsigned j = 0; i + j < len_; ++j)
            r[i + j] = F.add(r[i + j], F.mul(a[i], F.frob_p(b[j], tw)));
    }
    return r;
}

Group::Elt Group::inv(const Elt& a) const {
    // Finite group: a^{-1} = a^{ord-1} is slow; use the enumerated structure instead.
    const unsigned n = spec_.n, h = spec_.h;
    if (is_matrix_model()) {
        // Gauss-Jordan over W_h(F_q) with unit pivots.
        const GF& F = tower_->field(1);
        using V = std::vector<fe>;
        std::vector<std::vector<V>> M(n, std::vector<V>(2 * n));
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j) {
                M[i][j] = V(a.begin() + (i * n + j) * h, a.begin() + (i * n + j + 1) * h);
                M[i][n + j] = series::zero(F, h);
                if (i == j) M[i][n + j][0] = F.one();
            }
        for (unsigned c = 0; c < n; ++c) {
            unsigned r = c;
            while (r < n && F.is_zero(M[r][c][0])) ++r;
            if (r == n) throw std::domain_error("matrix not invertible");
            std::swap(M[c], M[r]);
            V pinv = series::inv(F, M[c][c], [&](fe x) { return F.inv(x); });
            for (auto& e : M[c]) e = series::mul(F, e, pinv);
            for (unsigned r2 = 0; r2 < n; ++r2) {
                if (r2 == c) continue;
                V f = M[r2][c];
                for (unsigned k = 0; k < 2 * n; ++k) M[r2][k] = series::sub(F, M[r2][k], series::mul(F, f, M[c][k]));
            }
        }
        Elt g(len_);
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j) std::copy(M[i][n + j].begin(), M[i][n + j].end(), g.begin() + (i * n + j) * h);
        return g;
    }
    // Division model: solve a·b = 1 coefficient by coefficient.
    const GF& F = tower_->field(n);
    Elt b(len_, F.zero());
    fe a0i = F.inv(a[0]);
    b[0] = a0i;
    for (unsigned k = 1; k < len_; ++k) {
        // Σ_{i+j=k} a_i σ^{e i}(b_j) = 0  ⇒  a_0 b_k = -Σ_{i≥1} a_i σ^{ei}(b_{k-i})
        fe s = F.zero();
        for (unsigned i = 1; i <= k; ++i)
            s = F.add(s, F.mul(a[i], F.frob_p(b[k - i], std::int64_t(e_) * i * spec_.f)));
        b[k] = F.neg(F.mul(a0i, s));
    }
    return b;
}

WittElem Group::entry(const Elt& g, unsigned i, unsigned j) const {
    const unsigned n = spec_.n, h = spec_.h;
    return witt_from(*tower_, 1, std::vector<fe>(g.begin() + (i * n + j) * h, g.begin() + (i * n + j + 1) * h));
}

Group::Elt Group::from_entries(const std::vector<std::vector<WittElem>>& m) const {
    const unsigned n = spec_.n, h = spec_.h;
    Elt g(len_);
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) std::copy(m[i][j].c.begin(), m[i][j].c.end(), g.begin() + (i * n + j) * h);
    return g;
}

WittElem Group::det(const Elt& g) const {
    if (!is_matrix_model()) throw std::logic_error("det is defined for the matrix model");
    const unsigned n = spec_.n;
    // Leibniz expansion; n is small.
    std::vector<unsigned> perm(n);
    for (unsigned i = 0; i < n; ++i) perm[i] = i;
    WittElem acc = witt_zero(*tower_, 1, spec_.h);
    do {
        int inv = 0;
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = i + 1; j < n; ++j) inv += perm[i] > perm[j];
        WittElem t = witt_one(*tower_, 1, spec_.h);
        for (unsigned i = 0; i < n; ++i) t = t * entry(g, i, perm[i]);
        acc = inv % 2 ? acc - t : acc + t;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

const std::vector<std::size_t>& Group::generators() const {
    if (!gens_.empty() || size() == 1) return gens_;
    std::vector<char> in(size(), 0);
    in[id_] = 1;
    std::size_t count = 1;
    std::vector<std::size_t> members = {id_};
    for (std::size_t c = 0; c < size() && count < size(); ++c) {
        if (in[c]) continue;
        gens_.push_back(c);
        // close the subgroup generated so far
        std::deque<std::size_t> todo(members.begin(), members.end());
        while (!todo.empty()) {
            std::size_t x = todo.front();
            todo.pop_front();
            for (std::size_t g : gens_) {
                std::size_t y = mul_idx(x, g);
                if (!in[y]) {
                    in[y] = 1;
                    ++count;
                    members.push_back(y);
                    todo.push_back(y);
                }
            }
        }
    }
    return gens_;
}

const Group::Classes& Group::classes() const {
    if (classes_) return *classes_;
    auto C = std::make_unique<Classes>();
    const auto& gens = generators();
    std::vector<Elt> ginv;
    for (auto g : gens) ginv.push_back(inv(elts_[g]));
    C->class_of.assign(size(), std::size_t(-1));
    for (std::size_t i = 0; i < size(); ++i) {
        if (C->class_of[i] != std::size_t(-1)) continue;
        std::size_t cls = C->rep.size();
        C->rep.push_back(i);
        C->class_of[i] = cls;
        std::size_t sz = 1;
        std::deque<std::size_t> todo = {i};
        while (!todo.empty()) {
            std::size_t x = todo.front();
            todo.pop_front();
            for (std::size_t k = 0; k < gens.size(); ++k) {
                std::size_t y = index_of(mul(mul(elts_[gens[k]], elts_[x]), ginv[k]));
                if (C->class_of[y] == std::size_t(-1)) {
                    C->class_of[y] = cls;
                    ++sz;
                    todo.push_back(y);
                }
            }
        }
        C->size.push_back(sz);
    }
    classes_ = std::move(C);
    return *classes_;
}

std::vector<std::size_t> parabolic_radical(const Group& G, unsigned i0) {
    const GroupSpec& s = G.spec();
    if (!G.is_matrix_model()) throw unsupported_model("no proper parabolic subgroup: the group is anisotropic mod centre");
    if (i0 < 1 || i0 >= s.n) throw std::domain_error("i0 must lie in [1, n-1]");
    std::vector<std::size_t> r;
    const unsigned n = s.n;
    for (std::size_t i = 0; i < G.size(); ++i) {
        const auto& g = G.element(i);
        bool ok = true;
        for (unsigned a = 0; a < n && ok; ++a)
            for (unsigned b = 0; b < n && ok; ++b) {
                bool free = a < i0 && b >= i0;
                if (free) continue;
                WittElem e = G.entry(g, a, b);
                WittElem want = a == b ? witt_one(G.tower(), 1, s.h) : witt_zero(G.tower(), 1, s.h);
                ok = e == want;
            }
        if (ok) r.push_back(i);
    }
    return r;
}

Group::Elt embed_torus_element(const Group& G, const Torus& T, std::uint64_t t) {
    const GroupSpec& s = G.spec();
    WittElem x = T.element(t);
    if (!G.is_matrix_model()) {
        Group::Elt g(G.length(), G.tower().field(s.n).zero());
        for (unsigned j = 0; j < s.h; ++j)
            if (j * s.n < G.length()) g[j * s.n] = x.c[j];
        return g;
    }
    // Coordinates of F_{q^n} in the basis 1, γ, ..., γ^{n-1} over F_q, γ the generator.
    const FieldTower& TW = G.tower();
    const GF& Fn = TW.field(s.n);
    const GF& F1 = TW.field(1);
    const unsigned n = s.n, h = s.h;
    std::unordered_map<fe, std::vector<fe>> coord;
    auto vals = TW.enumerate(1);
    std::vector<std::size_t> dig(n, 0);
    for (;;) {
        fe v = Fn.zero();
        std::vector<fe> lam(n);
        for (unsigned i = 0; i < n; ++i) {
            lam[i] = vals[dig[i]];
            v = Fn.add(v, Fn.mul(TW.embed(1, lam[i], n), Fn.pow(1 % Fn.ord(), i)));
        }
        coord[v] = lam;
        std::size_t i = n;
        while (i-- > 0) {
            if (++dig[i] < vals.size()) break;
            dig[i] = 0;
        }
        if (i == std::size_t(-1)) break;
    }
    std::vector<std::vector<WittElem>> M(n, std::vector<WittElem>(n, witt_zero(TW, 1, h)));
    for (unsigned j = 0; j < n; ++j) {
        // t · γ^j, coefficient-wise in ϖ
        for (unsigned k = 0; k < h; ++k) {
            fe c = Fn.mul(x.c[k], Fn.pow(1 % Fn.ord(), j));
            const auto& lam = coord.at(c);
            for (unsigned i = 0; i < n; ++i) M[i][j].c[k] = lam[i];
        }
    }
    (void)F1;
    return G.from_entries(M);
}

std::vector<std::uint64_t> very_regular_elements(const Torus& T) {
    const GroupSpec& s = T.spec();
    const GF& F = T.tower().field(s.n);
    std::vector<std::uint64_t> r;
    for (std::uint64_t i = 0; i < T.order(); ++i) {
        fe res = T.residue(i);
        bool ok = true;
        for (unsigned d = 1; d < s.n; ++d)
            if (s.n % d == 0 && F.in_subfield(res, d * s.f)) ok = false;
        if (ok) r.push_back(i);
    }
    return r;
}

}  // namespace coxdl
