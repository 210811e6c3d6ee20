#include "coxdl/dlchar.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

namespace coxdl {

Cyclotomic inner_product(const ClassFunction& a, const ClassFunction& b) {
    const auto& cl = a.G->classes();
    Cyclotomic acc(1);
    for (std::size_t i = 0; i < cl.rep.size(); ++i)
        acc += a.values[i] * b.values[i].conj() * mpq_class(long(cl.size[i]));
    return acc * mpq_class(1, long(a.G->size()));
}

Pipeline::Pipeline(const GroupSpec& spec, PipelineOptions opt)
    : spec_(spec), opt_(std::move(opt)), tower_(build_tower(spec.p, spec.f, {spec.n})), M_(spec) {
    if (!spec.group_supported()) throw unsupported_model("no group model for " + spec.str());
    G_ = std::make_unique<Group>(spec_, tower_);
    T_ = std::make_unique<Torus>(spec_, tower_);
}

std::string Pipeline::order_hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::uint64_t v) { h = (h ^ v) * 1099511628211ull; };
    for (char ch : spec_.str()) mix(std::uint64_t(ch));
    const auto& cl = G_->classes();
    mix(G_->size());
    for (std::size_t r : cl.rep)
        for (fe v : G_->element(r)) mix(v);
    for (const auto& g : T_->generators())
        for (fe v : g.c) mix(v);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

// Residue obstruction for κ = 0, h ≥ 2: a point of S_{g,t} has residue x̄ with
// ḡ σ^i(x̄) = σ^i(t̄)^{-1} σ^i(x̄) for a basis, so ḡ has characteristic
// polynomial ∏_i (X - σ^i(t̄^{-1})).
bool residue_compatible(const Pipeline& P, const Group::Elt& g, std::uint64_t t) {
    const GroupSpec& s = P.spec();
    if (s.kappa != 0 || s.h < 2 || s.n > 3) return true;
    const FieldTower& TW = P.tower();
    const GF& F = TW.field(s.n);
    const unsigned n = s.n;
    std::vector<std::vector<fe>> a(n, std::vector<fe>(n));
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) a[i][j] = TW.embed(1, P.group().entry(g, i, j).c[0], n);
    // e1, e2, e3 of the eigenvalues of ḡ
    std::vector<fe> eg(n + 1, F.zero());
    eg[0] = F.one();
    for (unsigned i = 0; i < n; ++i) eg[1] = F.add(eg[1], a[i][i]);
    if (n == 2) {
        eg[2] = F.sub(F.mul(a[0][0], a[1][1]), F.mul(a[0][1], a[1][0]));
    } else {
        for (unsigned i = 0; i < 3; ++i)
            for (unsigned j = i + 1; j < 3; ++j)
                eg[2] = F.add(eg[2], F.sub(F.mul(a[i][i], a[j][j]), F.mul(a[i][j], a[j][i])));
        fe d = F.zero();
        for (unsigned c = 0; c < 3; ++c) {
            fe term = F.mul(a[0][c], F.sub(F.mul(a[1][(c + 1) % 3], a[2][(c + 2) % 3]),
                                           F.mul(a[1][(c + 2) % 3], a[2][(c + 1) % 3])));
            d = F.add(d, term);
        }
        eg[3] = d;
    }
    fe u = F.inv(P.torus().residue(t));
    std::vector<fe> et(n + 1, F.zero());
    et[0] = F.one();
    for (unsigned i = 0; i < n; ++i) {
        fe r = TW.frobenius(n, u, i);
        for (unsigned k = i + 1; k >= 1; --k) et[k] = F.add(et[k], F.mul(et[k - 1], r));
    }
    return eg == et;
}

}  // namespace

const SCountTable& Pipeline::table() {
    if (table_) return *table_;
    const auto& cl = G_->classes();
    const std::size_t C = cl.rep.size();
    const std::uint64_t NT = T_->order();
    SCountTable tab;
    tab.spec = spec_;
    tab.classes = C;
    tab.tcount = NT;
    tab.counts.assign(C * NT, 0);

    // Orbits of (class, t) under t ↦ σ(t) (κ = 0) and (g, t) ↦ (gz, tz^{-1})
    // for z in W_h^×(F_q), both of which preserve #S_{g,t}.
    std::vector<std::uint64_t> central;
    for (std::uint64_t z = 0; z < NT; ++z)
        if (T_->sigma(z, 1) == z) central.push_back(z);
    std::vector<std::size_t> zidx;
    for (auto z : central) zidx.push_back(G_->index_of(embed_torus_element(*G_, *T_, z)));

    std::vector<std::int64_t> orbit_of(C * NT, -1);
    std::vector<std::size_t> reps;
    for (std::size_t start = 0; start < C * NT; ++start) {
        if (orbit_of[start] >= 0) continue;
        std::int64_t id = std::int64_t(reps.size());
        reps.push_back(start);
        std::vector<std::size_t> stack{start};
        orbit_of[start] = id;
        while (!stack.empty()) {
            std::size_t cur = stack.back();
            stack.pop_back();
            std::size_t c = cur / NT;
            std::uint64_t t = cur % NT;
            auto push = [&](std::size_t nc, std::uint64_t nt) {
                std::size_t k = nc * NT + nt;
                if (orbit_of[k] < 0) {
                    orbit_of[k] = id;
                    stack.push_back(k);
                }
            };
            if (spec_.kappa == 0) push(c, T_->sigma(t, 1));
            for (std::size_t zi = 0; zi < central.size(); ++zi)
                push(cl.class_of[G_->mul_idx(cl.rep[c], zidx[zi])], T_->mul(t, T_->inv(central[zi])));
        }
    }

    std::vector<std::uint64_t> value(reps.size(), 0);
    std::vector<char> have(reps.size(), 0);
    if (opt_.lookup) {
        for (std::size_t k = 0; k < C * NT; ++k) {
            auto id = orbit_of[k];
            if (have[id]) continue;
            if (auto v = opt_.lookup(k / NT, k % NT)) {
                value[id] = *v;
                have[id] = 1;
                ++stats_.from_cache;
            }
        }
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::exception_ptr err;
    std::atomic<std::uint64_t> computed{0}, pruned{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next++;
            if (i >= reps.size()) return;
            if (have[i]) continue;
            std::size_t c = reps[i] / NT;
            std::uint64_t t = reps[i] % NT;
            try {
                const auto& g = G_->element(cl.rep[c]);
                std::uint64_t v = 0;
                if (opt_.count.prune && !residue_compatible(*this, g, t)) {
                    ++pruned;
                } else {
                    v = count_S(M_, *G_, g, *T_, t, opt_.count);
                    ++computed;
                }
                value[i] = v;
                if (opt_.store) {
                    std::lock_guard<std::mutex> lk(mu);
                    opt_.store(c, t, v);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lk(mu);
                if (!err) err = std::current_exception();
                next = reps.size();
            }
        }
    };
    unsigned nth = std::max(1u, opt_.threads);
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < nth; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
    stats_.computed += computed;
    stats_.pruned += pruned;
    stats_.from_symmetry += C * NT - reps.size();
    for (std::size_t k = 0; k < C * NT; ++k) tab.counts[k] = value[orbit_of[k]];
    table_ = std::move(tab);
    return *table_;
}

ClassFunction Pipeline::c_function(const TorusChar& th) {
    if (char_level(th) > spec_.h) throw std::invalid_argument("character level exceeds h");
    const SCountTable& tab = table();
    const unsigned E = T_->conductor();
    ClassFunction f;
    f.G = G_.get();
    const mpq_class scale(1, long(T_->order()));
    std::vector<std::uint64_t> ex(tab.tcount);
    for (std::uint64_t t = 0; t < tab.tcount; ++t) {
        std::uint64_t e = char_exp(th, t) % E;
        ex[t] = kTorusOrientation > 0 ? e : (E - e) % E;
    }
    for (std::size_t c = 0; c < tab.classes; ++c) {
        std::vector<mpq_class> ring(E, 0);
        for (std::uint64_t t = 0; t < tab.tcount; ++t)
            if (auto v = tab.at(c, t)) ring[ex[t]] += mpq_class(long(v));
        f.values.push_back(Cyclotomic::from_group_ring(E, ring) * scale);
    }
    return f;
}

ExtractionReport Pipeline::lambda_extract(const ClassFunction& c, const TorusChar& th) const {
    ExtractionReport rep;
    rep.theta = th;
    Cyclotomic cc = inner_product(c, c);
    if (!cc.is_rational()) {
        rep.note = "<c,c> not rational";
        return rep;
    }
    rep.cc = cc.rational();
    const mpz_class qn = mpz_class(ipow64(spec_.q, spec_.n));
    mpz_class pw = 1;
    long r = 0;
    while (mpq_class(pw) < rep.cc) {
        pw *= qn;
        ++r;
    }
    if (mpq_class(pw) != rep.cc) {
        rep.note = "<c,c> = " + rep.cc.get_str() + " is not a power of q^n";
        return rep;
    }
    if ((long(spec_.n) * r) % 2) {
        rep.r = r;
        rep.note = "q^{nr/2} irrational";
        return rep;
    }
    rep.concentrated = true;
    rep.r = r;
    rep.eps = r % 2 ? -1 : 1;
    mpz_class half;
    mpz_pow_ui(half.get_mpz_t(), mpz_class(spec_.q).get_mpz_t(), (unsigned long)(spec_.n * r / 2));
    rep.lambda = mpq_class(half) * rep.eps;
    rep.chi.G = c.G;
    mpq_class invl = 1 / rep.lambda;
    for (const auto& v : c.values) rep.chi.values.push_back(v * invl);
    std::size_t one = c.G->classes().class_of[c.G->identity_index()];
    const Cyclotomic& d = rep.chi.values[one];
    if (!d.is_rational() || d.rational() == 0) {
        rep.concentrated = false;
        rep.note = "degree not a nonzero rational";
        return rep;
    }
    if (d.rational() < 0) {
        rep.sign_flipped = true;
        for (auto& v : rep.chi.values) v = -v;
    }
    rep.chi.genuine = true;
    auto hd = howe_decompose(th);
    rep.r_formula = r_theta(hd, spec_);
    rep.r_matches = rep.r_formula == rep.r;
    if (!rep.r_matches) rep.note = "measured r = " + std::to_string(r) + ", formula r = " + std::to_string(rep.r_formula);
    return rep;
}

long mackey_prediction(const TorusChar& a, const TorusChar& b) {
    const GroupSpec& s = a.torus->spec();
    long cnt = 0;
    for (unsigned j = 0; j < s.nprime; ++j)
        if (char_sigma(a, std::int64_t(s.n0) * j) == b) ++cnt;
    return cnt;
}

MackeyResult mackey_matrix(Pipeline& P, const std::vector<TorusChar>& thetas) {
    MackeyResult res;
    res.thetas = thetas;
    const std::size_t N = thetas.size();
    std::vector<ExtractionReport> reps;
    for (const auto& th : thetas) {
        reps.push_back(P.lambda_extract(P.c_function(th), th));
        res.extracted.push_back(reps.back().concentrated);
    }
    res.measured.assign(N, std::vector<mpq_class>(N, -1));
    res.predicted.assign(N, std::vector<long>(N, 0));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            res.predicted[i][j] = mackey_prediction(thetas[i], thetas[j]);
            if (!res.extracted[i] || !res.extracted[j]) continue;
            Cyclotomic ip = inner_product(reps[i].chi, reps[j].chi);
            if (!ip.is_rational()) {
                res.pass = false;
                continue;
            }
            mpq_class v = abs(ip.rational());
            res.measured[i][j] = v;
            if (v != res.predicted[i][j]) res.pass = false;
        }
    return res;
}

namespace {

const Cyclotomic& value_at(const Pipeline& P, const ClassFunction& f, std::size_t elt) {
    return f.values[P.group().classes().class_of[elt]];
}

}  // namespace

Verdict verify_degree(Pipeline& P, const ExtractionReport& rep) {
    Verdict v;
    v.name = "degree";
    if (!rep.concentrated) {
        v.detail = "no extraction: " + rep.note;
        return v;
    }
    mpz_class want = degree_formula(howe_decompose(rep.theta), P.spec());
    mpq_class got = value_at(P, rep.chi, P.group().identity_index()).rational();
    v.pass = got == mpq_class(want);
    v.detail = "chi(1) = " + got.get_str() + ", formula " + want.get_str();
    return v;
}

Verdict verify_cuspidal(Pipeline& P, const ExtractionReport& rep, unsigned i0) {
    Verdict v;
    v.name = "cuspidal";
    if (P.spec().nprime == 1) {
        v.pass = v.vacuous = true;
        v.detail = "no proper parabolic";
        return v;
    }
    if (!rep.concentrated) {
        v.detail = "no extraction: " + rep.note;
        return v;
    }
    auto N = parabolic_radical(P.group(), i0);
    Cyclotomic s(1);
    for (auto u : N) s += value_at(P, rep.chi, u);
    v.pass = s.is_zero();
    v.detail = "#N = " + std::to_string(N.size()) + ", sum = " + s.str();
    return v;
}

Verdict verify_very_regular(Pipeline& P, const ExtractionReport& rep) {
    Verdict v;
    v.name = "very_regular";
    if (!rep.concentrated) {
        v.detail = "no extraction: " + rep.note;
        return v;
    }
    const Torus& T = P.torus();
    int sign = 0;
    std::size_t checked = 0;
    v.pass = true;
    for (auto x : very_regular_elements(T)) {
        Cyclotomic want(1);
        for (unsigned s = 0; s < P.spec().n; ++s) want += char_eval(rep.theta, T.sigma(x, s));
        // Trace of the induced representation: x fixes one vertex, whose stabilizer
        // contains Z·G_O with index n0; conjugation by Π acts on T through σ.
        Cyclotomic got(1);
        for (unsigned j = 0; j < P.spec().n0; ++j)
            got += value_at(P, rep.chi, P.group().index_of(embed_torus_element(P.group(), T, T.sigma(x, j))));
        ++checked;
        if (want.is_zero() && got.is_zero()) continue;
        int here = got == want ? 1 : (got == -want ? -1 : 0);
        if (here == 0 || (sign && here != sign)) {
            v.pass = false;
            v.detail = "mismatch at t = " + std::to_string(x) + ": " + got.str() + " vs " + want.str();
            return v;
        }
        sign = here;
    }
    v.vacuous = checked == 0;
    v.detail = std::to_string(checked) + " elements, sign " + (sign < 0 ? "-" : "+");
    return v;
}

Verdict verify_central(Pipeline& P, const ExtractionReport& rep) {
    Verdict v;
    v.name = "central";
    if (!rep.concentrated) {
        v.detail = "no extraction: " + rep.note;
        return v;
    }
    const Torus& T = P.torus();
    const Cyclotomic& deg = value_at(P, rep.chi, P.group().identity_index());
    std::size_t checked = 0;
    v.pass = true;
    for (std::uint64_t z = 0; z < T.order(); ++z) {
        if (T.sigma(z, 1) != z) continue;
        ++checked;
        const Cyclotomic& got = value_at(P, rep.chi, P.group().index_of(embed_torus_element(P.group(), T, z)));
        if (got != deg * char_eval(rep.theta, z)) {
            v.pass = false;
            v.detail = "mismatch at z = " + std::to_string(z);
            return v;
        }
    }
    v.detail = std::to_string(checked) + " central elements";
    return v;
}

ClassFunction classical_gl2_oracle(const Pipeline& P, const TorusChar& th) {
    const GroupSpec& s = P.spec();
    if (s.n != 2 || s.kappa != 0 || s.h != 1) throw std::invalid_argument("GL_2 oracle needs (q, 2, 0, 1)");
    const FieldTower& TW = P.tower();
    const GF& F = TW.field(2);
    const Group& G = P.group();
    const Torus& T = P.torus();
    auto tidx = [&](fe x) { return T.index(witt_from(TW, 2, {x})); };
    ClassFunction f;
    f.G = &G;
    f.genuine = true;
    const long q = s.q;
    for (std::size_t r : G.classes().rep) {
        const auto& g = G.element(r);
        fe a = TW.embed(1, G.entry(g, 0, 0).c[0], 2), b = TW.embed(1, G.entry(g, 0, 1).c[0], 2);
        fe c = TW.embed(1, G.entry(g, 1, 0).c[0], 2), d = TW.embed(1, G.entry(g, 1, 1).c[0], 2);
        fe tr = F.add(a, d), det = F.sub(F.mul(a, d), F.mul(b, c));
        std::vector<fe> roots;
        for (fe x : TW.enumerate(2))
            if (F.is_zero(F.add(F.sub(F.mul(x, x), F.mul(tr, x)), det))) roots.push_back(x);
        Cyclotomic val(1);
        if (roots.size() == 1 || (roots.size() == 2 && roots[0] == roots[1])) {
            bool scalar = F.is_zero(b) && F.is_zero(c) && a == d;
            Cyclotomic tz = char_eval(th, tidx(roots[0]));
            val = scalar ? tz * mpq_class(q - 1) : -tz;
        } else if (TW.field(2).in_subfield(roots[0], s.f)) {
            val = Cyclotomic(1);
        } else {
            val = -(char_eval(th, tidx(roots[0])) + char_eval(th, tidx(roots[1])));
        }
        f.values.push_back(val);
    }
    return f;
}

}  // namespace coxdl
