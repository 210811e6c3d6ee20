#include "coxdl/langlands.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace coxdl {

int rectifier(unsigned n) { return (n - 1) % 2 ? -1 : 1; }

WeilModel::WeilModel(unsigned q, unsigned n, unsigned h, unsigned m) : n_(n), m_(m) {
    if (n < 1 || m < 1 || h < 1) throw std::invalid_argument("WeilModel: n, m, h must be positive");
    GroupSpec s = GroupSpec::make(q, n, 0, h);
    tower_ = build_tower(s.p, s.f, {n});
    T_ = std::make_unique<Torus>(s, tower_);
}

WeilModel::Elt WeilModel::element(std::uint64_t idx) const {
    Elt e;
    e.t = idx % T_->order();
    idx /= T_->order();
    e.k = unsigned(idx % (n_ * m_));
    e.j = unsigned(idx / (n_ * m_));
    return e;
}

std::uint64_t WeilModel::index(const Elt& e) const {
    return e.t + T_->order() * (e.k + std::uint64_t(n_ * m_) * e.j);
}

// (a, k) F^i · (b, l) F^j = (a σ^i(b), k + l) F^{i+j}, and F^n = ϖ.
WeilModel::Elt WeilModel::mul(const Elt& a, const Elt& b) const {
    Elt r;
    r.t = T_->mul(a.t, T_->sigma(b.t, a.j));
    unsigned jj = a.j + b.j;
    r.k = (a.k + b.k + (jj >= n_ ? 1 : 0)) % (n_ * m_);
    r.j = jj % n_;
    return r;
}

WeilModel::Elt WeilModel::inv(const Elt& a) const {
    // (a,k)F^j · (b,l)F^{n-j} = 1 needs σ^j(b) = a^{-1}, k + l + [j>0] = 0.
    Elt r;
    r.j = (n_ - a.j) % n_;
    r.t = T_->sigma(T_->inv(a.t), -std::int64_t(a.j));
    const unsigned N = n_ * m_;
    r.k = (2 * N - a.k - (a.j ? 1 : 0)) % N;
    return r;
}

namespace {

unsigned model_conductor(const WeilModel& W) {
    return std::lcm(W.torus().conductor(), 2 * W.n() * W.m());
}

// χ on A: θ(a) · (μ(ϖ) ζ_{nm}^e)^k
Cyclotomic chi_A(const WeilModel& W, const TorusChar& th, long e, const WeilModel::Elt& a, unsigned E) {
    const unsigned N = W.n() * W.m();
    long k = long(a.k);
    long ex = long(char_exp(th, a.t)) * long(E / W.torus().conductor());
    ex += long(E / N) * ((e * k) % long(N));
    if (rectifier(W.n()) < 0 && k % 2) ex += long(E / 2);
    return Cyclotomic::zeta_pow(E, ex % long(E));
}

}  // namespace

ParamChar sigma_theta(const WeilModel& W, const TorusChar& th, long varpi_exp) {
    const unsigned E = model_conductor(W);
    const std::uint64_t NM = W.order();
    ParamChar pc;
    pc.W = &W;
    pc.values.assign(NM, Cyclotomic(E));
    std::vector<WeilModel::Elt> elts(NM), invs(NM);
    for (std::uint64_t i = 0; i < NM; ++i) elts[i] = W.element(i), invs[i] = W.inv(elts[i]);
    const mpq_class scale(1, mpz_class(std::to_string(W.order_A())));
    for (std::uint64_t g = 0; g < NM; ++g) {
        Cyclotomic acc(E);
        for (std::uint64_t s = 0; s < NM; ++s) {
            WeilModel::Elt c = W.mul(W.mul(elts[s], elts[g]), invs[s]);
            if (W.in_A(c)) acc += chi_A(W, th, varpi_exp, c, E);
        }
        pc.values[g] = acc * scale;
    }
    return pc;
}

Cyclotomic param_inner(const ParamChar& a, const ParamChar& b) {
    Cyclotomic acc(a.values.at(0).conductor());
    for (std::size_t i = 0; i < a.values.size(); ++i) acc += a.values[i] * b.values[i].conj();
    return acc * mpq_class(1, mpz_class(std::to_string(a.W->order())));
}

Verdict verify_param_bijection(const WeilModel& W, const std::vector<TorusChar>& thetas) {
    Verdict v;
    v.name = "param-bijection";
    v.pass = true;
    std::vector<ParamChar> sig;
    for (auto& th : thetas) sig.push_back(sigma_theta(W, th, 0));
    std::size_t irreducible = 0, classes = 0;
    std::set<std::vector<std::string>> distinct;
    for (std::size_t a = 0; a < thetas.size(); ++a) {
        auto orbit = galois_orbit(thetas[a]);
        if (sig[a].dim() != Cyclotomic(1, mpq_class(W.n()))) {
            v.pass = false;
            v.detail = "dimension of sigma_theta is not n for " + format_theta(thetas[a]);
        }
        bool gp = is_general_position(thetas[a], false);
        bool irr = param_inner(sig[a], sig[a]) == Cyclotomic(1, 1);
        irreducible += irr;
        if (gp != irr && v.pass) {
            v.pass = false;
            v.detail = "irreducibility disagrees with general position at " + format_theta(thetas[a]);
        }
        std::vector<std::string> key;
        for (auto& c : sig[a].values) key.push_back(c.str());
        distinct.insert(key);
        for (std::size_t b = 0; b < thetas.size(); ++b) {
            long stab = 0;
            for (unsigned g = 0; g < W.n(); ++g) stab += char_sigma(thetas[a], g) == thetas[b];
            Cyclotomic ip = param_inner(sig[a], sig[b]);
            bool same_orbit = std::find(orbit.begin(), orbit.end(), thetas[b]) != orbit.end();
            bool equal = sig[a].values == sig[b].values;
            if ((ip != Cyclotomic(1, stab) || equal != same_orbit) && v.pass) {
                v.pass = false;
                v.detail = "pair " + format_theta(thetas[a]) + ", " + format_theta(thetas[b]) + ": <s,s'> = " + ip.str() +
                           ", Galois matches = " + std::to_string(stab);
            }
        }
    }
    classes = distinct.size();
    if (v.pass) {
        std::ostringstream d;
        d << "#M=" << W.order() << " thetas=" << thetas.size() << " irreducible=" << irreducible
          << " distinct parameters=" << classes;
        v.detail = d.str();
    }
    return v;
}

Verdict verify_det_on_A(const WeilModel& W, const TorusChar& th) {
    Verdict v;
    v.name = "det-on-A";
    v.pass = true;
    const unsigned E = model_conductor(W), n = W.n();
    // Coset representatives F^j; g F^j = F^{j'} a' with a' ∈ A.
    std::vector<WeilModel::Elt> reps(n);
    for (unsigned j = 0; j < n; ++j) reps[j] = WeilModel::Elt{0, 0, j};
    std::uint64_t checked = 0;
    for (std::uint64_t idx = 0; idx < W.order(); ++idx) {
        WeilModel::Elt g = W.element(idx);
        std::vector<unsigned> perm(n);
        std::vector<Cyclotomic> entry;
        for (unsigned j = 0; j < n; ++j) {
            WeilModel::Elt x = W.mul(g, reps[j]);
            unsigned jj = x.j;
            WeilModel::Elt a = W.mul(W.inv(reps[jj]), x);
            perm[j] = jj;
            entry.push_back(chi_A(W, th, 0, a, E));
        }
        if (!W.in_A(g)) continue;
        int inv = 0;
        for (unsigned a = 0; a < n; ++a)
            for (unsigned b = a + 1; b < n; ++b) inv += perm[a] > perm[b];
        Cyclotomic det = Cyclotomic::zeta_pow(E, inv % 2 ? E / 2 : 0);
        for (auto& e : entry) det = det * e;
        // ∏_γ θ^γ(a) · μ(ϖ)^{nk}
        Cyclotomic expect = Cyclotomic::zeta_pow(E, 0);
        for (unsigned j = 0; j < n; ++j)
            expect = expect * char_eval(th, W.torus().sigma(g.t, j)).lift(E);
        if (rectifier(n) < 0 && (n * g.k) % 2) expect = -expect;
        ++checked;
        if (det != expect && v.pass) {
            v.pass = false;
            v.detail = "det mismatch at A-element index " + std::to_string(idx);
        }
    }
    if (v.pass) v.detail = "checked " + std::to_string(checked) + " elements of A";
    return v;
}

mpq_class macdonald_volume(const GroupSpec& spec) {
    mpz_class prod = 1;
    for (unsigned i = 1; i < spec.nprime; ++i) {
        mpz_class t;
        mpz_ui_pow_ui(t.get_mpz_t(), spec.q, spec.n0 * i);
        prod *= t - 1;
    }
    mpq_class v(prod, spec.n);
    v.canonicalize();
    return v;
}

FormalDegree formal_degree_check(Pipeline& P, const TorusChar& th) {
    FormalDegree fd;
    fd.volume = macdonald_volume(P.spec());
    fd.verdict.name = "formal-degree";
    ExtractionReport rep = P.lambda_extract(P.c_function(th), th);
    fd.formula = degree_formula(howe_decompose(th), P.spec());
    if (!rep.concentrated) {
        fd.measured = -1;
        fd.verdict.pass = false;
        fd.verdict.detail = "character not extracted: " + rep.note;
        return fd;
    }
    fd.measured = rep.chi.values.at(P.group().classes().class_of[P.group().identity_index()]).rational();
    fd.verdict.pass = fd.measured == mpq_class(fd.formula);
    std::ostringstream d;
    d << "chi(1) = " << fd.measured << ", closed form " << fd.formula << ", vol(G_O Z/Z) = " << fd.volume;
    fd.verdict.detail = d.str();
    return fd;
}

}  // namespace coxdl
