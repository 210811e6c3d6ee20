#include "coxdl/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace coxdl {

unsigned euler_phi(unsigned E) {
    unsigned r = E, n = E;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            while (n % d == 0) n /= d;
            r -= r / d;
        }
    if (n > 1) r -= r / n;
    return r;
}

namespace {

// Exact quotient of a by the monic polynomial b.
std::vector<long> exact_div(std::vector<long> a, const std::vector<long>& b) {
    std::size_t db = b.size() - 1;
    std::vector<long> q(a.size() - db, 0);
    for (std::size_t i = a.size() - 1; i + 1 > db && i >= db; --i) {
        long c = a[i];
        q[i - db] = c;
        for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
        if (i == db) break;
    }
    return q;
}

std::map<unsigned, std::vector<long>> phi_cache;
std::mutex phi_mu;

const std::vector<long>& phi_locked(unsigned E) {
    auto it = phi_cache.find(E);
    if (it != phi_cache.end()) return it->second;
    std::vector<long> num(E + 1, 0);
    num[0] = -1;
    num[E] = 1;
    for (unsigned d = 1; d < E; ++d)
        if (E % d == 0) num = exact_div(num, phi_locked(d));
    return phi_cache[E] = num;
}

}  // namespace

const std::vector<long>& cyclotomic_polynomial(unsigned E) {
    std::lock_guard<std::mutex> lock(phi_mu);
    return phi_locked(E);
}

Cyclotomic::Cyclotomic(unsigned E) : E_(E), c_(euler_phi(E)) {}

Cyclotomic::Cyclotomic(unsigned E, const mpq_class& r) : Cyclotomic(E) { c_[0] = r; }

Cyclotomic Cyclotomic::from_group_ring(unsigned E, const std::vector<mpq_class>& g) {
    const auto& phi = cyclotomic_polynomial(E);
    std::size_t d = phi.size() - 1;
    std::vector<mpq_class> a = g;
    a.resize(std::max<std::size_t>(a.size(), d), 0);
    for (std::size_t i = a.size(); i-- > d;) {
        if (a[i] == 0) continue;
        mpq_class c = a[i];
        for (std::size_t j = 0; j <= d; ++j) a[i - d + j] -= c * phi[j];
    }
    a.resize(d);
    Cyclotomic r(E);
    r.c_ = std::move(a);
    return r;
}

Cyclotomic Cyclotomic::from_group_ring(unsigned E, const std::vector<long>& g) {
    std::vector<mpq_class> a(g.begin(), g.end());
    return from_group_ring(E, a);
}

Cyclotomic Cyclotomic::zeta_pow(unsigned E, long k) {
    long m = ((k % (long)E) + E) % E;
    std::vector<mpq_class> g(E, 0);
    g[m] = 1;
    return from_group_ring(E, g);
}

Cyclotomic Cyclotomic::lift(unsigned L) const {
    if (L == E_) return *this;
    if (L % E_) throw std::invalid_argument("lift target not a multiple of the conductor");
    std::vector<mpq_class> g(L, 0);
    unsigned s = L / E_;
    for (std::size_t i = 0; i < c_.size(); ++i) g[i * s] = c_[i];
    return from_group_ring(L, g);
}

static unsigned common(unsigned a, unsigned b) { return std::lcm(a, b); }

Cyclotomic Cyclotomic::operator+(const Cyclotomic& o) const {
    unsigned L = common(E_, o.E_);
    Cyclotomic a = lift(L), b = o.lift(L);
    for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
    return a;
}

Cyclotomic Cyclotomic::operator-() const {
    Cyclotomic r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

Cyclotomic Cyclotomic::operator-(const Cyclotomic& o) const { return *this + (-o); }

Cyclotomic Cyclotomic::operator*(const Cyclotomic& o) const {
    unsigned L = common(E_, o.E_);
    Cyclotomic a = lift(L), b = o.lift(L);
    std::vector<mpq_class> g(L, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            if (b.c_[j] != 0) g[(i + j) % L] += a.c_[i] * b.c_[j];
    }
    return from_group_ring(L, g);
}

Cyclotomic Cyclotomic::operator*(const mpq_class& r) const {
    Cyclotomic a = *this;
    for (auto& x : a.c_) x *= r;
    return a;
}

bool Cyclotomic::operator==(const Cyclotomic& o) const {
    unsigned L = common(E_, o.E_);
    return lift(L).c_ == o.lift(L).c_;
}

Cyclotomic Cyclotomic::conj() const {
    std::vector<mpq_class> g(E_, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) g[(E_ - i) % E_] += c_[i];
    return from_group_ring(E_, g);
}

bool Cyclotomic::is_zero() const {
    for (auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool Cyclotomic::is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

mpq_class Cyclotomic::rational() const {
    if (!is_rational()) throw std::domain_error("cyclotomic value is not rational");
    return c_[0];
}

std::complex<double> Cyclotomic::to_complex() const {
    std::complex<double> s = 0;
    const double tau = 2 * std::acos(-1.0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0) s += c_[i].get_d() * std::polar(1.0, tau * double(i) / E_);
    return s;
}

std::string Cyclotomic::str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << c_[i].get_str();
        if (i) os << "*z" << E_ << "^" << i;
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace coxdl
