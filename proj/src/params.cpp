#include "coxdl/params.hpp"

#include <numeric>
#include <stdexcept>

namespace coxdl {

std::uint64_t ipow64(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

GroupSpec GroupSpec::make(unsigned q, unsigned n, unsigned kappa, unsigned h) {
    if (n < 1 || h < 1 || kappa >= n) throw std::invalid_argument("need n >= 1, h >= 1, 0 <= kappa < n");
    GroupSpec s;
    s.q = q;
    s.n = n;
    s.kappa = kappa;
    s.h = h;
    unsigned p = 0;
    for (unsigned d = 2; d <= q; ++d)
        if (q % d == 0) {
            p = d;
            break;
        }
    if (p == 0) throw std::invalid_argument("q must be a prime power");
    unsigned f = 0, r = q;
    while (r % p == 0) {
        r /= p;
        ++f;
    }
    if (r != 1) throw std::invalid_argument("q must be a prime power");
    s.p = p;
    s.f = f;
    s.nprime = std::gcd(n, kappa);
    s.n0 = n / s.nprime;
    s.k0 = kappa / s.nprime;
    return s;
}

std::string GroupSpec::str() const {
    return "(" + std::to_string(q) + "," + std::to_string(n) + "," + std::to_string(kappa) + "," +
           std::to_string(h) + ")";
}

}  // namespace coxdl
