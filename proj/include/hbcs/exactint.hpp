#pragma once

// Exact integer helpers shared by the Fock-space and moment machinery.
// GMP integers back everything that must stay exact: the factorial-product
// weights rho_r(n) overflow 64-bit arithmetic already at r = 3, n = 8.

#include <gmpxx.h>

#include <stdexcept>

namespace hbcs::exact {

inline mpz_class factorial(long n) {
    if (n < 0)
        throw std::domain_error("factorial: negative argument");
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return f;
}

// rho_r(n) = [prod_{k=0}^{r-1} (n+k)!]^2 * (n+r)!
inline mpz_class rho(int r, long n) {
    if (r < 1)
        throw std::domain_error("rho: order r must be >= 1");
    if (n < 0)
        throw std::domain_error("rho: index n must be >= 0");
    mpz_class prod = 1;
    for (int k = 0; k < r; ++k)
        prod *= factorial(n + k);
    return prod * prod * factorial(n + r);
}

} // namespace hbcs::exact
