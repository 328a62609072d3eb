#ifndef TMOTIVE_BINOMIAL_HPP
#define TMOTIVE_BINOMIAL_HPP

#include <cstdint>

#include "error.hpp"

namespace tmotive {

// C(n, k) mod p for a small prime p and 0 <= k, n < p.
inline std::uint32_t small_binom_mod(std::uint64_t n, std::uint64_t k, std::uint32_t p) {
    if (k > n) return 0;
    std::uint64_t num = 1, den = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    // den is a unit since k < p.
    std::uint64_t inv = 1, b = den, e = p - 2;
    while (e) {
        if (e & 1) inv = inv * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(num * inv % p);
}

// Lucas: C(n, k) mod p as a product of digit binomials.
inline std::uint32_t binom_mod_p(std::uint64_t n, std::uint64_t k, std::uint32_t p) {
    std::uint64_t r = 1;
    while (k > 0 || n > 0) {
        std::uint64_t nd = n % p, kd = k % p;
        if (kd > nd) return 0;
        r = r * small_binom_mod(nd, kd, p) % p;
        n /= p;
        k /= p;
    }
    return static_cast<std::uint32_t>(r);
}

// C(a, k) mod p for any integer a, using the p-adic digits of a.
inline std::uint32_t binom_mod_p_signed(long long a, std::uint64_t k, std::uint32_t p) {
    if (a >= 0) return binom_mod_p(static_cast<std::uint64_t>(a), k, p);
    // Only the residue of a modulo p^s with p^s > k matters.
    std::uint64_t ps = 1;
    while (ps <= k) ps *= p;
    long long r = a % static_cast<long long>(ps);
    if (r < 0) r += static_cast<long long>(ps);
    return binom_mod_p(static_cast<std::uint64_t>(r), k, p);
}

/**
 * C(num/den, k) mod p for a p-integral rational num/den (p does not divide den).
 * The value is C(a, k) mod p where a == num/den modulo p^s and p^s > k.
 */
inline std::uint32_t binom_rational_mod_p(long long num, long long den, std::uint64_t k, std::uint32_t p) {
    if (den % static_cast<long long>(p) == 0)
        throw InseparableRamification("binomial of a non p-integral rational");
    std::uint64_t ps = 1;
    while (ps <= k) ps *= p;
    auto mod = [&](long long x) {
        long long r = x % static_cast<long long>(ps);
        return static_cast<unsigned long long>(r < 0 ? r + static_cast<long long>(ps) : r);
    };
    unsigned long long d = mod(den), inv = 0;
    // ps is small (bounded by p*k), so a linear search for the inverse is fine.
    for (unsigned long long x = 1; x < ps; ++x)
        if ((d * x) % ps == 1) {
            inv = x;
            break;
        }
    if (ps == 1) inv = 0;
    unsigned long long a = (mod(num) * inv) % ps;
    return binom_mod_p(a, k, p);
}

}  // namespace tmotive

#endif
