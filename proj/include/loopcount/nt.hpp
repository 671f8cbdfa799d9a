#pragma once

// Small number-theory helpers over machine integers.  Everything here works
// on moduli that fit comfortably in 64 bits; the big-integer arithmetic for
// counting lives in counting.hpp.

#include <cstdint>
#include <vector>

#include "loopcount/errors.hpp"

namespace loopcount::nt {

inline bool is_odd_prime(long long q) {
    if (q < 3 || q % 2 == 0) return false;
    for (long long d = 3; d * d <= q; d += 2)
        if (q % d == 0) return false;
    return true;
}

inline void require_odd_prime(long long q) {
    if (!is_odd_prime(q)) fail("not-odd-prime", "q must be an odd prime, got " + std::to_string(q));
}

inline long long mod_pow(long long base, long long exp, long long m) {
    long long r = 1 % m;
    base %= m;
    if (base < 0) base += m;
    while (exp > 0) {
        if (exp & 1) r = r * base % m;
        base = base * base % m;
        exp >>= 1;
    }
    return r;
}

// Multiplicative order of a modulo m (gcd(a, m) = 1 assumed).
inline int ord_mod(long long a, long long m) {
    long long v = a % m;
    if (v < 0) v += m;
    long long x = v;
    for (int k = 1; k <= m; ++k) {
        if (x == 1) return k;
        x = x * v % m;
    }
    fail("not-invertible", std::to_string(a) + " has no order mod " + std::to_string(m));
}

inline long long mod_inverse(long long a, long long p) {
    // p prime
    return mod_pow(a, p - 2, p);
}

inline std::vector<long long> divisors(long long n) {
    std::vector<long long> small, large;
    for (long long d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        small.push_back(d);
        if (d != n / d) large.push_back(n / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

inline long long euler_phi(long long n) {
    long long r = n;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        while (n % p == 0) n /= p;
        r -= r / p;
    }
    if (n > 1) r -= r / n;
    return r;
}

// Smallest primitive root mod an odd prime q.
inline int primitive_root(int q) {
    require_odd_prime(q);
    for (int g = 2; g < q; ++g)
        if (ord_mod(g, q) == q - 1) return g;
    fail("not-found", "no primitive root mod " + std::to_string(q));
}

}  // namespace loopcount::nt
