#include "thetaspan/modarith.hpp"

#include <array>
#include <stdexcept>

namespace thetaspan {

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                            23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // Sufficient witness set for all n < 2^64.
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                            23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

PrimeSource::PrimeSource(std::uint64_t seed, unsigned bits) : rng_(seed), bits_(bits) {
    if (bits_ < 20 || bits_ > 62)
        throw std::invalid_argument("prime bit size must be in [20, 62]");
}

std::uint64_t PrimeSource::next() {
    const std::uint64_t lo = 1ull << (bits_ - 1);
    const std::uint64_t hi = (1ull << bits_) - 1;
    std::uniform_int_distribution<std::uint64_t> dist(lo, hi);
    for (;;) {
        std::uint64_t cand = dist(rng_) | 1ull;
        if (!is_prime_u64(cand)) continue;
        if (!used_.insert(cand).second) continue;
        return cand;
    }
}

} // namespace thetaspan
