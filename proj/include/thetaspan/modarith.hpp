#pragma once

#include <cstdint>
#include <random>
#include <set>

namespace thetaspan {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

/// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

/// Inverse of a mod prime q.
inline std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t q) {
    return powmod_u64(a % q, q - 2, q);
}

/// Deterministic stream of distinct random primes of a fixed bit size.
/// Same seed and bit size reproduce the same sequence.
class PrimeSource {
public:
    PrimeSource(std::uint64_t seed, unsigned bits);
    std::uint64_t next();

private:
    std::mt19937_64 rng_;
    unsigned bits_;
    std::set<std::uint64_t> used_;
};

} // namespace thetaspan
