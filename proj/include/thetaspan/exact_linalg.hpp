#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "thetaspan/modarith.hpp"

namespace thetaspan {

/// Dense integer matrix, row-major.
struct IntMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<mpz_class> a;

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

    mpz_class& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    const mpz_class& at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    IntMatrix transposed() const;
};

/// Dense matrix of residues mod a word-sized prime.
struct WordMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint64_t> a;

    WordMatrix() = default;
    WordMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

    std::uint64_t& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    std::uint64_t at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

WordMatrix reduce_mod(const IntMatrix& m, std::uint64_t q);

/// Pivot data from Gaussian elimination with the fixed rule: columns are
/// processed left to right and the pivot is the topmost not-yet-used row with
/// a nonzero entry. pivot_cols is ascending; pivot_rows[i] pairs with
/// pivot_cols[i]. The selected pivot rows are exactly the greedy maximal
/// independent subset of rows taken in row order.
struct Echelon {
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols;
    std::vector<std::size_t> pivot_rows;
};

/// In-place elimination mod prime q.
Echelon echelon_mod(WordMatrix& m, std::uint64_t q);

/// Rank and pivot columns of m over F_q. Throws ConfigError if q is not prime.
Echelon rank_mod_prime(const IntMatrix& m, std::uint64_t q);

/// Basis of the right null space of m over F_q, one vector per free column,
/// normalized to 1 at the free coordinate. Throws ConfigError if q is not prime.
std::vector<std::vector<std::uint64_t>> kernel_mod_prime(const IntMatrix& m,
                                                         std::uint64_t q);
std::vector<std::vector<std::uint64_t>> kernel_mod_prime(WordMatrix m, std::uint64_t q);

/// Fraction-free (Bareiss) elimination over Z, same pivot rule. Exact.
Echelon bareiss_rank(IntMatrix m);

enum class CertPolicy {
    Modular2,     // escalate until two primes agree on rank and pivots
    ModularN,     // all primes in the budget must agree
    FractionFree, // single exact Bareiss elimination
};

struct RankCertificate {
    enum class Method { ModularAgreed, FractionFree };
    std::size_t rank = 0;
    Method method = Method::ModularAgreed;
    std::vector<std::uint64_t> primes; // the agreeing primes; empty for FractionFree
    std::vector<std::size_t> pivot_cols;
    std::vector<std::size_t> pivot_rows;
};

std::string cert_method_name(RankCertificate::Method m);
CertPolicy cert_policy_from_name(const std::string& name); // "modular2" | "modularN" | "bareiss"
std::string cert_policy_name(CertPolicy p);

struct RankOptions {
    CertPolicy policy = CertPolicy::Modular2;
    unsigned prime_bits = 62;
    std::uint64_t seed = 0;
    unsigned max_primes = 8;
    unsigned threads = 1;
};

/// Matrix accessible per residue prime, and exactly when the fraction-free
/// route is requested. Lets callers avoid materializing big-integer matrices
/// on the modular path.
struct MatrixSource {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::function<WordMatrix(std::uint64_t q)> mod_q;
    std::function<IntMatrix()> exact; // may be empty if policy never needs it
};

MatrixSource matrix_source(const IntMatrix& m);

/// Certified rank per the policy. Modular policies draw primes from the
/// source; certificates record rank, pivots, and the primes used.
/// Throws CertificationError when the prime budget is exhausted without
/// agreement.
RankCertificate rank_certified(const MatrixSource& src, const RankOptions& opts,
                               PrimeSource& primes);

/// Convenience wrapper creating the prime source from opts.seed.
RankCertificate rank_exact(const IntMatrix& m, const RankOptions& opts);

/// Rational reconstruction: find num/den == x (mod m) with
/// |num|, den <= floor(sqrt(m/2)), den > 0, gcd(den, m) = 1.
/// Returns false when no such pair exists.
bool rational_reconstruct(const mpz_class& x, const mpz_class& m, mpz_class& num,
                          mpz_class& den);

} // namespace thetaspan
