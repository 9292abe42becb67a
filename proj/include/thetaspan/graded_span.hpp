#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "thetaspan/exact_linalg.hpp"
#include "thetaspan/generators.hpp"
#include "thetaspan/qexpansion.hpp"

namespace thetaspan {

/// Monomial in the basis f_1..f_d of V, as an exponent vector of length d.
/// Canonical order: by total degree, then lexicographically on the exponent
/// vector. Fixed system-wide; candidate deduplication and pivot tie-breaking
/// use it.
struct Monomial {
    std::vector<std::uint32_t> e;

    std::uint32_t degree() const;
    std::uint32_t support_class(const std::vector<std::uint32_t>& basis_classes,
                                std::uint64_t p) const;
    std::string str() const; // e.g. "x0^2*x3"

    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);
};

/// Integer relation among degree-k candidate monomials (an element of the
/// homogeneous ideal ker phi when exact). When rational reconstruction or the
/// exact recheck fails, the vector is kept as residues and flagged with the
/// modulus it lives in.
struct Relation {
    std::vector<std::pair<Monomial, mpz_class>> terms;
    std::uint32_t block_class = 0;
    bool exact = false;          // verified by exact series multiplication
    std::uint64_t modulus = 0;   // 0 when integer-lifted; else the residue prime
};

struct SpanBasis {
    std::uint32_t k = 0;
    std::vector<Monomial> basis_monomials; // canonical order
    std::size_t dim = 0;
    std::size_t candidate_count = 0;
    std::map<std::uint32_t, std::size_t> per_block_dims; // class -> rank
    std::vector<Relation> relations;                     // when collected
    RankCertificate::Method cert_method = RankCertificate::Method::ModularAgreed;
    std::vector<std::uint64_t> primes_used;
    double wall_ms = 0.0;
    bool from_cache = false;
};

struct SpanOptions {
    RankOptions rank;
    unsigned threads = 1;
    std::uint64_t length_override = 0; // 0: use truncation_bound(p, k_max)
    bool allow_unsound = false;        // permit length below the bound
    bool collect_relations = false;
    bool verify_relations = false;     // exact recheck of lifted relations
    std::string cache_dir;             // empty: caching off
};

struct SpanResult {
    std::uint64_t p = 0;
    std::uint32_t k_max = 0;
    std::uint64_t length = 0;
    bool unsound = false;
    GeneratorSet generators;
    std::vector<SpanBasis> spans; // spans[k-1] holds degree k
};

/// dim W_k for k = 1..k_max through the span recursion W_{k+1} = V * W_k:
/// candidates x_i * m over the previous pivot basis, evaluated by one series
/// product each, partitioned into residue-class blocks, with certified
/// per-block ranks selecting the next pivot monomials.
SpanResult compute_spans(std::uint64_t p, std::uint32_t k_max, const SpanOptions& opts);

/// Residue-class partition of candidate expansions: class -> (block matrix,
/// row-to-candidate index map). Rows are the candidates' coefficient vectors
/// on the class sub-grid, in input order. Every expansion must carry a
/// support class.
struct BlockPartition {
    std::map<std::uint32_t, std::pair<IntMatrix, std::vector<std::size_t>>> blocks;
};
BlockPartition block_partition(const std::vector<const QExpansion*>& candidates);

/// Full-enumeration oracle: evaluates every degree-k monomial in the basis of
/// V directly and compares the blockwise rank with compute_spans. Guarded by
/// a monomial-count budget; intended for p in {3,5}, k <= 3.
bool exhaustive_span_check(std::uint64_t p, std::uint32_t k, const SpanOptions& opts);

/// Relations of degree k (convenience wrapper: runs compute_spans with
/// relation collection and returns the degree-k list).
std::vector<Relation> extract_relations(std::uint64_t p, std::uint32_t k,
                                        const SpanOptions& opts);

} // namespace thetaspan
