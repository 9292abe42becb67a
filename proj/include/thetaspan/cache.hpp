#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "thetaspan/generators.hpp"
#include "thetaspan/graded_span.hpp"

namespace thetaspan {

/// Cache format: little-endian, length-prefixed integer streams with an
/// 8-byte magic, a format-version byte, and the key fields (p, L, pivot-rule
/// id) in the header. Key mismatch is a miss; malformed content throws
/// CacheError.
inline constexpr std::uint8_t kCacheFormatVersion = 1;
/// Identifier of the elimination pivot rule the cached bases depend on
/// (leftmost column, topmost row). Bump if the rule ever changes.
inline constexpr std::uint8_t kPivotRuleId = 1;

std::filesystem::path generator_cache_path(const std::filesystem::path& dir,
                                           std::uint64_t p, std::uint64_t length);
std::filesystem::path basis_cache_path(const std::filesystem::path& dir,
                                       std::uint64_t p, std::uint64_t length,
                                       std::uint32_t k);

/// Returns the cached set (with expansions, basis indices, block ranks and
/// certificate info) or nullopt on miss.
std::optional<GeneratorSet> load_generator_set(const std::filesystem::path& dir,
                                               std::uint64_t p, std::uint64_t length);
void store_generator_set(const std::filesystem::path& dir, const GeneratorSet& gs);

/// Cached degree-k pivot basis (monomials + dims + certificate), without
/// expansions; those are re-evaluated from the cached monomials.
struct CachedSpanBasis {
    std::uint32_t k = 0;
    std::size_t dim = 0;
    std::size_t candidate_count = 0;
    std::map<std::uint32_t, std::size_t> per_block_dims;
    std::vector<Monomial> basis_monomials;
    RankCertificate::Method cert_method = RankCertificate::Method::ModularAgreed;
    std::vector<std::uint64_t> primes_used;
};

std::optional<CachedSpanBasis> load_span_basis(const std::filesystem::path& dir,
                                               std::uint64_t p, std::uint64_t length,
                                               std::uint32_t k);
void store_span_basis(const std::filesystem::path& dir, std::uint64_t p,
                      std::uint64_t length, const CachedSpanBasis& basis);

} // namespace thetaspan
