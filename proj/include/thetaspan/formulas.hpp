#pragma once

#include <cstdint>

namespace thetaspan {

/// dim of weight-k forms on Gamma(4): 2k+1, all k >= 0.
std::int64_t dim_mk_gamma4(std::uint32_t k);

/// dim of weight-k forms on Gamma_pm(4p) = (p^2-1)((k-1)p + 3/2), k >= 2.
/// Exact integer (p odd makes p^2-1 divisible by 8). Throws ConfigError for k < 2.
std::int64_t dim_mk_gammapm(std::uint64_t p, std::uint32_t k);

/// dim of weight-k forms on Gamma(4p): twice the Gamma_pm value, k >= 2.
std::int64_t dim_mk_gamma4p(std::uint64_t p, std::uint32_t k);

/// Upper bound on dim W_k: dim_mk_gammapm(p,k) - 3(p+1)(p-3), equal to the
/// closed form (k-1)p^3 - 3p^2/2 + (7-k)p + 15/2. Both expressions are
/// evaluated exactly and must agree. k >= 2.
std::int64_t conjecture_bound(std::uint64_t p, std::uint32_t k);

} // namespace thetaspan
