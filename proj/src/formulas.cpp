#include "thetaspan/formulas.hpp"

#include <sstream>
#include <stdexcept>

#include "thetaspan/errors.hpp"
#include "thetaspan/modarith.hpp"

namespace thetaspan {

namespace {
void require_odd_prime(std::uint64_t p, const char* who) {
    if (p < 3 || p % 2 == 0 || !is_prime_u64(p)) {
        std::ostringstream os;
        os << who << ": p must be an odd prime";
        throw ConfigError(os.str());
    }
}
} // namespace

std::int64_t dim_mk_gamma4(std::uint32_t k) {
    return 2 * static_cast<std::int64_t>(k) + 1;
}

std::int64_t dim_mk_gammapm(std::uint64_t p, std::uint32_t k) {
    require_odd_prime(p, "dim_mk_gammapm");
    if (k < 2) throw ConfigError("dim_mk_gammapm: formula valid for k >= 2");
    const std::int64_t pp = static_cast<std::int64_t>(p);
    // (p^2-1)((k-1)p + 3/2); p odd makes p^2-1 even, so this is an integer.
    const std::int64_t half = (pp * pp - 1) / 2;
    return half * (2 * (static_cast<std::int64_t>(k) - 1) * pp + 3);
}

std::int64_t dim_mk_gamma4p(std::uint64_t p, std::uint32_t k) {
    return 2 * dim_mk_gammapm(p, k);
}

std::int64_t conjecture_bound(std::uint64_t p, std::uint32_t k) {
    require_odd_prime(p, "conjecture_bound");
    if (k < 2) throw ConfigError("conjecture_bound: defined for k >= 2");
    const std::int64_t pp = static_cast<std::int64_t>(p);
    const std::int64_t kk = static_cast<std::int64_t>(k);
    const std::int64_t via_dim = dim_mk_gammapm(p, k) - 3 * (pp + 1) * (pp - 3);
    // (k-1)p^3 - 3p^2/2 + (7-k)p + 15/2, doubled to stay integral.
    const std::int64_t twice =
        2 * (kk - 1) * pp * pp * pp - 3 * pp * pp + 2 * (7 - kk) * pp + 15;
    if (twice % 2 != 0 || twice / 2 != via_dim)
        throw std::logic_error("conjecture_bound: closed forms disagree");
    return via_dim;
}

} // namespace thetaspan
