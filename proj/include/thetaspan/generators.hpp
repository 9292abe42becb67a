#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thetaspan/exact_linalg.hpp"
#include "thetaspan/qexpansion.hpp"

namespace thetaspan {

/// The three weight-1 forms on Gamma(4): M = theta^2, N = 2*theta*phi,
/// P = phi^2. Their q^(1/4)-expansions are supported on m = 0, 1, 2 mod 4
/// respectively.
enum class BaseForm : std::uint8_t { M = 0, N = 1, P = 2 };

constexpr std::uint32_t form_class_mod4(BaseForm f) {
    return static_cast<std::uint32_t>(f);
}
std::string form_name(BaseForm f);

/// Coefficients of theta and phi in q^(1/4): theta has 1 at 0 and 2 at 4j^2,
/// phi has 2 at j^2 for odd j. Generated by direct square enumeration.
std::vector<std::int64_t> theta_quarter(std::size_t count);
std::vector<std::int64_t> phi_quarter(std::size_t count);

/// Coefficients c_0..c_{count-1} of f in q^(1/4), by enumerating pairs of
/// squares (no convolution machinery involved).
std::vector<std::int64_t> quarter_coefficients(BaseForm f, std::size_t count);

/// The 2k+1 monomials theta^(2k-j) phi^j, 0 <= j <= 2k, as expansions on the
/// q^(1/4) grid. Their span is all of weight k on Gamma(4).
std::vector<QExpansion> gamma4_weight_monomials(std::uint32_t k, std::uint64_t length);

/// One of the 3(p+1) spanning forms of V. Base(f) is the pullback f(pz);
/// Twist(f, b) is f_(b), the terms of f(z/p) with exponent = b mod p.
struct GeneratorLabel {
    BaseForm form = BaseForm::M;
    std::optional<std::uint32_t> twist; // nullopt = Base

    bool is_base() const { return !twist.has_value(); }
    std::string str() const;

    friend bool operator==(const GeneratorLabel&, const GeneratorLabel&) = default;
};

/// Support class mod 4p of the labeled generator, by CRT from the class of f
/// mod 4 and the mod-p condition (0 for Base, b for Twist).
std::uint32_t class_of(const GeneratorLabel& label, std::uint64_t p);

/// Exact class-supported expansion of the labeled generator on q^(1/4p),
/// truncated to the given length.
QExpansion build_generator(const GeneratorLabel& label, std::uint64_t p,
                           std::uint64_t length);

struct GeneratorSet {
    std::uint64_t p = 0;
    std::uint64_t length = 0;
    std::vector<GeneratorLabel> labels;     // size 3(p+1), fixed order
    std::vector<QExpansion> expansions;     // parallel to labels
    std::vector<std::size_t> basis_indices; // filled by reduce_to_basis
    std::size_t dim = 0;                    // d = dim V
    std::map<std::uint32_t, std::size_t> block_ranks; // class -> rank
    RankCertificate::Method cert_method = RankCertificate::Method::ModularAgreed;
    std::vector<std::uint64_t> primes_used;

    std::size_t size() const { return labels.size(); }
};

/// All 3(p+1) generators at the given truncation, in the fixed label order:
/// Base M, Base N, Base P, then Twist(M,b), Twist(N,b), Twist(P,b) for
/// b = 0..p-1.
GeneratorSet spanning_set(std::uint64_t p, std::uint64_t length, unsigned threads = 1);

/// Select the pivot basis of V from the spanning set, blockwise per support
/// class, pivoting in label order. Requires length >= truncation_bound(p, 1)
/// unless allow_short_truncation is set (callers that accept unsound runs).
void reduce_to_basis(GeneratorSet& gs, const RankOptions& opts,
                     bool allow_short_truncation = false);

} // namespace thetaspan
