#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace thetaspan {

/// Number of coefficients in q^(1/4p) that make truncation injective on
/// weight-k forms for Gamma(4p): L = 2*k*p*(p^2-1) + 1 (valence bound).
/// Throws ConfigError unless p is an odd prime and k >= 1.
std::uint64_t truncation_bound(std::uint64_t p, std::uint32_t k);

/// Truncated exact-integer q-expansion on the grid q^(n/D).
///
/// Stores coefficients for 0 <= n < length. When a support class b mod D is
/// set, every nonzero coefficient has n = b (mod D) and storage is dense on
/// that sub-grid only (entry j holds the coefficient of q^((b + D*j)/D)).
/// Values are immutable by convention once built; the arithmetic below
/// returns fresh objects and is safe to call concurrently on shared inputs.
class QExpansion {
public:
    QExpansion(std::uint32_t grid_denominator, std::uint64_t length);
    QExpansion(std::uint32_t grid_denominator, std::uint64_t length,
               std::uint32_t support_class);

    std::uint32_t grid_denominator() const { return den_; }
    std::uint64_t length() const { return len_; }
    std::optional<std::uint32_t> support_class() const { return cls_; }

    /// Coefficient of q^(n/D); zero off the support class. n must be < length.
    const mpz_class& coeff(std::uint64_t n) const;
    /// n must lie in the support class when one is set.
    void set_coeff(std::uint64_t n, mpz_class v);

    bool is_zero() const;

    /// Dense storage: the class sub-grid when a class is set, else the full grid.
    std::span<const mpz_class> data() const { return coef_; }
    std::span<mpz_class> mutable_data() { return coef_; }

    /// Number of sub-grid slots for class b at this (D, length).
    static std::uint64_t class_slots(std::uint64_t length, std::uint32_t den,
                                     std::uint32_t b);

    /// Copy with the support class forgotten and full dense storage.
    QExpansion to_dense() const;

    friend bool operator==(const QExpansion& a, const QExpansion& b);

private:
    std::uint32_t den_;
    std::uint64_t len_;
    std::optional<std::uint32_t> cls_;
    std::vector<mpz_class> coef_;
};

/// Coefficientwise sum. Support class survives only if both operands share it.
QExpansion add(const QExpansion& a, const QExpansion& b);

/// Scalar multiple; support class preserved.
QExpansion scale(const mpz_class& c, const QExpansion& a);

/// Truncated Cauchy product. When both operands carry support classes the
/// result is supported on (b1 + b2) mod D; otherwise the class is unset.
QExpansion mul(const QExpansion& a, const QExpansion& b);

} // namespace thetaspan
