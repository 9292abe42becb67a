#include "thetaspan/qexpansion.hpp"

#include <sstream>

#include "thetaspan/errors.hpp"
#include "thetaspan/modarith.hpp"

namespace thetaspan {

namespace {
const mpz_class kZero = 0;

void require_compatible(const QExpansion& a, const QExpansion& b, const char* op) {
    if (a.grid_denominator() != b.grid_denominator()) {
        std::ostringstream os;
        os << op << ": grid denominators differ (" << a.grid_denominator() << " vs "
           << b.grid_denominator() << ")";
        throw ConfigError(os.str());
    }
    if (a.length() != b.length()) {
        std::ostringstream os;
        os << op << ": truncation lengths differ (" << a.length() << " vs "
           << b.length() << ")";
        throw ConfigError(os.str());
    }
}
} // namespace

std::uint64_t truncation_bound(std::uint64_t p, std::uint32_t k) {
    if (p < 3 || p % 2 == 0 || !is_prime_u64(p))
        throw ConfigError("truncation_bound: p must be an odd prime");
    if (k < 1) throw ConfigError("truncation_bound: weight k must be >= 1");
    return 2 * static_cast<std::uint64_t>(k) * p * (p * p - 1) + 1;
}

QExpansion::QExpansion(std::uint32_t grid_denominator, std::uint64_t length)
    : den_(grid_denominator), len_(length) {
    if (den_ == 0) throw ConfigError("QExpansion: grid denominator must be positive");
    if (len_ == 0) throw ConfigError("QExpansion: truncation length must be positive");
    coef_.resize(len_);
}

QExpansion::QExpansion(std::uint32_t grid_denominator, std::uint64_t length,
                       std::uint32_t support_class)
    : den_(grid_denominator), len_(length), cls_(support_class) {
    if (den_ == 0) throw ConfigError("QExpansion: grid denominator must be positive");
    if (len_ == 0) throw ConfigError("QExpansion: truncation length must be positive");
    if (support_class >= den_)
        throw ConfigError("QExpansion: support class must be a residue mod the grid");
    coef_.resize(class_slots(len_, den_, support_class));
}

std::uint64_t QExpansion::class_slots(std::uint64_t length, std::uint32_t den,
                                      std::uint32_t b) {
    if (length <= b) return 0;
    return (length - b + den - 1) / den;
}

const mpz_class& QExpansion::coeff(std::uint64_t n) const {
    if (n >= len_) throw ConfigError("QExpansion::coeff: index beyond truncation");
    if (!cls_) return coef_[n];
    if (n % den_ != *cls_) return kZero;
    return coef_[(n - *cls_) / den_];
}

void QExpansion::set_coeff(std::uint64_t n, mpz_class v) {
    if (n >= len_) throw ConfigError("QExpansion::set_coeff: index beyond truncation");
    if (!cls_) {
        coef_[n] = std::move(v);
        return;
    }
    if (n % den_ != *cls_)
        throw ConfigError("QExpansion::set_coeff: index off the support class");
    coef_[(n - *cls_) / den_] = std::move(v);
}

bool QExpansion::is_zero() const {
    for (const auto& c : coef_)
        if (c != 0) return false;
    return true;
}

QExpansion QExpansion::to_dense() const {
    if (!cls_) return *this;
    QExpansion out(den_, len_);
    for (std::size_t j = 0; j < coef_.size(); ++j)
        out.coef_[*cls_ + static_cast<std::uint64_t>(j) * den_] = coef_[j];
    return out;
}

bool operator==(const QExpansion& a, const QExpansion& b) {
    if (a.den_ != b.den_ || a.len_ != b.len_) return false;
    if (a.cls_ == b.cls_) return a.coef_ == b.coef_;
    // Different storage shapes can still be the same series.
    for (std::uint64_t n = 0; n < a.len_; ++n)
        if (a.coeff(n) != b.coeff(n)) return false;
    return true;
}

QExpansion add(const QExpansion& a, const QExpansion& b) {
    require_compatible(a, b, "add");
    if (a.support_class() && a.support_class() == b.support_class()) {
        QExpansion out(a.grid_denominator(), a.length(), *a.support_class());
        auto oa = a.data(), ob = b.data();
        auto od = out.mutable_data();
        for (std::size_t j = 0; j < od.size(); ++j) od[j] = oa[j] + ob[j];
        return out;
    }
    QExpansion out(a.grid_denominator(), a.length());
    auto od = out.mutable_data();
    for (std::uint64_t n = 0; n < a.length(); ++n) od[n] = a.coeff(n) + b.coeff(n);
    return out;
}

QExpansion scale(const mpz_class& c, const QExpansion& a) {
    QExpansion out = a.support_class()
                         ? QExpansion(a.grid_denominator(), a.length(), *a.support_class())
                         : QExpansion(a.grid_denominator(), a.length());
    auto oa = a.data();
    auto od = out.mutable_data();
    for (std::size_t j = 0; j < od.size(); ++j) od[j] = c * oa[j];
    return out;
}

QExpansion mul(const QExpansion& a, const QExpansion& b) {
    require_compatible(a, b, "mul");
    const std::uint32_t den = a.grid_denominator();
    const std::uint64_t len = a.length();

    if (a.support_class() && b.support_class()) {
        const std::uint32_t b1 = *a.support_class();
        const std::uint32_t b2 = *b.support_class();
        const std::uint32_t cls = (b1 + b2) % den;
        const std::uint64_t carry = (static_cast<std::uint64_t>(b1) + b2) / den;
        QExpansion out(den, len, cls);
        auto xs = a.data();
        auto ys = b.data();
        auto zs = out.mutable_data();
        const std::size_t zn = zs.size();
        // x_{j1} at n = b1 + D j1 times y_{j2} at n = b2 + D j2 lands at slot
        // j1 + j2 + carry of the result class.
        for (std::size_t j1 = 0; j1 < xs.size(); ++j1) {
            if (j1 + carry >= zn) break;
            if (sgn(xs[j1]) == 0) continue;
            const std::size_t lim = std::min(ys.size(), zn - carry - j1);
            const mpz_srcptr xv = xs[j1].get_mpz_t();
            for (std::size_t j2 = 0; j2 < lim; ++j2) {
                if (sgn(ys[j2]) == 0) continue;
                mpz_addmul(zs[j1 + j2 + carry].get_mpz_t(), xv, ys[j2].get_mpz_t());
            }
        }
        return out;
    }

    const QExpansion da = a.support_class() ? a.to_dense() : a;
    const QExpansion db = b.support_class() ? b.to_dense() : b;
    QExpansion out(den, len);
    auto xs = da.data();
    auto ys = db.data();
    auto zs = out.mutable_data();
    for (std::uint64_t i = 0; i < len; ++i) {
        if (sgn(xs[i]) == 0) continue;
        const mpz_srcptr xv = xs[i].get_mpz_t();
        const std::uint64_t lim = len - i;
        for (std::uint64_t j = 0; j < lim; ++j) {
            if (sgn(ys[j]) == 0) continue;
            mpz_addmul(zs[i + j].get_mpz_t(), xv, ys[j].get_mpz_t());
        }
    }
    return out;
}

} // namespace thetaspan
