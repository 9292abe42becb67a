#include "thetaspan/generators.hpp"

#include <algorithm>
#include <sstream>

#include "thetaspan/errors.hpp"
#include "thetaspan/parallel.hpp"

namespace thetaspan {

std::string form_name(BaseForm f) {
    switch (f) {
        case BaseForm::M: return "M";
        case BaseForm::N: return "N";
        case BaseForm::P: return "P";
    }
    return "?";
}

std::vector<std::int64_t> theta_quarter(std::size_t count) {
    std::vector<std::int64_t> c(count, 0);
    if (count > 0) c[0] = 1;
    for (std::uint64_t j = 1; 4 * j * j < count; ++j) c[4 * j * j] = 2;
    return c;
}

std::vector<std::int64_t> phi_quarter(std::size_t count) {
    std::vector<std::int64_t> c(count, 0);
    for (std::uint64_t j = 1; j * j < count; j += 2) c[j * j] = 2;
    return c;
}

std::vector<std::int64_t> quarter_coefficients(BaseForm f, std::size_t count) {
    if (count < 1) throw ConfigError("quarter_coefficients: count must be >= 1");
    std::vector<std::int64_t> c(count, 0);
    const std::uint64_t n = count;
    switch (f) {
        case BaseForm::M:
            // theta^2: exponents 4a^2 + 4b^2, signed lattice multiplicity.
            for (std::uint64_t a = 0; 4 * a * a < n; ++a)
                for (std::uint64_t b = 0; 4 * (a * a + b * b) < n; ++b)
                    c[4 * (a * a + b * b)] += (a ? 2 : 1) * (b ? 2 : 1);
            break;
        case BaseForm::N:
            // 2*theta*phi: exponents 4a^2 + b^2 with b odd.
            for (std::uint64_t a = 0; 4 * a * a < n; ++a)
                for (std::uint64_t b = 1; 4 * a * a + b * b < n; b += 2)
                    c[4 * a * a + b * b] += 2 * (a ? 2 : 1) * 2;
            break;
        case BaseForm::P:
            // phi^2: exponents b1^2 + b2^2 with b1, b2 odd.
            for (std::uint64_t b1 = 1; b1 * b1 < n; b1 += 2)
                for (std::uint64_t b2 = 1; b1 * b1 + b2 * b2 < n; b2 += 2)
                    c[b1 * b1 + b2 * b2] += 4;
            break;
    }
    return c;
}

std::vector<QExpansion> gamma4_weight_monomials(std::uint32_t k, std::uint64_t length) {
    if (k < 1) throw ConfigError("gamma4_weight_monomials: k must be >= 1");
    const auto th = theta_quarter(length);
    const auto ph = phi_quarter(length);
    // theta is supported on 0 mod 4, phi on 1 mod 4.
    QExpansion theta(4, length, 0), phi(4, length, 1);
    for (std::uint64_t m = 0; m < length; ++m) {
        if (th[m]) theta.set_coeff(m, th[m]);
        if (ph[m]) phi.set_coeff(m, ph[m]);
    }
    std::vector<QExpansion> out;
    out.reserve(2 * k + 1);
    for (std::uint32_t j = 0; j <= 2 * k; ++j) {
        const std::uint32_t theta_count = 2 * k - j;
        QExpansion acc = theta_count > 0 ? theta : phi;
        for (std::uint32_t t = 1; t < theta_count; ++t) acc = mul(acc, theta);
        for (std::uint32_t t = theta_count > 0 ? 0u : 1u; t < j; ++t) acc = mul(acc, phi);
        out.push_back(std::move(acc));
    }
    return out;
}

std::string GeneratorLabel::str() const {
    std::ostringstream os;
    os << form_name(form);
    if (twist) os << "(" << *twist << ")";
    return os.str();
}

std::uint32_t class_of(const GeneratorLabel& label, std::uint64_t p) {
    const std::uint32_t r4 = form_class_mod4(label.form);
    const std::uint64_t bp = label.twist ? (*label.twist % p) : 0;
    // CRT lift: n == r4 (mod 4), n == bp (mod p). Base forms sit at n = p^2*m
    // with m == r4 (mod 4) and p^2 == 1 (mod 4), so the same r4 applies.
    std::uint64_t n = bp;
    while (n % 4 != r4) n += p;
    return static_cast<std::uint32_t>(n);
}

QExpansion build_generator(const GeneratorLabel& label, std::uint64_t p,
                           std::uint64_t length) {
    const std::uint32_t den = static_cast<std::uint32_t>(4 * p);
    QExpansion out(den, length, class_of(label, p));
    if (label.is_base()) {
        const std::uint64_t step = p * p;
        const std::size_t mcount = (length + step - 1) / step;
        const auto q = quarter_coefficients(label.form, mcount);
        for (std::uint64_t m = 0; m * step < length; ++m)
            if (q[m]) out.set_coeff(m * step, q[m]);
    } else {
        const auto q = quarter_coefficients(label.form, length);
        for (std::uint64_t m = *label.twist % p; m < length; m += p)
            if (q[m]) out.set_coeff(m, q[m]);
    }
    return out;
}

GeneratorSet spanning_set(std::uint64_t p, std::uint64_t length, unsigned threads) {
    truncation_bound(p, 1); // validates p
    GeneratorSet gs;
    gs.p = p;
    gs.length = length;
    for (BaseForm f : {BaseForm::M, BaseForm::N, BaseForm::P})
        gs.labels.push_back({f, std::nullopt});
    for (std::uint32_t b = 0; b < p; ++b)
        for (BaseForm f : {BaseForm::M, BaseForm::N, BaseForm::P})
            gs.labels.push_back({f, b});

    // Share the three quarter-coefficient arrays across twists.
    std::vector<std::vector<std::int64_t>> quarters(3);
    for (int i = 0; i < 3; ++i)
        quarters[i] = quarter_coefficients(static_cast<BaseForm>(i), length);

    const std::uint32_t den = static_cast<std::uint32_t>(4 * p);
    gs.expansions.assign(gs.labels.size(), QExpansion(den, length, 0));
    parallel_for(gs.labels.size(), threads, [&](std::size_t i) {
        const GeneratorLabel& label = gs.labels[i];
        QExpansion e(den, length, class_of(label, p));
        const auto& q = quarters[static_cast<int>(label.form)];
        if (label.is_base()) {
            const std::uint64_t step = p * p;
            for (std::uint64_t m = 0; m * step < length; ++m)
                if (q[m]) e.set_coeff(m * step, q[m]);
        } else {
            for (std::uint64_t m = *label.twist % p; m < length; m += p)
                if (q[m]) e.set_coeff(m, q[m]);
        }
        gs.expansions[i] = std::move(e);
    });
    return gs;
}

void reduce_to_basis(GeneratorSet& gs, const RankOptions& opts,
                     bool allow_short_truncation) {
    if (!allow_short_truncation && gs.length < truncation_bound(gs.p, 1))
        throw ConfigError("reduce_to_basis: truncation below the weight-1 bound");

    // Group entries by support class, keeping label order inside each block.
    std::map<std::uint32_t, std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < gs.size(); ++i)
        blocks[*gs.expansions[i].support_class()].push_back(i);

    PrimeSource primes(opts.seed, opts.prime_bits);
    gs.basis_indices.clear();
    gs.block_ranks.clear();
    gs.primes_used.clear();
    for (const auto& [cls, members] : blocks) {
        IntMatrix m(members.size(), gs.expansions[members.front()].data().size());
        for (std::size_t r = 0; r < members.size(); ++r) {
            auto row = gs.expansions[members[r]].data();
            for (std::size_t c = 0; c < row.size(); ++c) m.at(r, c) = row[c];
        }
        RankCertificate cert = rank_certified(matrix_source(m), opts, primes);
        gs.block_ranks[cls] = cert.rank;
        gs.cert_method = cert.method;
        for (std::uint64_t q : cert.primes)
            if (std::find(gs.primes_used.begin(), gs.primes_used.end(), q) ==
                gs.primes_used.end())
                gs.primes_used.push_back(q);
        for (std::size_t r : cert.pivot_rows) gs.basis_indices.push_back(members[r]);
    }
    std::sort(gs.basis_indices.begin(), gs.basis_indices.end());
    gs.dim = gs.basis_indices.size();
}

} // namespace thetaspan
