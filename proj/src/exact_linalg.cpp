#include "thetaspan/exact_linalg.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "thetaspan/errors.hpp"
#include "thetaspan/parallel.hpp"

namespace thetaspan {

IntMatrix IntMatrix::transposed() const {
    IntMatrix t(cols, rows);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
    return t;
}

WordMatrix reduce_mod(const IntMatrix& m, std::uint64_t q) {
    WordMatrix w(m.rows, m.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i)
        w.a[i] = mpz_fdiv_ui(m.a[i].get_mpz_t(), q);
    return w;
}

namespace {

void require_prime(std::uint64_t q) {
    if (!is_prime_u64(q)) {
        std::ostringstream os;
        os << "modulus " << q << " is not prime";
        throw ConfigError(os.str());
    }
}

// row_i += f * row_p (mod q), over columns [from, cols).
inline void addmul_row(std::uint64_t* ri, const std::uint64_t* rp, std::size_t from,
                       std::size_t cols, std::uint64_t f, std::uint64_t q) {
    if (f == 0) return;
    const unsigned __int128 ff = f;
    for (std::size_t j = from; j < cols; ++j) {
        ri[j] = static_cast<std::uint64_t>((ri[j] + ff * rp[j]) % q);
    }
}

} // namespace

Echelon echelon_mod(WordMatrix& m, std::uint64_t q) {
    Echelon res;
    std::vector<char> used(m.rows, 0);
    for (std::size_t col = 0; col < m.cols; ++col) {
        std::size_t piv = m.rows;
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (!used[i] && m.at(i, col) % q != 0) {
                piv = i;
                break;
            }
        }
        if (piv == m.rows) continue;
        used[piv] = 1;
        res.pivot_cols.push_back(col);
        res.pivot_rows.push_back(piv);
        const std::uint64_t inv = invmod_u64(m.at(piv, col), q);
        const std::uint64_t* rp = &m.a[piv * m.cols];
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (used[i]) continue;
            std::uint64_t v = m.at(i, col) % q;
            if (v == 0) continue;
            // factor = -v / pivot
            const std::uint64_t f = mulmod_u64(q - v, inv, q);
            addmul_row(&m.a[i * m.cols], rp, col, m.cols, f, q);
            m.at(i, col) = 0;
        }
    }
    res.rank = res.pivot_cols.size();
    return res;
}

Echelon rank_mod_prime(const IntMatrix& m, std::uint64_t q) {
    require_prime(q);
    WordMatrix w = reduce_mod(m, q);
    return echelon_mod(w, q);
}

namespace {

// Reduced row echelon form: pivots normalized to 1 and eliminated everywhere.
// Returns (pivot_cols, pivot_rows) with rows compacted so that pivot i lives
// in row i.
Echelon rref_mod(WordMatrix& m, std::uint64_t q) {
    Echelon e = echelon_mod(m, q);
    // Normalize pivot rows and clear above.
    for (std::size_t i = 0; i < e.rank; ++i) {
        const std::size_t pr = e.pivot_rows[i];
        const std::size_t pc = e.pivot_cols[i];
        const std::uint64_t inv = invmod_u64(m.at(pr, pc), q);
        std::uint64_t* rp = &m.a[pr * m.cols];
        for (std::size_t j = pc; j < m.cols; ++j) rp[j] = mulmod_u64(rp[j], inv, q);
        for (std::size_t t = 0; t < e.rank; ++t) {
            if (t == i) continue;
            const std::size_t r2 = e.pivot_rows[t];
            std::uint64_t v = m.at(r2, pc) % q;
            if (v == 0) continue;
            addmul_row(&m.a[r2 * m.cols], rp, pc, m.cols, q - v, q);
            m.at(r2, pc) = 0;
        }
    }
    return e;
}

} // namespace

std::vector<std::vector<std::uint64_t>> kernel_mod_prime(WordMatrix m, std::uint64_t q) {
    require_prime(q);
    Echelon e = rref_mod(m, q);
    std::vector<char> is_pivot(m.cols, 0);
    for (std::size_t c : e.pivot_cols) is_pivot[c] = 1;
    std::vector<std::vector<std::uint64_t>> basis;
    for (std::size_t fc = 0; fc < m.cols; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<std::uint64_t> v(m.cols, 0);
        v[fc] = 1;
        for (std::size_t i = 0; i < e.rank; ++i) {
            const std::uint64_t coef = m.at(e.pivot_rows[i], fc) % q;
            if (coef) v[e.pivot_cols[i]] = q - coef;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<std::vector<std::uint64_t>> kernel_mod_prime(const IntMatrix& m,
                                                         std::uint64_t q) {
    require_prime(q);
    return kernel_mod_prime(reduce_mod(m, q), q);
}

Echelon bareiss_rank(IntMatrix m) {
    Echelon res;
    std::vector<char> used(m.rows, 0);
    mpz_class prev = 1;
    mpz_class t1, t2;
    for (std::size_t col = 0; col < m.cols; ++col) {
        std::size_t piv = m.rows;
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (!used[i] && sgn(m.at(i, col)) != 0) {
                piv = i;
                break;
            }
        }
        if (piv == m.rows) continue;
        used[piv] = 1;
        res.pivot_cols.push_back(col);
        res.pivot_rows.push_back(piv);
        const mpz_class& pv = m.at(piv, col);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (used[i]) continue;
            const mpz_class mi = m.at(i, col); // copy; the slot is zeroed below
            for (std::size_t j = col + 1; j < m.cols; ++j) {
                // Fraction-free update: (a*pv - mi*b) / prev is exact.
                mpz_mul(t1.get_mpz_t(), m.at(i, j).get_mpz_t(), pv.get_mpz_t());
                mpz_mul(t2.get_mpz_t(), mi.get_mpz_t(), m.at(piv, j).get_mpz_t());
                mpz_sub(t1.get_mpz_t(), t1.get_mpz_t(), t2.get_mpz_t());
                assert(mpz_divisible_p(t1.get_mpz_t(), prev.get_mpz_t()));
                mpz_divexact(m.at(i, j).get_mpz_t(), t1.get_mpz_t(), prev.get_mpz_t());
            }
            m.at(i, col) = 0;
        }
        prev = pv;
    }
    res.rank = res.pivot_cols.size();
    return res;
}

std::string cert_method_name(RankCertificate::Method m) {
    switch (m) {
        case RankCertificate::Method::ModularAgreed: return "modular-agreed";
        case RankCertificate::Method::FractionFree: return "fraction-free";
    }
    return "?";
}

CertPolicy cert_policy_from_name(const std::string& name) {
    if (name == "modular2") return CertPolicy::Modular2;
    if (name == "modularN") return CertPolicy::ModularN;
    if (name == "bareiss") return CertPolicy::FractionFree;
    throw ConfigError("unknown certification policy: " + name);
}

std::string cert_policy_name(CertPolicy p) {
    switch (p) {
        case CertPolicy::Modular2: return "modular2";
        case CertPolicy::ModularN: return "modularN";
        case CertPolicy::FractionFree: return "bareiss";
    }
    return "?";
}

MatrixSource matrix_source(const IntMatrix& m) {
    MatrixSource src;
    src.rows = m.rows;
    src.cols = m.cols;
    src.mod_q = [&m](std::uint64_t q) { return reduce_mod(m, q); };
    src.exact = [&m] { return m; };
    return src;
}

namespace {

bool echelons_agree(const Echelon& a, const Echelon& b) {
    return a.rank == b.rank && a.pivot_cols == b.pivot_cols &&
           a.pivot_rows == b.pivot_rows;
}

RankCertificate certify_modular(const MatrixSource& src, const RankOptions& opts,
                                PrimeSource& prime_source, bool need_all) {
    const unsigned budget = std::max(2u, opts.max_primes);
    std::vector<std::uint64_t> primes;
    std::vector<Echelon> echelons;

    auto run_batch = [&](unsigned count) {
        const std::size_t base = primes.size();
        for (unsigned i = 0; i < count; ++i) primes.push_back(prime_source.next());
        echelons.resize(primes.size());
        parallel_for(count, std::min<unsigned>(opts.threads, count), [&](std::size_t i) {
            WordMatrix w = src.mod_q(primes[base + i]);
            echelons[base + i] = echelon_mod(w, primes[base + i]);
        });
    };

    run_batch(need_all ? budget : 2);
    for (;;) {
        // Look for two echelons agreeing at the maximal observed rank.
        std::size_t best = 0;
        for (const auto& e : echelons) best = std::max(best, e.rank);
        for (std::size_t i = 0; i < echelons.size(); ++i) {
            if (echelons[i].rank != best) continue;
            for (std::size_t j = i + 1; j < echelons.size(); ++j) {
                if (!echelons_agree(echelons[i], echelons[j])) continue;
                if (need_all) {
                    // ModularN: unanimity over the whole batch.
                    bool all = true;
                    for (const auto& e : echelons)
                        if (!echelons_agree(echelons[i], e)) all = false;
                    if (!all) {
                        std::ostringstream os;
                        os << "certification failed: " << primes.size()
                           << " primes disagree on rank/pivots";
                        throw CertificationError(os.str());
                    }
                }
                RankCertificate cert;
                cert.rank = echelons[i].rank;
                cert.method = RankCertificate::Method::ModularAgreed;
                cert.primes = {primes[i], primes[j]};
                cert.pivot_cols = echelons[i].pivot_cols;
                cert.pivot_rows = echelons[i].pivot_rows;
                return cert;
            }
        }
        if (need_all || primes.size() >= budget) {
            std::ostringstream os;
            os << "certification failed: no two of " << primes.size()
               << " primes agree on rank/pivots";
            throw CertificationError(os.str());
        }
        run_batch(1);
    }
}

} // namespace

RankCertificate rank_certified(const MatrixSource& src, const RankOptions& opts,
                               PrimeSource& primes) {
    if (opts.policy == CertPolicy::FractionFree) {
        if (!src.exact)
            throw ConfigError("fraction-free certification requires exact matrix access");
        Echelon e = bareiss_rank(src.exact());
        RankCertificate cert;
        cert.rank = e.rank;
        cert.method = RankCertificate::Method::FractionFree;
        cert.pivot_cols = std::move(e.pivot_cols);
        cert.pivot_rows = std::move(e.pivot_rows);
        return cert;
    }
    return certify_modular(src, opts, primes, opts.policy == CertPolicy::ModularN);
}

RankCertificate rank_exact(const IntMatrix& m, const RankOptions& opts) {
    PrimeSource primes(opts.seed, opts.prime_bits);
    return rank_certified(matrix_source(m), opts, primes);
}

bool rational_reconstruct(const mpz_class& x, const mpz_class& m, mpz_class& num,
                          mpz_class& den) {
    // Half-extended Euclid on (m, x mod m); stop when the remainder drops
    // below sqrt(m/2).
    mpz_class bound;
    mpz_fdiv_q_ui(bound.get_mpz_t(), m.get_mpz_t(), 2);
    mpz_sqrt(bound.get_mpz_t(), bound.get_mpz_t());

    mpz_class r0 = m, r1 = x % m;
    if (r1 < 0) r1 += m;
    mpz_class t0 = 0, t1 = 1, quo, tmp;
    while (r1 > bound) {
        mpz_fdiv_q(quo.get_mpz_t(), r0.get_mpz_t(), r1.get_mpz_t());
        tmp = r0 - quo * r1;
        r0 = r1;
        r1 = tmp;
        tmp = t0 - quo * t1;
        t0 = t1;
        t1 = tmp;
    }
    if (t1 == 0) return false;
    if (t1 < 0) {
        t1 = -t1;
        r1 = -r1;
    }
    if (t1 > bound) return false;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), t1.get_mpz_t(), m.get_mpz_t());
    if (g != 1) return false;
    num = r1;
    den = t1;
    return true;
}

} // namespace thetaspan
