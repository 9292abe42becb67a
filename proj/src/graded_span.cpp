#include "thetaspan/graded_span.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <optional>
#include <sstream>

#include "thetaspan/cache.hpp"
#include "thetaspan/errors.hpp"
#include "thetaspan/formulas.hpp"
#include "thetaspan/parallel.hpp"

namespace thetaspan {

std::uint32_t Monomial::degree() const {
    return std::accumulate(e.begin(), e.end(), 0u);
}

std::uint32_t Monomial::support_class(const std::vector<std::uint32_t>& basis_classes,
                                      std::uint64_t p) const {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
        acc += static_cast<std::uint64_t>(e[i]) * basis_classes[i];
    return static_cast<std::uint32_t>(acc % (4 * p));
}

std::string Monomial::str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!first) os << "*";
        os << "x" << i;
        if (e[i] > 1) os << "^" << e[i];
        first = false;
    }
    if (first) os << "1";
    return os.str();
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    const std::uint32_t da = a.degree(), db = b.degree();
    if (da != db) return da <=> db;
    // Within a degree, a larger exponent on an earlier variable sorts first,
    // so the unit monomials x0 < x1 < ... follow the generator order.
    return b.e <=> a.e;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct BasisEntry {
    Monomial mono;
    std::uint32_t cls = 0;
    QExpansion exp;
};

struct Candidate {
    Monomial mono;
    std::uint32_t cls = 0;
    std::uint32_t gen = 0;    // index of the multiplying basis generator
    std::uint32_t parent = 0; // index into the previous degree's basis
};

WordMatrix rows_mod_q(const std::vector<const QExpansion*>& rows, std::uint64_t q) {
    const std::size_t cols = rows.empty() ? 0 : rows.front()->data().size();
    WordMatrix w(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto data = rows[r]->data();
        for (std::size_t c = 0; c < cols; ++c)
            w.at(r, c) = mpz_fdiv_ui(data[c].get_mpz_t(), q);
    }
    return w;
}

WordMatrix cols_mod_q(const std::vector<const QExpansion*>& rows, std::uint64_t q) {
    const std::size_t cols = rows.empty() ? 0 : rows.front()->data().size();
    WordMatrix w(cols, rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto data = rows[r]->data();
        for (std::size_t c = 0; c < cols; ++c)
            w.at(c, r) = mpz_fdiv_ui(data[c].get_mpz_t(), q);
    }
    return w;
}

IntMatrix rows_exact(const std::vector<const QExpansion*>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front()->data().size();
    IntMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto data = rows[r]->data();
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = data[c];
    }
    return m;
}

void merge_primes(std::vector<std::uint64_t>& into, const std::vector<std::uint64_t>& from) {
    for (std::uint64_t q : from)
        if (std::find(into.begin(), into.end(), q) == into.end()) into.push_back(q);
}

/// Relations among the block's candidates: kernel of the transposed block
/// (candidates as columns), CRT-lifted over two primes, rationally
/// reconstructed and cleared to integer vectors. Failed lifts stay as
/// residues flagged with their modulus.
std::vector<Relation> block_relations(const std::vector<const QExpansion*>& rows,
                                      const std::vector<const Monomial*>& monos,
                                      std::uint32_t cls, std::uint64_t q1,
                                      std::uint64_t q2, bool verify) {
    std::vector<Relation> out;
    auto k1 = kernel_mod_prime(cols_mod_q(rows, q1), q1);
    auto k2 = kernel_mod_prime(cols_mod_q(rows, q2), q2);
    if (k1.size() != k2.size()) {
        // Pivot drift between the primes; keep the q1 kernel, flagged.
        k2.clear();
    }
    const mpz_class m1 = q1, m2 = q2, mm = m1 * m2;
    mpz_class inv_m1_mod_m2;
    mpz_invert(inv_m1_mod_m2.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t());

    for (std::size_t v = 0; v < k1.size(); ++v) {
        const auto& a = k1[v];
        Relation rel;
        rel.block_class = cls;
        bool lifted = false;
        std::vector<mpz_class> ints(a.size());
        if (!k2.empty()) {
            // CRT then per-coordinate rational reconstruction over q1*q2.
            const auto& b = k2[v];
            std::vector<mpz_class> nums(a.size()), dens(a.size());
            lifted = true;
            for (std::size_t i = 0; i < a.size() && lifted; ++i) {
                mpz_class x = a[i];
                mpz_class diff = (mpz_class(b[i]) - x) % m2;
                if (diff < 0) diff += m2;
                x += m1 * ((diff * inv_m1_mod_m2) % m2);
                lifted = rational_reconstruct(x, mm, nums[i], dens[i]);
            }
            if (lifted) {
                mpz_class den_lcm = 1;
                for (const auto& d : dens) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), d.get_mpz_t());
                for (std::size_t i = 0; i < a.size(); ++i)
                    ints[i] = nums[i] * (den_lcm / dens[i]);
                mpz_class g = 0;
                for (const auto& c : ints) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
                if (g > 1)
                    for (auto& c : ints) c /= g;
            }
        }
        if (lifted && verify) {
            // Exact recheck: the integer combination must vanish identically.
            const std::size_t slots = rows.front()->data().size();
            std::vector<mpz_class> acc(slots, 0);
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (ints[i] == 0) continue;
                auto data = rows[i]->data();
                for (std::size_t c = 0; c < slots; ++c)
                    mpz_addmul(acc[c].get_mpz_t(), ints[i].get_mpz_t(), data[c].get_mpz_t());
            }
            for (const auto& c : acc)
                if (c != 0) {
                    lifted = false;
                    break;
                }
        }
        if (lifted) {
            rel.exact = verify; // integer-lifted; exact only after the recheck
            rel.modulus = 0;
            for (std::size_t i = 0; i < a.size(); ++i)
                if (ints[i] != 0) rel.terms.emplace_back(*monos[i], ints[i]);
        } else {
            rel.exact = false;
            rel.modulus = q1;
            for (std::size_t i = 0; i < a.size(); ++i)
                if (a[i] != 0) rel.terms.emplace_back(*monos[i], mpz_class(a[i]));
        }
        out.push_back(std::move(rel));
    }
    return out;
}

} // namespace

BlockPartition block_partition(const std::vector<const QExpansion*>& candidates) {
    BlockPartition part;
    std::map<std::uint32_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto cls = candidates[i]->support_class();
        if (!cls)
            throw ConfigError("block_partition: candidate without support class");
        groups[*cls].push_back(i);
    }
    for (const auto& [cls, idxs] : groups) {
        std::vector<const QExpansion*> rows;
        rows.reserve(idxs.size());
        for (std::size_t i : idxs) rows.push_back(candidates[i]);
        part.blocks.emplace(cls, std::make_pair(rows_exact(rows), idxs));
    }
    return part;
}

SpanResult compute_spans(std::uint64_t p, std::uint32_t k_max, const SpanOptions& opts) {
    if (k_max < 1) throw ConfigError("compute_spans: k_max must be >= 1");
    const std::uint64_t sound_length = truncation_bound(p, k_max);
    const std::uint64_t length = opts.length_override ? opts.length_override : sound_length;
    const bool unsound = length < sound_length;
    if (unsound && !opts.allow_unsound)
        throw ConfigError("compute_spans: truncation below the Sturm bound (pass "
                          "allow_unsound to force)");
    const std::uint32_t den = static_cast<std::uint32_t>(4 * p);
    const bool cache_on = !opts.cache_dir.empty();

    RankOptions ropts = opts.rank;
    ropts.threads = opts.threads;

    SpanResult result;
    result.p = p;
    result.k_max = k_max;
    result.length = length;
    result.unsound = unsound;

    // Degree 1: the generator basis.
    auto t0 = Clock::now();
    std::optional<GeneratorSet> cached;
    if (cache_on) cached = load_generator_set(opts.cache_dir, p, length);
    bool gens_from_cache = cached.has_value();
    if (cached) {
        result.generators = std::move(*cached);
    } else {
        result.generators = spanning_set(p, length, opts.threads);
        reduce_to_basis(result.generators, ropts, unsound);
        if (cache_on) store_generator_set(opts.cache_dir, result.generators);
    }
    const GeneratorSet& gs = result.generators;
    const std::size_t d = gs.dim;
    if (d > 3 * (p + 1))
        throw std::logic_error("dim V exceeds the spanning-set size");

    std::vector<std::uint32_t> basis_classes(d);
    std::vector<const QExpansion*> basis_exp(d);
    for (std::size_t i = 0; i < d; ++i) {
        const std::size_t idx = gs.basis_indices[i];
        basis_classes[i] = *gs.expansions[idx].support_class();
        basis_exp[i] = &gs.expansions[idx];
    }

    std::vector<BasisEntry> prev;
    prev.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
        Monomial m;
        m.e.assign(d, 0);
        m.e[i] = 1;
        prev.push_back({std::move(m), basis_classes[i], *basis_exp[i]});
    }

    {
        SpanBasis s1;
        s1.k = 1;
        s1.dim = d;
        s1.candidate_count = gs.size();
        s1.per_block_dims =
            std::map<std::uint32_t, std::size_t>(gs.block_ranks.begin(), gs.block_ranks.end());
        for (const auto& e : prev) s1.basis_monomials.push_back(e.mono);
        s1.cert_method = gs.cert_method;
        s1.primes_used = gs.primes_used;
        s1.from_cache = gens_from_cache;
        s1.wall_ms = ms_since(t0);
        result.spans.push_back(std::move(s1));
    }

    for (std::uint32_t k = 2; k <= k_max; ++k) {
        t0 = Clock::now();
        // Primes are drawn per degree so results do not depend on whether
        // earlier degrees came from the cache.
        PrimeSource degree_primes(ropts.seed + k, ropts.prime_bits);

        if (cache_on && !opts.collect_relations) {
            if (auto cb = load_span_basis(opts.cache_dir, p, length, k)) {
                // Rebuild only the pivot expansions from the previous basis.
                std::map<Monomial, std::size_t> prev_index;
                for (std::size_t i = 0; i < prev.size(); ++i)
                    prev_index.emplace(prev[i].mono, i);
                std::vector<std::optional<BasisEntry>> rebuilt(cb->basis_monomials.size());
                parallel_for(cb->basis_monomials.size(), opts.threads, [&](std::size_t j) {
                    const Monomial& mono = cb->basis_monomials[j];
                    for (std::size_t i = 0; i < d; ++i) {
                        if (mono.e[i] == 0) continue;
                        Monomial parent = mono;
                        parent.e[i] -= 1;
                        auto it = prev_index.find(parent);
                        if (it == prev_index.end()) continue;
                        rebuilt[j] = BasisEntry{mono, mono.support_class(basis_classes, p),
                                                mul(*basis_exp[i], prev[it->second].exp)};
                        return;
                    }
                    throw CacheError("cached basis monomial does not factor through "
                                     "the previous degree");
                });
                std::vector<BasisEntry> next;
                next.reserve(rebuilt.size());
                for (auto& e : rebuilt) next.push_back(std::move(*e));
                SpanBasis sk;
                sk.k = k;
                sk.dim = cb->dim;
                sk.candidate_count = cb->candidate_count;
                sk.per_block_dims = cb->per_block_dims;
                sk.basis_monomials = cb->basis_monomials;
                sk.cert_method = cb->cert_method;
                sk.primes_used = cb->primes_used;
                sk.from_cache = true;
                sk.wall_ms = ms_since(t0);
                result.spans.push_back(std::move(sk));
                prev = std::move(next);
                continue;
            }
        }

        // Candidate monomials x_i * m over the previous pivot basis.
        std::vector<Candidate> cands;
        cands.reserve(d * prev.size());
        for (std::uint32_t i = 0; i < d; ++i) {
            for (std::uint32_t m = 0; m < prev.size(); ++m) {
                Candidate c;
                c.mono = prev[m].mono;
                c.mono.e[i] += 1;
                c.cls = static_cast<std::uint32_t>(
                    (static_cast<std::uint64_t>(prev[m].cls) + basis_classes[i]) % den);
                c.gen = i;
                c.parent = m;
                cands.push_back(std::move(c));
            }
        }
        std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
            if (auto c = a.mono <=> b.mono; c != 0) return c < 0;
            if (a.gen != b.gen) return a.gen < b.gen;
            return a.parent < b.parent;
        });
        cands.erase(std::unique(cands.begin(), cands.end(),
                                [](const Candidate& a, const Candidate& b) {
                                    return a.mono == b.mono;
                                }),
                    cands.end());

        std::map<std::uint32_t, std::vector<std::size_t>> blocks;
        for (std::size_t i = 0; i < cands.size(); ++i) blocks[cands[i].cls].push_back(i);

        SpanBasis sk;
        sk.k = k;
        sk.candidate_count = cands.size();
        std::vector<BasisEntry> next;

        for (const auto& [cls, members] : blocks) {
            // Evaluate the block's candidates: one series product each.
            std::vector<std::optional<QExpansion>> exps(members.size());
            parallel_for(members.size(), opts.threads, [&](std::size_t j) {
                const Candidate& c = cands[members[j]];
                exps[j] = mul(*basis_exp[c.gen], prev[c.parent].exp);
            });
            std::vector<const QExpansion*> rows(members.size());
            for (std::size_t j = 0; j < members.size(); ++j) rows[j] = &*exps[j];

            MatrixSource src;
            src.rows = rows.size();
            src.cols = QExpansion::class_slots(length, den, cls);
            src.mod_q = [&rows](std::uint64_t q) { return rows_mod_q(rows, q); };
            src.exact = [&rows] { return rows_exact(rows); };

            RankCertificate cert = rank_certified(src, ropts, degree_primes);
            sk.per_block_dims[cls] = cert.rank;
            sk.cert_method = cert.method;
            merge_primes(sk.primes_used, cert.primes);

            if (opts.collect_relations && cert.rank < members.size()) {
                std::uint64_t q1, q2;
                if (cert.primes.size() >= 2) {
                    q1 = cert.primes[0];
                    q2 = cert.primes[1];
                } else {
                    q1 = degree_primes.next();
                    q2 = degree_primes.next();
                }
                std::vector<const Monomial*> monos(members.size());
                for (std::size_t j = 0; j < members.size(); ++j)
                    monos[j] = &cands[members[j]].mono;
                auto rels = block_relations(rows, monos, cls, q1, q2,
                                            opts.verify_relations);
                for (auto& r : rels) sk.relations.push_back(std::move(r));
            }

            for (std::size_t r : cert.pivot_rows) {
                const Candidate& c = cands[members[r]];
                next.push_back({c.mono, cls, std::move(*exps[r])});
            }
        }

        std::sort(next.begin(), next.end(),
                  [](const BasisEntry& a, const BasisEntry& b) { return a.mono < b.mono; });
        sk.dim = 0;
        for (const auto& [cls, rank] : sk.per_block_dims) sk.dim += rank;
        sk.basis_monomials.clear();
        sk.basis_monomials.reserve(next.size());
        for (const auto& e : next) sk.basis_monomials.push_back(e.mono);

        if (!unsound && k >= 3) {
            const std::int64_t bound = conjecture_bound(p, k);
            if (static_cast<std::int64_t>(sk.dim) > bound) {
                std::ostringstream os;
                os << "dim W_" << k << " = " << sk.dim << " exceeds the bound " << bound
                   << " (internal error)";
                throw std::logic_error(os.str());
            }
        }

        sk.wall_ms = ms_since(t0);
        if (cache_on && !unsound) {
            CachedSpanBasis cb;
            cb.k = k;
            cb.dim = sk.dim;
            cb.candidate_count = sk.candidate_count;
            cb.per_block_dims = sk.per_block_dims;
            cb.basis_monomials = sk.basis_monomials;
            cb.cert_method = sk.cert_method;
            cb.primes_used = sk.primes_used;
            store_span_basis(opts.cache_dir, p, length, cb);
        }
        result.spans.push_back(std::move(sk));
        prev = std::move(next);
    }
    return result;
}

bool exhaustive_span_check(std::uint64_t p, std::uint32_t k, const SpanOptions& opts) {
    // Monomial-count budget in place of a hard (p, k) allowlist; estimated
    // with the spanning-set size before anything is computed.
    const std::uint64_t dmax = 3 * (p + 1);
    double estimate = 1;
    for (std::uint32_t i = 0; i < k; ++i)
        estimate = estimate * static_cast<double>(dmax + k - 1 - i) / (i + 1);
    if (estimate > 20000.0)
        throw ConfigError("exhaustive_span_check: monomial count over budget");

    SpanOptions o = opts;
    if (o.length_override == 0) o.length_override = truncation_bound(p, k);
    SpanResult res = compute_spans(p, k, o);
    const std::size_t d = res.generators.dim;

    std::vector<const QExpansion*> basis_exp(d);
    std::vector<std::uint32_t> basis_classes(d);
    for (std::size_t i = 0; i < d; ++i) {
        basis_exp[i] = &res.generators.expansions[res.generators.basis_indices[i]];
        basis_classes[i] = *basis_exp[i]->support_class();
    }

    // All multisets of size k from d generators.
    std::vector<std::vector<std::uint32_t>> tuples;
    std::vector<std::uint32_t> cur(k, 0);
    for (;;) {
        tuples.push_back(cur);
        std::int64_t pos = k - 1;
        while (pos >= 0 && cur[pos] == d - 1) --pos;
        if (pos < 0) break;
        const std::uint32_t v = cur[pos] + 1;
        for (std::size_t j = pos; j < k; ++j) cur[j] = v;
    }

    std::vector<std::optional<QExpansion>> exps(tuples.size());
    parallel_for(tuples.size(), opts.threads, [&](std::size_t t) {
        QExpansion acc = *basis_exp[tuples[t][0]];
        for (std::uint32_t j = 1; j < k; ++j) acc = mul(acc, *basis_exp[tuples[t][j]]);
        exps[t] = std::move(acc);
    });

    std::map<std::uint32_t, std::vector<const QExpansion*>> blocks;
    for (auto& e : exps) blocks[*e->support_class()].push_back(&*e);

    RankOptions ropts = opts.rank;
    ropts.threads = opts.threads;
    PrimeSource primes(ropts.seed + 1000 + k, ropts.prime_bits);
    std::size_t total = 0;
    for (const auto& [cls, rows] : blocks) {
        MatrixSource src;
        src.rows = rows.size();
        src.cols = rows.front()->data().size();
        src.mod_q = [&rows](std::uint64_t q) { return rows_mod_q(rows, q); };
        src.exact = [&rows] { return rows_exact(rows); };
        total += rank_certified(src, ropts, primes).rank;
    }
    return total == res.spans[k - 1].dim;
}

std::vector<Relation> extract_relations(std::uint64_t p, std::uint32_t k,
                                        const SpanOptions& opts) {
    SpanOptions o = opts;
    o.collect_relations = true;
    SpanResult res = compute_spans(p, k, o);
    return std::move(res.spans[k - 1].relations);
}

} // namespace thetaspan
