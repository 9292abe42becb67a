#include <doctest.h>

#include <set>

#include "thetaspan/errors.hpp"
#include "thetaspan/formulas.hpp"
#include "thetaspan/graded_span.hpp"

using namespace thetaspan;

namespace {

SpanOptions fast_opts() {
    SpanOptions o;
    o.threads = 2;
    return o;
}

std::vector<std::size_t> dims_of(const SpanResult& r) {
    std::vector<std::size_t> out;
    for (const auto& s : r.spans) out.push_back(s.dim);
    return out;
}

} // namespace

TEST_CASE("monomial order and support class") {
    Monomial a{{1, 0, 0}}, b{{0, 1, 0}}, c{{2, 0, 0}}, d{{1, 1, 0}};
    CHECK(a.degree() == 1);
    CHECK(c.degree() == 2);
    CHECK(a < b); // unit monomials follow the variable order
    CHECK(b < c); // degree decides first
    CHECK(c < d); // same degree: x0^2 precedes x0*x1
    CHECK(c.str() == "x0^2");
    CHECK(d.str() == "x0*x1");
    const std::vector<std::uint32_t> classes{3, 5, 7};
    CHECK(d.support_class(classes, 3) == (3 + 5) % 12);
    CHECK(c.support_class(classes, 3) == 6);
}

TEST_CASE("span dimensions at p=3") {
    const SpanResult r = compute_spans(3, 4, fast_opts());
    CHECK(dims_of(r) == std::vector<std::size_t>{9, 33, 60, 84});
    CHECK(r.generators.dim == 9);
    CHECK(r.length == truncation_bound(3, 4));
    CHECK_FALSE(r.unsound);
    // degree-2 candidates are the 45 monomials in 9 variables
    CHECK(r.spans[1].candidate_count == 45);
    // block sums equal the dimension at every degree
    for (const auto& s : r.spans) {
        std::size_t total = 0;
        for (const auto& [cls, rank] : s.per_block_dims) total += rank;
        CHECK(total == s.dim);
        CHECK(s.basis_monomials.size() == s.dim);
    }
    // pivot monomials are strictly increasing in the canonical order
    for (const auto& s : r.spans)
        for (std::size_t i = 1; i < s.basis_monomials.size(); ++i)
            CHECK(s.basis_monomials[i - 1] < s.basis_monomials[i]);
}

TEST_CASE("span dimensions at p=5") {
    const SpanResult r = compute_spans(5, 3, fast_opts());
    CHECK(dims_of(r) == std::vector<std::size_t>{18, 115, 240});
    CHECK(r.spans[1].candidate_count == 171);
}

TEST_CASE("block partition of the p=3 generators") {
    const GeneratorSet gs = spanning_set(3, truncation_bound(3, 1), 2);
    std::vector<const QExpansion*> ptrs;
    for (const auto& e : gs.expansions) ptrs.push_back(&e);
    const BlockPartition part = block_partition(ptrs);
    std::set<std::uint32_t> classes;
    std::size_t rows = 0;
    for (const auto& [cls, block] : part.blocks) {
        classes.insert(cls);
        rows += block.first.rows;
        CHECK(block.first.rows == block.second.size());
    }
    CHECK(rows == 12);
    CHECK(classes == std::set<std::uint32_t>{0, 1, 2, 4, 5, 6, 8, 9, 10});
    // the duplicated base/twist pairs share blocks
    CHECK(part.blocks.at(0).first.rows == 2);
    CHECK(part.blocks.at(9).first.rows == 2);
    CHECK(part.blocks.at(6).first.rows == 2);
}

TEST_CASE("single-candidate partition") {
    const QExpansion g = build_generator({BaseForm::N, 1}, 3, 49);
    const BlockPartition part = block_partition({&g});
    CHECK(part.blocks.size() == 1);
    RankOptions opts;
    const auto rank = rank_exact(part.blocks.at(1).first, opts).rank;
    CHECK(rank == 1);
}

TEST_CASE("block additivity at p=3 degree 2") {
    // Rank of the unpartitioned evaluation matrix equals the block total.
    const SpanResult r = compute_spans(3, 2, fast_opts());
    const GeneratorSet& gs = r.generators;
    std::vector<const QExpansion*> basis;
    for (std::size_t idx : gs.basis_indices) basis.push_back(&gs.expansions[idx]);
    std::vector<QExpansion> prods;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i; j < basis.size(); ++j)
            prods.push_back(mul(*basis[i], *basis[j]));
    IntMatrix m(prods.size(), gs.length);
    for (std::size_t row = 0; row < prods.size(); ++row)
        for (std::uint64_t c = 0; c < gs.length; ++c) m.at(row, c) = prods[row].coeff(c);
    RankOptions opts;
    CHECK(rank_exact(m, opts).rank == r.spans[1].dim);
}

TEST_CASE("exhaustive span oracle at p=3") {
    CHECK(exhaustive_span_check(3, 2, fast_opts()));
    CHECK(exhaustive_span_check(3, 3, fast_opts()));
}

TEST_CASE("relations at p=3 degree 2") {
    SpanOptions o = fast_opts();
    o.verify_relations = true;
    const auto rels = extract_relations(3, 2, o);
    CHECK(rels.size() == 45 - 33);
    for (const auto& rel : rels) {
        CHECK(rel.exact);
        CHECK(rel.modulus == 0);
        CHECK_FALSE(rel.terms.empty());
    }
    // The defining relation x_N^2 = 4 x_M x_P appears: basis order puts
    // Base(M), Base(N), Base(P) at indices 0, 1, 2.
    Monomial nn{{0, 2, 0, 0, 0, 0, 0, 0, 0}};
    Monomial mp{{1, 0, 1, 0, 0, 0, 0, 0, 0}};
    bool found = false;
    for (const auto& rel : rels) {
        if (rel.terms.size() != 2) continue;
        mpz_class coef_nn = 0, coef_mp = 0;
        for (const auto& [mono, coef] : rel.terms) {
            if (mono == nn) coef_nn = coef;
            if (mono == mp) coef_mp = coef;
        }
        // a*N^2 + b*MP = 0 forces b = -4a.
        if (coef_nn != 0 && coef_mp == -4 * coef_nn) found = true;
    }
    CHECK(found);
}

TEST_CASE("relation count at p=5 degree 2") {
    const auto rels = extract_relations(5, 2, fast_opts());
    CHECK(rels.size() == 171 - 115);
}

TEST_CASE("unsound truncation handling") {
    SpanOptions o = fast_opts();
    o.length_override = 30;
    CHECK_THROWS_AS(compute_spans(3, 2, o), ConfigError);
    o.allow_unsound = true;
    const SpanResult r = compute_spans(3, 2, o);
    CHECK(r.unsound);
    CHECK(r.length == 30);
}

TEST_CASE("results are reproducible for a fixed seed") {
    SpanOptions o = fast_opts();
    o.rank.seed = 31337;
    const SpanResult a = compute_spans(3, 3, o);
    const SpanResult b = compute_spans(3, 3, o);
    CHECK(dims_of(a) == dims_of(b));
    for (std::size_t i = 0; i < a.spans.size(); ++i) {
        CHECK(a.spans[i].basis_monomials == b.spans[i].basis_monomials);
        CHECK(a.spans[i].primes_used == b.spans[i].primes_used);
        CHECK(a.spans[i].per_block_dims == b.spans[i].per_block_dims);
    }
    // A different seed draws different primes but finds the same dimensions.
    SpanOptions o2 = o;
    o2.rank.seed = 4;
    const SpanResult c = compute_spans(3, 3, o2);
    CHECK(dims_of(a) == dims_of(c));
    for (std::size_t i = 0; i < a.spans.size(); ++i)
        CHECK(a.spans[i].basis_monomials == c.spans[i].basis_monomials);
}

TEST_CASE("fraction-free policy reproduces the modular dimensions") {
    SpanOptions o = fast_opts();
    o.rank.policy = CertPolicy::FractionFree;
    const SpanResult ff = compute_spans(3, 3, o);
    const SpanResult mod = compute_spans(3, 3, fast_opts());
    CHECK(dims_of(ff) == dims_of(mod));
    for (std::size_t i = 0; i < ff.spans.size(); ++i) {
        CHECK(ff.spans[i].per_block_dims == mod.spans[i].per_block_dims);
        CHECK(ff.spans[i].cert_method == RankCertificate::Method::FractionFree);
    }
}

TEST_CASE("exhaustive check budget guard") {
    SpanOptions o = fast_opts();
    CHECK_THROWS_AS(exhaustive_span_check(13, 4, o), ConfigError);
}
