#include <doctest.h>

#include <cstdint>

#include "thetaspan/errors.hpp"
#include "thetaspan/exact_linalg.hpp"
#include "thetaspan/formulas.hpp"
#include "thetaspan/generators.hpp"

using namespace thetaspan;

namespace {

// Independent oracle: lattice-point count of x^2 + y^2 = n by trial.
std::int64_t r2_count(std::int64_t n) {
    if (n == 0) return 1;
    std::int64_t cnt = 0;
    for (std::int64_t x = 0; x * x <= n; ++x) {
        const std::int64_t rest = n - x * x;
        std::int64_t y = 0;
        while (y * y < rest) ++y;
        if (y * y == rest) cnt += (x ? 2 : 1) * (y ? 2 : 1);
    }
    return cnt;
}

} // namespace

TEST_CASE("quarter coefficient examples") {
    const auto n = quarter_coefficients(BaseForm::N, 2);
    CHECK(n[0] == 0);
    CHECK(n[1] == 4);

    const auto m = quarter_coefficients(BaseForm::M, 13);
    CHECK(m[0] == 1);
    CHECK(m[4] == 4);
    CHECK(m[8] == 4);
    CHECK(m[12] == 0);
    for (std::size_t i = 0; i < 13; ++i)
        if (i != 0 && i != 4 && i != 8) CHECK(m[i] == 0);

    const auto p = quarter_coefficients(BaseForm::P, 11);
    CHECK(p[2] == 4);
    CHECK(p[10] == 8);
    for (std::size_t i = 0; i < 11; ++i)
        if (i != 2 && i != 10) CHECK(p[i] == 0);

    CHECK_THROWS_AS(quarter_coefficients(BaseForm::M, 0), ConfigError);
}

TEST_CASE("quarter coefficients match the two-squares count") {
    const std::size_t count = 400;
    const auto m = quarter_coefficients(BaseForm::M, count);
    const auto n = quarter_coefficients(BaseForm::N, count);
    const auto p = quarter_coefficients(BaseForm::P, count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::int64_t expect_m = (i % 4 == 0) ? r2_count(i / 4) : 0;
        const std::int64_t expect_n = (i % 4 == 1) ? r2_count(i) : 0;
        const std::int64_t expect_p = (i % 4 == 2) ? r2_count(i) : 0;
        CHECK(m[i] == expect_m);
        CHECK(n[i] == expect_n);
        CHECK(p[i] == expect_p);
    }
}

TEST_CASE("theta and phi sequences") {
    const auto th = theta_quarter(40);
    CHECK(th[0] == 1);
    CHECK(th[4] == 2);
    CHECK(th[16] == 2);
    CHECK(th[36] == 2);
    CHECK(th[8] == 0);
    const auto ph = phi_quarter(40);
    CHECK(ph[1] == 2);
    CHECK(ph[9] == 2);
    CHECK(ph[25] == 2);
    CHECK(ph[4] == 0);
}

TEST_CASE("support classes of generators") {
    // Base forms are the p-fold dilations, supported on n = 0 mod p; the
    // mod-4 class of f is unchanged.
    CHECK(class_of({BaseForm::M, std::nullopt}, 3) == 0);
    CHECK(class_of({BaseForm::N, std::nullopt}, 3) == 9);
    CHECK(class_of({BaseForm::P, std::nullopt}, 3) == 6);
    CHECK(class_of({BaseForm::M, 0}, 3) == 0);
    CHECK(class_of({BaseForm::P, 1}, 3) == 10);
    CHECK(class_of({BaseForm::N, 1}, 3) == 1);
    CHECK(class_of({BaseForm::M, 0}, 5) == 0);
    CHECK(class_of({BaseForm::N, std::nullopt}, 5) == 5);
}

TEST_CASE("building generators at p=3") {
    const std::uint64_t L = truncation_bound(3, 1);
    const QExpansion base_n = build_generator({BaseForm::N, std::nullopt}, 3, L);
    REQUIRE(base_n.support_class().has_value());
    CHECK(*base_n.support_class() == 9);
    CHECK(base_n.coeff(9) == 4); // first term of the dilated series
    for (std::uint64_t n = 0; n < 9; ++n) CHECK(base_n.coeff(n) == 0);

    const QExpansion tw_n1 = build_generator({BaseForm::N, 1}, 3, L);
    CHECK(*tw_n1.support_class() == 1);
    CHECK(tw_n1.coeff(1) == 4);
    CHECK(tw_n1.coeff(13) == 8);

    const QExpansion tw_m0 = build_generator({BaseForm::M, 0}, 3, L);
    CHECK(*tw_m0.support_class() == 0);
    CHECK(tw_m0.coeff(0) == 1);
}

TEST_CASE("spanning set sizes and class discipline") {
    for (std::uint64_t p : {3ull, 5ull, 13ull}) {
        const GeneratorSet gs = spanning_set(p, truncation_bound(p, 1), 2);
        CHECK(gs.size() == 3 * (p + 1));
        for (std::size_t i = 0; i < gs.size(); ++i) {
            REQUIRE(gs.expansions[i].support_class().has_value());
            CHECK(*gs.expansions[i].support_class() == class_of(gs.labels[i], p));
            CHECK_FALSE(gs.expansions[i].is_zero());
        }
    }
}

TEST_CASE("basis dimension of V") {
    RankOptions opts;
    auto dim_v = [&](std::uint64_t p) {
        GeneratorSet gs = spanning_set(p, truncation_bound(p, 1), 2);
        reduce_to_basis(gs, opts);
        // blocks partition the basis
        std::size_t total = 0;
        for (const auto& [cls, rank] : gs.block_ranks) total += rank;
        CHECK(total == gs.dim);
        CHECK(gs.dim <= 3 * (p + 1));
        return gs.dim;
    };
    CHECK(dim_v(3) == 9);
    CHECK(dim_v(5) == 18);
    CHECK(dim_v(7) == 21);
    CHECK(dim_v(11) == 33);
    CHECK(dim_v(13) == 42);
}

TEST_CASE("basis keeps the base forms first") {
    RankOptions opts;
    GeneratorSet gs = spanning_set(3, truncation_bound(3, 1), 1);
    reduce_to_basis(gs, opts);
    REQUIRE(gs.dim == 9);
    // The three base labels pivot ahead of their duplicate twists.
    CHECK(gs.basis_indices[0] == 0);
    CHECK(gs.basis_indices[1] == 1);
    CHECK(gs.basis_indices[2] == 2);
    // Twist(f, 0) coincides with Base(f) at p = 3 and drops out.
    for (std::size_t idx : gs.basis_indices) {
        const GeneratorLabel& l = gs.labels[idx];
        CHECK_FALSE(l.twist == std::optional<std::uint32_t>(0u));
    }
}

TEST_CASE("reduce_to_basis rejects short truncations") {
    GeneratorSet gs = spanning_set(3, 20, 1);
    RankOptions opts;
    CHECK_THROWS_AS(reduce_to_basis(gs, opts), ConfigError);
}

TEST_CASE("defining relation of the level-4 ring survives pullback") {
    for (std::uint64_t p : {3ull, 5ull}) {
        const std::uint64_t L = truncation_bound(p, 2);
        const QExpansion m = build_generator({BaseForm::M, std::nullopt}, p, L);
        const QExpansion n = build_generator({BaseForm::N, std::nullopt}, p, L);
        const QExpansion q = build_generator({BaseForm::P, std::nullopt}, p, L);
        const QExpansion diff = add(mul(n, n), scale(-4, mul(m, q)));
        CHECK(diff.is_zero());
    }
}

TEST_CASE("weight-k monomials on the level-4 curve are independent") {
    RankOptions opts;
    for (std::uint32_t k = 1; k <= 5; ++k) {
        const std::uint64_t L = 64 * k;
        const auto monos = gamma4_weight_monomials(k, L);
        REQUIRE(monos.size() == static_cast<std::size_t>(dim_mk_gamma4(k)));
        IntMatrix m(monos.size(), L);
        for (std::size_t r = 0; r < monos.size(); ++r)
            for (std::uint64_t c = 0; c < L; ++c) m.at(r, c) = monos[r].coeff(c);
        CHECK(rank_exact(m, opts).rank == monos.size());
    }
}
