#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "thetaspan/cusps.hpp"
#include "thetaspan/errors.hpp"
#include "thetaspan/formulas.hpp"

using namespace thetaspan;

TEST_CASE("cusp class counts match the closed formulas") {
    CHECK(cusp_classes(3, CuspRelation::Sim).count() == 24);
    CHECK(cusp_classes(5, CuspRelation::Approx).count() == 72);
    CHECK(cusp_classes(23, CuspRelation::Sim).count() == 144);
    CHECK(cusp_classes(3, CuspRelation::Approx).count() == 24);
    CHECK(cusp_classes(5, CuspRelation::Sim).count() == 36);
    for (std::uint64_t p : {3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull}) {
        CHECK(cusp_classes(p, CuspRelation::Sim).count() == 6 * (p + 1));
        CHECK(cusp_classes(p, CuspRelation::Approx).count() == 3 * (p * p - 1));
    }
    CHECK_THROWS_AS(cusp_classes(4, CuspRelation::Sim), ConfigError);
}

TEST_CASE("classes partition the primitive pairs") {
    for (std::uint64_t p : {3ull, 7ull}) {
        const std::uint64_t n = 4 * p;
        std::size_t primitive = 0;
        for (std::uint64_t a = 0; a < n; ++a)
            for (std::uint64_t c = 0; c < n; ++c)
                if (std::gcd(std::gcd(a, c), n) == 1) ++primitive;
        for (CuspRelation rel : {CuspRelation::Sim, CuspRelation::Approx}) {
            const CuspClassTable t = cusp_classes(p, rel);
            std::size_t members = 0;
            std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
            for (const auto& cls : t.classes) {
                members += cls.size();
                // canonical representative is the smallest member
                CHECK(cls.front() == *std::min_element(cls.begin(), cls.end()));
                for (const auto& v : cls) CHECK(seen.insert(v).second);
            }
            CHECK(members == primitive);
        }
    }
}

TEST_CASE("level-4 cusp identification") {
    CHECK(identified_at_level4({1, 0}, {-1, 0}));
    CHECK(identified_at_level4({1, 0}, {1, 4}));
    CHECK_FALSE(identified_at_level4({1, 0}, {0, 1}));
    CHECK(identified_at_level4({3, 2}, {-3, -2}));
    CHECK(identified_at_level4({3, 2}, {7, 6}));
}

TEST_CASE("approx refines sim with uniform multiplicity") {
    for (std::uint64_t p : {3ull, 5ull, 7ull, 11ull}) {
        const auto mult = refinement_multiplicities(p);
        CHECK(mult.size() == 6 * (p + 1));
        std::size_t total = 0;
        for (const auto& [rep, count] : mult) {
            CHECK(count == (p - 1) / 2);
            total += count;
        }
        CHECK(total == 3 * (p * p - 1));
    }
}

TEST_CASE("dimension formulas") {
    CHECK(dim_mk_gamma4(0) == 1);
    CHECK(dim_mk_gamma4(1) == 3);
    CHECK(dim_mk_gamma4(4) == 9);

    CHECK(dim_mk_gammapm(3, 2) == 36);
    CHECK(dim_mk_gammapm(5, 2) == 156);
    CHECK(dim_mk_gamma4p(3, 2) == 72);
    CHECK_THROWS_AS(dim_mk_gammapm(3, 1), ConfigError);
    CHECK_THROWS_AS(dim_mk_gammapm(4, 2), ConfigError);

    CHECK(conjecture_bound(11, 2) == 1212);
    CHECK(conjecture_bound(19, 4) == 20100);
    CHECK(conjecture_bound(7, 3) == 648);
    CHECK_THROWS_AS(conjecture_bound(3, 1), ConfigError);
}

TEST_CASE("bound identity across the table range") {
    for (std::uint64_t p : {3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull}) {
        const std::int64_t pp = static_cast<std::int64_t>(p);
        for (std::uint32_t k = 2; k <= 10; ++k) {
            const std::int64_t b = conjecture_bound(p, k);
            CHECK(b == dim_mk_gammapm(p, k) - 3 * (pp + 1) * (pp - 3));
            // closed form, computed independently with doubled numerators
            const std::int64_t kk = k;
            const std::int64_t twice =
                2 * (kk - 1) * pp * pp * pp - 3 * pp * pp + 2 * (7 - kk) * pp + 15;
            CHECK(twice % 2 == 0);
            CHECK(b == twice / 2);
        }
    }
}

TEST_CASE("parenthesized bound column of the reference table") {
    struct Row {
        std::uint64_t p;
        std::int64_t k2, k3, k4;
    };
    const Row rows[] = {
        {3, 36, 60, 84},        {5, 120, 240, 360},     {7, 312, 648, 984},
        {11, 1212, 2532, 3852}, {13, 2016, 4200, 6384}, {17, 4572, 9468, 14364},
        {19, 6420, 13260, 20100}, {23, 11496, 23640, 35784},
    };
    for (const auto& row : rows) {
        CHECK(conjecture_bound(row.p, 2) == row.k2);
        CHECK(conjecture_bound(row.p, 3) == row.k3);
        CHECK(conjecture_bound(row.p, 4) == row.k4);
    }
}
