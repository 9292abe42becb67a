#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "thetaspan/cache.hpp"
#include "thetaspan/errors.hpp"
#include "thetaspan/report.hpp"

using namespace thetaspan;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("thetaspan_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

SpanOptions opts_with_cache(const fs::path& dir) {
    SpanOptions o;
    o.threads = 2;
    o.cache_dir = dir.string();
    return o;
}

} // namespace

TEST_CASE("dimension report fields and json shape") {
    SpanOptions o;
    o.threads = 2;
    const SpanResult res = compute_spans(3, 2, o);
    const DimensionReport rep = make_dimension_report(res, 7, "modular2", false);
    CHECK(rep.rows.size() == 2);
    CHECK(rep.rows[0].dim == 9);
    CHECK_FALSE(rep.rows[0].bound.has_value());
    CHECK(rep.rows[1].dim == 33);
    REQUIRE(rep.rows[1].bound.has_value());
    CHECK(*rep.rows[1].bound == 36);
    CHECK(*rep.rows[1].match == false);

    const nlohmann::json j = dimension_report_json(rep, false);
    CHECK(j["schema_version"] == kSchemaVersion);
    CHECK(j["p"] == 3);
    CHECK(j["basis_dim"] == 9);
    CHECK(j["rows"].size() == 2);
    CHECK(j["rows"][0]["bound"].is_null());
    CHECK(j["rows"][1]["bound"] == 36);
    CHECK_FALSE(j["rows"][0].contains("wall_ms"));
    CHECK(dimension_report_json(rep, true)["rows"][0].contains("wall_ms"));

    // identical inputs give byte-identical default json
    const SpanResult res2 = compute_spans(3, 2, o);
    const DimensionReport rep2 = make_dimension_report(res2, 7, "modular2", false);
    CHECK(dimension_report_json(rep, false).dump(2) ==
          dimension_report_json(rep2, false).dump(2));
}

TEST_CASE("csv output") {
    SpanOptions o;
    o.threads = 2;
    const SpanResult res = compute_spans(3, 2, o);
    const DimensionReport rep = make_dimension_report(res, 0, "modular2", false);
    const std::string csv = dimension_report_csv(rep, false);
    CHECK(csv.find("p,k,dim,bound") == 0);
    CHECK(csv.find("3,1,9,") != std::string::npos);
    CHECK(csv.find("3,2,33,36,36,false") != std::string::npos);
    // block lists contain ';' but no comma, so they are unquoted per RFC 4180
    CHECK(csv.find("\r\n") != std::string::npos);
}

TEST_CASE("generator cache round trip") {
    TempDir tmp;
    RankOptions ropts;
    GeneratorSet gs = spanning_set(3, truncation_bound(3, 1), 2);
    reduce_to_basis(gs, ropts);
    store_generator_set(tmp.path, gs);

    const auto loaded = load_generator_set(tmp.path, 3, gs.length);
    REQUIRE(loaded.has_value());
    CHECK(loaded->dim == gs.dim);
    CHECK(loaded->basis_indices == gs.basis_indices);
    CHECK(loaded->block_ranks == gs.block_ranks);
    CHECK(loaded->labels.size() == gs.labels.size());
    for (std::size_t i = 0; i < gs.size(); ++i) {
        CHECK(loaded->labels[i] == gs.labels[i]);
        CHECK(loaded->expansions[i] == gs.expansions[i]);
    }

    // key mismatch is a miss, not an error
    CHECK_FALSE(load_generator_set(tmp.path, 3, gs.length + 1).has_value());
    CHECK_FALSE(load_generator_set(tmp.path / "nope", 3, gs.length).has_value());
}

TEST_CASE("span basis cache round trip") {
    TempDir tmp;
    CachedSpanBasis cb;
    cb.k = 2;
    cb.dim = 2;
    cb.candidate_count = 3;
    cb.per_block_dims = {{0, 1}, {5, 1}};
    cb.basis_monomials = {Monomial{{2, 0}}, Monomial{{1, 1}}};
    cb.cert_method = RankCertificate::Method::ModularAgreed;
    cb.primes_used = {101, 103};
    store_span_basis(tmp.path, 3, 97, cb);
    const auto loaded = load_span_basis(tmp.path, 3, 97, 2);
    REQUIRE(loaded.has_value());
    CHECK(loaded->dim == 2);
    CHECK(loaded->basis_monomials == cb.basis_monomials);
    CHECK(loaded->per_block_dims == cb.per_block_dims);
    CHECK(loaded->primes_used == cb.primes_used);
    CHECK_FALSE(load_span_basis(tmp.path, 3, 98, 2).has_value());
    CHECK_FALSE(load_span_basis(tmp.path, 3, 97, 3).has_value());
}

TEST_CASE("corrupt cache files raise CacheError") {
    TempDir tmp;
    const fs::path file = generator_cache_path(tmp.path, 3, 49);
    fs::create_directories(file.parent_path());
    {
        std::ofstream os(file, std::ios::binary);
        os << "garbage that is not a cache";
    }
    CHECK_THROWS_AS(load_generator_set(tmp.path, 3, 49), CacheError);

    // valid magic but truncated payload
    RankOptions ropts;
    GeneratorSet gs = spanning_set(3, truncation_bound(3, 1), 2);
    reduce_to_basis(gs, ropts);
    store_generator_set(tmp.path, gs);
    const fs::path good = generator_cache_path(tmp.path, 3, gs.length);
    const auto size = fs::file_size(good);
    fs::resize_file(good, size / 2);
    CHECK_THROWS_AS(load_generator_set(tmp.path, 3, gs.length), CacheError);
}

TEST_CASE("compute_spans uses the cache on the second run") {
    TempDir tmp;
    SpanOptions o = opts_with_cache(tmp.path);
    const SpanResult cold = compute_spans(3, 3, o);
    CHECK_FALSE(cold.spans[0].from_cache);
    const SpanResult warm = compute_spans(3, 3, o);
    CHECK(warm.spans[0].from_cache);
    CHECK(warm.spans[1].from_cache);
    CHECK(warm.spans[2].from_cache);
    for (std::size_t i = 0; i < cold.spans.size(); ++i) {
        CHECK(cold.spans[i].dim == warm.spans[i].dim);
        CHECK(cold.spans[i].basis_monomials == warm.spans[i].basis_monomials);
        CHECK(cold.spans[i].per_block_dims == warm.spans[i].per_block_dims);
    }
    // and the warm run still agrees with a cache-free run
    SpanOptions plain;
    plain.threads = 2;
    const SpanResult fresh = compute_spans(3, 3, plain);
    for (std::size_t i = 0; i < fresh.spans.size(); ++i)
        CHECK(fresh.spans[i].dim == warm.spans[i].dim);
}

TEST_CASE("table1 report rendering") {
    Table1Report rep;
    rep.k_cols = 4;
    rep.rows.push_back(
        {3, {{1, 9, std::nullopt}, {2, 33, 36}, {3, std::nullopt, 60}, {4, std::nullopt, 84}}});
    const std::string text = table1_table(rep);
    CHECK(text.find("9") != std::string::npos);
    CHECK(text.find("33 (36)") != std::string::npos);
    CHECK(text.find("? (60)") != std::string::npos);
    const nlohmann::json j = table1_json(rep);
    CHECK(j["rows"][0]["cells"][2]["dim"].is_null());
    CHECK(j["rows"][0]["cells"][2]["bound"] == 60);
    const std::string csv = table1_csv(rep);
    CHECK(csv.find("3,3,?,60") != std::string::npos);
}

TEST_CASE("cusp table rendering") {
    const CuspClassTable t = cusp_classes(3, CuspRelation::Sim);
    const nlohmann::json j = cusp_table_json(t, false);
    CHECK(j["count"] == 24);
    CHECK(j["classes"].size() == 24);
    CHECK_FALSE(j["classes"][0].contains("members"));
    CHECK(cusp_table_json(t, true)["classes"][0].contains("members"));
    const std::string csv = cusp_table_csv(t);
    CHECK(csv.find("rep_a,rep_c,size") == 0);
}
