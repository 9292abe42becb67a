#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "thetaspan/cusps.hpp"
#include "thetaspan/graded_span.hpp"

namespace thetaspan {

inline constexpr int kSchemaVersion = 1;

enum class OutputFormat { Json, Csv, Table };
OutputFormat output_format_from_name(const std::string& s);

struct DimensionRow {
    std::uint32_t k = 0;
    std::size_t dim = 0;
    std::optional<std::int64_t> bound;       // k >= 2
    std::optional<std::int64_t> dim_gammapm; // k >= 2
    std::optional<bool> match;               // dim == bound
    std::map<std::uint32_t, std::size_t> per_block_dims;
    std::string cert_method;
    std::vector<std::uint64_t> primes;
    double wall_ms = 0.0;
    bool from_cache = false;
    bool unsound = false;
};

struct DimensionReport {
    std::uint64_t p = 0;
    std::uint32_t k_max = 0;
    std::uint64_t length = 0;
    std::size_t spanning_size = 0; // 3(p+1)
    std::size_t basis_dim = 0;     // d
    bool unsound = false;
    std::uint64_t seed = 0;
    std::string cert_policy;
    std::vector<DimensionRow> rows;
    std::vector<Relation> relations; // populated only on request
};

DimensionReport make_dimension_report(const SpanResult& result, std::uint64_t seed,
                                      const std::string& cert_policy,
                                      bool include_relations);

nlohmann::json dimension_report_json(const DimensionReport& r, bool with_timings);
std::string dimension_report_csv(const DimensionReport& r, bool with_timings);
std::string dimension_report_table(const DimensionReport& r);

/// Multi-p grid in the shape of the reference dimension table; cells beyond
/// each computed k_max print "?", bounds print in parentheses.
struct Table1Cell {
    std::uint32_t k = 0;
    std::optional<std::size_t> dim;
    std::optional<std::int64_t> bound;
};
struct Table1Report {
    std::uint32_t k_cols = 4;
    bool unsound = false;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::uint64_t, std::vector<Table1Cell>>> rows;
};

nlohmann::json table1_json(const Table1Report& r);
std::string table1_csv(const Table1Report& r);
std::string table1_table(const Table1Report& r);

nlohmann::json cusp_table_json(const CuspClassTable& t, bool full_members);
std::string cusp_table_csv(const CuspClassTable& t);
std::string cusp_table_table(const CuspClassTable& t);

} // namespace thetaspan
