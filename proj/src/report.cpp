#include "thetaspan/report.hpp"

#include <iomanip>
#include <sstream>

#include "thetaspan/errors.hpp"
#include "thetaspan/formulas.hpp"

namespace thetaspan {

OutputFormat output_format_from_name(const std::string& s) {
    if (s == "json") return OutputFormat::Json;
    if (s == "csv") return OutputFormat::Csv;
    if (s == "table") return OutputFormat::Table;
    throw ConfigError("unknown output format: " + s + " (expected json|csv|table)");
}

namespace {

std::string csv_quote(const std::string& s) {
    bool needs = s.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

std::string join_u64(const std::vector<std::uint64_t>& v, char sep) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << sep;
        os << v[i];
    }
    return os.str();
}

std::string blocks_str(const std::map<std::uint32_t, std::size_t>& blocks) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [cls, rank] : blocks) {
        if (!first) os << ";";
        os << cls << ":" << rank;
        first = false;
    }
    return os.str();
}

nlohmann::json relation_json(const Relation& rel) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [mono, coef] : rel.terms)
        terms.push_back({{"monomial", mono.str()}, {"coeff", coef.get_str()}});
    return {{"block_class", rel.block_class},
            {"exact", rel.exact},
            {"modulus", rel.modulus},
            {"terms", terms}};
}

} // namespace

DimensionReport make_dimension_report(const SpanResult& result, std::uint64_t seed,
                                      const std::string& cert_policy,
                                      bool include_relations) {
    DimensionReport rep;
    rep.p = result.p;
    rep.k_max = result.k_max;
    rep.length = result.length;
    rep.spanning_size = result.generators.size();
    rep.basis_dim = result.generators.dim;
    rep.unsound = result.unsound;
    rep.seed = seed;
    rep.cert_policy = cert_policy;
    for (const auto& span : result.spans) {
        DimensionRow row;
        row.k = span.k;
        row.dim = span.dim;
        if (span.k >= 2) {
            row.bound = conjecture_bound(result.p, span.k);
            row.dim_gammapm = dim_mk_gammapm(result.p, span.k);
            row.match = static_cast<std::int64_t>(span.dim) == *row.bound;
        }
        row.per_block_dims = span.per_block_dims;
        row.cert_method = cert_method_name(span.cert_method);
        row.primes = span.primes_used;
        row.wall_ms = span.wall_ms;
        row.from_cache = span.from_cache;
        row.unsound = result.unsound;
        rep.rows.push_back(std::move(row));
        if (include_relations)
            for (const auto& rel : span.relations) rep.relations.push_back(rel);
    }
    return rep;
}

nlohmann::json dimension_report_json(const DimensionReport& r, bool with_timings) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        nlohmann::json blocks = nlohmann::json::array();
        for (const auto& [cls, rank] : row.per_block_dims)
            blocks.push_back({cls, rank});
        nlohmann::json j{{"k", row.k},
                         {"dim", row.dim},
                         {"bound", row.bound ? nlohmann::json(*row.bound) : nlohmann::json()},
                         {"dim_mk_gammapm",
                          row.dim_gammapm ? nlohmann::json(*row.dim_gammapm) : nlohmann::json()},
                         {"match", row.match ? nlohmann::json(*row.match) : nlohmann::json()},
                         {"per_block_dims", blocks},
                         {"cert_method", row.cert_method},
                         {"primes", row.primes},
                         {"from_cache", row.from_cache},
                         {"unsound", row.unsound}};
        if (with_timings) j["wall_ms"] = row.wall_ms;
        rows.push_back(std::move(j));
    }
    nlohmann::json j{{"schema_version", kSchemaVersion},
                     {"tool", "thetaspan"},
                     {"command", "dims"},
                     {"p", r.p},
                     {"k_max", r.k_max},
                     {"length", r.length},
                     {"spanning_size", r.spanning_size},
                     {"basis_dim", r.basis_dim},
                     {"unsound", r.unsound},
                     {"seed", r.seed},
                     {"cert_policy", r.cert_policy},
                     {"rows", rows}};
    if (!r.relations.empty()) {
        nlohmann::json rels = nlohmann::json::array();
        for (const auto& rel : r.relations) rels.push_back(relation_json(rel));
        j["relations"] = rels;
    }
    return j;
}

std::string dimension_report_csv(const DimensionReport& r, bool with_timings) {
    std::ostringstream os;
    os << "p,k,dim,bound,dim_mk_gammapm,match,per_block_dims,cert_method,primes,"
          "from_cache,unsound";
    if (with_timings) os << ",wall_ms";
    os << "\r\n";
    for (const auto& row : r.rows) {
        os << r.p << "," << row.k << "," << row.dim << ",";
        if (row.bound) os << *row.bound;
        os << ",";
        if (row.dim_gammapm) os << *row.dim_gammapm;
        os << ",";
        if (row.match) os << (*row.match ? "true" : "false");
        os << "," << csv_quote(blocks_str(row.per_block_dims)) << "," << row.cert_method
           << "," << csv_quote(join_u64(row.primes, ';')) << ","
           << (row.from_cache ? "true" : "false") << ","
           << (row.unsound ? "UNSOUND" : "sound");
        if (with_timings) os << "," << row.wall_ms;
        os << "\r\n";
    }
    return os.str();
}

std::string dimension_report_table(const DimensionReport& r) {
    std::ostringstream os;
    os << "p = " << r.p << "  L = " << r.length << "  spanning forms = "
       << r.spanning_size << "  dim V = " << r.basis_dim << "  policy = "
       << r.cert_policy;
    if (r.unsound) os << "  [UNSOUND truncation]";
    os << "\n";
    os << std::setw(3) << "k" << std::setw(10) << "dim W_k" << std::setw(10) << "bound"
       << std::setw(14) << "dim M_k(G+-)" << std::setw(7) << "match" << std::setw(8)
       << "blocks" << std::setw(12) << "wall ms" << "\n";
    for (const auto& row : r.rows) {
        os << std::setw(3) << row.k << std::setw(10) << row.dim;
        if (row.bound) os << std::setw(10) << *row.bound;
        else os << std::setw(10) << "";
        if (row.dim_gammapm) os << std::setw(14) << *row.dim_gammapm;
        else os << std::setw(14) << "";
        if (row.match) os << std::setw(7) << (*row.match ? "yes" : "no");
        else os << std::setw(7) << "";
        os << std::setw(8) << row.per_block_dims.size() << std::setw(12) << std::fixed
           << std::setprecision(1) << row.wall_ms;
        if (row.unsound) os << "  UNSOUND";
        if (row.from_cache) os << "  (cache)";
        os << "\n";
        os.unsetf(std::ios::fixed);
    }
    return os.str();
}

nlohmann::json table1_json(const Table1Report& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [p, cells] : r.rows) {
        nlohmann::json jcells = nlohmann::json::array();
        for (const auto& cell : cells) {
            jcells.push_back(
                {{"k", cell.k},
                 {"dim", cell.dim ? nlohmann::json(*cell.dim) : nlohmann::json()},
                 {"bound", cell.bound ? nlohmann::json(*cell.bound) : nlohmann::json()}});
        }
        rows.push_back({{"p", p}, {"cells", jcells}});
    }
    return {{"schema_version", kSchemaVersion}, {"tool", "thetaspan"},
            {"command", "table1"},             {"k_cols", r.k_cols},
            {"unsound", r.unsound},            {"seed", r.seed},
            {"rows", rows}};
}

std::string table1_csv(const Table1Report& r) {
    std::ostringstream os;
    os << "p,k,dim,bound\r\n";
    for (const auto& [p, cells] : r.rows)
        for (const auto& cell : cells) {
            os << p << "," << cell.k << ",";
            if (cell.dim) os << *cell.dim;
            else os << "?";
            os << ",";
            if (cell.bound) os << *cell.bound;
            os << "\r\n";
        }
    return os.str();
}

std::string table1_table(const Table1Report& r) {
    std::ostringstream os;
    os << std::setw(4) << "p";
    for (std::uint32_t k = 1; k <= r.k_cols; ++k) {
        std::ostringstream h;
        h << "k=" << k;
        os << " | " << std::setw(k == 1 ? 6 : 15) << h.str();
    }
    os << "\n";
    for (const auto& [p, cells] : r.rows) {
        os << std::setw(4) << p;
        for (const auto& cell : cells) {
            std::ostringstream c;
            if (cell.dim) c << *cell.dim;
            else c << "?";
            if (cell.bound) c << " (" << *cell.bound << ")";
            os << " | " << std::setw(cell.k == 1 ? 6 : 15) << c.str();
        }
        os << "\n";
    }
    if (r.unsound) os << "[UNSOUND truncation]\n";
    return os.str();
}

nlohmann::json cusp_table_json(const CuspClassTable& t, bool full_members) {
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& cls : t.classes) {
        nlohmann::json c{{"rep", {cls.front().first, cls.front().second}},
                         {"size", cls.size()}};
        if (full_members) {
            nlohmann::json members = nlohmann::json::array();
            for (const auto& [a, cc] : cls) members.push_back({a, cc});
            c["members"] = members;
        }
        classes.push_back(std::move(c));
    }
    return {{"schema_version", kSchemaVersion},
            {"tool", "thetaspan"},
            {"command", "cusps"},
            {"p", t.p},
            {"relation", cusp_relation_name(t.relation)},
            {"count", t.count()},
            {"classes", classes}};
}

std::string cusp_table_csv(const CuspClassTable& t) {
    std::ostringstream os;
    os << "rep_a,rep_c,size\r\n";
    for (const auto& cls : t.classes)
        os << cls.front().first << "," << cls.front().second << "," << cls.size()
           << "\r\n";
    return os.str();
}

std::string cusp_table_table(const CuspClassTable& t) {
    std::ostringstream os;
    os << "p = " << t.p << "  relation = " << cusp_relation_name(t.relation)
       << "  classes = " << t.count() << "\n";
    os << std::setw(12) << "rep" << std::setw(8) << "size" << "\n";
    for (const auto& cls : t.classes) {
        std::ostringstream rep;
        rep << "(" << cls.front().first << "," << cls.front().second << ")";
        os << std::setw(12) << rep.str() << std::setw(8) << cls.size() << "\n";
    }
    return os.str();
}

} // namespace thetaspan
