// thetaspan: exact dimensions of graded spans of weight-1 theta products at
// level 4p, with residue-class block decomposition and certified integer rank.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thetaspan/cusps.hpp"
#include "thetaspan/errors.hpp"
#include "thetaspan/formulas.hpp"
#include "thetaspan/generators.hpp"
#include "thetaspan/graded_span.hpp"
#include "thetaspan/parallel.hpp"
#include "thetaspan/report.hpp"

namespace {

using namespace thetaspan;

struct CommonConfig {
    std::uint64_t seed = 0;
    std::string cert = "modular2";
    unsigned prime_bits = 62;
    unsigned threads = 0; // 0: hardware concurrency
    std::string cache_dir;
    std::string format = "table";
    std::string out_file;
    std::uint64_t length_override = 0;
    bool allow_unsound = false;
    bool timings = false;

    unsigned effective_threads() const {
        return threads == 0 ? default_thread_count() : threads;
    }

    SpanOptions span_options() const {
        SpanOptions o;
        o.rank.policy = cert_policy_from_name(cert);
        o.rank.prime_bits = prime_bits;
        o.rank.seed = seed;
        o.threads = effective_threads();
        o.length_override = length_override;
        o.allow_unsound = allow_unsound;
        o.cache_dir = cache_dir;
        return o;
    }
};

void add_common_options(CLI::App* cmd, CommonConfig& cfg, bool with_length) {
    cmd->add_option("--seed", cfg.seed, "Seed for certification prime selection")
        ->envname("THETASPAN_SEED");
    cmd->add_option("--cert", cfg.cert, "Certification policy: modular2|modularN|bareiss")
        ->envname("THETASPAN_CERT");
    cmd->add_option("--prime-bits", cfg.prime_bits, "Bit size of certification primes")
        ->check(CLI::Range(20u, 62u))
        ->envname("THETASPAN_PRIME_BITS");
    cmd->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")
        ->envname("THETASPAN_THREADS");
    cmd->add_option("--cache-dir", cfg.cache_dir, "Enable the on-disk cache in this directory")
        ->envname("THETASPAN_CACHE_DIR");
    cmd->add_option("--format", cfg.format, "Output format: json|csv|table")
        ->envname("THETASPAN_FORMAT");
    cmd->add_option("--out", cfg.out_file, "Also write the report to this file");
    cmd->add_flag("--timings", cfg.timings, "Include wall times in json/csv output");
    if (with_length) {
        cmd->add_option("--L", cfg.length_override,
                        "Truncation override (default: the Sturm bound for (p, kmax))");
        cmd->add_flag("--allow-unsound", cfg.allow_unsound,
                      "Permit truncation below the Sturm bound; rows are marked UNSOUND");
    }
}

void emit(const CommonConfig& cfg, const std::string& text) {
    std::cout << text;
    if (!cfg.out_file.empty()) {
        std::ofstream os(cfg.out_file, std::ios::trunc);
        if (!os) throw ConfigError("cannot write output file: " + cfg.out_file);
        os << text;
    }
}

int run_dims(std::uint64_t p, std::uint32_t k_max, const CommonConfig& cfg,
             bool relations) {
    SpanOptions opts = cfg.span_options();
    opts.collect_relations = relations;
    opts.verify_relations = relations;
    SpanResult res = compute_spans(p, k_max, opts);
    DimensionReport rep = make_dimension_report(res, cfg.seed, cfg.cert, relations);
    switch (output_format_from_name(cfg.format)) {
        case OutputFormat::Json:
            emit(cfg, dimension_report_json(rep, cfg.timings).dump(2) + "\n");
            break;
        case OutputFormat::Csv:
            emit(cfg, dimension_report_csv(rep, cfg.timings));
            break;
        case OutputFormat::Table:
            emit(cfg, dimension_report_table(rep));
            break;
    }
    return 0;
}

int run_table1(const std::vector<std::uint64_t>& ps, std::uint32_t k_max,
               const CommonConfig& cfg) {
    Table1Report rep;
    rep.k_cols = std::max<std::uint32_t>(4, k_max);
    rep.seed = cfg.seed;
    for (std::uint64_t p : ps) {
        SpanOptions opts = cfg.span_options();
        SpanResult res = compute_spans(p, k_max, opts);
        rep.unsound = rep.unsound || res.unsound;
        std::vector<Table1Cell> cells;
        for (std::uint32_t k = 1; k <= rep.k_cols; ++k) {
            Table1Cell cell;
            cell.k = k;
            if (k <= k_max) cell.dim = res.spans[k - 1].dim;
            if (k >= 2) cell.bound = conjecture_bound(p, k);
            cells.push_back(cell);
        }
        rep.rows.emplace_back(p, std::move(cells));
    }
    switch (output_format_from_name(cfg.format)) {
        case OutputFormat::Json: emit(cfg, table1_json(rep).dump(2) + "\n"); break;
        case OutputFormat::Csv: emit(cfg, table1_csv(rep)); break;
        case OutputFormat::Table: emit(cfg, table1_table(rep)); break;
    }
    return 0;
}

int run_cusps(std::uint64_t p, const std::string& relation, const CommonConfig& cfg,
              bool full) {
    const CuspRelation rel = cusp_relation_from_name(relation);
    const CuspClassTable table = cusp_classes(p, rel);
    switch (output_format_from_name(cfg.format)) {
        case OutputFormat::Json: emit(cfg, cusp_table_json(table, full).dump(2) + "\n"); break;
        case OutputFormat::Csv: emit(cfg, cusp_table_csv(table)); break;
        case OutputFormat::Table: emit(cfg, cusp_table_table(table)); break;
    }
    const std::size_t expected =
        rel == CuspRelation::Sim ? 6 * (p + 1) : 3 * (p * p - 1);
    if (table.count() != expected) {
        std::cerr << "FAIL cusp_class_count: enumerated " << table.count()
                  << " classes, formula gives " << expected << "\n";
        return 1;
    }
    return 0;
}

int run_verify(std::uint64_t p, std::uint32_t k_max, const CommonConfig& cfg) {
    bool all_ok = true;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS  " : "FAIL  ") << name;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
        all_ok = all_ok && ok;
    };

    // The defining relation of the level-4 graded ring, pulled back.
    {
        const std::uint64_t L = truncation_bound(p, 2);
        const QExpansion m = build_generator({BaseForm::M, std::nullopt}, p, L);
        const QExpansion n = build_generator({BaseForm::N, std::nullopt}, p, L);
        const QExpansion pp = build_generator({BaseForm::P, std::nullopt}, p, L);
        const QExpansion lhs = mul(n, n);
        const QExpansion rhs = scale(4, mul(m, pp));
        std::ostringstream d;
        d << "L = " << L;
        report("n_squared_minus_4mp_vanishes", lhs == rhs, d.str());
    }

    // Generators carry a single residue class and integer coefficients.
    {
        const std::uint64_t L = truncation_bound(p, 1);
        GeneratorSet gs = spanning_set(p, L, cfg.effective_threads());
        bool ok = gs.size() == 3 * (p + 1);
        for (std::size_t i = 0; i < gs.size() && ok; ++i) {
            ok = gs.expansions[i].support_class() &&
                 *gs.expansions[i].support_class() == class_of(gs.labels[i], p) &&
                 !gs.expansions[i].is_zero();
        }
        std::ostringstream d;
        d << gs.size() << " generators";
        report("generator_class_support", ok, d.str());
    }

    // Weight-k spans on the level-4 curve have dimension 2k+1.
    {
        bool ok = true;
        std::uint32_t k = 1;
        for (; k <= 5 && ok; ++k) {
            const std::uint64_t L = 64 * k;
            auto monos = gamma4_weight_monomials(k, L);
            std::vector<const QExpansion*> ptrs;
            for (const auto& e : monos) ptrs.push_back(&e);
            BlockPartition part = block_partition(ptrs);
            std::size_t rank = 0;
            RankOptions ropts;
            ropts.seed = cfg.seed;
            for (const auto& [cls, block] : part.blocks)
                rank += rank_exact(block.first, ropts).rank;
            ok = rank == static_cast<std::size_t>(dim_mk_gamma4(k)) &&
                 rank == monos.size();
        }
        report("gamma4_weight_span_dims", ok, "k <= 5");
    }

    // The two closed forms of the bound agree.
    {
        bool ok = true;
        for (std::uint64_t q : {3, 5, 7, 11, 13, 17, 19, 23})
            for (std::uint32_t k = 2; k <= 10 && ok; ++k) {
                const std::int64_t qq = static_cast<std::int64_t>(q);
                ok = conjecture_bound(q, k) ==
                     dim_mk_gammapm(q, k) - 3 * (qq + 1) * (qq - 3);
            }
        report("bound_identity_p_le_23", ok, "k = 2..10");
    }

    // Cusp class counts match the closed formulas.
    {
        const std::size_t sim = cusp_classes(p, CuspRelation::Sim).count();
        const std::size_t approx = cusp_classes(p, CuspRelation::Approx).count();
        std::ostringstream d;
        d << "sim " << sim << ", approx " << approx;
        report("cusp_class_counts",
               sim == 6 * (p + 1) && approx == 3 * (p * p - 1), d.str());
    }

    // Dimensions and bound compliance.
    {
        SpanOptions opts = cfg.span_options();
        SpanResult res = compute_spans(p, k_max, opts);
        bool ok = res.generators.dim <= 3 * (p + 1);
        std::ostringstream d;
        d << "dims";
        for (const auto& s : res.spans) {
            d << " " << s.dim;
            if (s.k >= 3)
                ok = ok && static_cast<std::int64_t>(s.dim) <= conjecture_bound(p, s.k);
        }
        report("span_dims_within_bounds", ok, d.str());

        // Doubling the truncation must not change any dimension.
        if (p == 3) {
            SpanOptions wide = opts;
            wide.length_override = 2 * truncation_bound(p, k_max);
            wide.cache_dir.clear();
            SpanResult res2 = compute_spans(p, k_max, wide);
            bool stable = true;
            for (std::uint32_t k = 1; k <= k_max; ++k)
                stable = stable && res.spans[k - 1].dim == res2.spans[k - 1].dim;
            report("sturm_stability_doubled_L", stable, "p = 3");
        }
    }

    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graded spans of weight-1 theta products at level 4p: exact "
                 "dimensions, cusp classes, and dimension formulas"};
    app.require_subcommand(1);

    CommonConfig cfg;
    std::uint64_t p = 3;
    std::uint32_t k_max = 3;
    std::vector<std::uint64_t> p_list;
    std::string relation = "sim";
    bool relations = false;
    bool full = false;

    CLI::App* dims = app.add_subcommand("dims", "Compute dim W_k for k = 1..kmax");
    dims->add_option("--p", p, "Odd prime level factor")->required();
    dims->add_option("--kmax", k_max, "Largest weight")->required();
    dims->add_flag("--relations", relations,
                   "Collect and exact-verify kernel relations (json output)");
    add_common_options(dims, cfg, true);

    CLI::App* table1 = app.add_subcommand("table1", "Dimension grid for several p");
    table1->add_option("--p-list", p_list, "Comma-separated odd primes")
        ->required()
        ->delimiter(',');
    table1->add_option("--kmax", k_max, "Largest weight per p")->required();
    add_common_options(table1, cfg, true);

    CLI::App* cusps = app.add_subcommand("cusps", "Enumerate cusp classes");
    cusps->add_option("--p", p, "Odd prime level factor")->required();
    cusps->add_option("--relation", relation, "sim | approx");
    cusps->add_flag("--full", full, "Include full member lists (json)");
    add_common_options(cusps, cfg, false);

    CLI::App* verify = app.add_subcommand("verify", "Run the invariant suite");
    verify->add_option("--p", p, "Odd prime level factor")->required();
    verify->add_option("--kmax", k_max, "Largest weight for the span checks")->required();
    add_common_options(verify, cfg, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (dims->parsed()) return run_dims(p, k_max, cfg, relations);
        if (table1->parsed()) return run_table1(p_list, k_max, cfg);
        if (cusps->parsed()) return run_cusps(p, relation, cfg, full);
        if (verify->parsed()) return run_verify(p, k_max, cfg);
    } catch (const CertificationError& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return 3;
    } catch (const CacheError& e) {
        std::cerr << "cache corruption: " << e.what() << "\n";
        return 4;
    } catch (const ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
