#include "thetaspan/cusps.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "thetaspan/errors.hpp"
#include "thetaspan/modarith.hpp"

namespace thetaspan {

std::string cusp_relation_name(CuspRelation r) {
    return r == CuspRelation::Sim ? "sim" : "approx";
}

CuspRelation cusp_relation_from_name(const std::string& s) {
    if (s == "sim") return CuspRelation::Sim;
    if (s == "approx") return CuspRelation::Approx;
    throw ConfigError("unknown cusp relation: " + s + " (expected sim|approx)");
}

namespace {

void require_odd_prime(std::uint64_t p) {
    if (p < 3 || p % 2 == 0 || !is_prime_u64(p))
        throw ConfigError("cusp enumeration: p must be an odd prime");
}

std::vector<std::uint32_t> scaling_units(std::uint64_t p, CuspRelation rel) {
    const std::uint64_t n = 4 * p;
    std::vector<std::uint32_t> units;
    if (rel == CuspRelation::Sim) {
        for (std::uint64_t u = 1; u < n; ++u)
            if (std::gcd(u, n) == 1) units.push_back(static_cast<std::uint32_t>(u));
    } else {
        // The four units congruent to +-1 mod 4 and +-1 mod p. Any unit is
        // odd, hence +-1 mod 4 already; the mod-p condition does the cutting.
        for (std::uint64_t u = 1; u < n; ++u) {
            if (std::gcd(u, n) != 1) continue;
            const std::uint64_t up = u % p;
            if (up == 1 || up == p - 1) units.push_back(static_cast<std::uint32_t>(u));
        }
    }
    return units;
}

} // namespace

CuspClassTable cusp_classes(std::uint64_t p, CuspRelation relation) {
    require_odd_prime(p);
    const std::uint32_t n = static_cast<std::uint32_t>(4 * p);
    const auto units = scaling_units(p, relation);

    CuspClassTable table;
    table.p = p;
    table.relation = relation;

    std::map<std::pair<std::uint32_t, std::uint32_t>,
             std::vector<std::pair<std::uint32_t, std::uint32_t>>>
        by_rep;
    for (std::uint32_t a = 0; a < n; ++a) {
        for (std::uint32_t c = 0; c < n; ++c) {
            if (std::gcd(std::gcd(a, c), n) != 1) continue;
            // Canonical representative: lexicographically smallest scaling.
            std::pair<std::uint32_t, std::uint32_t> rep{a, c};
            for (std::uint32_t u : units) {
                std::pair<std::uint32_t, std::uint32_t> cand{
                    static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * u) % n),
                    static_cast<std::uint32_t>((static_cast<std::uint64_t>(c) * u) % n)};
                rep = std::min(rep, cand);
            }
            by_rep[rep].emplace_back(a, c);
        }
    }
    for (auto& [rep, members] : by_rep) {
        std::sort(members.begin(), members.end());
        table.classes.push_back(std::move(members));
    }
    return table;
}

bool identified_at_level4(const CuspVector& v, const CuspVector& w) {
    auto mod4 = [](std::int64_t x) { return static_cast<std::uint32_t>(((x % 4) + 4) % 4); };
    const bool plus = mod4(v.a) == mod4(w.a) && mod4(v.c) == mod4(w.c);
    const bool minus = mod4(v.a) == mod4(-w.a) && mod4(v.c) == mod4(-w.c);
    return plus || minus;
}

std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t>
refinement_multiplicities(std::uint64_t p) {
    const CuspClassTable sim = cusp_classes(p, CuspRelation::Sim);
    const CuspClassTable approx = cusp_classes(p, CuspRelation::Approx);

    // Map each vector to its Sim representative.
    std::map<std::pair<std::uint32_t, std::uint32_t>,
             std::pair<std::uint32_t, std::uint32_t>>
        sim_rep;
    for (const auto& cls : sim.classes)
        for (const auto& v : cls) sim_rep[v] = cls.front();

    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> mult;
    for (const auto& cls : approx.classes) {
        const auto rep = sim_rep.at(cls.front());
        for (const auto& v : cls) {
            if (sim_rep.at(v) != rep)
                throw std::logic_error("approx class straddles two sim classes");
        }
        ++mult[rep];
    }
    return mult;
}

} // namespace thetaspan
