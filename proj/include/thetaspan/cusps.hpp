#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace thetaspan {

/// Cusp a/c as a primitive vector; residues are taken mod 4p where needed.
struct CuspVector {
    std::int64_t a = 0;
    std::int64_t c = 0;
};

enum class CuspRelation { Sim, Approx };

std::string cusp_relation_name(CuspRelation r);
CuspRelation cusp_relation_from_name(const std::string& s);

/// Partition of the primitive residue pairs mod 4p under the chosen relation.
/// Sim identifies (a,c) with u*(a,c) for every unit u mod 4p; Approx only for
/// the four units congruent to +-1 both mod 4 and mod p.
struct CuspClassTable {
    std::uint64_t p = 0;
    CuspRelation relation = CuspRelation::Sim;
    /// One entry per class: members sorted ascending, classes sorted by their
    /// smallest (lexicographic) member, which is the canonical representative.
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> classes;

    std::size_t count() const { return classes.size(); }
    std::pair<std::uint32_t, std::uint32_t> representative(std::size_t i) const {
        return classes[i].front();
    }
};

/// Brute-force enumeration of primitive pairs mod 4p and their classes.
CuspClassTable cusp_classes(std::uint64_t p, CuspRelation relation);

/// Whether two cusps map to the same point of X(4): (a',c') == +-(a,c) mod 4.
bool identified_at_level4(const CuspVector& v, const CuspVector& w);

/// Number of Approx classes inside each Sim class, keyed by the Sim class
/// representative. Also verifies that Approx refines Sim.
std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t>
refinement_multiplicities(std::uint64_t p);

} // namespace thetaspan
