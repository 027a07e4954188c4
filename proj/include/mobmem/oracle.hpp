// Brute-force successor oracle for small systems.
//
// Shares nothing with the engine beyond the value types: bindings,
// applicability and effects are recomputed here by exhaustive search so the
// two can be checked against each other.

#ifndef MOBMEM_ORACLE_HPP
#define MOBMEM_ORACLE_HPP

#include <set>
#include <span>
#include <stdexcept>
#include <string>

#include "mobmem/core.hpp"

namespace mobmem {

class OracleBoundExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Labels, contents and tree shape with ids erased and children sorted.
std::string canonical_form(const Configuration& config);

/// Canonical forms of every configuration reachable in one maximally parallel
/// step. A halting configuration is its own single successor. Throws
/// OracleBoundExceeded when more than `bound` distinct bindings are enabled.
std::set<std::string> oracle_successors(const Configuration& config, std::span<const Rule> rules, std::size_t bound);

}  // namespace mobmem

#endif  // MOBMEM_ORACLE_HPP
