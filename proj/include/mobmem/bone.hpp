// Two-scale bone remodelling model.
//
// Tissue patches T<i> hold mineral tokens `c` in proportion to their
// mineralisation density (capacity D tokens = density 1). Each patch is paired
// with a bone multicellular unit BMU<i> inside a coupling membrane CU<i>; the
// carrier V<i> moves mineral between the two scales. Inside a BMU, osteoclast
// tokens resorb delivered mineral into free slots and osteoblast tokens refill
// free slots with new mineral.

#ifndef MOBMEM_BONE_HPP
#define MOBMEM_BONE_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "mobmem/coupling.hpp"
#include "mobmem/engine.hpp"
#include "mobmem/model.hpp"

namespace mobmem::bone {

struct BoneParams {
    Count capacity = 20;
    double density = 0.5;
    /// Per-unit densities; when non-empty it must have `units` entries and
    /// overrides `density`.
    std::vector<double> unit_densities;
    Count osteoclasts = 0;
    Count osteoblasts = 0;
    Count cycles = 1;
    std::size_t units = 1;

    double density_of(std::size_t unit) const;
    /// Throws std::domain_error.
    void check() const;
};

/// round(density * capacity), ties away from zero. Throws std::domain_error
/// outside [0, 1] or for capacity 0.
Count encode_density(double density, Count capacity);
/// n / capacity. Throws std::domain_error for n > capacity or capacity 0.
double decode_density(Count n, Count capacity);

/// Labels and symbols of unit `unit` (1-based).
CouplingSpec unit_spec(std::size_t unit, Count cycles = 0);

Symbol osteoclast();
Symbol osteoblast();
Symbol free_slot();

/// Resorption and formation inside the micro membrane of `spec`.
std::vector<Rule> micro_rules(const CouplingSpec& spec = CouplingSpec{});

Model build_bone_model(const BoneParams& params);

struct DensitySample {
    std::size_t cycle = 0;
    double density = 0.0;

    friend bool operator==(const DensitySample&, const DensitySample&) = default;
};

/// One sample per completed macro-cycle of `unit`, taken after the deposit
/// step. Throws std::out_of_range when the trace has no such unit.
std::vector<DensitySample> density_series(const Trace& trace, std::size_t unit, Count capacity);

/// Sum of mineral, cargo and free-slot tokens over every membrane of `unit`.
Count unit_token_total(const LabelTotals& state, std::size_t unit);

}  // namespace mobmem::bone

#endif  // MOBMEM_BONE_HPP
