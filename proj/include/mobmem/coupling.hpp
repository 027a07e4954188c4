// Two-scale coupling expressed purely as membrane rules.
//
// A carrier membrane shuttles the macro-scale payload between a macro
// membrane and a micro membrane nested in a coupling membrane:
//
//   skin ⊃ { macro, coupling ⊃ { micro, carrier } }
//
// One macro-cycle: the carrier leaves the coupling membrane, enters the macro
// membrane, drains every payload token in one step, travels to the micro
// membrane, delivers, waits two steps for the micro dynamics, picks the
// remodelled cargo back up and deposits it in the macro membrane. Phase
// objects p0..p13 gate every transition; each cycle consumes one cycle token,
// and the carrier halts once they run out.

#ifndef MOBMEM_COUPLING_HPP
#define MOBMEM_COUPLING_HPP

#include <cstddef>
#include <vector>

#include "mobmem/core.hpp"

namespace mobmem {

struct CouplingSpec {
    Symbol macro_label{"T"};
    Symbol micro_label{"BMU"};
    Symbol coupling_label{"CU"};
    Symbol carrier_label{"V"};
    Symbol payload_symbol{"c"};
    Symbol cycle_symbol{"cyc"};
    std::string phase_prefix = "p";
    Count cycles = 0;

    static constexpr int kPhaseCount = 14;

    Symbol phase(int i) const;
    /// Cargo in transit, derived from the payload name with the reserved
    /// underscore prefix: loaded `_<payload>l`, delivered `_<payload>b`,
    /// remodelled (newly formed) `_<payload>n`, returning `_<payload>r`.
    Symbol loaded() const;
    Symbol delivered() const;
    Symbol remodelled() const;
    Symbol returning() const;

    /// Throws std::invalid_argument when a user-supplied name uses the
    /// reserved prefix or generated names collide.
    void check() const;

    /// Contents the carrier starts with: one p0 plus one token per cycle.
    Multiset initial_carrier_contents() const;
};

/// The carrier protocol as plain rules; ids are prefixed with the carrier
/// label. Micro-scale dynamics are not included.
std::vector<Rule> generate_carrier_protocol(const CouplingSpec& spec);

/// Steps from one drain phase to the next in steady state.
constexpr std::size_t carrier_cycle_length() { return 12; }

/// Steps from the initial p0 phase to the first drain phase.
constexpr std::size_t carrier_startup_length() { return 2; }

}  // namespace mobmem

#endif  // MOBMEM_COUPLING_HPP
