#include "mobmem/bone.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mobmem::bone {

double BoneParams::density_of(std::size_t unit) const {
    if (unit == 0 || unit > units) throw std::out_of_range("unit " + std::to_string(unit));
    return unit_densities.empty() ? density : unit_densities[unit - 1];
}

void BoneParams::check() const {
    if (capacity == 0) throw std::domain_error("capacity must be at least 1");
    if (units == 0) throw std::domain_error("at least one unit is required");
    if (!unit_densities.empty() && unit_densities.size() != units) {
        throw std::domain_error("expected " + std::to_string(units) + " unit densities, got " +
                                std::to_string(unit_densities.size()));
    }
    for (std::size_t u = 1; u <= units; ++u) encode_density(density_of(u), capacity);
}

Count encode_density(double density, Count capacity) {
    if (capacity == 0) throw std::domain_error("capacity must be at least 1");
    if (!(density >= 0.0 && density <= 1.0)) {
        throw std::domain_error("density " + std::to_string(density) + " outside [0, 1]");
    }
    // std::round rounds halfway cases away from zero.
    return static_cast<Count>(std::round(density * static_cast<double>(capacity)));
}

double decode_density(Count n, Count capacity) {
    if (capacity == 0) throw std::domain_error("capacity must be at least 1");
    if (n > capacity) {
        throw std::domain_error("token count " + std::to_string(n) + " exceeds capacity " + std::to_string(capacity));
    }
    return static_cast<double>(n) / static_cast<double>(capacity);
}

CouplingSpec unit_spec(std::size_t unit, Count cycles) {
    const std::string i = std::to_string(unit);
    CouplingSpec spec;
    spec.macro_label = Symbol("T" + i);
    spec.micro_label = Symbol("BMU" + i);
    spec.coupling_label = Symbol("CU" + i);
    spec.carrier_label = Symbol("V" + i);
    spec.cycles = cycles;
    return spec;
}

Symbol osteoclast() { return Symbol("_oc"); }
Symbol osteoblast() { return Symbol("_ob"); }
Symbol free_slot() { return Symbol("_f"); }

std::vector<Rule> micro_rules(const CouplingSpec& spec) {
    const Symbol& bmu = spec.micro_label;
    const std::string pre = bmu.str() + "_";
    return {
        Rule::rewrite(pre + "resorb", bmu, Multiset{{osteoclast(), 1}, {spec.delivered(), 1}}, Multiset{{free_slot(), 1}}),
        Rule::rewrite(pre + "form", bmu, Multiset{{osteoblast(), 1}, {free_slot(), 1}}, Multiset{{spec.remodelled(), 1}}),
    };
}

Model build_bone_model(const BoneParams& params) {
    params.check();
    ConfigurationBuilder builder(Symbol("skin"));
    std::vector<Rule> rules;
    for (std::size_t u = 1; u <= params.units; ++u) {
        const CouplingSpec spec = unit_spec(u, params.cycles);
        const Count mineral = encode_density(params.density_of(u), params.capacity);
        builder.add(builder.skin(), spec.macro_label, Multiset{{spec.payload_symbol, mineral}});
        const MembraneId cu = builder.add(builder.skin(), spec.coupling_label);
        builder.add(cu, spec.micro_label, Multiset{{osteoclast(), params.osteoclasts}, {osteoblast(), params.osteoblasts}});
        builder.add(cu, spec.carrier_label, spec.initial_carrier_contents());

        for (auto& r : generate_carrier_protocol(spec)) rules.push_back(std::move(r));
        for (auto& r : micro_rules(spec)) rules.push_back(std::move(r));
    }
    return Model(builder.build(), std::move(rules), "bone-remodelling");
}

namespace {

const Multiset& totals_for(const LabelTotals& state, const Symbol& label) {
    static const Multiset empty;
    auto it = state.find(label);
    return it == state.end() ? empty : it->second;
}

}  // namespace

std::vector<DensitySample> density_series(const Trace& trace, std::size_t unit, Count capacity) {
    if (trace.steps.empty()) return {};
    if (unit == 0) throw std::out_of_range("units are numbered from 1");
    const CouplingSpec spec = unit_spec(unit);
    if (!trace.initial_state.contains(spec.macro_label)) {
        throw std::out_of_range("trace has no unit " + std::to_string(unit));
    }
    const Symbol deposit_phase = spec.phase(13);
    auto in_deposit = [&](const LabelTotals& s) { return totals_for(s, spec.carrier_label).count(deposit_phase) > 0; };

    std::vector<DensitySample> out;
    const LabelTotals* before = &trace.initial_state;
    for (std::size_t s = 0; s + 1 < trace.steps.size(); ++s) {
        const LabelTotals& after = trace.steps[s].state;
        if (!in_deposit(*before) && in_deposit(after)) {
            const Count mineral = totals_for(trace.steps[s + 1].state, spec.macro_label).count(spec.payload_symbol);
            out.push_back({out.size() + 1, decode_density(mineral, capacity)});
        }
        before = &after;
    }
    return out;
}

Count unit_token_total(const LabelTotals& state, std::size_t unit) {
    const CouplingSpec spec = unit_spec(unit);
    const Symbol tracked[] = {spec.payload_symbol, spec.loaded(),   spec.delivered(),
                              spec.remodelled(),   spec.returning(), free_slot()};
    Count sum = 0;
    for (const Symbol& label : {spec.macro_label, spec.coupling_label, spec.micro_label, spec.carrier_label}) {
        const Multiset& m = totals_for(state, label);
        for (const Symbol& s : tracked) sum = checked_add(sum, m.count(s));
    }
    return sum;
}

}  // namespace mobmem::bone
