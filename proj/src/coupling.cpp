#include "mobmem/coupling.hpp"

#include <set>

namespace mobmem {

Symbol CouplingSpec::phase(int i) const {
    if (i < 0 || i >= kPhaseCount) throw std::out_of_range("phase index " + std::to_string(i));
    return Symbol(phase_prefix + std::to_string(i));
}

Symbol CouplingSpec::loaded() const { return Symbol("_" + payload_symbol.str() + "l"); }
Symbol CouplingSpec::delivered() const { return Symbol("_" + payload_symbol.str() + "b"); }
Symbol CouplingSpec::remodelled() const { return Symbol("_" + payload_symbol.str() + "n"); }
Symbol CouplingSpec::returning() const { return Symbol("_" + payload_symbol.str() + "r"); }

void CouplingSpec::check() const {
    const std::vector<const Symbol*> user = {&macro_label,    &micro_label,  &coupling_label,
                                             &carrier_label,  &payload_symbol, &cycle_symbol};
    for (const Symbol* s : user) {
        if (s->is_reserved()) {
            throw std::invalid_argument("'" + s->str() + "' uses the reserved '_' prefix");
        }
    }
    if (phase_prefix.empty() || phase_prefix.front() == '_' || !Symbol::is_valid(phase_prefix + "0")) {
        throw std::invalid_argument("invalid phase prefix '" + phase_prefix + "'");
    }
    std::set<Symbol> labels{macro_label, micro_label, coupling_label, carrier_label};
    if (labels.size() != 4) throw std::invalid_argument("coupling labels must be distinct");

    std::set<Symbol> objects{payload_symbol, cycle_symbol, loaded(), delivered(), remodelled(), returning()};
    if (objects.size() != 6) throw std::invalid_argument("payload and cycle symbols must differ");
    for (int i = 0; i < kPhaseCount; ++i) {
        if (!objects.insert(phase(i)).second) {
            throw std::invalid_argument("phase symbol '" + phase(i).str() + "' collides with another protocol symbol");
        }
    }
}

Multiset CouplingSpec::initial_carrier_contents() const {
    return Multiset{{phase(0), 1}, {cycle_symbol, cycles}};
}

std::vector<Rule> generate_carrier_protocol(const CouplingSpec& spec) {
    spec.check();
    const Symbol& V = spec.carrier_label;
    const std::string pre = V.str() + "_";
    auto p = [&](int i) { return Multiset{{spec.phase(i), 1}}; };
    auto one = [](const Symbol& s) { return Multiset{{s, 1}}; };
    const Multiset cyc = one(spec.cycle_symbol);

    std::vector<Rule> rules;
    rules.reserve(19);
    // outbound: coupling membrane -> macro membrane, drain
    rules.push_back(Rule::exo(pre + "leave_coupling", V, spec.coupling_label, p(0) + cyc, p(1)));
    rules.push_back(Rule::endo(pre + "enter_macro", V, spec.macro_label, p(1), p(2)));
    rules.push_back(Rule::send_in(pre + "drain", V, one(spec.payload_symbol), one(spec.loaded()), p(2)));
    rules.push_back(Rule::rewrite(pre + "drained", V, p(2), p(3)));
    // macro membrane -> micro membrane, deliver
    rules.push_back(Rule::exo(pre + "leave_macro", V, spec.macro_label, p(3), p(4)));
    rules.push_back(Rule::endo(pre + "enter_coupling", V, spec.coupling_label, p(4), p(5)));
    rules.push_back(Rule::endo(pre + "enter_micro", V, spec.micro_label, p(5), p(6)));
    rules.push_back(Rule::send_out(pre + "deliver", V, one(spec.loaded()), one(spec.delivered()), p(6)));
    rules.push_back(Rule::rewrite(pre + "delivered", V, p(6), p(7)));
    // two wait steps for the micro dynamics
    rules.push_back(Rule::rewrite(pre + "wait_first", V, p(7), p(8)));
    rules.push_back(Rule::rewrite(pre + "wait_second", V, p(8), p(9)));
    // pickup
    rules.push_back(Rule::send_in(pre + "pickup", V, one(spec.delivered()), one(spec.returning()), p(9)));
    rules.push_back(Rule::send_in(pre + "pickup_new", V, one(spec.remodelled()), one(spec.returning()), p(9)));
    rules.push_back(Rule::rewrite(pre + "picked_up", V, p(9), p(10)));
    // micro membrane -> macro membrane, deposit
    rules.push_back(Rule::exo(pre + "leave_micro", V, spec.micro_label, p(10), p(11)));
    rules.push_back(Rule::exo(pre + "leave_coupling_return", V, spec.coupling_label, p(11), p(12)));
    rules.push_back(Rule::endo(pre + "return_macro", V, spec.macro_label, p(12), p(13)));
    rules.push_back(Rule::send_out(pre + "deposit", V, one(spec.returning()), one(spec.payload_symbol), p(13)));
    rules.push_back(Rule::rewrite(pre + "next_cycle", V, p(13) + cyc, p(2)));
    return rules;
}

}  // namespace mobmem
