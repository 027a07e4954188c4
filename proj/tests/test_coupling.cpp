#include <doctest.h>

#include <set>

#include "mobmem/coupling.hpp"
#include "mobmem/engine.hpp"
#include "mobmem/model.hpp"

using namespace mobmem;

namespace {

CouplingSpec indexed(int i, Count cycles) {
    CouplingSpec s;
    const std::string n = std::to_string(i);
    s.macro_label = Symbol("T" + n);
    s.micro_label = Symbol("BMU" + n);
    s.coupling_label = Symbol("CU" + n);
    s.carrier_label = Symbol("V" + n);
    s.cycles = cycles;
    return s;
}

// Protocol only, no micro dynamics: the micro membrane just holds cargo
// between delivery and pickup.
Model compose(const std::vector<CouplingSpec>& specs, Count payload) {
    ConfigurationBuilder b("skin");
    std::vector<Rule> rules;
    for (const auto& s : specs) {
        b.add(b.skin(), s.macro_label, Multiset{{s.payload_symbol, payload}});
        const auto cu = b.add(b.skin(), s.coupling_label);
        b.add(cu, s.micro_label);
        b.add(cu, s.carrier_label, s.initial_carrier_contents());
        for (auto& r : generate_carrier_protocol(s)) rules.push_back(r);
    }
    return Model(b.build(), std::move(rules));
}

std::vector<int> phases(const CouplingSpec& spec, const Multiset& carrier) {
    std::vector<int> out;
    for (int i = 0; i < CouplingSpec::kPhaseCount; ++i) {
        if (carrier.count(spec.phase(i)) > 0) out.push_back(i);
    }
    return out;
}

// Indices of the steps after which the carrier has just entered `phase`.
std::vector<std::size_t> entries_into(const Trace& t, const CouplingSpec& spec, int phase) {
    std::vector<std::size_t> out;
    const LabelTotals* before = &t.initial_state;
    for (const auto& st : t.steps) {
        const bool was = before->at(spec.carrier_label).count(spec.phase(phase)) > 0;
        const bool is = st.state.at(spec.carrier_label).count(spec.phase(phase)) > 0;
        if (is && !was) out.push_back(st.index);
        before = &st.state;
    }
    return out;
}

LabelTotals project(const LabelTotals& state, const CouplingSpec& s) {
    LabelTotals out;
    for (const Symbol& l : {s.macro_label, s.micro_label, s.coupling_label, s.carrier_label}) out[l] = state.at(l);
    return out;
}

}  // namespace

TEST_CASE("generate_carrier_protocol emits the full rule list") {
    const CouplingSpec spec;
    const auto rules = generate_carrier_protocol(spec);
    CHECK(rules.size() == 19);
    const std::set<Symbol> labels{spec.macro_label, spec.micro_label, spec.coupling_label, spec.carrier_label};
    std::set<std::string> ids;
    for (const auto& r : rules) {
        CHECK(r.subject() == spec.carrier_label);
        if (r.host()) CHECK(labels.contains(*r.host()));
        ids.insert(r.id());
    }
    CHECK(ids.size() == rules.size());

    // Drain and deliver are gated by phase promoters, never by consumption.
    const Rule& drain = rules[2];
    CHECK(drain.form() == RuleForm::SendIn);
    CHECK(drain.consumed() == Multiset{{"c", 1}});
    CHECK(drain.produced() == Multiset{{"_cl", 1}});
    CHECK(*drain.promoter() == Multiset{{"p2", 1}});

    // Every generated object other than the payload and phases is reserved.
    for (const auto& r : rules) {
        for (const auto& [s, n] : r.produced()) {
            const bool user_facing = s == spec.payload_symbol || s.str().front() == 'p';
            CHECK((user_facing || s.is_reserved()));
        }
    }
}

TEST_CASE("CouplingSpec::check rejects reserved and colliding names") {
    CouplingSpec s;
    s.payload_symbol = Symbol("_c");
    CHECK_THROWS_AS(s.check(), std::invalid_argument);
    s = CouplingSpec{};
    s.carrier_label = Symbol("_V");
    CHECK_THROWS_AS(generate_carrier_protocol(s), std::invalid_argument);
    s = CouplingSpec{};
    s.payload_symbol = Symbol("p3");
    CHECK_THROWS_AS(s.check(), std::invalid_argument);
    s = CouplingSpec{};
    s.micro_label = s.macro_label;
    CHECK_THROWS_AS(s.check(), std::invalid_argument);
    s = CouplingSpec{};
    s.phase_prefix = "_p";
    CHECK_THROWS_AS(s.check(), std::invalid_argument);
    CHECK_NOTHROW(CouplingSpec{}.check());
}

TEST_CASE("cycles = 0 halts without touching the macro state") {
    const CouplingSpec spec = indexed(1, 0);
    const Model m = compose({spec}, 6);
    const Trace t = run(m, {}, 100);
    CHECK(t.halted());
    CHECK(t.steps.size() == 1);
    CHECK(label_totals(t.final_config).at("T1") == Multiset{{"c", 6}});
    CHECK(t.final_config.parent_of(MembraneId{4}) == MembraneId{2});
}

TEST_CASE("protocol timing") {
    for (Count k : {1, 2, 5}) {
        CAPTURE(k);
        const CouplingSpec spec = indexed(1, k);
        const Trace t = run(compose({spec}, 4), {}, 1000);
        REQUIRE(t.halted());

        const auto drains = entries_into(t, spec, 2);
        REQUIRE(drains.size() == k);
        // Entering p2 after step index i means i + 1 steps have run.
        CHECK(drains[0] + 1 == carrier_startup_length());
        for (std::size_t i = 1; i < drains.size(); ++i) CHECK(drains[i] - drains[i - 1] == carrier_cycle_length());

        // 2 + 12k applying steps, then one halted step.
        CHECK(t.steps.size() == carrier_startup_length() + carrier_cycle_length() * k + 1);
        CHECK(label_totals(t.final_config).at("T1") == Multiset{{"c", 4}});
    }
}

TEST_CASE("phase exclusivity, drain completeness and payload conservation") {
    const CouplingSpec spec = indexed(1, 3);
    const Trace t = run(compose({spec}, 9), {}, 1000);
    const Symbol tracked[] = {spec.payload_symbol, spec.loaded(), spec.delivered(), spec.remodelled(),
                              spec.returning()};
    const LabelTotals* before = &t.initial_state;
    for (const auto& st : t.steps) {
        CHECK(phases(spec, st.state.at(spec.carrier_label)).size() == 1);
        if (before->at(spec.carrier_label).count(spec.phase(2)) > 0) {
            CHECK(st.state.at(spec.macro_label).count(spec.payload_symbol) == 0);
        }
        Count sum = 0;
        for (const auto& [label, m] : st.state) {
            for (const Symbol& s : tracked) sum += m.count(s);
        }
        CHECK(sum == 9);
        before = &st.state;
    }
}

TEST_CASE("two units run independently and embed the one-unit trace") {
    const CouplingSpec one = indexed(1, 2);
    const CouplingSpec two = indexed(2, 3);
    const Trace single = run(compose({one}, 5), {.seed = 4}, 1000);
    const Trace both = run(compose({one, two}, 5), {.seed = 9}, 1000);
    REQUIRE(both.steps.size() > single.steps.size());
    for (std::size_t i = 0; i < single.steps.size(); ++i) {
        CHECK(project(both.steps[i].state, one) == project(single.steps[i].state, one));
    }
    // Unit 1 stays settled while unit 2 keeps cycling.
    for (std::size_t i = single.steps.size(); i < both.steps.size(); ++i) {
        CHECK(project(both.steps[i].state, one) == project(single.steps.back().state, one));
    }
}
