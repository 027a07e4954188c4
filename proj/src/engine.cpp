#include "mobmem/engine.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

namespace mobmem {

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below requires a positive bound");
    // Reject the low (2^64 mod bound) outputs so every residue is equally likely.
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
        const std::uint64_t x = engine_();
        if (x >= threshold) return x % bound;
    }
}

LabelTotals label_totals(const Configuration& config) {
    LabelTotals out;
    for (const auto& m : config.membranes()) {
        auto& slot = out[m.label];
        slot = slot + m.contents;
    }
    return out;
}

MembraneId consumption_site(const Rule& rule, const RuleInstance& instance) {
    if (rule.form() == RuleForm::SendIn) return *instance.parent;
    return instance.subject;
}

MembraneId production_site(const Rule& rule, const RuleInstance& instance) {
    if (rule.form() == RuleForm::SendOut) return *instance.parent;
    return instance.subject;
}

namespace {

bool promoted(const Rule& rule, const Membrane& subject) {
    return !rule.promoter() || subject.contents.contains(*rule.promoter());
}

std::vector<MembraneId> structural_roles(const RuleInstance& inst) {
    std::vector<MembraneId> roles{inst.subject};
    if (inst.host) roles.push_back(*inst.host);
    return roles;
}

}  // namespace

std::vector<RuleInstance> enumerate_instances(const Configuration& config, std::span<const Rule> rules) {
    std::vector<RuleInstance> out;
    for (std::size_t ri = 0; ri < rules.size(); ++ri) {
        const Rule& rule = rules[ri];
        const std::size_t first = out.size();
        for (const Membrane& m : config.membranes()) {
            if (m.label != rule.subject() || !promoted(rule, m)) continue;
            const auto parent = config.parent_of(m.id);
            RuleInstance base{ri, rule.id(), m.id, std::nullopt, parent};
            switch (rule.form()) {
                case RuleForm::Rewrite:
                    if (m.contents.contains(rule.consumed())) out.push_back(base);
                    break;
                case RuleForm::Endo: {
                    if (!parent || !m.contents.contains(rule.consumed())) break;
                    for (MembraneId sib : config.at(*parent).children) {
                        if (sib == m.id || config.at(sib).label != *rule.host()) continue;
                        RuleInstance inst = base;
                        inst.host = sib;
                        out.push_back(inst);
                    }
                    break;
                }
                case RuleForm::Exo: {
                    if (!parent || config.at(*parent).label != *rule.host()) break;
                    // The source must itself have a parent for the mover to land in.
                    if (!config.parent_of(*parent) || !m.contents.contains(rule.consumed())) break;
                    RuleInstance inst = base;
                    inst.host = parent;
                    out.push_back(inst);
                    break;
                }
                case RuleForm::SendIn:
                    if (parent && config.at(*parent).contents.contains(rule.consumed())) out.push_back(base);
                    break;
                case RuleForm::SendOut:
                    if (parent && m.contents.contains(rule.consumed())) out.push_back(base);
                    break;
            }
        }
        std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(), [](const auto& a, const auto& b) {
            if (a.subject != b.subject) return a.subject < b.subject;
            return a.host.value_or(MembraneId{0}) < b.host.value_or(MembraneId{0});
        });
    }
    return out;
}

bool is_jointly_applicable(const Configuration& config, std::span<const Rule> rules,
                           std::span<const AppliedInstance> instances) {
    std::map<MembraneId, Multiset> demand;
    std::set<MembraneId> roles;
    for (const auto& ai : instances) {
        if (ai.count == 0) continue;
        const Rule& rule = rules[ai.instance.rule_index];
        auto& d = demand[consumption_site(rule, ai.instance)];
        d = d + rule.consumed().scaled(ai.count);
        if (rule.is_structural()) {
            if (ai.count > 1) return false;
            for (MembraneId id : structural_roles(ai.instance)) {
                if (!roles.insert(id).second) return false;
            }
        }
    }
    for (const auto& [id, d] : demand) {
        if (!config.at(id).contents.contains(d)) return false;
    }
    return true;
}

bool is_maximal(const Configuration& config, std::span<const Rule> rules, std::span<const AppliedInstance> applied) {
    std::vector<AppliedInstance> extended(applied.begin(), applied.end());
    extended.push_back({});
    for (const auto& candidate : enumerate_instances(config, rules)) {
        extended.back() = AppliedInstance{candidate, 1};
        if (is_jointly_applicable(config, rules, extended)) return false;
    }
    return true;
}

Configuration apply_instances(const Configuration& config, std::span<const Rule> rules,
                              std::span<const AppliedInstance> applied) {
    std::vector<Membrane> ms = config.membranes();
    std::unordered_map<MembraneId, std::size_t> pos;
    for (std::size_t i = 0; i < ms.size(); ++i) pos.emplace(ms[i].id, i);
    auto slot = [&](MembraneId id) -> Membrane& { return ms[pos.at(id)]; };

    try {
        for (const auto& ai : applied) {
            const Rule& rule = rules[ai.instance.rule_index];
            Membrane& site = slot(consumption_site(rule, ai.instance));
            site.contents = site.contents - rule.consumed().scaled(ai.count);
        }
    } catch (const std::underflow_error& e) {
        throw EngineError(std::string("internal underflow while applying a step: ") + e.what());
    }
    for (const auto& ai : applied) {
        const Rule& rule = rules[ai.instance.rule_index];
        Membrane& site = slot(production_site(rule, ai.instance));
        site.contents = site.contents + rule.produced().scaled(ai.count);
    }

    auto detach = [&](MembraneId from, MembraneId child) {
        auto& kids = slot(from).children;
        kids.erase(std::remove(kids.begin(), kids.end(), child), kids.end());
    };
    for (const auto& ai : applied) {
        const Rule& rule = rules[ai.instance.rule_index];
        if (!rule.is_structural() || ai.count == 0) continue;
        const RuleInstance& inst = ai.instance;
        if (rule.form() == RuleForm::Endo) {
            detach(*inst.parent, inst.subject);
            slot(*inst.host).children.push_back(inst.subject);
        } else {
            // Target is the source's pre-step parent; the source itself is locked.
            const MembraneId target = *config.parent_of(*inst.host);
            detach(*inst.host, inst.subject);
            slot(target).children.push_back(inst.subject);
        }
    }
    return Configuration(config.skin(), std::move(ms));
}

StepResult step(const Configuration& config, std::span<const Rule> rules, Rng& rng, const EngineOptions& options) {
    if (options.max_instances_per_step == 0) throw std::invalid_argument("max_instances_per_step must be positive");
    const std::vector<RuleInstance> instances = enumerate_instances(config, rules);

    std::vector<std::size_t> order(instances.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);

    std::unordered_map<MembraneId, Multiset> remaining;
    std::set<MembraneId> locked;
    std::vector<Count> multiplicity(instances.size(), 0);
    std::size_t fired = 0;

    auto try_add = [&](std::size_t idx) {
        const RuleInstance& inst = instances[idx];
        const Rule& rule = rules[inst.rule_index];
        if (rule.is_structural()) {
            for (MembraneId id : structural_roles(inst)) {
                if (locked.contains(id)) return false;
            }
        }
        const MembraneId site = consumption_site(rule, inst);
        auto it = remaining.find(site);
        if (it == remaining.end()) it = remaining.emplace(site, config.at(site).contents).first;
        if (!it->second.contains(rule.consumed())) return false;
        it->second = it->second - rule.consumed();
        if (rule.is_structural()) {
            for (MembraneId id : structural_roles(inst)) locked.insert(id);
        }
        ++multiplicity[idx];
        if (++fired > options.max_instances_per_step) {
            throw EngineError("step exceeds " + std::to_string(options.max_instances_per_step) +
                              " rule applications; the model is likely runaway");
        }
        return true;
    };

    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t idx : order) progress = try_add(idx) || progress;
    }

    std::vector<AppliedInstance> applied;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (multiplicity[i] > 0) applied.push_back({instances[i], multiplicity[i]});
    }
    if (applied.empty()) return StepResult{config, {}, true};

    Configuration next = apply_instances(config, rules, applied);
    if (options.self_check) {
        if (!is_jointly_applicable(config, rules, applied)) {
            throw EngineError("self-check: selected instances are not jointly applicable");
        }
        if (!is_maximal(config, rules, applied)) throw EngineError("self-check: selected instances are not maximal");
        if (auto violations = validate(next); !violations.empty()) {
            throw EngineError("self-check: step produced an invalid configuration: " + violations.front().message);
        }
    }
    return StepResult{std::move(next), std::move(applied), false};
}

Trace run(const Model& model, const EngineOptions& options, std::size_t max_steps) {
    Rng rng(options.seed);
    Trace trace{.seed = options.seed, .initial_state = label_totals(model.config), .steps = {}, .final_config = model.config};
    Configuration current = model.config;
    for (std::size_t i = 0; i < max_steps; ++i) {
        StepResult r = step(current, model.rules, rng, options);
        trace.steps.push_back(TraceStep{i, std::move(r.applied), r.halted, label_totals(r.config)});
        current = std::move(r.config);
        if (r.halted) break;
    }
    trace.final_config = std::move(current);
    return trace;
}

}  // namespace mobmem
