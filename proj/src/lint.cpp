#include <set>

#include "mobmem/model.hpp"

namespace mobmem {

std::vector<LintWarning> lint(const Model& model) {
    std::vector<LintWarning> out;

    std::set<Symbol> labels;
    std::set<Symbol> initial;
    for (const auto& m : model.config.membranes()) {
        labels.insert(m.label);
        for (const auto& [s, n] : m.contents) initial.insert(s);
    }

    auto line_of = [&](std::size_t i) { return i < model.rule_lines.size() ? model.rule_lines[i] : 0; };

    std::set<Symbol> used;
    for (const auto& r : model.rules) {
        for (const auto& [s, n] : r.consumed()) used.insert(s);
        if (r.promoter()) {
            for (const auto& [s, n] : *r.promoter()) used.insert(s);
        }
    }

    for (std::size_t i = 0; i < model.rules.size(); ++i) {
        const Rule& r = model.rules[i];
        if (!labels.contains(r.subject())) {
            out.push_back({LintWarning::Kind::AbsentLabel, r.id(), line_of(i),
                           "rule '" + r.id() + "' refers to label '" + r.subject().str() +
                               "' which is absent from the structure; the rule is inert"});
        }
        if (r.host() && !labels.contains(*r.host())) {
            out.push_back({LintWarning::Kind::AbsentLabel, r.id(), line_of(i),
                           "rule '" + r.id() + "' refers to host label '" + r.host()->str() +
                               "' which is absent from the structure; the rule is inert"});
        }
        if (r.form() == RuleForm::Endo && r.host() == r.subject()) {
            out.push_back({LintWarning::Kind::SelfEntry, r.id(), line_of(i),
                           "rule '" + r.id() + "' moves '" + r.subject().str() +
                               "' into a membrane with the same label; a membrane cannot enter itself"});
        }
    }

    std::set<Symbol> reported;
    for (std::size_t i = 0; i < model.rules.size(); ++i) {
        const Rule& r = model.rules[i];
        for (const auto& [s, n] : r.produced()) {
            if (used.contains(s) || initial.contains(s) || !reported.insert(s).second) continue;
            out.push_back({LintWarning::Kind::DeadSymbol, r.id(), line_of(i),
                           "symbol '" + s.str() + "' produced by rule '" + r.id() +
                               "' is never consumed and absent initially"});
        }
    }
    return out;
}

}  // namespace mobmem
