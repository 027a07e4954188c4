// Model files: a membrane structure followed by rules.
//
//   model     := membrane { rule }
//   membrane  := '[' label [ ':' contents ] { membrane } ']'
//   contents  := item { ',' item }
//   item      := symbol [ '*' integer>=1 ]
//   rule      := 'rule' ident ':' body [ 'if' contents ]
//   body      := 'in' label ':' contents '->' rhs
//              | 'endo' label 'into' label ':' contents '->' rhs
//              | 'exo' label 'from' label ':' contents '->' rhs
//              | 'send-in' label ':' contents '->' rhs
//              | 'send-out' label ':' contents '->' rhs
//   rhs       := contents | '()'
//
// '#' starts a comment running to the end of the line. A first comment of the
// form `# model: <name>` names the model.

#ifndef MOBMEM_MODEL_HPP
#define MOBMEM_MODEL_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mobmem/core.hpp"

namespace mobmem {

struct Model {
    Configuration config;
    std::vector<Rule> rules;
    std::optional<std::string> name;
    /// Source line of each rule when parsed from text; informational only.
    std::vector<int> rule_lines;

    /// Throws std::invalid_argument on duplicate rule ids.
    Model(Configuration config, std::vector<Rule> rules, std::optional<std::string> name = std::nullopt);

    const Rule* find_rule(std::string_view id) const;
};

/// Same labels, contents, tree shape, rules and name; ids ignored.
bool structurally_equal(const Model& a, const Model& b);

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& message);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    int line_;
    int column_;
    std::string detail_;
};

/// Membrane ids are assigned in pre-order starting at 0.
Model parse_model(std::string_view text);

std::string serialize_multiset(const Multiset& m);
std::string serialize_rule(const Rule& rule);
std::string serialize_model(const Model& model);

struct LintWarning {
    enum class Kind { AbsentLabel, DeadSymbol, SelfEntry };
    Kind kind;
    std::string rule_id;  // empty for symbol-level warnings
    int line = 0;         // 0 when unknown
    std::string message;
};

std::vector<LintWarning> lint(const Model& model);

}  // namespace mobmem

#endif  // MOBMEM_MODEL_HPP
