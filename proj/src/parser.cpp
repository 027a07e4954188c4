#include <charconv>
#include <set>
#include <sstream>

#include "mobmem/model.hpp"

namespace mobmem {

Model::Model(Configuration config_in, std::vector<Rule> rules_in, std::optional<std::string> name_in)
    : config(std::move(config_in)), rules(std::move(rules_in)), name(std::move(name_in)) {
    std::set<std::string> ids;
    for (const auto& r : rules) {
        if (!ids.insert(r.id()).second) throw std::invalid_argument("duplicate rule id '" + r.id() + "'");
    }
}

const Rule* Model::find_rule(std::string_view id) const {
    for (const auto& r : rules) {
        if (r.id() == id) return &r;
    }
    return nullptr;
}

bool structurally_equal(const Model& a, const Model& b) {
    return a.name == b.name && a.rules == b.rules && structurally_equal(a.config, b.config);
}

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

namespace {

constexpr int kMaxNesting = 512;

enum class Tok { LBracket, RBracket, Colon, Comma, Star, Arrow, LParen, RParen, Ident, Integer, SendIn, SendOut, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::End: return "end of input";
        case Tok::Ident: return "'" + t.text + "'";
        case Tok::Integer: return "integer " + t.text;
        default: return "'" + t.text + "'";
    }
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::optional<std::string> model_name;

    Token next() {
        Token t = scan();
        end_line_ = line_;
        end_col_ = col_;
        return t;
    }

private:
    Token scan() {
        skip_space_and_comments();
        const int line = line_;
        const int col = col_;
        // End of input is reported where the last token ended.
        if (pos_ >= src_.size()) return {Tok::End, "", end_line_, end_col_};
        const char c = src_[pos_];
        auto single = [&](Tok k) {
            advance();
            return Token{k, std::string(1, c), line, col};
        };
        switch (c) {
            case '[': return single(Tok::LBracket);
            case ']': return single(Tok::RBracket);
            case ':': return single(Tok::Colon);
            case ',': return single(Tok::Comma);
            case '*': return single(Tok::Star);
            case '(': return single(Tok::LParen);
            case ')': return single(Tok::RParen);
            case '-':
                if (peek(1) == '>') {
                    advance();
                    advance();
                    return {Tok::Arrow, "->", line, col};
                }
                throw ParseError(line, col, "expected '->' after '-'");
            default: break;
        }
        if (is_digit(c)) {
            std::string text;
            while (pos_ < src_.size() && is_digit(src_[pos_])) {
                text.push_back(src_[pos_]);
                advance();
            }
            return {Tok::Integer, text, line, col};
        }
        if (is_ident_start(c)) {
            std::string text;
            while (pos_ < src_.size() && is_ident_char(src_[pos_])) {
                text.push_back(src_[pos_]);
                advance();
            }
            if (text == "send" && peek(0) == '-') {
                if (matches_word("-in")) {
                    advance_n(3);
                    return {Tok::SendIn, "send-in", line, col};
                }
                if (matches_word("-out")) {
                    advance_n(4);
                    return {Tok::SendOut, "send-out", line, col};
                }
            }
            return {Tok::Ident, text, line, col};
        }
        if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f) {
            throw ParseError(line, col, "unexpected byte 0x" + hex(static_cast<unsigned char>(c)));
        }
        throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }

    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
    static bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

    static std::string hex(unsigned char c) {
        const char* digits = "0123456789abcdef";
        return {digits[c >> 4], digits[c & 0xf]};
    }

    char peek(std::size_t ahead) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

    bool matches_word(std::string_view w) const {
        if (src_.substr(pos_, w.size()) != w) return false;
        return !is_ident_char(peek(w.size()));
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void advance_n(std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) advance();
    }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                advance();
            } else if (c == '#') {
                std::size_t end = src_.find('\n', pos_);
                if (end == std::string_view::npos) end = src_.size();
                std::string_view comment = src_.substr(pos_ + 1, end - pos_ - 1);
                if (!seen_comment_ && !seen_token_) read_name(comment);
                seen_comment_ = true;
                advance_n(end - pos_);
            } else {
                break;
            }
        }
        seen_token_ = true;
    }

    void read_name(std::string_view comment) {
        auto trim = [](std::string_view s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
            return s;
        };
        comment = trim(comment);
        constexpr std::string_view key = "model:";
        if (comment.substr(0, key.size()) != key) return;
        auto value = trim(comment.substr(key.size()));
        if (!value.empty()) model_name = std::string(value);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    int end_line_ = 1;
    int end_col_ = 1;
    bool seen_comment_ = false;
    bool seen_token_ = false;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { tok_ = lexer_.next(); }

    Model parse() {
        expect(Tok::LBracket, "'['");
        Symbol skin_label = label("membrane label");
        ConfigurationBuilder builder(skin_label, optional_contents());
        children(builder, builder.skin(), 1);
        expect(Tok::RBracket, "']'");

        std::vector<Rule> rules;
        std::vector<int> lines;
        std::set<std::string> ids;
        while (tok_.kind != Tok::End) {
            const int line = tok_.line;
            if (!is_word("rule")) fail("expected 'rule' or end of input");
            advance();
            Token id_tok = tok_;
            expect(Tok::Ident, "rule id");
            if (!ids.insert(id_tok.text).second) {
                throw ParseError(id_tok.line, id_tok.column, "duplicate rule id '" + id_tok.text + "'");
            }
            expect(Tok::Colon, "':'");
            rules.push_back(rule_body(id_tok.text));
            lines.push_back(line);
        }
        Model model(builder.build(), std::move(rules), lexer_.model_name);
        model.rule_lines = std::move(lines);
        return model;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(tok_.line, tok_.column, what + ", found " + describe(tok_));
    }

    void advance() { tok_ = lexer_.next(); }

    bool is_word(std::string_view w) const { return tok_.kind == Tok::Ident && tok_.text == w; }

    void expect(Tok kind, const char* what) {
        if (tok_.kind != kind) fail(std::string("expected ") + what);
        advance();
    }

    void expect_word(std::string_view w) {
        if (!is_word(w)) fail("expected '" + std::string(w) + "'");
        advance();
    }

    Symbol label(const char* what) {
        if (tok_.kind != Tok::Ident) fail(std::string("expected ") + what);
        Symbol s = symbol_at(tok_);
        advance();
        return s;
    }

    static Symbol symbol_at(const Token& t) {
        if (!Symbol::is_valid(t.text)) throw ParseError(t.line, t.column, "'" + t.text + "' is a reserved word");
        return Symbol(t.text);
    }

    Multiset optional_contents() {
        if (tok_.kind != Tok::Colon) return {};
        advance();
        if (tok_.kind == Tok::LBracket || tok_.kind == Tok::RBracket) return {};
        return contents();
    }

    void children(ConfigurationBuilder& builder, MembraneId parent, int depth) {
        while (tok_.kind == Tok::LBracket) {
            if (depth >= kMaxNesting) fail("membrane nesting too deep");
            advance();
            Symbol l = label("membrane label");
            Multiset c = optional_contents();
            MembraneId id = builder.add(parent, std::move(l), std::move(c));
            children(builder, id, depth + 1);
            expect(Tok::RBracket, "']'");
        }
    }

    Multiset contents() {
        Multiset out;
        while (true) {
            if (tok_.kind != Tok::Ident) fail("expected object symbol");
            Token sym_tok = tok_;
            Symbol s = symbol_at(sym_tok);
            advance();
            Count n = 1;
            if (tok_.kind == Tok::Star) {
                advance();
                if (tok_.kind != Tok::Integer) fail("expected multiplicity after '*'");
                Count value = 0;
                auto [ptr, ec] = std::from_chars(tok_.text.data(), tok_.text.data() + tok_.text.size(), value);
                if (ec != std::errc() || ptr != tok_.text.data() + tok_.text.size()) {
                    throw ParseError(tok_.line, tok_.column, "multiplicity out of range");
                }
                if (value == 0) throw ParseError(tok_.line, tok_.column, "multiplicity must be at least 1");
                n = value;
                advance();
            }
            try {
                out = out + Multiset{{s, n}};
            } catch (const std::overflow_error&) {
                throw ParseError(sym_tok.line, sym_tok.column, "multiplicity of '" + s.str() + "' overflows");
            }
            if (tok_.kind != Tok::Comma) break;
            advance();
        }
        return out;
    }

    Multiset rhs() {
        if (tok_.kind == Tok::LParen) {
            advance();
            expect(Tok::RParen, "')'");
            return {};
        }
        return contents();
    }

    Rule rule_body(const std::string& id) {
        RuleForm form;
        Symbol subject("x");
        std::optional<Symbol> host;
        if (is_word("in")) {
            form = RuleForm::Rewrite;
            advance();
            subject = label("membrane label");
        } else if (is_word("endo") || is_word("exo")) {
            const bool endo = is_word("endo");
            form = endo ? RuleForm::Endo : RuleForm::Exo;
            advance();
            subject = label("membrane label");
            expect_word(endo ? "into" : "from");
            host = label("membrane label");
        } else if (tok_.kind == Tok::SendIn || tok_.kind == Tok::SendOut) {
            form = tok_.kind == Tok::SendIn ? RuleForm::SendIn : RuleForm::SendOut;
            advance();
            subject = label("membrane label");
        } else {
            fail("expected 'in', 'endo', 'exo', 'send-in' or 'send-out'");
        }
        expect(Tok::Colon, "':'");
        Multiset consumed = contents();
        expect(Tok::Arrow, "'->'");
        Multiset produced = rhs();
        std::optional<Multiset> promoter;
        if (is_word("if")) {
            advance();
            promoter = contents();
        }
        return Rule(id, form, std::move(subject), std::move(host), std::move(consumed), std::move(produced),
                    std::move(promoter));
    }

    Lexer lexer_;
    Token tok_;
};

void serialize_membrane(const Configuration& config, MembraneId id, int depth, std::string& out) {
    const Membrane& m = config.at(id);
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += '[';
    out += m.label.str();
    out += ':';
    if (m.children.empty()) {
        out += ' ';
        out += serialize_multiset(m.contents);
        out += "]\n";
        return;
    }
    if (!m.contents.empty()) {
        out += ' ';
        out += serialize_multiset(m.contents);
    }
    out += '\n';
    for (MembraneId c : m.children) serialize_membrane(config, c, depth + 1, out);
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += "]\n";
}

}  // namespace

Model parse_model(std::string_view text) { return Parser(text).parse(); }

std::string serialize_multiset(const Multiset& m) {
    std::string out;
    for (const auto& [s, n] : m) {
        if (!out.empty()) out += ", ";
        out += s.str();
        if (n != 1) {
            out += '*';
            out += std::to_string(n);
        }
    }
    return out;
}

std::string serialize_rule(const Rule& rule) {
    std::string out = "rule " + rule.id() + ": " + std::string(to_string(rule.form())) + " " + rule.subject().str();
    if (rule.form() == RuleForm::Endo) out += " into " + rule.host()->str();
    if (rule.form() == RuleForm::Exo) out += " from " + rule.host()->str();
    out += ": " + serialize_multiset(rule.consumed()) + " -> ";
    out += rule.produced().empty() ? "()" : serialize_multiset(rule.produced());
    if (rule.promoter()) out += " if " + serialize_multiset(*rule.promoter());
    return out;
}

std::string serialize_model(const Model& model) {
    std::string out;
    if (model.name) out += "# model: " + *model.name + "\n";
    serialize_membrane(model.config, model.config.skin(), 0, out);
    for (const auto& r : model.rules) {
        out += serialize_rule(r);
        out += '\n';
    }
    return out;
}

}  // namespace mobmem
