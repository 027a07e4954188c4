#include "mobmem/core.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

namespace mobmem {

namespace {

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

std::string describe(MembraneId id) { return "membrane #" + std::to_string(id.value); }

}  // namespace

// ---------------------------------------------------------------------------
// Symbol

bool Symbol::is_valid(std::string_view name) {
    if (name.empty() || !is_ident_start(name.front())) return false;
    if (name == "rule" || name == "if") return false;
    return std::all_of(name.begin(), name.end(), is_ident_char);
}

Symbol::Symbol(std::string name) : name_(std::move(name)) {
    if (!is_valid(name_)) throw std::invalid_argument("invalid symbol '" + name_ + "'");
}

// ---------------------------------------------------------------------------
// Counts

Count checked_add(Count a, Count b) {
    if (a > std::numeric_limits<Count>::max() - b) throw std::overflow_error("object count overflow");
    return a + b;
}

Count checked_mul(Count a, Count b) {
    if (a != 0 && b > std::numeric_limits<Count>::max() / a) throw std::overflow_error("object count overflow");
    return a * b;
}

// ---------------------------------------------------------------------------
// Multiset

Multiset::Multiset(std::initializer_list<std::pair<const Symbol, Count>> entries) {
    for (const auto& [s, n] : entries) {
        if (n == 0) continue;
        auto& slot = entries_[s];
        slot = checked_add(slot, n);
    }
}

Multiset Multiset::from_raw(Map entries) {
    Multiset m;
    m.entries_ = std::move(entries);
    return m;
}

Count Multiset::count(const Symbol& s) const noexcept {
    auto it = entries_.find(s);
    return it == entries_.end() ? 0 : it->second;
}

Count Multiset::total() const {
    Count sum = 0;
    for (const auto& [s, n] : entries_) sum = checked_add(sum, n);
    return sum;
}

bool Multiset::contains(const Multiset& other) const noexcept {
    for (const auto& [s, n] : other.entries_) {
        if (count(s) < n) return false;
    }
    return true;
}

bool Multiset::has_zero_entry() const noexcept {
    return std::any_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.second == 0; });
}

Multiset Multiset::operator+(const Multiset& other) const {
    Multiset out = *this;
    for (const auto& [s, n] : other.entries_) {
        if (n == 0) continue;
        auto& slot = out.entries_[s];
        slot = checked_add(slot, n);
    }
    return out;
}

Multiset Multiset::operator-(const Multiset& other) const {
    Multiset out = *this;
    for (const auto& [s, n] : other.entries_) {
        if (n == 0) continue;
        auto it = out.entries_.find(s);
        if (it == out.entries_.end() || it->second < n) {
            throw std::underflow_error("multiset underflow on '" + s.str() + "'");
        }
        it->second -= n;
        if (it->second == 0) out.entries_.erase(it);
    }
    return out;
}

Multiset Multiset::scaled(Count k) const {
    Multiset out;
    if (k == 0) return out;
    for (const auto& [s, n] : entries_) out.entries_.emplace(s, checked_mul(n, k));
    return out;
}

Multiset Multiset::with(const Symbol& s, Count n) const {
    Multiset out = *this;
    if (n == 0) {
        out.entries_.erase(s);
    } else {
        out.entries_[s] = n;
    }
    return out;
}

bool multiset_contains(const Multiset& a, const Multiset& b) { return a.contains(b); }
Multiset multiset_sub(const Multiset& a, const Multiset& b) { return a - b; }
Multiset multiset_add(const Multiset& a, const Multiset& b) { return a + b; }

// ---------------------------------------------------------------------------
// Configuration

Configuration::Configuration(MembraneId skin, std::vector<Membrane> membranes)
    : skin_(skin), membranes_(std::move(membranes)) {
    for (std::size_t i = 0; i < membranes_.size(); ++i) index_.emplace(membranes_[i].id, i);
    for (const auto& m : membranes_) {
        for (MembraneId c : m.children) parent_.emplace(c, m.id);
    }
}

const Membrane* Configuration::find(MembraneId id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &membranes_[it->second];
}

const Membrane& Configuration::at(MembraneId id) const {
    const Membrane* m = find(id);
    if (m == nullptr) throw std::out_of_range("no " + describe(id));
    return *m;
}

std::optional<MembraneId> Configuration::parent_of(MembraneId id) const {
    auto it = parent_.find(id);
    if (it == parent_.end()) return std::nullopt;
    return it->second;
}

std::vector<MembraneId> Configuration::preorder() const {
    std::vector<MembraneId> order;
    std::set<MembraneId> seen;
    std::vector<MembraneId> stack;
    if (find(skin_) != nullptr) stack.push_back(skin_);
    while (!stack.empty()) {
        MembraneId id = stack.back();
        stack.pop_back();
        if (!seen.insert(id).second) continue;
        order.push_back(id);
        const Membrane* m = find(id);
        if (m == nullptr) continue;
        for (auto it = m->children.rbegin(); it != m->children.rend(); ++it) {
            if (find(*it) != nullptr) stack.push_back(*it);
        }
    }
    return order;
}

Count Configuration::total_objects() const {
    Count sum = 0;
    for (const auto& m : membranes_) sum = checked_add(sum, m.contents.total());
    return sum;
}

ConfigurationBuilder::ConfigurationBuilder(Symbol skin_label, Multiset contents) {
    membranes_.push_back(Membrane{MembraneId{0}, std::move(skin_label), std::move(contents), {}});
}

MembraneId ConfigurationBuilder::add(MembraneId parent, Symbol label, Multiset contents) {
    if (parent.value >= membranes_.size()) throw std::out_of_range("unknown parent " + describe(parent));
    MembraneId id{static_cast<std::uint32_t>(membranes_.size())};
    membranes_.push_back(Membrane{id, std::move(label), std::move(contents), {}});
    membranes_[parent.value].children.push_back(id);
    return id;
}

Configuration ConfigurationBuilder::build() const { return Configuration(MembraneId{0}, membranes_); }

std::vector<MembraneId> find_membranes(const Configuration& config, const Symbol& label) {
    std::vector<MembraneId> out;
    for (MembraneId id : config.preorder()) {
        const Membrane* m = config.find(id);
        if (m != nullptr && m->label == label) out.push_back(id);
    }
    return out;
}

std::vector<Violation> validate(const Configuration& config) {
    std::vector<Violation> out;
    const auto& ms = config.membranes();

    std::set<MembraneId> ids;
    for (const auto& m : ms) {
        if (!ids.insert(m.id).second) {
            out.push_back({Violation::Kind::DuplicateId, m.id, "duplicate id on " + describe(m.id)});
        }
        if (m.contents.has_zero_entry()) {
            out.push_back({Violation::Kind::ZeroCount, m.id, describe(m.id) + " stores a zero count"});
        }
    }

    if (config.find(config.skin()) == nullptr) {
        out.push_back({Violation::Kind::MissingSkin, config.skin(), "skin " + describe(config.skin()) + " is absent"});
        return out;
    }

    std::map<MembraneId, int> parents;
    for (const auto& m : ms) {
        for (MembraneId c : m.children) {
            if (!ids.contains(c)) {
                out.push_back({Violation::Kind::DanglingChild, m.id,
                               describe(m.id) + " lists unknown child " + describe(c)});
                continue;
            }
            ++parents[c];
        }
    }
    for (const auto& [id, n] : parents) {
        if (id == config.skin()) {
            out.push_back({Violation::Kind::Cycle, id, "skin " + describe(id) + " has a parent"});
        } else if (n > 1) {
            out.push_back({Violation::Kind::MultipleParents, id, describe(id) + " has " + std::to_string(n) + " parents"});
        }
    }

    // Walk parent links upward; a walk that revisits a membrane is a cycle.
    std::set<MembraneId> reported;
    for (const auto& m : ms) {
        std::set<MembraneId> path{m.id};
        MembraneId cur = m.id;
        while (auto p = config.parent_of(cur)) {
            if (!path.insert(*p).second) {
                if (reported.insert(*p).second) {
                    out.push_back({Violation::Kind::Cycle, *p, describe(*p) + " lies on a containment cycle"});
                }
                break;
            }
            cur = *p;
        }
    }

    auto reachable = config.preorder();
    std::set<MembraneId> reach(reachable.begin(), reachable.end());
    for (const auto& m : ms) {
        if (!reach.contains(m.id) && !reported.contains(m.id)) {
            out.push_back({Violation::Kind::Unreachable, m.id, describe(m.id) + " is not reachable from the skin"});
        }
    }
    return out;
}

bool structurally_equal(const Configuration& a, const Configuration& b) {
    auto pa = a.preorder();
    auto pb = b.preorder();
    if (pa.size() != pb.size() || pa.size() != a.size() || pb.size() != b.size()) return false;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const Membrane& ma = a.at(pa[i]);
        const Membrane& mb = b.at(pb[i]);
        if (ma.label != mb.label || ma.contents != mb.contents || ma.children.size() != mb.children.size()) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Rule

std::string_view to_string(RuleForm form) {
    switch (form) {
        case RuleForm::Rewrite: return "in";
        case RuleForm::Endo: return "endo";
        case RuleForm::Exo: return "exo";
        case RuleForm::SendIn: return "send-in";
        case RuleForm::SendOut: return "send-out";
    }
    return "?";
}

Rule::Rule(std::string id, RuleForm form, Symbol subject, std::optional<Symbol> host, Multiset consumed,
           Multiset produced, std::optional<Multiset> promoter)
    : id_(std::move(id)),
      form_(form),
      subject_(std::move(subject)),
      host_(std::move(host)),
      consumed_(std::move(consumed)),
      produced_(std::move(produced)),
      promoter_(std::move(promoter)) {
    if (id_.empty()) throw std::invalid_argument("rule id must not be empty");
    if (consumed_.empty()) throw std::invalid_argument("rule '" + id_ + "' consumes nothing");
    if (consumed_.has_zero_entry() || produced_.has_zero_entry()) {
        throw std::invalid_argument("rule '" + id_ + "' stores a zero count");
    }
    if (promoter_ && promoter_->empty()) promoter_.reset();
    const bool needs_host = form_ == RuleForm::Endo || form_ == RuleForm::Exo;
    if (needs_host != host_.has_value()) {
        throw std::invalid_argument("rule '" + id_ + "': " + std::string(to_string(form_)) +
                                    (needs_host ? " requires a host label" : " takes no host label"));
    }
}

Rule Rule::rewrite(std::string id, Symbol locus, Multiset consumed, Multiset produced, std::optional<Multiset> promoter) {
    return Rule(std::move(id), RuleForm::Rewrite, std::move(locus), std::nullopt, std::move(consumed), std::move(produced),
                std::move(promoter));
}

Rule Rule::endo(std::string id, Symbol mover, Symbol target, Multiset consumed, Multiset produced,
                std::optional<Multiset> promoter) {
    return Rule(std::move(id), RuleForm::Endo, std::move(mover), std::move(target), std::move(consumed),
                std::move(produced), std::move(promoter));
}

Rule Rule::exo(std::string id, Symbol mover, Symbol source, Multiset consumed, Multiset produced,
               std::optional<Multiset> promoter) {
    return Rule(std::move(id), RuleForm::Exo, std::move(mover), std::move(source), std::move(consumed),
                std::move(produced), std::move(promoter));
}

Rule Rule::send_in(std::string id, Symbol child, Multiset consumed, Multiset produced, std::optional<Multiset> promoter) {
    return Rule(std::move(id), RuleForm::SendIn, std::move(child), std::nullopt, std::move(consumed), std::move(produced),
                std::move(promoter));
}

Rule Rule::send_out(std::string id, Symbol child, Multiset consumed, Multiset produced, std::optional<Multiset> promoter) {
    return Rule(std::move(id), RuleForm::SendOut, std::move(child), std::nullopt, std::move(consumed),
                std::move(produced), std::move(promoter));
}

}  // namespace mobmem
