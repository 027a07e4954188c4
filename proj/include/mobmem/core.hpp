// Value types for mobile membrane systems: symbols, multisets, membranes,
// configurations and rules.
//
// Everything here is an immutable value once constructed. Operations that
// "modify" a value return a new one.

#ifndef MOBMEM_CORE_HPP
#define MOBMEM_CORE_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mobmem {

using Count = std::uint64_t;

/// An object or membrane-label name: `[A-Za-z_][A-Za-z0-9_]*`.
///
/// A leading underscore is reserved for symbols generated by the coupling
/// compiler and the bone model. The words `rule` and `if` are keywords of the
/// model grammar and are not valid symbols.
class Symbol {
public:
    explicit Symbol(std::string name);
    Symbol(const char* name) : Symbol(std::string(name)) {}

    static bool is_valid(std::string_view name);

    const std::string& str() const noexcept { return name_; }
    bool is_reserved() const noexcept { return name_.front() == '_'; }

    friend bool operator==(const Symbol&, const Symbol&) = default;
    friend auto operator<=>(const Symbol&, const Symbol&) = default;

private:
    std::string name_;
};

/// Finite mapping symbol -> count with no zero entries.
class Multiset {
public:
    using Map = std::map<Symbol, Count>;

    Multiset() = default;
    Multiset(std::initializer_list<std::pair<const Symbol, Count>> entries);

    /// Stores `entries` verbatim, zero counts included. Only for building
    /// deliberately broken values (validation tests); every other path
    /// normalizes.
    static Multiset from_raw(Map entries);

    Count count(const Symbol& s) const noexcept;
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t distinct() const noexcept { return entries_.size(); }
    Count total() const;
    const Map& entries() const noexcept { return entries_; }

    bool contains(const Multiset& other) const noexcept;
    bool has_zero_entry() const noexcept;

    /// Throws std::overflow_error rather than wrapping.
    Multiset operator+(const Multiset& other) const;
    /// Throws std::underflow_error when `other` is not contained in *this.
    Multiset operator-(const Multiset& other) const;
    /// Each count multiplied by k; k == 0 yields the empty multiset.
    Multiset scaled(Count k) const;

    Multiset with(const Symbol& s, Count n) const;

    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }

    friend bool operator==(const Multiset&, const Multiset&) = default;

private:
    Map entries_;
};

bool multiset_contains(const Multiset& a, const Multiset& b);
Multiset multiset_sub(const Multiset& a, const Multiset& b);
Multiset multiset_add(const Multiset& a, const Multiset& b);

Count checked_add(Count a, Count b);
Count checked_mul(Count a, Count b);

struct MembraneId {
    std::uint32_t value = 0;
    friend bool operator==(MembraneId, MembraneId) = default;
    friend auto operator<=>(MembraneId, MembraneId) = default;
};

struct Membrane {
    MembraneId id;
    Symbol label;
    Multiset contents;
    std::vector<MembraneId> children;

    friend bool operator==(const Membrane&, const Membrane&) = default;
};

}  // namespace mobmem

template <>
struct std::hash<mobmem::MembraneId> {
    std::size_t operator()(mobmem::MembraneId id) const noexcept { return id.value; }
};

namespace mobmem {

/// A rooted tree of membranes stored as a flat table.
///
/// The constructor accepts any table; structural problems are reported by
/// validate(). Lookups resolve to the first membrane carrying an id.
class Configuration {
public:
    Configuration(MembraneId skin, std::vector<Membrane> membranes);

    MembraneId skin() const noexcept { return skin_; }
    const std::vector<Membrane>& membranes() const noexcept { return membranes_; }
    std::size_t size() const noexcept { return membranes_.size(); }

    const Membrane* find(MembraneId id) const;
    const Membrane& at(MembraneId id) const;
    std::optional<MembraneId> parent_of(MembraneId id) const;

    /// Pre-order walk from the skin, children in stored order. Stops at ids
    /// already visited, so it terminates on malformed tables.
    std::vector<MembraneId> preorder() const;

    Count total_objects() const;

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.skin_ == b.skin_ && a.membranes_ == b.membranes_;
    }

private:
    MembraneId skin_;
    std::vector<Membrane> membranes_;
    std::unordered_map<MembraneId, std::size_t> index_;
    std::unordered_map<MembraneId, MembraneId> parent_;
};

/// Builds configurations with ids assigned in pre-order from 0 when membranes
/// are added in pre-order (parent before children, siblings left to right).
class ConfigurationBuilder {
public:
    explicit ConfigurationBuilder(Symbol skin_label, Multiset contents = {});

    MembraneId skin() const noexcept { return MembraneId{0}; }
    MembraneId add(MembraneId parent, Symbol label, Multiset contents = {});

    Configuration build() const;

private:
    std::vector<Membrane> membranes_;
};

std::vector<MembraneId> find_membranes(const Configuration& config, const Symbol& label);

struct Violation {
    enum class Kind { DuplicateId, MissingSkin, DanglingChild, MultipleParents, Cycle, Unreachable, ZeroCount };
    Kind kind;
    MembraneId membrane;
    std::string message;
};

/// Empty result means the configuration is valid.
std::vector<Violation> validate(const Configuration& config);

/// Labels, contents and shape compared in stored order; ids ignored.
bool structurally_equal(const Configuration& a, const Configuration& b);

enum class RuleForm { Rewrite, Endo, Exo, SendIn, SendOut };

std::string_view to_string(RuleForm form);

class Rule {
public:
    /// Throws std::invalid_argument when `consumed` is empty or the presence
    /// of `host` does not match the form.
    Rule(std::string id, RuleForm form, Symbol subject, std::optional<Symbol> host, Multiset consumed,
         Multiset produced, std::optional<Multiset> promoter = std::nullopt);

    static Rule rewrite(std::string id, Symbol locus, Multiset consumed, Multiset produced,
                        std::optional<Multiset> promoter = std::nullopt);
    static Rule endo(std::string id, Symbol mover, Symbol target, Multiset consumed, Multiset produced,
                     std::optional<Multiset> promoter = std::nullopt);
    static Rule exo(std::string id, Symbol mover, Symbol source, Multiset consumed, Multiset produced,
                    std::optional<Multiset> promoter = std::nullopt);
    static Rule send_in(std::string id, Symbol child, Multiset consumed, Multiset produced,
                        std::optional<Multiset> promoter = std::nullopt);
    static Rule send_out(std::string id, Symbol child, Multiset consumed, Multiset produced,
                         std::optional<Multiset> promoter = std::nullopt);

    const std::string& id() const noexcept { return id_; }
    RuleForm form() const noexcept { return form_; }
    const Symbol& subject() const noexcept { return subject_; }
    const std::optional<Symbol>& host() const noexcept { return host_; }
    const Multiset& consumed() const noexcept { return consumed_; }
    const Multiset& produced() const noexcept { return produced_; }
    const std::optional<Multiset>& promoter() const noexcept { return promoter_; }

    bool is_structural() const noexcept { return form_ == RuleForm::Endo || form_ == RuleForm::Exo; }

    friend bool operator==(const Rule&, const Rule&) = default;

private:
    std::string id_;
    RuleForm form_;
    Symbol subject_;
    std::optional<Symbol> host_;
    Multiset consumed_;
    Multiset produced_;
    std::optional<Multiset> promoter_;
};

/// A rule bound to concrete membranes of one configuration.
struct RuleInstance {
    std::size_t rule_index = 0;
    std::string rule_id;
    MembraneId subject;
    std::optional<MembraneId> host;
    std::optional<MembraneId> parent;

    friend bool operator==(const RuleInstance&, const RuleInstance&) = default;
};

}  // namespace mobmem

#endif  // MOBMEM_CORE_HPP
