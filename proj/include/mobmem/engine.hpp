// Maximally parallel step semantics for mobile membrane systems.
//
// A step binds every rule to concrete membranes (instances), picks a maximal
// jointly applicable multiset of instances with a seeded generator, and
// applies it: consumptions against the pre-step state, then productions, then
// membrane moves interpreted against the pre-step tree.
//
// Joint applicability:
//   * per membrane, the summed consumption of all instances fits its pre-step
//     contents;
//   * mover-lock: across all endo/exo instances every membrane appears at most
//     once in a structural role (the mover or the host).

#ifndef MOBMEM_ENGINE_HPP
#define MOBMEM_ENGINE_HPP

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mobmem/core.hpp"
#include "mobmem/model.hpp"

namespace mobmem {

class EngineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Seeded generator used for instance selection.
///
/// std::mt19937_64 (fully specified by the standard) seeded with the 64-bit
/// seed. Bounded draws use rejection on the raw 64-bit output and shuffling is
/// Fisher-Yates from the back, so sequences are identical on every platform.
class Rng {
public:
    static constexpr const char* kAlgorithm = "mt19937_64/fisher-yates";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

struct EngineOptions {
    std::uint64_t seed = 0;
    std::size_t max_instances_per_step = 1'000'000;
    bool self_check = true;
};

struct AppliedInstance {
    RuleInstance instance;
    Count count = 0;

    friend bool operator==(const AppliedInstance&, const AppliedInstance&) = default;
};

struct StepResult {
    Configuration config;
    std::vector<AppliedInstance> applied;  // enumeration order
    bool halted = false;
};

/// Contents of all membranes sharing a label, summed. Every label present in
/// the configuration has an entry, possibly empty.
using LabelTotals = std::map<Symbol, Multiset>;

LabelTotals label_totals(const Configuration& config);

struct TraceStep {
    std::size_t index = 0;
    std::vector<AppliedInstance> applied;
    bool halted = false;
    LabelTotals state;  // post-step
};

struct Trace {
    std::uint64_t seed = 0;
    std::string rng = Rng::kAlgorithm;
    LabelTotals initial_state;
    std::vector<TraceStep> steps;
    Configuration final_config;

    bool halted() const { return !steps.empty() && steps.back().halted; }
};

/// Membrane whose contents an instance consumes from.
MembraneId consumption_site(const Rule& rule, const RuleInstance& instance);
/// Membrane an instance's products are added to.
MembraneId production_site(const Rule& rule, const RuleInstance& instance);

/// All individually applicable bindings, ordered by rule, subject id, host id.
std::vector<RuleInstance> enumerate_instances(const Configuration& config, std::span<const Rule> rules);

/// Instances must each be individually applicable to `config`.
bool is_jointly_applicable(const Configuration& config, std::span<const Rule> rules,
                           std::span<const AppliedInstance> instances);

/// True when no enumerated instance can be added to `applied` without breaking
/// joint applicability.
bool is_maximal(const Configuration& config, std::span<const Rule> rules, std::span<const AppliedInstance> applied);

/// Applies a jointly applicable instance multiset. Throws EngineError on
/// underflow.
Configuration apply_instances(const Configuration& config, std::span<const Rule> rules,
                              std::span<const AppliedInstance> applied);

StepResult step(const Configuration& config, std::span<const Rule> rules, Rng& rng, const EngineOptions& options = {});

Trace run(const Model& model, const EngineOptions& options, std::size_t max_steps);

}  // namespace mobmem

#endif  // MOBMEM_ENGINE_HPP
