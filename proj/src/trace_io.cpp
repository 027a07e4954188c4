#include "mobmem/trace_io.hpp"

#include <json.hpp>

namespace mobmem {

namespace {

nlohmann::json state_json(const LabelTotals& state) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [label, contents] : state) {
        nlohmann::json m = nlohmann::json::object();
        for (const auto& [s, n] : contents) m[s.str()] = n;
        out[label.str()] = std::move(m);
    }
    return out;
}

}  // namespace

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

std::string model_hash(const Model& model) { return fnv1a64_hex(serialize_model(model)); }

void write_trace_jsonl(std::ostream& out, const Trace& trace, const Model& model, std::size_t snapshot_every) {
    if (snapshot_every == 0) throw std::invalid_argument("snapshot_every must be at least 1");
    nlohmann::json header = {{"seed", trace.seed}, {"rng", trace.rng}, {"model_hash", model_hash(model)}};
    out << header.dump() << '\n';
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const TraceStep& st = trace.steps[i];
        nlohmann::json applied = nlohmann::json::array();
        for (const auto& ai : st.applied) {
            applied.push_back({{"rule", ai.instance.rule_id},
                               {"subject", ai.instance.subject.value},
                               {"host", ai.instance.host ? nlohmann::json(ai.instance.host->value) : nlohmann::json()},
                               {"count", ai.count}});
        }
        nlohmann::json line = {{"step", st.index}, {"applied", std::move(applied)}, {"halted", st.halted}};
        if (st.index % snapshot_every == 0 || i + 1 == trace.steps.size()) line["state"] = state_json(st.state);
        out << line.dump() << '\n';
    }
}

}  // namespace mobmem
