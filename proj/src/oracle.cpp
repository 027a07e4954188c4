#include "mobmem/oracle.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace mobmem {

namespace {

using Bag = std::map<std::string, Count>;

struct Node {
    std::string label;
    Bag contents;
    int parent = -1;
    std::vector<int> children;
};

struct World {
    std::vector<Node> nodes;
    int root = 0;
};

World to_world(const Configuration& config) {
    World w;
    std::map<MembraneId, int> slot;
    const auto order = config.preorder();
    for (MembraneId id : order) slot.emplace(id, static_cast<int>(slot.size()));
    w.nodes.resize(order.size());
    for (MembraneId id : order) {
        const Membrane& m = config.at(id);
        Node& n = w.nodes[slot.at(id)];
        n.label = m.label.str();
        for (const auto& [s, k] : m.contents) n.contents[s.str()] = k;
        for (MembraneId c : m.children) {
            n.children.push_back(slot.at(c));
            w.nodes[slot.at(c)].parent = slot.at(id);
        }
    }
    return w;
}

std::string render(const World& w, int idx) {
    const Node& n = w.nodes[idx];
    std::string out = n.label + "{";
    bool first = true;
    for (const auto& [s, k] : n.contents) {
        if (k == 0) continue;
        if (!first) out += ",";
        first = false;
        out += s + "*" + std::to_string(k);
    }
    out += "}";
    std::vector<std::string> kids;
    for (int c : n.children) kids.push_back(render(w, c));
    std::sort(kids.begin(), kids.end());
    out += "(";
    for (std::size_t i = 0; i < kids.size(); ++i) out += (i ? ";" : "") + kids[i];
    out += ")";
    return out;
}

Bag to_bag(const Multiset& m) {
    Bag b;
    for (const auto& [s, k] : m) b[s.str()] = k;
    return b;
}

bool covers(const Bag& have, const Bag& need, Count times) {
    for (const auto& [s, k] : need) {
        auto it = have.find(s);
        const Count avail = it == have.end() ? 0 : it->second;
        if (avail / k < times) return false;
    }
    return true;
}

struct Binding {
    int rule = 0;
    int site = 0;     // consumed from
    int out = 0;      // produced into
    int mover = -1;   // structural only
    int host = -1;    // structural only
    int target = -1;  // new parent of the mover
    Bag consumed;
    Bag produced;
};

std::vector<Binding> bindings(const World& w, std::span<const Rule> rules) {
    std::vector<Binding> out;
    const int n = static_cast<int>(w.nodes.size());
    for (int r = 0; r < static_cast<int>(rules.size()); ++r) {
        const Rule& rule = rules[r];
        const Bag consumed = to_bag(rule.consumed());
        const Bag produced = to_bag(rule.produced());
        const Bag promoter = rule.promoter() ? to_bag(*rule.promoter()) : Bag{};
        for (int s = 0; s < n; ++s) {
            const Node& sub = w.nodes[s];
            if (sub.label != rule.subject().str() || !covers(sub.contents, promoter, 1)) continue;
            const int p = sub.parent;
            Binding b{r, s, s, -1, -1, -1, consumed, produced};
            switch (rule.form()) {
                case RuleForm::Rewrite: break;
                case RuleForm::SendIn:
                    if (p < 0) continue;
                    b.site = p;
                    break;
                case RuleForm::SendOut:
                    if (p < 0) continue;
                    b.out = p;
                    break;
                case RuleForm::Endo:
                case RuleForm::Exo:
                    for (int h = 0; h < n; ++h) {
                        if (h == s || w.nodes[h].label != rule.host()->str()) continue;
                        Binding sb = b;
                        sb.mover = s;
                        sb.host = h;
                        if (rule.form() == RuleForm::Endo) {
                            if (p < 0 || w.nodes[h].parent != p) continue;
                            sb.target = h;
                        } else {
                            if (p != h || w.nodes[h].parent < 0) continue;
                            sb.target = w.nodes[h].parent;
                        }
                        if (covers(w.nodes[sb.site].contents, consumed, 1)) out.push_back(sb);
                    }
                    continue;
            }
            if (covers(w.nodes[b.site].contents, consumed, 1)) out.push_back(b);
        }
    }
    return out;
}

class Search {
public:
    Search(const World& w, std::vector<Binding> bs) : world_(w), bindings_(std::move(bs)), chosen_(bindings_.size(), 0) {
        for (const auto& node : w.nodes) left_.push_back(node.contents);
        locked_.assign(w.nodes.size(), false);
    }

    std::set<std::string> run() {
        descend(0);
        return results_;
    }

private:
    Count capacity(const Binding& b) const {
        if (b.mover >= 0) {
            return (locked_[b.mover] || locked_[b.host]) ? 0 : (covers(left_[b.site], b.consumed, 1) ? 1 : 0);
        }
        Count cap = ~Count{0};
        for (const auto& [s, k] : b.consumed) {
            auto it = left_[b.site].find(s);
            cap = std::min(cap, (it == left_[b.site].end() ? 0 : it->second) / k);
        }
        return cap;
    }

    void take(const Binding& b, Count times, bool undo) {
        for (const auto& [s, k] : b.consumed) {
            if (undo) {
                left_[b.site][s] += k * times;
            } else {
                left_[b.site][s] -= k * times;
            }
        }
        if (b.mover >= 0 && times > 0) locked_[b.mover] = locked_[b.host] = !undo;
    }

    void descend(std::size_t i) {
        if (i == bindings_.size()) {
            for (const auto& b : bindings_) {
                if (capacity(b) > 0) return;
            }
            results_.insert(render(apply(), world_.root));
            return;
        }
        const Binding& b = bindings_[i];
        const Count cap = capacity(b);
        for (Count k = 0; k <= cap; ++k) {
            take(b, k, false);
            chosen_[i] = k;
            descend(i + 1);
            take(b, k, true);
        }
        chosen_[i] = 0;
    }

    World apply() const {
        World w = world_;
        for (std::size_t i = 0; i < bindings_.size(); ++i) {
            for (const auto& [s, k] : bindings_[i].consumed) w.nodes[bindings_[i].site].contents[s] -= k * chosen_[i];
        }
        for (std::size_t i = 0; i < bindings_.size(); ++i) {
            for (const auto& [s, k] : bindings_[i].produced) w.nodes[bindings_[i].out].contents[s] += k * chosen_[i];
        }
        for (std::size_t i = 0; i < bindings_.size(); ++i) {
            const Binding& b = bindings_[i];
            if (b.mover < 0 || chosen_[i] == 0) continue;
            auto& kids = w.nodes[w.nodes[b.mover].parent].children;
            kids.erase(std::find(kids.begin(), kids.end(), b.mover));
            w.nodes[b.target].children.push_back(b.mover);
            w.nodes[b.mover].parent = b.target;
        }
        return w;
    }

    const World& world_;
    std::vector<Binding> bindings_;
    std::vector<Count> chosen_;
    std::vector<Bag> left_;
    std::vector<bool> locked_;
    std::set<std::string> results_;
};

}  // namespace

std::string canonical_form(const Configuration& config) {
    World w = to_world(config);
    if (w.nodes.empty()) return {};
    return render(w, w.root);
}

std::set<std::string> oracle_successors(const Configuration& config, std::span<const Rule> rules, std::size_t bound) {
    World w = to_world(config);
    auto bs = bindings(w, rules);
    if (bs.size() > bound) {
        throw OracleBoundExceeded(std::to_string(bs.size()) + " enabled bindings exceed the oracle bound of " +
                                  std::to_string(bound));
    }
    return Search(w, std::move(bs)).run();
}

}  // namespace mobmem
