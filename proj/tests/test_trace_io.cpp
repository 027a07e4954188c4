#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "mobmem/bone.hpp"
#include "mobmem/trace_io.hpp"

using namespace mobmem;
using nlohmann::json;

namespace {

std::vector<json> lines_of(const std::string& text) {
    std::vector<json> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(json::parse(line));
    return out;
}

Model small_bone() {
    bone::BoneParams p;
    p.osteoclasts = 3;
    p.osteoblasts = 1;
    return bone::build_bone_model(p);
}

std::string trace_of(const Model& m, std::uint64_t seed, std::size_t every) {
    std::ostringstream ss;
    write_trace_jsonl(ss, run(m, {.seed = seed}, 1000), m, every);
    return ss.str();
}

}  // namespace

TEST_CASE("fnv1a64_hex") {
    CHECK(fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a64_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("model_hash ignores formatting") {
    const Model a = parse_model("[skin: b, a]\nrule r: in skin: a -> b");
    const Model b = parse_model("# spacing differs\n[skin:a,b]  rule r : in skin : a->b");
    CHECK(model_hash(a) == model_hash(b));
    CHECK(model_hash(a) != model_hash(parse_model("[skin: b, a*2]\nrule r: in skin: a -> b")));
}

TEST_CASE("trace lines are JSON with the documented fields") {
    const Model m = small_bone();
    const auto lines = lines_of(trace_of(m, 7, 1));
    REQUIRE(lines.size() == 16);
    CHECK(lines[0]["seed"] == 7);
    CHECK(lines[0]["rng"] == Rng::kAlgorithm);
    CHECK(lines[0]["model_hash"] == model_hash(m));

    bool saw_null_host = false;
    bool saw_host = false;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const json& l = lines[i];
        CHECK(l["step"] == i - 1);
        CHECK(l["halted"] == (i + 1 == lines.size()));
        CHECK(l.contains("state"));
        for (const auto& a : l["applied"]) {
            CHECK(a["rule"].is_string());
            CHECK(a["subject"].is_number_unsigned());
            CHECK(a["count"].get<Count>() >= 1);
            if (a["host"].is_null()) saw_null_host = true;
            else saw_host = true;
        }
    }
    CHECK(saw_null_host);
    CHECK(saw_host);
    CHECK(lines.back()["applied"].empty());
    CHECK(lines.back()["state"]["T1"]["c"] == 8);
}

TEST_CASE("snapshot_every") {
    const Model m = small_bone();
    const auto lines = lines_of(trace_of(m, 0, 4));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t stepno = i - 1;
        const bool last = i + 1 == lines.size();
        CHECK(lines[i].contains("state") == (stepno % 4 == 0 || last));
    }
    std::ostringstream ss;
    CHECK_THROWS_AS(write_trace_jsonl(ss, run(m, {}, 3), m, 0), std::invalid_argument);
}

TEST_CASE("same seed gives byte-identical traces") {
    const Model m = parse_model("[skin: a*5]\nrule x: in skin: a -> b\nrule y: in skin: a -> c");
    const std::string first = trace_of(m, 42, 1);
    CHECK(trace_of(m, 42, 1) == first);
    CHECK(trace_of(m, 43, 1) != first);
}
