#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mobmem/cli.hpp"

using namespace mobmem::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("mobmem_cli_" + std::to_string(counter_++))) {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }

    std::string file(const std::string& name, const std::string& contents = "") const {
        const fs::path p = path_ / name;
        if (!contents.empty()) std::ofstream(p, std::ios::binary) << contents;
        return p.string();
    }

private:
    static inline int counter_ = 0;
    fs::path path_;
};

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kCorpus = MOBMEM_CORPUS_DIR;

}  // namespace

TEST_CASE("format_decimal") {
    CHECK(format_decimal(0.4) == "0.4");
    CHECK(format_decimal(0.5) == "0.5");
    CHECK(format_decimal(0.0) == "0");
    CHECK(format_decimal(1.0) == "1");
}

TEST_CASE("validate") {
    TempDir tmp;
    const auto ok = cli({"validate", kCorpus + "/bone.mm"});
    CHECK(ok.code == kSuccess);
    CHECK(ok.out.empty());
    CHECK(ok.err.empty());

    const auto bad = cli({"validate", tmp.file("bad.mm", "[skin: a]\nrule r: in skin: a ->\n")});
    CHECK(bad.code == kModelError);
    CHECK(bad.err.find("bad.mm:2:") != std::string::npos);
    CHECK(bad.err.find("error:") != std::string::npos);

    const auto warn = cli({"validate", tmp.file("warn.mm", "[skin: a]\nrule r: in Q: a -> a\n")});
    CHECK(warn.code == kModelError);
    CHECK(warn.err.find("warn.mm:2: warning:") != std::string::npos);

    CHECK(cli({"validate", tmp.file("missing.mm")}).code == kIoError);
}

TEST_CASE("usage errors") {
    CHECK(cli({}).code == kModelError);
    CHECK(cli({"frobnicate"}).code == kModelError);
    CHECK(cli({"run"}).code == kModelError);
    CHECK(cli({"bone", "--oc", "x"}).code == kModelError);
    CHECK(cli({"--help"}).code == kSuccess);
}

TEST_CASE("run") {
    TempDir tmp;
    const std::string model = kCorpus + "/drain.mm";

    const auto zero = cli({"run", model, "--max-steps", "0"});
    CHECK(zero.code == kSuccess);
    CHECK(zero.out.rfind("steps=0 halted=no", 0) == 0);

    const auto full = cli({"run", model});
    CHECK(full.code == kSuccess);
    CHECK(full.out.find("halted=yes") != std::string::npos);

    const std::string t1 = tmp.file("a.jsonl");
    const std::string t2 = tmp.file("b.jsonl");
    REQUIRE(cli({"run", model, "--seed", "5", "--trace", t1}).code == kSuccess);
    REQUIRE(cli({"run", model, "--seed", "5", "--trace", t2}).code == kSuccess);
    CHECK(!slurp(t1).empty());
    CHECK(slurp(t1) == slurp(t2));

    // Forced dynamics: the final state does not depend on the seed.
    CHECK(cli({"run", kCorpus + "/bone.mm", "--seed", "0"}).out == cli({"run", kCorpus + "/bone.mm", "--seed", "1"}).out);

    CHECK(cli({"run", tmp.file("nope.mm")}).code == kIoError);
    CHECK(cli({"run", model, "--trace", (fs::path(tmp.file("x")) / "sub" / "t.jsonl").string()}).code == kIoError);
    CHECK(cli({"run", model, "--snapshot-every", "0"}).code == kModelError);
}

TEST_CASE("bone") {
    TempDir tmp;
    const auto one = cli({"bone", "--density", "0.5", "--capacity", "20", "--oc", "3", "--ob", "1", "--cycles", "1"});
    CHECK(one.code == kSuccess);
    CHECK(one.out == "unit,cycle,density\n1,1,0.4\n");

    const auto inert = cli({"bone", "--oc", "0", "--ob", "0", "--cycles", "3"});
    CHECK(inert.out == "unit,cycle,density\n1,1,0.5\n1,2,0.5\n1,3,0.5\n");

    const auto two = cli({"bone", "--units", "2", "--oc", "3", "--ob", "1"});
    CHECK(two.out == "unit,cycle,density\n1,1,0.4\n2,1,0.4\n");

    const auto bad = cli({"bone", "--density", "1.5"});
    CHECK(bad.code == kModelError);
    CHECK(bad.err.find("error:") != std::string::npos);

    const std::string emitted = tmp.file("bone.mm");
    REQUIRE(cli({"bone", "--oc", "3", "--ob", "1", "--emit-model", emitted}).code == kSuccess);
    CHECK(cli({"validate", emitted}).code == kSuccess);
    CHECK(slurp(emitted) == slurp(kCorpus + "/bone.mm"));
}
