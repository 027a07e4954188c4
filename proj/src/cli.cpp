#include "mobmem/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "mobmem/bone.hpp"
#include "mobmem/engine.hpp"
#include "mobmem/model.hpp"
#include "mobmem/trace_io.hpp"

namespace mobmem::cli {

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error while reading '" + path + "'");
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << contents;
    out.flush();
    if (!out) throw IoError("error while writing '" + path + "'");
}

std::string summary(const Trace& trace) {
    std::string line = "steps=" + std::to_string(trace.steps.size()) + " halted=" + (trace.halted() ? "yes" : "no");
    for (const auto& [label, contents] : label_totals(trace.final_config)) {
        line += " " + label.str() + "[" + serialize_multiset(contents) + "]";
    }
    return line;
}

std::string trace_text(const Trace& trace, const Model& model, std::size_t snapshot_every) {
    std::ostringstream ss;
    write_trace_jsonl(ss, trace, model, snapshot_every);
    return ss.str();
}

int cmd_validate(const std::string& path, std::ostream& err) {
    const std::string text = read_file(path);
    std::optional<Model> model;
    try {
        model.emplace(parse_model(text));
    } catch (const ParseError& e) {
        err << path << ":" << e.line() << ":" << e.column() << ": error: " << e.detail() << '\n';
        return kModelError;
    }
    int status = kSuccess;
    for (const auto& v : validate(model->config)) {
        err << path << ": error: " << v.message << '\n';
        status = kModelError;
    }
    for (const auto& w : lint(*model)) {
        err << path << ":" << w.line << ": warning: " << w.message << '\n';
        status = kModelError;
    }
    return status;
}

struct RunConfig {
    std::string model_path;
    std::uint64_t seed = 0;
    std::size_t max_steps = 10'000;
    std::string trace_path;
    std::size_t snapshot_every = 1;
    bool self_check = true;
};

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const std::string text = read_file(cfg.model_path);
    try {
        const Model model = parse_model(text);
        EngineOptions options;
        options.seed = cfg.seed;
        options.self_check = cfg.self_check;
        const Trace trace = run(model, options, cfg.max_steps);
        if (!cfg.trace_path.empty()) write_file(cfg.trace_path, trace_text(trace, model, cfg.snapshot_every));
        out << summary(trace) << '\n';
        return kSuccess;
    } catch (const ParseError& e) {
        err << cfg.model_path << ":" << e.line() << ":" << e.column() << ": error: " << e.detail() << '\n';
    } catch (const EngineError& e) {
        err << "error: " << e.what() << '\n';
    }
    return kModelError;
}

struct BoneConfig {
    bone::BoneParams params;
    std::uint64_t seed = 0;
    std::size_t max_steps = 10'000;
    std::string emit_model;
    std::string trace_path;
};

int cmd_bone(const BoneConfig& cfg, std::ostream& out) {
    const Model model = bone::build_bone_model(cfg.params);
    if (!cfg.emit_model.empty()) write_file(cfg.emit_model, serialize_model(model));
    EngineOptions options;
    options.seed = cfg.seed;
    const Trace trace = run(model, options, cfg.max_steps);
    if (!cfg.trace_path.empty()) write_file(cfg.trace_path, trace_text(trace, model, 1));

    out << "unit,cycle,density\n";
    for (std::size_t u = 1; u <= cfg.params.units; ++u) {
        for (const auto& sample : bone::density_series(trace, u, cfg.params.capacity)) {
            out << u << ',' << sample.cycle << ',' << format_decimal(sample.density) << '\n';
        }
    }
    return kSuccess;
}

}  // namespace

std::string format_decimal(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ec == std::errc() ? ptr : buf);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mobile membrane system simulator", "mobmem"};
    app.require_subcommand(1);

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Parse, validate and lint a model file");
    validate_cmd->add_option("file", validate_path, "Model file")->required();

    RunConfig run_cfg;
    auto* run_cmd = app.add_subcommand("run", "Run a model and print a summary");
    run_cmd->add_option("file", run_cfg.model_path, "Model file")->required();
    run_cmd->add_option("--seed", run_cfg.seed, "Generator seed");
    run_cmd->add_option("--max-steps", run_cfg.max_steps, "Upper bound on steps");
    run_cmd->add_option("--trace", run_cfg.trace_path, "Write a JSON Lines trace");
    run_cmd->add_option("--snapshot-every", run_cfg.snapshot_every, "Full state every N steps")
        ->check(CLI::PositiveNumber);
    bool no_self_check = false;
    run_cmd->add_flag("--no-self-check", no_self_check, "Skip post-step maximality and validity checks");

    BoneConfig bone_cfg;
    auto* bone_cmd = app.add_subcommand("bone", "Build and run the bone remodelling model; print densities as CSV");
    bone_cmd->add_option("--units", bone_cfg.params.units, "Tissue/BMU unit pairs");
    bone_cmd->add_option("--density", bone_cfg.params.density, "Initial mineral density in [0, 1]");
    bone_cmd->add_option("--capacity", bone_cfg.params.capacity, "Tokens at full mineralisation");
    bone_cmd->add_option("--oc", bone_cfg.params.osteoclasts, "Osteoclast tokens per BMU");
    bone_cmd->add_option("--ob", bone_cfg.params.osteoblasts, "Osteoblast tokens per BMU");
    bone_cmd->add_option("--cycles", bone_cfg.params.cycles, "Macro-cycles per unit");
    bone_cmd->add_option("--seed", bone_cfg.seed, "Generator seed");
    bone_cmd->add_option("--max-steps", bone_cfg.max_steps, "Upper bound on steps");
    bone_cmd->add_option("--emit-model", bone_cfg.emit_model, "Write the generated model file");
    bone_cmd->add_option("--trace", bone_cfg.trace_path, "Write a JSON Lines trace");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kModelError;
    }

    try {
        if (*validate_cmd) return cmd_validate(validate_path, err);
        if (*run_cmd) {
            run_cfg.self_check = !no_self_check;
            return cmd_run(run_cfg, out, err);
        }
        if (*bone_cmd) return cmd_bone(bone_cfg, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kModelError;
    }
    return kModelError;
}

}  // namespace mobmem::cli
