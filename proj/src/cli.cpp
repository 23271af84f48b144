#include "seqc/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "seqc/codegen.hpp"
#include "seqc/dsl.hpp"
#include "seqc/error.hpp"
#include "seqc/program_io.hpp"
#include "seqc/simulator.hpp"
#include "seqc/validator.hpp"

namespace seqc::cli {

namespace fs = std::filesystem;

namespace {

/// A failure tied to an input file, reported as `file:line: Code: message`.
struct InputError {
    std::string file;
    Error error;
};

std::string read_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError{path, Error(ErrorCode::Io, "cannot open file")};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename F>
auto with_file(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        throw InputError{path, e};
    }
}

void report(std::ostream& err, const InputError& ie) {
    static const std::regex line_prefix("^line [0-9]+: ");
    std::string message = std::regex_replace(ie.error.what(), line_prefix, "");
    err << ie.file;
    if (ie.error.line() > 0) err << ':' << ie.error.line();
    err << ": " << to_string(ie.error.code()) << ": " << message << '\n';
}

std::vector<fs::path> template_search_path() {
    std::vector<fs::path> roots;
    if (const char* env = std::getenv("SEQC_TEMPLATE_PATH")) {
        std::stringstream ss(env);
        std::string part;
        while (std::getline(ss, part, ':'))
            if (!part.empty()) roots.emplace_back(part);
    }
    return roots;
}

struct Inputs {
    RobotClassDsl dsl;
    Program program;
};

Inputs load_inputs(const std::string& dsl_path, const std::string& program_path) {
    std::string dsl_text = read_input(dsl_path);
    RobotClassDsl dsl = with_file(dsl_path, [&] { return load_dsl(dsl_text); });
    std::string program_text = read_input(program_path);
    Program program = with_file(program_path, [&] { return load_program(program_text, dsl); });
    return {std::move(dsl), std::move(program)};
}

struct Options {
    std::string dsl;
    std::string program;
    bool json = false;
    bool strict_warnings = false;
    bool force = false;
    bool lenient = false;
    std::string durations_file;
    std::vector<std::string> durations;
    std::string trace_out;
    std::string templates;
    std::string out_dir = ".";
    std::string format = "dot";
};

int cmd_validate(const Options& o, std::ostream& out) {
    auto in = load_inputs(o.dsl, o.program);
    auto rep = validate(in.program, in.dsl);
    out << (o.json ? rep.to_json() : rep.to_text());
    if (!rep.ok) return kFindings;
    if (o.strict_warnings && rep.count(Severity::Warning) > 0) return kFindings;
    return kSuccess;
}

DurationMap collect_durations(const Options& o) {
    std::map<std::string, Ticks> per_action;
    Ticks fallback = 1;
    if (!o.durations_file.empty()) {
        std::string text = read_input(o.durations_file);
        auto base = with_file(o.durations_file, [&] { return DurationMap::from_json(text); });
        per_action = base.per_action();
        fallback = base.fallback();
    }
    static const std::regex assignment(R"(^([^=]+)=(-?[0-9]+)$)");
    for (const auto& d : o.durations) {
        std::smatch m;
        if (!std::regex_match(d, m, assignment))
            throw InputError{"--duration", Error(ErrorCode::Io, "expected NAME=TICKS, got '" + d + "'")};
        per_action[m[1]] = std::stoll(m[2]);
    }
    return with_file("--duration", [&] { return DurationMap(std::move(per_action), fallback); });
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
    auto in = load_inputs(o.dsl, o.program);
    auto durations = collect_durations(o);
    ExecutionTrace trace;
    try {
        trace = simulate(in.program, in.dsl, durations, o.force);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidProgram) {
            err << o.program << ": " << e.what() << " (run 'seqc validate' for details, or pass --force)\n";
            return kFindings;
        }
        throw InputError{o.program, e};
    }
    if (!o.trace_out.empty()) {
        std::ofstream f(o.trace_out, std::ios::binary | std::ios::trunc);
        if (!f) throw InputError{o.trace_out, Error(ErrorCode::Io, "cannot write trace file")};
        f << trace.to_json();
    }
    if (o.json)
        out << trace.to_json();
    else
        out << trace.to_timeline(in.program);
    return kSuccess;
}

int cmd_generate(const Options& o, std::ostream& out, std::ostream& err) {
    auto in = load_inputs(o.dsl, o.program);
    std::string config_text = read_input(o.templates);
    auto config = with_file(o.templates, [&] {
        return load_generator_config(config_text, fs::path(o.templates).parent_path(), template_search_path());
    });

    GeneratedFiles generated;
    try {
        generated = generate(in.program, in.dsl, config, o.lenient ? tmpl::Mode::Lenient : tmpl::Mode::Strict);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Io) throw InputError{o.templates, e};
        err << o.program << ": " << to_string(e.code()) << ": " << e.what() << '\n';
        return kFindings;
    }
    for (const auto& w : generated.warnings) err << "warning: " << w << '\n';

    auto written = with_file(o.out_dir, [&] { return write_outputs(generated.files, o.out_dir, o.force); });
    if (o.json) {
        nlohmann::json j;
        j["files"] = nlohmann::json::array();
        for (const auto& p : written) j["files"].push_back(p.generic_string());
        out << j.dump(2) << '\n';
    } else {
        for (const auto& p : written) out << p.generic_string() << '\n';
    }
    return kSuccess;
}

int cmd_graph(const Options& o, std::ostream& out) {
    std::string text = read_input(o.program);
    Program program;
    if (o.dsl.empty()) {
        program = with_file(o.program, [&] { return parse_program(text); });
    } else {
        program = load_inputs(o.dsl, o.program).program;
    }
    if (o.format == "json" || o.json) {
        nlohmann::json j;
        j["nodes"] = nlohmann::json::array();
        j["edges"] = nlohmann::json::array();
        for (const auto& a : program.actions()) {
            j["nodes"].push_back({{"name", a.name()}, {"type", a.action_type()}, {"resource", a.resource()}});
            for (const auto& e : a.constraints()) j["edges"].push_back({{"from", e.predecessor}, {"to", a.name()}});
        }
        out << j.dump(2) << '\n';
    } else {
        out << export_dot(program);
    }
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"seqc: validate, simulate and generate code for concurrent robot action sequences", "seqc"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub, bool dsl_required) {
        auto* dsl = sub->add_option("--dsl", o.dsl, "robot-class DSL (XML)");
        if (dsl_required) dsl->required();
        sub->add_option("program", o.program, "program document (XML)")->required();
        sub->add_flag("--json", o.json, "machine-readable output");
    };

    auto* validate_cmd = app.add_subcommand("validate", "check completeness and parallelism constraints");
    add_common(validate_cmd, true);
    validate_cmd->add_flag("--strict-warnings", o.strict_warnings, "exit 1 on warnings too");

    auto* simulate_cmd = app.add_subcommand("simulate", "run the deterministic discrete-event simulation");
    add_common(simulate_cmd, true);
    simulate_cmd->add_option("--durations", o.durations_file, "JSON file {\"default\": N, \"actions\": {...}}");
    simulate_cmd->add_option("--duration", o.durations, "NAME=TICKS (repeatable)");
    simulate_cmd->add_option("--trace", o.trace_out, "write the trace as JSON");
    simulate_cmd->add_flag("--force", o.force, "simulate even if validation fails");

    auto* generate_cmd = app.add_subcommand("generate", "render the configured templates");
    add_common(generate_cmd, true);
    generate_cmd->add_option("--templates", o.templates, "generator configuration (XML)")->required();
    generate_cmd->add_option("--out", o.out_dir, "output directory");
    generate_cmd->add_flag("--force", o.force, "overwrite existing files");
    generate_cmd->add_flag("--lenient", o.lenient, "render unresolved references as empty text");

    auto* graph_cmd = app.add_subcommand("graph", "export the dependency graph");
    add_common(graph_cmd, false);
    graph_cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"dot", "json"}));

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "seqc: " << e.what() << '\n';
        if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front())
            err << sub->help();
        return kFailure;
    }

    try {
        if (validate_cmd->parsed()) return cmd_validate(o, out);
        if (simulate_cmd->parsed()) return cmd_simulate(o, out, err);
        if (generate_cmd->parsed()) return cmd_generate(o, out, err);
        return cmd_graph(o, out);
    } catch (const InputError& e) {
        report(err, e);
        return kFailure;
    } catch (const Error& e) {
        err << "seqc: " << to_string(e.code()) << ": " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace seqc::cli
