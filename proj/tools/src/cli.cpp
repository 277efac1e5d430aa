#include "sasp/cli.hpp"

#include "sasp/solver.hpp"
#include "sasp/witness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

namespace sasp::cli {

namespace {

using Json = nlohmann::ordered_json;

auto read_file(std::filesystem::path const &path) -> std::optional<std::string> {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

auto diagnostic_json(Diagnostic const &d) -> Json {
    return {{"severity", d.severity == Severity::Error ? "error" : "warning"},
            {"line", d.location.line},
            {"column", d.location.column},
            {"message", d.message}};
}

auto atom_strings(GroundProgram const &ground, std::vector<AtomId> const &ids) -> std::vector<std::string> {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (auto id : ids) {
        out.push_back(to_string(ground.atoms.at(id)));
    }
    return out;
}

auto shown_of(GroundProgram const &ground, std::vector<AtomId> const &ids) -> std::vector<AtomId> {
    std::vector<AtomId> out;
    std::copy_if(ids.begin(), ids.end(), std::back_inserter(out), [&](AtomId id) { return is_shown(ground, id); });
    return out;
}

auto parse_projection(std::string const &text) -> std::optional<Projection> {
    if (text == "show") {
        return Projection{Projection::Kind::Show, {}};
    }
    if (text == "none") {
        return Projection{Projection::Kind::None, {}};
    }
    Projection p{Projection::Kind::Predicates, {}};
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto slash = item.rfind('/');
        if (slash == std::string::npos || slash == 0 || slash + 1 == item.size()) {
            return std::nullopt;
        }
        auto arity = item.substr(slash + 1);
        if (!std::all_of(arity.begin(), arity.end(), [](unsigned char c) { return std::isdigit(c); })) {
            return std::nullopt;
        }
        p.predicates.emplace_back(item.substr(0, slash), std::stoul(arity));
    }
    if (p.predicates.empty()) {
        return std::nullopt;
    }
    return p;
}

/// `out/run.svg` with index 2 becomes `out/run-2.svg`.
auto artifact_path(std::string const &base, std::size_t index, std::string const &extension) -> std::filesystem::path {
    std::filesystem::path p(base);
    if (p.extension() == extension) {
        p.replace_extension();
    }
    return p.string() + "-" + std::to_string(index) + extension;
}

struct SolveFlags {
    std::string file;
    std::string mode = "first";
    std::size_t models = 0;
    std::string project = "show";
    std::string witness;
    std::string svg;
    std::string probe = "off";
    std::optional<std::uint64_t> seed;
    bool json = false;
    double time_limit = 0;
};

class Reporter {
public:
    Reporter(SolveFlags const &flags, std::ostream &out, std::ostream &err)
        : flags_(flags)
        , out_(out)
        , err_(err) {}

    auto input_error(std::vector<Diagnostic> const &diagnostics) -> int {
        if (flags_.json) {
            Json doc = header("error");
            for (auto const &d : diagnostics) {
                doc["diagnostics"].push_back(diagnostic_json(d));
            }
            out_ << doc.dump(2) << "\n";
        } else {
            for (auto const &d : diagnostics) {
                err_ << flags_.file << ":" << d << "\n";
            }
            out_ << "ERROR\n";
        }
        return kInputError;
    }

    auto finish(CompiledProgram const &compiled, SolveStatus status, std::vector<StableModel> const &models,
                std::optional<std::vector<AtomId>> const &cautious, SearchStatistics const &stats) -> int {
        auto const &ground = compiled.ground;
        if (flags_.json) {
            Json doc = header(status == SolveStatus::Satisfiable     ? "satisfiable"
                              : status == SolveStatus::Unsatisfiable ? "unsatisfiable"
                                                                     : "interrupted");
            for (auto const &m : models) {
                doc["models"].push_back(atom_strings(ground, m.shown));
            }
            if (cautious) {
                doc["cautious"] = atom_strings(ground, shown_of(ground, *cautious));
            }
            doc["stats"] = {{"rules", ground.rules.size()},
                            {"ground_atoms", ground.atoms.size()},
                            {"spatial_atoms", ground.spatial_atoms.size()},
                            {"conflicts", stats.conflicts},
                            {"decisions", stats.decisions}};
            for (auto const &d : compiled.warnings) {
                doc["diagnostics"].push_back(diagnostic_json(d));
            }
            out_ << doc.dump(2) << "\n";
        } else {
            for (auto const &d : compiled.warnings) {
                err_ << flags_.file << ":" << d << "\n";
            }
            for (std::size_t i = 0; i < models.size(); ++i) {
                out_ << "Answer: " << i + 1 << "\n";
                write_atoms(atom_strings(ground, models[i].shown));
            }
            if (cautious && status == SolveStatus::Satisfiable) {
                out_ << "Cautious consequences:\n";
                write_atoms(atom_strings(ground, shown_of(ground, *cautious)));
            }
            out_ << (status == SolveStatus::Satisfiable     ? "SATISFIABLE"
                     : status == SolveStatus::Unsatisfiable ? "UNSATISFIABLE"
                                                            : "INTERRUPTED")
                 << "\n\n";
            out_ << "Models       : " << models.size() << "\n";
            out_ << "Rules        : " << ground.rules.size() << "\n";
            out_ << "Atoms        : " << ground.atoms.size() << "\n";
            out_ << "Spatial atoms: " << ground.spatial_atoms.size() << "\n";
            out_ << "Conflicts    : " << stats.conflicts << "\n";
            out_ << "Decisions    : " << stats.decisions << "\n";
        }
        switch (status) {
        case SolveStatus::Satisfiable:
            return kSatisfiable;
        case SolveStatus::Unsatisfiable:
            return kUnsatisfiable;
        case SolveStatus::Interrupted:
            return kInterrupted;
        }
        return kInternalError;
    }

private:
    auto header(std::string const &status) const -> Json {
        Json doc;
        doc["status"] = status;
        doc["mode"] = flags_.mode == "enum" ? "enumerate" : flags_.mode;
        doc["models"] = Json::array();
        doc["cautious"] = nullptr;
        doc["stats"] = Json::object();
        doc["diagnostics"] = Json::array();
        return doc;
    }

    void write_atoms(std::vector<std::string> const &atoms) {
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            out_ << (i ? " " : "") << atoms[i];
        }
        out_ << "\n";
    }

    SolveFlags const &flags_;
    std::ostream &out_;
    std::ostream &err_;
};

auto write_artifacts(SolveFlags const &flags, CompiledProgram const &compiled, std::vector<StableModel> const &models,
                     std::ostream &err) -> bool {
    for (std::size_t i = 0; i < models.size(); ++i) {
        auto w = build_witness(compiled, models[i], i + 1);
        if (!flags.witness.empty()) {
            auto path = artifact_path(flags.witness, i + 1, ".json");
            std::ofstream f(path, std::ios::binary);
            if (!(f << witness_json(w))) {
                err << "cannot write " << path.string() << "\n";
                return false;
            }
        }
        if (!flags.svg.empty()) {
            auto path = artifact_path(flags.svg, i + 1, ".svg");
            std::ofstream f(path, std::ios::binary);
            if (!(f << render_svg(w))) {
                err << "cannot write " << path.string() << "\n";
                return false;
            }
        }
    }
    return true;
}

auto cmd_solve(SolveFlags const &flags, std::ostream &out, std::ostream &err) -> int {
    Reporter report(flags, out, err);
    auto source = read_file(flags.file);
    if (!source) {
        return report.input_error({Diagnostic{Severity::Error, {}, "cannot read file '" + flags.file + "'", {}}});
    }
    auto projection = parse_projection(flags.project);
    if (!projection) {
        return report.input_error({Diagnostic{Severity::Error, {}, "invalid projection '" + flags.project + "'", {}}});
    }
    std::optional<CompiledProgram> compiled;
    try {
        compiled.emplace(compile_program(*source));
    } catch (InputError const &e) {
        return report.input_error(e.diagnostics());
    }
    SearchOptions options;
    options.probe = flags.probe == "on";
    options.seed = flags.seed;
    if (flags.time_limit > 0) {
        options.deadline = std::chrono::steady_clock::now() +
                           std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                               std::chrono::duration<double>(flags.time_limit));
    }
    auto const started = std::chrono::steady_clock::now();
    int code = kInternalError;
    std::vector<StableModel> models;
    if (flags.mode == "cautious") {
        auto r = cautious_consequences(*compiled, *projection, options);
        models = std::move(r.models);
        code = report.finish(*compiled, r.status, models, r.consequences, r.stats);
    } else {
        auto limit = flags.mode == "first" ? 1 : flags.models;
        auto r = enumerate_projected(*compiled, *projection, limit, options);
        models = std::move(r.models);
        code = report.finish(*compiled, r.status, models, std::nullopt, r.stats);
    }
    err << "solved in "
        << std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count() << "s\n";
    if (!write_artifacts(flags, *compiled, models, err)) {
        return kInternalError;
    }
    return code;
}

auto letters(std::string const &field) -> std::vector<std::string> {
    std::vector<std::string> out;
    std::string cur;
    for (char c : field + ";") {
        if (c == ';' || c == '|' || c == ' ' || c == '\t' || c == '\r') {
            if (!cur.empty()) {
                out.push_back("answer(" + cur + ")");
                cur.clear();
            }
        } else {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

auto read_gold(std::filesystem::path const &path) -> std::map<std::string, std::vector<std::string>> {
    std::map<std::string, std::vector<std::string>> gold;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            continue;
        }
        gold[line.substr(0, comma)] = letters(line.substr(comma + 1));
    }
    return gold;
}

auto score(std::filesystem::path const &file, std::map<std::string, std::vector<std::string>> const &gold)
    -> BenchInstance {
    BenchInstance inst;
    inst.file = file.filename().string();
    auto source = read_file(file);
    std::ostringstream sink;
    if (!source || check_source(*source, sink) != kOk) {
        inst.verdict = Verdict::Discarded;
        return inst;
    }
    auto compiled = compile_program(*source);
    auto r = cautious_consequences(compiled, {Projection::Kind::Show, {}});
    if (r.status != SolveStatus::Satisfiable) {
        inst.verdict = Verdict::Discarded;
        return inst;
    }
    inst.cautious = atom_strings(compiled.ground, shown_of(compiled.ground, r.consequences));
    std::sort(inst.cautious.begin(), inst.cautious.end());
    auto it = gold.find(inst.file);
    if (it == gold.end()) {
        inst.verdict = Verdict::Unscored;
        return inst;
    }
    inst.expected = it->second;
    inst.verdict = inst.cautious == inst.expected ? Verdict::Correct : Verdict::Incorrect;
    return inst;
}

auto verdict_name(Verdict v) -> char const * {
    switch (v) {
    case Verdict::Correct:
        return "correct";
    case Verdict::Incorrect:
        return "incorrect";
    case Verdict::Discarded:
        return "discarded";
    case Verdict::Unscored:
        return "unscored";
    }
    return "unscored";
}

auto cmd_bench(std::string const &dir, std::string const &gold, std::size_t jobs, bool json, std::ostream &out,
               std::ostream &err) -> int {
    if (!std::filesystem::is_directory(dir)) {
        err << "not a directory: " << dir << "\n";
        return kInputError;
    }
    if (!std::filesystem::is_regular_file(gold)) {
        err << "cannot read gold file: " << gold << "\n";
        return kInputError;
    }
    auto report = bench(dir, gold, jobs);
    if (json) {
        Json doc;
        doc["correct"] = report.correct;
        doc["total"] = report.total;
        doc["discarded"] = report.discarded;
        doc["unscored"] = report.unscored;
        doc["instances"] = Json::array();
        for (auto const &i : report.instances) {
            doc["instances"].push_back(
                {{"file", i.file}, {"verdict", verdict_name(i.verdict)}, {"cautious", i.cautious}, {"expected", i.expected}});
        }
        out << doc.dump(2) << "\n";
    } else {
        for (auto const &i : report.instances) {
            out << i.file << ": " << verdict_name(i.verdict);
            if (i.verdict == Verdict::Correct || i.verdict == Verdict::Incorrect || i.verdict == Verdict::Unscored) {
                out << " {";
                for (std::size_t k = 0; k < i.cautious.size(); ++k) {
                    out << (k ? ", " : "") << i.cautious[k];
                }
                out << "}";
            }
            out << "\n";
        }
        out << "Accuracy: " << report.correct << "/" << report.total << "\n";
        out << "Discarded: " << report.discarded << "\n";
        out << "Unscored: " << report.unscored << "\n";
    }
    return kOk;
}

} // namespace

auto check_source(std::string const &source, std::ostream &err, std::string const &origin) -> int {
    try {
        auto compiled = compile_program(source);
        auto r = solve_first(compiled);
        switch (r.status) {
        case SolveStatus::Satisfiable:
            return kOk;
        case SolveStatus::Unsatisfiable:
            return kUnsatisfiable;
        case SolveStatus::Interrupted:
            return kInterrupted;
        }
    } catch (InputError const &e) {
        for (auto const &d : e.diagnostics()) {
            if (!origin.empty()) {
                err << origin << ":";
            }
            err << d << "\n";
        }
        return kInputError;
    }
    return kInternalError;
}

auto bench(std::filesystem::path const &dir, std::filesystem::path const &gold, std::size_t jobs) -> BenchReport {
    std::vector<std::filesystem::path> files;
    for (auto const &entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".lp") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    auto answers = read_gold(gold);

    BenchReport report;
    report.instances.resize(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (auto i = next++; i < files.size(); i = next++) {
            report.instances[i] = score(files[i], answers);
        }
    };
    jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(files.size(), 1));
    std::vector<std::jthread> pool;
    for (std::size_t j = 1; j < jobs; ++j) {
        pool.emplace_back(worker);
    }
    worker();
    pool.clear();

    for (auto const &i : report.instances) {
        switch (i.verdict) {
        case Verdict::Correct:
            ++report.correct;
            ++report.total;
            break;
        case Verdict::Incorrect:
            ++report.total;
            break;
        case Verdict::Discarded:
            ++report.discarded;
            break;
        case Verdict::Unscored:
            ++report.unscored;
            break;
        }
    }
    return report;
}

auto run(std::vector<std::string> const &args, std::ostream &out, std::ostream &err) -> int {
    CLI::App app{"Spatial answer set solver", "sasp"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "sasp 0.1.0");

    SolveFlags flags;
    auto *solve = app.add_subcommand("solve", "Solve a program");
    solve->add_option("file", flags.file, "Program file")->required();
    solve->add_option("--mode", flags.mode, "Reasoning mode")
        ->check(CLI::IsMember({"first", "enum", "cautious"}))
        ->capture_default_str();
    solve->add_option("--models", flags.models, "Model limit for enum mode, 0 for all")->capture_default_str();
    solve->add_option("--project", flags.project, "show, none or p/1,q/2")->capture_default_str();
    solve->add_option("--witness", flags.witness, "Write <base>-<i>.json per model");
    solve->add_option("--svg", flags.svg, "Write <base>-<i>.svg per model");
    solve->add_option("--probe", flags.probe, "Probe free inequality atoms")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    solve->add_option("--seed", flags.seed, "Randomize decision order and polarity");
    solve->add_flag("--json", flags.json, "Print one JSON report");
    solve->add_option("--time-limit", flags.time_limit, "Seconds, 0 for none")->check(CLI::NonNegativeNumber);

    std::string check_file;
    auto *check = app.add_subcommand("check", "Exit 0 if a model exists, 20 if none, 65 on input errors");
    check->add_option("file", check_file, "Program file")->required();

    std::string bench_dir;
    std::string bench_gold;
    std::size_t jobs = 1;
    bool bench_json = false;
    auto *benchmark = app.add_subcommand("bench", "Score cautious answers of a program directory");
    benchmark->add_option("dir", bench_dir, "Directory of .lp programs")->required();
    benchmark->add_option("gold", bench_gold, "CSV lines file,option")->required();
    benchmark->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    benchmark->add_flag("--json", bench_json, "Print one JSON report");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (CLI::CallForHelp const &e) {
        out << app.help();
        return kOk;
    } catch (CLI::CallForVersion const &e) {
        out << e.what() << "\n";
        return kOk;
    } catch (CLI::ParseError const &e) {
        err << e.what() << "\n";
        return kInputError;
    }

    try {
        if (*solve) {
            return cmd_solve(flags, out, err);
        }
        if (*check) {
            auto source = read_file(check_file);
            if (!source) {
                err << "cannot read file '" << check_file << "'\n";
                return kInputError;
            }
            return check_source(*source, err, check_file);
        }
        return cmd_bench(bench_dir, bench_gold, jobs, bench_json, out, err);
    } catch (std::exception const &e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
}

} // namespace sasp::cli
