#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace sasp::cli {

/// Process exit codes shared with scripts that drive the tool.
enum ExitCode : int {
    kOk = 0,
    kSatisfiable = 10,
    kUnsatisfiable = 20,
    kInterrupted = 30,
    kInputError = 65,
    kInternalError = 70,
};

/// Runs `sasp <args...>` writing reports to `out` and logs to `err`.
/// `args` excludes the program name.
[[nodiscard]] auto run(std::vector<std::string> const &args, std::ostream &out, std::ostream &err) -> int;

/// First-model gate: kOk when a model exists, kUnsatisfiable when none does,
/// kInputError for programs that fail to compile. Diagnostics are prefixed
/// with `origin` when it is not empty.
[[nodiscard]] auto check_source(std::string const &source, std::ostream &err, std::string const &origin = {}) -> int;

enum class Verdict { Correct, Incorrect, Discarded, Unscored };

struct BenchInstance {
    std::string file;
    Verdict verdict = Verdict::Unscored;
    std::vector<std::string> cautious; // shown cautious consequences
    std::vector<std::string> expected; // gold answer atoms
};

struct BenchReport {
    std::size_t correct = 0;
    std::size_t total = 0; // scored, not discarded
    std::size_t discarded = 0;
    std::size_t unscored = 0;
    std::vector<BenchInstance> instances; // by file name
};

/// Scores every `*.lp` file in `dir` against `gold` (lines `file,option`).
/// An instance is correct iff its cautious set is exactly the gold answers.
[[nodiscard]] auto bench(std::filesystem::path const &dir, std::filesystem::path const &gold, std::size_t jobs)
    -> BenchReport;

} // namespace sasp::cli
