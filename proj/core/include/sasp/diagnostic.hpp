#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sasp {

struct SourceLocation {
    int line = 0;   // 1-based, 0 when unknown
    int column = 0; // 1-based, 0 when unknown

    friend auto operator==(SourceLocation const &, SourceLocation const &) -> bool = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    SourceLocation location;
    std::string message;
    std::string snippet;
};

[[nodiscard]] auto has_errors(std::vector<Diagnostic> const &diagnostics) -> bool;

/// Renders `line:column: error: message` (plus the snippet when present).
[[nodiscard]] auto to_string(Diagnostic const &diagnostic) -> std::string;

auto operator<<(std::ostream &out, Diagnostic const &diagnostic) -> std::ostream &;

/// Thrown by the front end (parser, safety check, grounder) when the input
/// program cannot be processed.
class InputError : public std::runtime_error {
public:
    explicit InputError(std::vector<Diagnostic> diagnostics);
    explicit InputError(Diagnostic diagnostic);

    [[nodiscard]] auto diagnostics() const -> std::vector<Diagnostic> const & { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

} // namespace sasp
