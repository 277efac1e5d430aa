#include "sasp/diagnostic.hpp"

#include <algorithm>
#include <sstream>

namespace sasp {

auto has_errors(std::vector<Diagnostic> const &diagnostics) -> bool {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](Diagnostic const &d) { return d.severity == Severity::Error; });
}

auto to_string(Diagnostic const &diagnostic) -> std::string {
    std::ostringstream out;
    out << diagnostic;
    return out.str();
}

auto operator<<(std::ostream &out, Diagnostic const &diagnostic) -> std::ostream & {
    if (diagnostic.location.line > 0) {
        out << diagnostic.location.line << ':' << diagnostic.location.column << ": ";
    }
    out << (diagnostic.severity == Severity::Error ? "error: " : "warning: ") << diagnostic.message;
    if (!diagnostic.snippet.empty()) {
        out << " near '" << diagnostic.snippet << "'";
    }
    return out;
}

namespace {

auto summary(std::vector<Diagnostic> const &diagnostics) -> std::string {
    if (diagnostics.empty()) {
        return "invalid input";
    }
    return to_string(diagnostics.front());
}

} // namespace

InputError::InputError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(summary(diagnostics))
    , diagnostics_(std::move(diagnostics)) {}

InputError::InputError(Diagnostic diagnostic)
    : InputError(std::vector<Diagnostic>{std::move(diagnostic)}) {}

} // namespace sasp
