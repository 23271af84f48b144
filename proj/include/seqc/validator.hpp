#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "seqc/dsl.hpp"
#include "seqc/model.hpp"

namespace seqc {

enum class Severity { Error, Warning };

enum class FindingCode {
    DuplicateName,
    UnboundParameter,
    UnknownVariable,
    TypeMismatch,
    UninstantiatedVariable,
    CyclicGraph,
    MutexViolation,
    UnusedVariable,
    VariableRace,
};

std::string_view to_string(Severity severity);
std::string_view to_string(FindingCode code);

struct Finding {
    Severity severity;
    FindingCode code;
    std::vector<std::string> subjects;
    std::string message;

    friend bool operator==(const Finding&, const Finding&) = default;
};

/// Findings sorted by code name, then subjects; `ok` is false as soon as one
/// finding has Error severity.
struct ValidationReport {
    std::vector<Finding> findings;
    bool ok = true;

    std::size_t count(Severity severity) const;
    std::size_t count(FindingCode code) const;

    std::string to_text() const;
    std::string to_json() const;
};

/// Runs every check and aggregates the findings. A cyclic graph is reported
/// as a CyclicGraph finding and disables the mutex and race analyses.
/// Throws UnknownActionType if an action's type is missing from `dsl`.
ValidationReport validate(const Program& program, const RobotClassDsl& dsl);

/// One MutexViolation per unordered pair of potentially parallel actions
/// whose types are mutex-related.
std::vector<Finding> check_mutex_schedulability(const Program& program, const RobotClassDsl& dsl);

/// UnboundParameter, UnknownVariable, TypeMismatch (arguments, return
/// bindings, initializers and resource/component agreement) and
/// UninstantiatedVariable warnings.
std::vector<Finding> check_bindings(const Program& program, const RobotClassDsl& dsl);

/// VariableRace warnings for potentially parallel actions that write/write or
/// write/read the same variable.
std::vector<Finding> lint_variable_races(const Program& program, const RobotClassDsl& dsl);

}  // namespace seqc
