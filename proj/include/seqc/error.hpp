#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seqc {

enum class ErrorCode {
    // graph / model
    UnknownAction,
    CyclicGraph,
    SameAction,
    NonPositiveDuration,
    InvalidConstruction,
    // documents
    XmlSyntax,
    UnknownTypeReference,
    DuplicateIdentifier,
    RecursiveCompositeType,
    UnresolvedMutexReference,
    UnknownActionType,
    UnknownResourceType,
    UnknownVariableType,
    UnresolvedReference,
    // pipeline
    InvalidProgram,
    // templates
    UnclosedBlock,
    MalformedReference,
    UnknownDirective,
    UnknownTemplateId,
    NonIterableInForeach,
    MissingTemplateFile,
    // output
    OutputExists,
    Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `line` is 0 when no source position
/// applies; `subjects` lists the names involved (e.g. the members of a cycle).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::vector<std::string> subjects = {},
          int line = 0)
        : std::runtime_error(std::move(message)),
          code_(code),
          subjects_(std::move(subjects)),
          line_(line) {}

    ErrorCode code() const noexcept { return code_; }
    const std::vector<std::string>& subjects() const noexcept { return subjects_; }
    int line() const noexcept { return line_; }

private:
    ErrorCode code_;
    std::vector<std::string> subjects_;
    int line_;
};

}  // namespace seqc
