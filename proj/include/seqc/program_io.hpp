#pragma once

#include <string>
#include <string_view>

#include "seqc/dsl.hpp"
#include "seqc/model.hpp"

namespace seqc {

/// Reads the structure of a <Program> document without consulting a DSL.
/// Enough for graph export; `load_program` adds the type resolution.
Program parse_program(std::string_view xml_text);

/// Reads a <Program> document and resolves it against `dsl`: action, resource
/// and variable types must exist, each action's type must belong to its
/// resource's component, every variable reference must be declared, Arg
/// parameters must be declared by the action type, and the graph must be
/// acyclic.
Program load_program(std::string_view xml_text, const RobotClassDsl& dsl);

/// Canonical document: Resources, Variables, Actions, Constraints, each sorted
/// by name. Equal programs produce byte-identical output.
std::string save_program(const Program& program);

/// Graphviz digraph, one node per action and one edge per constraint, with
/// two-space indentation and LF endings.
std::string export_dot(const Program& program);

}  // namespace seqc
