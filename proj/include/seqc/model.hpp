#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace seqc {

using Ticks = std::int64_t;

/// A literal as written in a program document. Primitive literals keep their
/// source text (typing is decided against the DSL by the validator); composite
/// literals are an ordered list of named fields.
struct Literal {
    std::string text;
    std::vector<std::pair<std::string, Literal>> fields;
    bool composite = false;

    static Literal primitive(std::string text) { return Literal{std::move(text), {}, false}; }
    static Literal structure(std::vector<std::pair<std::string, Literal>> fields) {
        return Literal{{}, std::move(fields), true};
    }

    /// Human-readable form: `30`, `{x=1, y=2, z=3}`.
    std::string to_string() const;

    friend bool operator==(const Literal&, const Literal&) = default;
};

struct VariableRef {
    std::string name;
    friend bool operator==(const VariableRef&, const VariableRef&) = default;
};

using Binding = std::variant<VariableRef, Literal>;

struct ArgBinding {
    std::string parameter;
    Binding binding;

    const std::string* variable() const {
        auto* ref = std::get_if<VariableRef>(&binding);
        return ref ? &ref->name : nullptr;
    }
    const Literal* literal() const { return std::get_if<Literal>(&binding); }

    friend bool operator==(const ArgBinding&, const ArgBinding&) = default;
};

/// The execution operator of a constraint edge. Ordering is the only
/// operator; the enumeration leaves room for further temporal operators.
enum class ConstraintOperator { Precedes };

struct ConstraintEdge {
    std::string predecessor;
    ConstraintOperator op = ConstraintOperator::Precedes;

    friend auto operator<=>(const ConstraintEdge&, const ConstraintEdge&) = default;
};

/// Parses an operator keyword ("Precedes"); anything else is an
/// InvalidConstruction error.
ConstraintOperator parse_constraint_operator(std::string_view keyword);

class ActionInstance {
public:
    /// Throws InvalidConstruction on an empty name or a self-loop. Constraint
    /// edges are deduplicated and kept sorted by predecessor.
    ActionInstance(std::string name, std::string action_type, std::string resource,
                   std::vector<ArgBinding> args = {},
                   std::optional<std::string> return_variable = std::nullopt,
                   std::vector<ConstraintEdge> constraints = {});

    const std::string& name() const { return name_; }
    const std::string& action_type() const { return action_type_; }
    const std::string& resource() const { return resource_; }
    const std::vector<ArgBinding>& args() const { return args_; }
    const std::optional<std::string>& return_variable() const { return return_variable_; }
    const std::vector<ConstraintEdge>& constraints() const { return constraints_; }

    const ArgBinding* arg(std::string_view parameter) const;
    bool has_predecessor(std::string_view name) const;

    friend bool operator==(const ActionInstance&, const ActionInstance&) = default;

private:
    std::string name_;
    std::string action_type_;
    std::string resource_;
    std::vector<ArgBinding> args_;
    std::optional<std::string> return_variable_;
    std::vector<ConstraintEdge> constraints_;
};

struct ResourceInstance {
    std::string name;
    std::string component_type;
    friend bool operator==(const ResourceInstance&, const ResourceInstance&) = default;
};

struct VariableDecl {
    std::string name;
    std::string type_name;
    std::optional<Literal> initializer;
    friend bool operator==(const VariableDecl&, const VariableDecl&) = default;
};

/// A task: resource instances, the global variables shared by actions and the
/// action instances forming the dependency graph. Resources, variables and
/// actions are stored sorted by name.
///
/// Construction enforces per-kind name uniqueness (DuplicateIdentifier) and
/// that every predecessor and resource reference resolves (UnresolvedReference).
/// Acyclicity and variable references are checked by the document loader and
/// the validator, so in-memory programs may still contain cycles.
class Program {
public:
    Program() = default;
    Program(std::string name, std::string robot_class, std::vector<ResourceInstance> resources,
            std::vector<VariableDecl> variables, std::vector<ActionInstance> actions);

    const std::string& name() const { return name_; }
    const std::string& robot_class() const { return robot_class_; }
    const std::vector<ResourceInstance>& resources() const { return resources_; }
    const std::vector<VariableDecl>& variables() const { return variables_; }
    const std::vector<ActionInstance>& actions() const { return actions_; }

    const ActionInstance* find_action(std::string_view name) const;
    const ResourceInstance* find_resource(std::string_view name) const;
    const VariableDecl* find_variable(std::string_view name) const;

    /// Throws UnknownAction when absent.
    const ActionInstance& action(std::string_view name) const;
    /// Position of the action in `actions()`; throws UnknownAction when absent.
    std::size_t index_of(std::string_view name) const;

    std::size_t edge_count() const;

    friend bool operator==(const Program&, const Program&) = default;

private:
    std::string name_;
    std::string robot_class_;
    std::vector<ResourceInstance> resources_;
    std::vector<VariableDecl> variables_;
    std::vector<ActionInstance> actions_;
};

// Dependency-graph queries. Edges run from a predecessor to the action that
// lists it in its constraint set.

/// Actions naming `action` as a direct predecessor.
std::set<std::string> successors(const Program& program, std::string_view action);

/// Every action from which a directed path reaches `action`.
/// Throws UnknownAction, or CyclicGraph when the program has a cycle.
std::set<std::string> ancestors(const Program& program, std::string_view action);

/// True when the two actions can overlap in time: neither precedes the other
/// and they run on distinct resource instances.
bool potentially_parallel(const Program& program, std::string_view a, std::string_view b);

/// Kahn's algorithm, ties broken by lexicographic action name.
/// Throws CyclicGraph listing the members of one cycle.
std::vector<std::string> topological_order(const Program& program);

/// Names of the actions on one cycle (sorted), or empty when acyclic.
std::vector<std::string> find_cycle(const Program& program);

/// Longest weighted path. Actions missing from `durations` weigh 1 tick.
/// Throws CyclicGraph, NonPositiveDuration or UnknownAction (for duration keys
/// that name no action).
Ticks critical_path_length(const Program& program, const std::map<std::string, Ticks>& durations);

/// Precomputed transitive predecessor sets for every action, indexed like
/// `program.actions()`. Works on cyclic graphs too (an action on a cycle is
/// then its own ancestor); callers needing a DAG must check `acyclic()`.
class Reachability {
public:
    explicit Reachability(const Program& program);

    bool reaches(std::size_t from, std::size_t to) const { return closure_[to][from]; }
    bool ordered(std::size_t a, std::size_t b) const { return reaches(a, b) || reaches(b, a); }
    bool acyclic() const { return acyclic_; }
    std::size_t size() const { return closure_.size(); }

private:
    // closure_[to][from]: a path from -> to exists
    std::vector<std::vector<bool>> closure_;
    bool acyclic_ = true;
};

}  // namespace seqc
