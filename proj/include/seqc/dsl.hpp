#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "seqc/model.hpp"

namespace seqc {

enum class PrimitiveKind { Int, Float, Bool, String };

std::string_view to_string(PrimitiveKind kind);
std::optional<PrimitiveKind> parse_primitive(std::string_view name);

struct TypedName {
    std::string name;
    std::string type_name;
    friend bool operator==(const TypedName&, const TypedName&) = default;
};

using CompositeFields = std::vector<TypedName>;

/// A variable type: one of the four primitives, or a struct-like composite
/// whose fields may themselves be composite.
struct VariableTypeDef {
    std::string name;
    std::variant<PrimitiveKind, CompositeFields> kind;

    bool is_composite() const { return std::holds_alternative<CompositeFields>(kind); }
    const CompositeFields& fields() const { return std::get<CompositeFields>(kind); }

    friend bool operator==(const VariableTypeDef&, const VariableTypeDef&) = default;
};

struct ActionTypeDef {
    std::string identifier;
    std::optional<std::string> return_type;  // nullopt means Void
    std::vector<TypedName> parameters;
    std::set<std::string> mutex_types;       // as declared on this action
    std::string owner;                        // resource component type

    const TypedName* parameter(std::string_view name) const;

    friend bool operator==(const ActionTypeDef&, const ActionTypeDef&) = default;
};

struct ResourceComponentTypeDef {
    std::string type_name;
    std::vector<ActionTypeDef> actions;
    friend bool operator==(const ResourceComponentTypeDef&, const ResourceComponentTypeDef&) = default;
};

/// Unordered pair of action-type identifiers, stored with first <= second.
using MutexPair = std::pair<std::string, std::string>;
using MutexRelation = std::set<MutexPair>;

MutexPair make_mutex_pair(std::string a, std::string b);

/// Symmetric closure of directed NotAllowedSimultaneousAction declarations.
MutexRelation symmetrize_mutex(const std::vector<std::pair<std::string, std::string>>& declared);

/// A resolved robot-class vocabulary. Int, Float, Bool and String are always
/// available and are not listed in `variable_types()`.
class RobotClassDsl {
public:
    RobotClassDsl() = default;

    /// Resolves every reference and derives the mutex relation. Throws
    /// DuplicateIdentifier, UnknownTypeReference, RecursiveCompositeType or
    /// UnresolvedMutexReference. Action identifiers must be unique across all
    /// components; each action's `owner` is set to its component.
    RobotClassDsl(std::string name, std::vector<VariableTypeDef> variable_types,
                  std::vector<ResourceComponentTypeDef> components);

    const std::string& name() const { return name_; }
    const std::vector<VariableTypeDef>& variable_types() const { return variable_types_; }
    const std::vector<ResourceComponentTypeDef>& components() const { return components_; }
    const MutexRelation& mutex_relation() const { return mutex_relation_; }

    bool are_mutex(std::string_view a, std::string_view b) const;

    /// Declared types and the primitives.
    const VariableTypeDef* find_variable_type(std::string_view name) const;
    const ResourceComponentTypeDef* find_component(std::string_view type_name) const;
    const ActionTypeDef* find_action(std::string_view identifier) const;

    /// Returns a description of why `literal` is not a value of `type_name`,
    /// or nullopt when it is.
    std::optional<std::string> check_literal(const Literal& literal, std::string_view type_name) const;

    friend bool operator==(const RobotClassDsl&, const RobotClassDsl&) = default;

private:
    std::string name_;
    std::vector<VariableTypeDef> variable_types_;
    std::vector<ResourceComponentTypeDef> components_;
    MutexRelation mutex_relation_;
};

/// Throws UnknownActionType when no action type carries `identifier`.
const ActionTypeDef& lookup_action(const RobotClassDsl& dsl, std::string_view identifier);

/// Reads a <RobotClassDSL> document. Errors carry the line of the offending
/// element where one is known.
RobotClassDsl load_dsl(std::string_view xml_text);

/// Writes the DSL back using the same element names `load_dsl` reads.
std::string save_dsl(const RobotClassDsl& dsl);

}  // namespace seqc
