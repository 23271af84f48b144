#include "seqc/dsl.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <functional>
#include <map>

#include "seqc/error.hpp"
#include "seqc/xml.hpp"

namespace seqc {

std::string_view to_string(PrimitiveKind kind) {
    switch (kind) {
        case PrimitiveKind::Int: return "Int";
        case PrimitiveKind::Float: return "Float";
        case PrimitiveKind::Bool: return "Bool";
        case PrimitiveKind::String: return "String";
    }
    return "?";
}

std::optional<PrimitiveKind> parse_primitive(std::string_view name) {
    if (name == "Int") return PrimitiveKind::Int;
    if (name == "Float") return PrimitiveKind::Float;
    if (name == "Bool") return PrimitiveKind::Bool;
    if (name == "String") return PrimitiveKind::String;
    return std::nullopt;
}

const TypedName* ActionTypeDef::parameter(std::string_view name) const {
    for (const auto& p : parameters)
        if (p.name == name) return &p;
    return nullptr;
}

MutexPair make_mutex_pair(std::string a, std::string b) {
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b)};
}

MutexRelation symmetrize_mutex(const std::vector<std::pair<std::string, std::string>>& declared) {
    MutexRelation out;
    for (const auto& [from, to] : declared) out.insert(make_mutex_pair(from, to));
    return out;
}

namespace {

const std::array<VariableTypeDef, 4>& builtin_types() {
    static const std::array<VariableTypeDef, 4> types{{
        {"Int", PrimitiveKind::Int},
        {"Float", PrimitiveKind::Float},
        {"Bool", PrimitiveKind::Bool},
        {"String", PrimitiveKind::String},
    }};
    return types;
}

[[noreturn]] void duplicate(std::string_view kind, const std::string& name) {
    throw Error(ErrorCode::DuplicateIdentifier,
                "duplicate " + std::string(kind) + " '" + name + "'", {name});
}

bool is_void(const std::optional<std::string>& type) { return !type || *type == "Void"; }

}  // namespace

RobotClassDsl::RobotClassDsl(std::string name, std::vector<VariableTypeDef> variable_types,
                             std::vector<ResourceComponentTypeDef> components)
    : name_(std::move(name)),
      variable_types_(std::move(variable_types)),
      components_(std::move(components)) {
    std::set<std::string> type_names;
    for (const auto& t : variable_types_) {
        if (parse_primitive(t.name) || !type_names.insert(t.name).second)
            duplicate("variable type", t.name);
    }

    auto require_type = [&](const std::string& type, const std::string& owner) {
        if (!find_variable_type(type))
            throw Error(ErrorCode::UnknownTypeReference,
                        "'" + owner + "' refers to unknown variable type '" + type + "'",
                        {owner, type});
    };

    for (const auto& t : variable_types_) {
        if (!t.is_composite()) continue;
        std::set<std::string> field_names;
        for (const auto& f : t.fields()) {
            if (!field_names.insert(f.name).second) duplicate("field", t.name + "." + f.name);
            require_type(f.type_name, t.name);
        }
    }

    // A composite may not contain itself, directly or through other composites.
    std::map<std::string, int> state;  // 1 = on stack, 2 = done
    std::function<void(const VariableTypeDef&)> visit = [&](const VariableTypeDef& t) {
        state[t.name] = 1;
        if (t.is_composite()) {
            for (const auto& f : t.fields()) {
                const auto* ft = find_variable_type(f.type_name);
                if (state[ft->name] == 1)
                    throw Error(ErrorCode::RecursiveCompositeType,
                                "composite type '" + ft->name + "' contains itself via '" +
                                    t.name + "." + f.name + "'",
                                {ft->name, t.name});
                if (state[ft->name] == 0) visit(*ft);
            }
        }
        state[t.name] = 2;
    };
    for (const auto& t : variable_types_)
        if (state[t.name] == 0) visit(t);

    std::set<std::string> component_names;
    std::set<std::string> action_ids;
    for (auto& c : components_) {
        if (!component_names.insert(c.type_name).second) duplicate("resource component", c.type_name);
        for (auto& a : c.actions) {
            if (!action_ids.insert(a.identifier).second) duplicate("action type", a.identifier);
            a.owner = c.type_name;
            if (is_void(a.return_type))
                a.return_type.reset();
            else
                require_type(*a.return_type, a.identifier);
            std::set<std::string> param_names;
            for (const auto& p : a.parameters) {
                if (!param_names.insert(p.name).second)
                    duplicate("parameter", a.identifier + "." + p.name);
                require_type(p.type_name, a.identifier);
            }
        }
    }

    std::vector<std::pair<std::string, std::string>> declared;
    for (const auto& c : components_) {
        for (const auto& a : c.actions) {
            for (const auto& m : a.mutex_types) {
                if (!action_ids.count(m))
                    throw Error(ErrorCode::UnresolvedMutexReference,
                                "action type '" + a.identifier +
                                    "' excludes unknown action type '" + m + "'",
                                {a.identifier, m});
                declared.emplace_back(a.identifier, m);
            }
        }
    }
    mutex_relation_ = symmetrize_mutex(declared);
}

bool RobotClassDsl::are_mutex(std::string_view a, std::string_view b) const {
    return mutex_relation_.count(make_mutex_pair(std::string(a), std::string(b))) > 0;
}

const VariableTypeDef* RobotClassDsl::find_variable_type(std::string_view name) const {
    for (const auto& t : builtin_types())
        if (t.name == name) return &t;
    for (const auto& t : variable_types_)
        if (t.name == name) return &t;
    return nullptr;
}

const ResourceComponentTypeDef* RobotClassDsl::find_component(std::string_view type_name) const {
    for (const auto& c : components_)
        if (c.type_name == type_name) return &c;
    return nullptr;
}

const ActionTypeDef* RobotClassDsl::find_action(std::string_view identifier) const {
    for (const auto& c : components_)
        for (const auto& a : c.actions)
            if (a.identifier == identifier) return &a;
    return nullptr;
}

namespace {

template <typename T>
bool parses_fully(std::string_view text, T& value) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    return ec == std::errc() && ptr == text.data() + text.size() && !text.empty();
}

}  // namespace

std::optional<std::string> RobotClassDsl::check_literal(const Literal& literal,
                                                        std::string_view type_name) const {
    const auto* type = find_variable_type(type_name);
    if (!type) return "unknown type '" + std::string(type_name) + "'";

    if (!type->is_composite()) {
        if (literal.composite)
            return "structured value given for " + std::string(type_name);
        auto kind = std::get<PrimitiveKind>(type->kind);
        bool ok = true;
        switch (kind) {
            case PrimitiveKind::Int: {
                long long v;
                ok = parses_fully(literal.text, v);
                break;
            }
            case PrimitiveKind::Float: {
                double v;
                ok = parses_fully(literal.text, v);
                break;
            }
            case PrimitiveKind::Bool: ok = literal.text == "true" || literal.text == "false"; break;
            case PrimitiveKind::String: ok = true; break;
        }
        if (!ok)
            return "'" + literal.text + "' is not a valid " + std::string(to_string(kind)) +
                   (type->name != to_string(kind) ? " (" + type->name + ")" : "");
        return std::nullopt;
    }

    if (!literal.composite) return "plain value '" + literal.text + "' given for composite " + type->name;
    const auto& fields = type->fields();
    if (literal.fields.size() != fields.size())
        return type->name + " expects " + std::to_string(fields.size()) + " fields, got " +
               std::to_string(literal.fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (literal.fields[i].first != fields[i].name)
            return type->name + " field " + std::to_string(i + 1) + " must be '" + fields[i].name +
                   "', got '" + literal.fields[i].first + "'";
        if (auto why = check_literal(literal.fields[i].second, fields[i].type_name))
            return type->name + "." + fields[i].name + ": " + *why;
    }
    return std::nullopt;
}

const ActionTypeDef& lookup_action(const RobotClassDsl& dsl, std::string_view identifier) {
    if (const auto* a = dsl.find_action(identifier)) return *a;
    throw Error(ErrorCode::UnknownActionType,
                "robot class '" + dsl.name() + "' has no action type '" + std::string(identifier) +
                    "'",
                {std::string(identifier)});
}

namespace {

VariableTypeDef read_variable_type(const xml::Element& el) {
    el.expect_children({"Field"});
    VariableTypeDef t;
    t.name = el.required_attr("name");
    if (auto alias = el.attr("type")) {
        if (!el.children.empty())
            throw Error(ErrorCode::XmlSyntax,
                        "line " + std::to_string(el.line) + ": variable type '" + t.name +
                            "' has both a primitive type and fields",
                        {t.name}, el.line);
        auto kind = parse_primitive(*alias);
        if (!kind)
            throw Error(ErrorCode::UnknownTypeReference,
                        "line " + std::to_string(el.line) + ": variable type '" + t.name +
                            "' aliases '" + *alias + "', which is not Int, Float, Bool or String",
                        {t.name, *alias}, el.line);
        t.kind = *kind;
        return t;
    }
    CompositeFields fields;
    for (const auto& f : el.children) fields.push_back({f.required_attr("name"), f.required_attr("type")});
    t.kind = std::move(fields);
    return t;
}

ActionTypeDef read_action(const xml::Element& el) {
    el.expect_children({"ParameterList", "NotAllowedSimultaneousActionTypes"});
    ActionTypeDef a;
    a.identifier = el.required_attr("actionIdentifier");
    a.return_type = el.attr("returnType");
    for (const auto& section : el.children) {
        if (section.name == "ParameterList") {
            section.expect_children({"Parameter"});
            for (const auto& p : section.children)
                a.parameters.push_back({p.required_attr("name"), p.required_attr("type")});
        } else {
            section.expect_children({"NotAllowedSimultaneousAction"});
            for (const auto& m : section.children) a.mutex_types.insert(m.required_attr("type"));
        }
    }
    return a;
}

}  // namespace

RobotClassDsl load_dsl(std::string_view xml_text) {
    xml::Element root = xml::parse(xml_text);
    if (root.name != "RobotClassDSL")
        throw Error(ErrorCode::XmlSyntax,
                    "line " + std::to_string(root.line) + ": expected <RobotClassDSL> root, found <" +
                        root.name + ">",
                    {root.name}, root.line);
    root.expect_children({"VariableTypes", "ResourceComponent"});

    // first line at which each declared name appears, for error positions
    std::map<std::string, int> lines;
    auto remember = [&](const std::string& name, int line) { lines.emplace(name, line); };

    std::vector<VariableTypeDef> types;
    std::vector<ResourceComponentTypeDef> components;
    for (const auto& section : root.children) {
        if (section.name == "VariableTypes") {
            section.expect_children({"VariableType"});
            for (const auto& vt : section.children) {
                types.push_back(read_variable_type(vt));
                remember(types.back().name, vt.line);
            }
        } else {
            section.expect_children({"Action"});
            ResourceComponentTypeDef c;
            c.type_name = section.required_attr("type");
            remember(c.type_name, section.line);
            for (const auto& action : section.children) {
                c.actions.push_back(read_action(action));
                remember(c.actions.back().identifier, action.line);
            }
            components.push_back(std::move(c));
        }
    }

    try {
        return RobotClassDsl(root.required_attr("name"), std::move(types), std::move(components));
    } catch (const Error& e) {
        int line = 0;
        for (const auto& s : e.subjects()) {
            auto it = lines.find(s.substr(0, s.find('.')));
            if (it != lines.end()) {
                line = it->second;
                break;
            }
        }
        if (line == 0) throw;
        throw Error(e.code(), "line " + std::to_string(line) + ": " + e.what(), e.subjects(), line);
    }
}

std::string save_dsl(const RobotClassDsl& dsl) {
    xml::Writer w;
    w.open("RobotClassDSL", {{"name", dsl.name()}});
    if (!dsl.variable_types().empty()) {
        w.open("VariableTypes");
        for (const auto& t : dsl.variable_types()) {
            if (!t.is_composite()) {
                w.empty("VariableType", {{"name", t.name}, {"type", to_string(std::get<PrimitiveKind>(t.kind))}});
                continue;
            }
            if (t.fields().empty()) {
                w.empty("VariableType", {{"name", t.name}});
                continue;
            }
            w.open("VariableType", {{"name", t.name}});
            for (const auto& f : t.fields()) w.empty("Field", {{"name", f.name}, {"type", f.type_name}});
            w.close();
        }
        w.close();
    }
    for (const auto& c : dsl.components()) {
        if (c.actions.empty()) {
            w.empty("ResourceComponent", {{"type", c.type_name}});
            continue;
        }
        w.open("ResourceComponent", {{"type", c.type_name}});
        for (const auto& a : c.actions) {
            std::vector<std::pair<std::string, std::string>> attrs;
            if (a.return_type) attrs.emplace_back("returnType", *a.return_type);
            attrs.emplace_back("actionIdentifier", a.identifier);
            if (a.parameters.empty() && a.mutex_types.empty()) {
                w.empty("Action", attrs);
                continue;
            }
            w.open("Action", attrs);
            if (!a.parameters.empty()) {
                w.open("ParameterList");
                for (const auto& p : a.parameters)
                    w.empty("Parameter", {{"type", p.type_name}, {"name", p.name}});
                w.close();
            }
            if (!a.mutex_types.empty()) {
                w.open("NotAllowedSimultaneousActionTypes");
                for (const auto& m : a.mutex_types) w.empty("NotAllowedSimultaneousAction", {{"type", m}});
                w.close();
            }
            w.close();
        }
        w.close();
    }
    w.close();
    return w.str();
}

}  // namespace seqc
