#include "seqc/program_io.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "seqc/error.hpp"
#include "seqc/xml.hpp"

namespace seqc {

namespace {

[[noreturn]] void fail(ErrorCode code, int line, const std::string& message,
                       std::vector<std::string> subjects = {}) {
    throw Error(code, "line " + std::to_string(line) + ": " + message, std::move(subjects), line);
}

Literal read_fields(const xml::Element& el) {
    el.expect_children({"Field"});
    std::vector<std::pair<std::string, Literal>> fields;
    for (const auto& f : el.children) {
        std::string name = f.required_attr("name");
        if (auto v = f.attr("value")) {
            if (!f.children.empty())
                fail(ErrorCode::XmlSyntax, f.line, "field '" + name + "' has both a value and nested fields");
            fields.emplace_back(std::move(name), Literal::primitive(*v));
        } else {
            fields.emplace_back(std::move(name), read_fields(f));
        }
    }
    return Literal::structure(std::move(fields));
}

ArgBinding read_arg(const xml::Element& el) {
    std::string param = el.required_attr("param");
    auto variable = el.attr("variable");
    auto value = el.attr("value");
    int forms = (variable ? 1 : 0) + (value ? 1 : 0) + (el.children.empty() ? 0 : 1);
    if (forms != 1)
        fail(ErrorCode::XmlSyntax, el.line,
             "<Arg param=\"" + param + "\"> needs exactly one of variable=, value= or <Field> children");
    if (variable) return {param, VariableRef{*variable}};
    if (value) return {param, Literal::primitive(*value)};
    return {param, read_fields(el)};
}

struct ParsedProgram {
    Program program;
    std::map<std::string, int> lines;  // declared names -> element line
};

ParsedProgram parse_with_lines(std::string_view xml_text) {
    xml::Element root = xml::parse(xml_text);
    if (root.name != "Program")
        fail(ErrorCode::XmlSyntax, root.line, "expected <Program> root, found <" + root.name + ">");
    root.expect_children({"Resources", "Variables", "Actions", "Constraints"});

    std::map<std::string, int> lines;
    std::vector<ResourceInstance> resources;
    std::vector<VariableDecl> variables;

    struct PendingAction {
        std::string name, type, resource;
        std::vector<ArgBinding> args;
        std::optional<std::string> ret;
        std::vector<ConstraintEdge> edges;
        int line;
    };
    std::vector<PendingAction> pending;
    std::map<std::string, std::size_t> pending_index;

    std::set<std::string> seen_sections;
    for (const auto& section : root.children) {
        if (!seen_sections.insert(section.name).second)
            fail(ErrorCode::XmlSyntax, section.line, "section <" + section.name + "> appears twice");
    }

    auto note = [&](const std::string& name, int line) { lines.emplace(name, line); };

    for (const auto& section : root.children) {
        if (section.name == "Resources") {
            section.expect_children({"Resource"});
            for (const auto& r : section.children) {
                resources.push_back({r.required_attr("name"), r.required_attr("type")});
                note(resources.back().name, r.line);
            }
        } else if (section.name == "Variables") {
            section.expect_children({"Variable"});
            for (const auto& v : section.children) {
                VariableDecl decl{v.required_attr("name"), v.required_attr("type"), std::nullopt};
                if (auto init = v.attr("init")) {
                    if (!v.children.empty())
                        fail(ErrorCode::XmlSyntax, v.line,
                             "variable '" + decl.name + "' has both init= and <Field> children");
                    decl.initializer = Literal::primitive(*init);
                } else if (!v.children.empty()) {
                    decl.initializer = read_fields(v);
                }
                note(decl.name, v.line);
                variables.push_back(std::move(decl));
            }
        } else if (section.name == "Actions") {
            section.expect_children({"ActionInstance"});
            for (const auto& a : section.children) {
                a.expect_children({"Arg", "ReturnTo"});
                PendingAction p{a.required_attr("name"), a.required_attr("type"),
                                a.required_attr("resource"), {}, std::nullopt, {}, a.line};
                std::set<std::string> bound;
                for (const auto& child : a.children) {
                    if (child.name == "Arg") {
                        p.args.push_back(read_arg(child));
                        if (!bound.insert(p.args.back().parameter).second)
                            fail(ErrorCode::DuplicateIdentifier, child.line,
                                 "parameter '" + p.args.back().parameter + "' of action '" + p.name +
                                     "' is bound twice",
                                 {p.name, p.args.back().parameter});
                    } else {
                        if (p.ret)
                            fail(ErrorCode::XmlSyntax, child.line,
                                 "action '" + p.name + "' has more than one <ReturnTo>");
                        p.ret = child.required_attr("variable");
                    }
                }
                if (pending_index.count(p.name))
                    fail(ErrorCode::DuplicateIdentifier, a.line, "duplicate action name '" + p.name + "'",
                         {p.name});
                note(p.name, a.line);
                pending_index[p.name] = pending.size();
                pending.push_back(std::move(p));
            }
        }
    }

    if (auto it = std::find_if(root.children.begin(), root.children.end(),
                               [](const xml::Element& e) { return e.name == "Constraints"; });
        it != root.children.end()) {
        it->expect_children({"After"});
        for (const auto& c : it->children) {
            std::string action = c.required_attr("action");
            std::string pred = c.required_attr("predecessor");
            auto target = pending_index.find(action);
            if (target == pending_index.end())
                fail(ErrorCode::UnresolvedReference, c.line,
                     "constraint refers to undeclared action '" + action + "'", {action});
            ConstraintOperator op = ConstraintOperator::Precedes;
            if (auto kw = c.attr("operator")) {
                try {
                    op = parse_constraint_operator(*kw);
                } catch (const Error& e) {
                    fail(ErrorCode::XmlSyntax, c.line, e.what());
                }
            }
            pending[target->second].edges.push_back({pred, op});
        }
    }

    std::vector<ActionInstance> actions;
    actions.reserve(pending.size());
    for (auto& p : pending) {
        try {
            actions.emplace_back(p.name, p.type, p.resource, std::move(p.args), std::move(p.ret),
                                 std::move(p.edges));
        } catch (const Error& e) {
            fail(e.code(), p.line, e.what(), e.subjects());
        }
    }

    try {
        return {Program(root.required_attr("name"), root.attr("robotClass").value_or(""),
                        std::move(resources), std::move(variables), std::move(actions)),
                std::move(lines)};
    } catch (const Error& e) {
        for (const auto& s : e.subjects())
            if (auto it = lines.find(s); it != lines.end()) fail(e.code(), it->second, e.what(), e.subjects());
        throw;
    }
}

}  // namespace

Program parse_program(std::string_view xml_text) { return parse_with_lines(xml_text).program; }

Program load_program(std::string_view xml_text, const RobotClassDsl& dsl) {
    auto [parsed, lines] = parse_with_lines(xml_text);
    auto line_of = [&](const std::string& name) {
        auto it = lines.find(name);
        return it == lines.end() ? 0 : it->second;
    };

    if (!parsed.robot_class().empty() && parsed.robot_class() != dsl.name())
        fail(ErrorCode::UnresolvedReference, 1,
             "program targets robot class '" + parsed.robot_class() + "' but the DSL is '" +
                 dsl.name() + "'");

    for (const auto& r : parsed.resources()) {
        if (!dsl.find_component(r.component_type))
            fail(ErrorCode::UnknownResourceType, line_of(r.name),
                 "resource '" + r.name + "' has unknown component type '" + r.component_type + "'",
                 {r.name, r.component_type});
    }
    for (const auto& v : parsed.variables()) {
        if (!dsl.find_variable_type(v.type_name))
            fail(ErrorCode::UnknownVariableType, line_of(v.name),
                 "variable '" + v.name + "' has unknown type '" + v.type_name + "'",
                 {v.name, v.type_name});
    }

    auto require_variable = [&](const std::string& action, const std::string& var) {
        if (!parsed.find_variable(var))
            fail(ErrorCode::UnresolvedReference, line_of(action),
                 "action '" + action + "' refers to undeclared variable '" + var + "'", {action, var});
    };

    std::vector<ActionInstance> resolved;
    for (const auto& a : parsed.actions()) {
        const ActionTypeDef* type = dsl.find_action(a.action_type());
        if (!type)
            fail(ErrorCode::UnknownActionType, line_of(a.name()),
                 "action '" + a.name() + "' has unknown type '" + a.action_type() + "'",
                 {a.name(), a.action_type()});
        const auto* res = parsed.find_resource(a.resource());
        if (res->component_type != type->owner)
            fail(ErrorCode::UnresolvedReference, line_of(a.name()),
                 "action type '" + type->identifier + "' is provided by '" + type->owner +
                     "', but resource '" + res->name + "' is a '" + res->component_type + "'",
                 {a.name(), res->name});

        for (const auto& arg : a.args()) {
            if (!type->parameter(arg.parameter))
                fail(ErrorCode::UnresolvedReference, line_of(a.name()),
                     "action type '" + type->identifier + "' has no parameter '" + arg.parameter + "'",
                     {a.name(), arg.parameter});
            if (const auto* var = arg.variable()) require_variable(a.name(), *var);
        }
        if (a.return_variable()) {
            if (!type->return_type)
                fail(ErrorCode::UnresolvedReference, line_of(a.name()),
                     "action type '" + type->identifier + "' returns nothing, but '" + a.name() +
                         "' binds a return variable",
                     {a.name()});
            require_variable(a.name(), *a.return_variable());
        }

        // Arguments in parameter declaration order.
        std::vector<ArgBinding> ordered;
        for (const auto& p : type->parameters)
            if (const auto* arg = a.arg(p.name)) ordered.push_back(*arg);
        resolved.emplace_back(a.name(), a.action_type(), a.resource(), std::move(ordered),
                              a.return_variable(), a.constraints());
    }

    Program program(parsed.name(), parsed.robot_class(), parsed.resources(), parsed.variables(),
                    std::move(resolved));
    if (auto cycle = find_cycle(program); !cycle.empty()) {
        std::string listing;
        for (const auto& n : cycle) listing += (listing.empty() ? "" : ", ") + n;
        fail(ErrorCode::CyclicGraph, line_of(cycle.front()),
             "dependency graph contains a cycle: {" + listing + "}", cycle);
    }
    return program;
}

namespace {

void write_literal_fields(xml::Writer& w, const Literal& lit) {
    for (const auto& [name, value] : lit.fields) {
        if (!value.composite) {
            w.empty("Field", {{"name", name}, {"value", value.text}});
        } else if (value.fields.empty()) {
            w.empty("Field", {{"name", name}});
        } else {
            w.open("Field", {{"name", name}});
            write_literal_fields(w, value);
            w.close();
        }
    }
}

void open_section(xml::Writer& w, std::string_view name, bool empty) {
    if (empty)
        w.empty(name);
    else
        w.open(name);
}

}  // namespace

std::string save_program(const Program& program) {
    xml::Writer w;
    w.open("Program", {{"name", program.name()}, {"robotClass", program.robot_class()}});

    open_section(w, "Resources", program.resources().empty());
    for (const auto& r : program.resources()) w.empty("Resource", {{"name", r.name}, {"type", r.component_type}});
    if (!program.resources().empty()) w.close();

    open_section(w, "Variables", program.variables().empty());
    for (const auto& v : program.variables()) {
        if (!v.initializer) {
            w.empty("Variable", {{"name", v.name}, {"type", v.type_name}});
        } else if (!v.initializer->composite) {
            w.empty("Variable", {{"name", v.name}, {"type", v.type_name}, {"init", v.initializer->text}});
        } else if (v.initializer->fields.empty()) {
            // an empty composite initializer has no surface form distinct from "no initializer"
            w.empty("Variable", {{"name", v.name}, {"type", v.type_name}});
        } else {
            w.open("Variable", {{"name", v.name}, {"type", v.type_name}});
            write_literal_fields(w, *v.initializer);
            w.close();
        }
    }
    if (!program.variables().empty()) w.close();

    open_section(w, "Actions", program.actions().empty());
    for (const auto& a : program.actions()) {
        std::vector<std::pair<std::string, std::string>> attrs{
            {"name", a.name()}, {"type", a.action_type()}, {"resource", a.resource()}};
        if (a.args().empty() && !a.return_variable()) {
            w.empty("ActionInstance", attrs);
            continue;
        }
        w.open("ActionInstance", attrs);
        for (const auto& arg : a.args()) {
            if (const auto* var = arg.variable()) {
                w.empty("Arg", {{"param", arg.parameter}, {"variable", *var}});
            } else if (!arg.literal()->composite) {
                w.empty("Arg", {{"param", arg.parameter}, {"value", arg.literal()->text}});
            } else {
                w.open("Arg", {{"param", arg.parameter}});
                write_literal_fields(w, *arg.literal());
                w.close();
            }
        }
        if (a.return_variable()) w.empty("ReturnTo", {{"variable", *a.return_variable()}});
        w.close();
    }
    if (!program.actions().empty()) w.close();

    bool no_edges = program.edge_count() == 0;
    open_section(w, "Constraints", no_edges);
    for (const auto& a : program.actions())
        for (const auto& e : a.constraints())
            w.empty("After", {{"action", a.name()}, {"predecessor", e.predecessor}});
    if (!no_edges) w.close();

    w.close();
    return w.str();
}

namespace {

bool is_plain_id(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    if (!std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }))
        return false;
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return lower != "node" && lower != "edge" && lower != "graph" && lower != "digraph" &&
           lower != "subgraph" && lower != "strict";
}

std::string quoted(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string dot_id(std::string_view s) { return is_plain_id(s) ? std::string(s) : quoted(s); }

}  // namespace

std::string export_dot(const Program& program) {
    std::ostringstream out;
    out << "digraph " << dot_id(program.name().empty() ? "P" : program.name()) << " {\n";
    for (const auto& a : program.actions())
        out << "  " << dot_id(a.name()) << " [label="
            << quoted(a.name() + ": " + a.action_type() + " @" + a.resource()) << "];\n";
    for (const auto& a : program.actions())
        for (const auto& e : a.constraints())
            out << "  " << dot_id(e.predecessor) << " -> " << dot_id(a.name()) << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace seqc
