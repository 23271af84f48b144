#include "seqc/validator.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "seqc/error.hpp"

namespace seqc {

std::string_view to_string(Severity severity) {
    return severity == Severity::Error ? "error" : "warning";
}

std::string_view to_string(FindingCode code) {
    switch (code) {
        case FindingCode::DuplicateName: return "DuplicateName";
        case FindingCode::UnboundParameter: return "UnboundParameter";
        case FindingCode::UnknownVariable: return "UnknownVariable";
        case FindingCode::TypeMismatch: return "TypeMismatch";
        case FindingCode::UninstantiatedVariable: return "UninstantiatedVariable";
        case FindingCode::CyclicGraph: return "CyclicGraph";
        case FindingCode::MutexViolation: return "MutexViolation";
        case FindingCode::UnusedVariable: return "UnusedVariable";
        case FindingCode::VariableRace: return "VariableRace";
    }
    return "?";
}

std::size_t ValidationReport::count(Severity severity) const {
    return static_cast<std::size_t>(std::count_if(
        findings.begin(), findings.end(), [&](const Finding& f) { return f.severity == severity; }));
}

std::size_t ValidationReport::count(FindingCode code) const {
    return static_cast<std::size_t>(std::count_if(
        findings.begin(), findings.end(), [&](const Finding& f) { return f.code == code; }));
}

std::string ValidationReport::to_text() const {
    std::ostringstream out;
    for (const auto& f : findings) {
        out << to_string(f.severity) << ": " << to_string(f.code) << " [";
        for (std::size_t i = 0; i < f.subjects.size(); ++i) out << (i ? ", " : "") << f.subjects[i];
        out << "] " << f.message << "\n";
    }
    if (ok)
        out << "OK, " << findings.size() << " finding" << (findings.size() == 1 ? "" : "s") << "\n";
    else
        out << "FAILED, " << count(Severity::Error) << " error(s), " << count(Severity::Warning)
            << " warning(s)\n";
    return out.str();
}

std::string ValidationReport::to_json() const {
    nlohmann::json j;
    j["ok"] = ok;
    j["findings"] = nlohmann::json::array();
    for (const auto& f : findings) {
        j["findings"].push_back({{"severity", to_string(f.severity)},
                                 {"code", to_string(f.code)},
                                 {"subjects", f.subjects},
                                 {"message", f.message}});
    }
    return j.dump(2) + "\n";
}

namespace {

Finding make(Severity severity, FindingCode code, std::vector<std::string> subjects,
             std::string message) {
    return Finding{severity, code, std::move(subjects), std::move(message)};
}

Finding cycle_finding(std::vector<std::string> cycle) {
    std::string listing;
    for (const auto& n : cycle) listing += (listing.empty() ? "" : ", ") + n;
    return make(Severity::Error, FindingCode::CyclicGraph, std::move(cycle),
                "dependency graph contains a cycle through {" + listing + "}");
}

std::vector<Finding> duplicate_names(const Program& program) {
    std::map<std::string, std::vector<std::string>> kinds;
    for (const auto& a : program.actions()) kinds[a.name()].push_back("action");
    for (const auto& r : program.resources()) kinds[r.name].push_back("resource");
    for (const auto& v : program.variables()) kinds[v.name].push_back("variable");

    std::vector<Finding> out;
    for (const auto& [name, uses] : kinds) {
        if (uses.size() < 2) continue;
        std::string what;
        for (const auto& u : uses) what += (what.empty() ? "" : " and ") + u;
        out.push_back(make(Severity::Error, FindingCode::DuplicateName, {name},
                           "name '" + name + "' is used for a " + what));
    }
    return out;
}

std::vector<Finding> mutex_pairs(const Program& program, const RobotClassDsl& dsl,
                                 const Reachability& reach) {
    std::vector<Finding> out;
    const auto& actions = program.actions();
    for (std::size_t i = 0; i < actions.size(); ++i) {
        for (std::size_t j = i + 1; j < actions.size(); ++j) {
            const auto& a = actions[i];
            const auto& b = actions[j];
            if (!dsl.are_mutex(a.action_type(), b.action_type())) continue;
            if (reach.ordered(i, j) || a.resource() == b.resource()) continue;
            out.push_back(make(Severity::Error, FindingCode::MutexViolation, {a.name(), b.name()},
                               "'" + a.name() + "' (" + a.action_type() + ") and '" + b.name() +
                                   "' (" + b.action_type() +
                                   ") may run simultaneously but their types must not overlap"));
        }
    }
    return out;
}

// Variables written (return bindings) and read (arguments) per action.
struct Access {
    std::vector<std::string> reads;
    std::optional<std::string> write;
};

std::vector<Access> accesses(const Program& program) {
    std::vector<Access> out;
    for (const auto& a : program.actions()) {
        Access acc;
        for (const auto& arg : a.args())
            if (const auto* v = arg.variable()) acc.reads.push_back(*v);
        std::sort(acc.reads.begin(), acc.reads.end());
        acc.reads.erase(std::unique(acc.reads.begin(), acc.reads.end()), acc.reads.end());
        acc.write = a.return_variable();
        out.push_back(std::move(acc));
    }
    return out;
}

std::vector<Finding> races(const Program& program, const Reachability& reach) {
    std::vector<Finding> out;
    const auto& actions = program.actions();
    auto acc = accesses(program);
    auto reads = [](const Access& x, const std::string& v) {
        return std::binary_search(x.reads.begin(), x.reads.end(), v);
    };

    for (std::size_t i = 0; i < actions.size(); ++i) {
        for (std::size_t j = i + 1; j < actions.size(); ++j) {
            if (reach.ordered(i, j) || actions[i].resource() == actions[j].resource()) continue;
            std::set<std::string> shared;
            if (acc[i].write && (acc[i].write == acc[j].write || reads(acc[j], *acc[i].write)))
                shared.insert(*acc[i].write);
            if (acc[j].write && reads(acc[i], *acc[j].write)) shared.insert(*acc[j].write);
            for (const auto& v : shared) {
                out.push_back(make(Severity::Warning, FindingCode::VariableRace,
                                   {actions[i].name(), actions[j].name(), v},
                                   "'" + actions[i].name() + "' and '" + actions[j].name() +
                                       "' may run in parallel and both access '" + v +
                                       "' with at least one write"));
            }
        }
    }
    return out;
}

void sort_findings(std::vector<Finding>& findings) {
    std::sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
        auto ca = to_string(a.code);
        auto cb = to_string(b.code);
        if (ca != cb) return ca < cb;
        if (a.subjects != b.subjects) return a.subjects < b.subjects;
        return a.message < b.message;
    });
}

}  // namespace

std::vector<Finding> check_mutex_schedulability(const Program& program, const RobotClassDsl& dsl) {
    Reachability reach(program);
    if (!reach.acyclic()) return {cycle_finding(find_cycle(program))};
    auto out = mutex_pairs(program, dsl, reach);
    sort_findings(out);
    return out;
}

std::vector<Finding> lint_variable_races(const Program& program, const RobotClassDsl&) {
    Reachability reach(program);
    if (!reach.acyclic()) return {};
    auto out = races(program, reach);
    sort_findings(out);
    return out;
}

std::vector<Finding> check_bindings(const Program& program, const RobotClassDsl& dsl) {
    std::vector<Finding> out;
    Reachability reach(program);
    const auto& actions = program.actions();

    for (const auto& v : program.variables()) {
        if (!dsl.find_variable_type(v.type_name)) {
            out.push_back(make(Severity::Error, FindingCode::TypeMismatch, {v.name},
                               "variable '" + v.name + "' has unknown type '" + v.type_name + "'"));
            continue;
        }
        if (v.initializer) {
            if (auto why = dsl.check_literal(*v.initializer, v.type_name))
                out.push_back(make(Severity::Error, FindingCode::TypeMismatch, {v.name},
                                   "initializer of '" + v.name + "': " + *why));
        }
    }

    // Typed lookup of a referenced variable; reports UnknownVariable when absent.
    auto variable_type = [&](const std::string& action,
                             const std::string& var) -> const std::string* {
        if (const auto* decl = program.find_variable(var)) return &decl->type_name;
        out.push_back(make(Severity::Error, FindingCode::UnknownVariable, {action, var},
                           "action '" + action + "' refers to undeclared variable '" + var + "'"));
        return nullptr;
    };

    std::set<std::string> referenced;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const auto& a = actions[i];
        const ActionTypeDef& type = lookup_action(dsl, a.action_type());

        if (const auto* res = program.find_resource(a.resource());
            res && res->component_type != type.owner)
            out.push_back(make(Severity::Error, FindingCode::TypeMismatch, {a.name(), a.resource()},
                               "action type '" + type.identifier + "' belongs to '" + type.owner +
                                   "', but resource '" + res->name + "' is a '" +
                                   res->component_type + "'"));

        for (const auto& param : type.parameters) {
            const ArgBinding* arg = a.arg(param.name);
            if (!arg) {
                out.push_back(make(Severity::Error, FindingCode::UnboundParameter,
                                   {a.name(), param.name},
                                   "parameter '" + param.name + "' of '" + a.name() +
                                       "' is not set"));
                continue;
            }
            if (const auto* lit = arg->literal()) {
                if (auto why = dsl.check_literal(*lit, param.type_name))
                    out.push_back(make(Severity::Error, FindingCode::TypeMismatch,
                                       {a.name(), param.name},
                                       "argument '" + param.name + "' of '" + a.name() + "': " + *why));
                continue;
            }
            const std::string& var = *arg->variable();
            referenced.insert(var);
            const std::string* var_type = variable_type(a.name(), var);
            if (!var_type) continue;
            if (*var_type != param.type_name)
                out.push_back(make(Severity::Error, FindingCode::TypeMismatch, {a.name(), param.name},
                                   "parameter '" + param.name + "' of '" + a.name() + "' expects " +
                                       param.type_name + ", but variable '" + var + "' is " +
                                       *var_type));

            const auto* decl = program.find_variable(var);
            bool written = decl->initializer.has_value();
            for (std::size_t w = 0; w < actions.size() && !written; ++w) {
                // a writer counts unless it can only run after the reader
                if (w != i && actions[w].return_variable() == var && !reach.reaches(i, w))
                    written = true;
            }
            if (!written)
                out.push_back(make(Severity::Warning, FindingCode::UninstantiatedVariable,
                                   {a.name(), var},
                                   "'" + a.name() + "' reads '" + var +
                                       "', which has no initializer and no earlier writer"));
        }
        for (const auto& arg : a.args()) {
            if (!type.parameter(arg.parameter))
                out.push_back(make(Severity::Error, FindingCode::UnboundParameter,
                                   {a.name(), arg.parameter},
                                   "'" + a.name() + "' binds '" + arg.parameter +
                                       "', which action type '" + type.identifier +
                                       "' does not declare"));
        }

        if (const auto& ret = a.return_variable()) {
            referenced.insert(*ret);
            if (!type.return_type) {
                out.push_back(make(Severity::Error, FindingCode::TypeMismatch, {a.name(), *ret},
                                   "action type '" + type.identifier +
                                       "' returns nothing, but '" + a.name() + "' stores into '" +
                                       *ret + "'"));
            } else if (const std::string* var_type = variable_type(a.name(), *ret);
                       var_type && *var_type != *type.return_type) {
                out.push_back(make(Severity::Error, FindingCode::TypeMismatch, {a.name(), *ret},
                                   "'" + a.name() + "' returns " + *type.return_type +
                                       ", but variable '" + *ret + "' is " + *var_type));
            }
        }
    }

    for (const auto& v : program.variables()) {
        if (!referenced.count(v.name))
            out.push_back(make(Severity::Warning, FindingCode::UnusedVariable, {v.name},
                               "variable '" + v.name + "' is never used"));
    }

    sort_findings(out);
    return out;
}

ValidationReport validate(const Program& program, const RobotClassDsl& dsl) {
    ValidationReport report;
    auto add = [&](std::vector<Finding> more) {
        report.findings.insert(report.findings.end(), std::make_move_iterator(more.begin()),
                               std::make_move_iterator(more.end()));
    };

    add(duplicate_names(program));
    add(check_bindings(program, dsl));

    Reachability reach(program);
    if (!reach.acyclic()) {
        report.findings.push_back(cycle_finding(find_cycle(program)));
    } else {
        add(mutex_pairs(program, dsl, reach));
        add(races(program, reach));
    }

    sort_findings(report.findings);
    report.ok = report.count(Severity::Error) == 0;
    return report;
}

}  // namespace seqc
