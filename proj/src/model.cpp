#include "seqc/model.hpp"

#include <algorithm>
#include <functional>
#include <queue>

#include "seqc/error.hpp"

namespace seqc {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownAction: return "UnknownAction";
        case ErrorCode::CyclicGraph: return "CyclicGraph";
        case ErrorCode::SameAction: return "SameAction";
        case ErrorCode::NonPositiveDuration: return "NonPositiveDuration";
        case ErrorCode::InvalidConstruction: return "InvalidConstruction";
        case ErrorCode::XmlSyntax: return "XmlSyntax";
        case ErrorCode::UnknownTypeReference: return "UnknownTypeReference";
        case ErrorCode::DuplicateIdentifier: return "DuplicateIdentifier";
        case ErrorCode::RecursiveCompositeType: return "RecursiveCompositeType";
        case ErrorCode::UnresolvedMutexReference: return "UnresolvedMutexReference";
        case ErrorCode::UnknownActionType: return "UnknownActionType";
        case ErrorCode::UnknownResourceType: return "UnknownResourceType";
        case ErrorCode::UnknownVariableType: return "UnknownVariableType";
        case ErrorCode::UnresolvedReference: return "UnresolvedReference";
        case ErrorCode::InvalidProgram: return "InvalidProgram";
        case ErrorCode::UnclosedBlock: return "UnclosedBlock";
        case ErrorCode::MalformedReference: return "MalformedReference";
        case ErrorCode::UnknownDirective: return "UnknownDirective";
        case ErrorCode::UnknownTemplateId: return "UnknownTemplateId";
        case ErrorCode::NonIterableInForeach: return "NonIterableInForeach";
        case ErrorCode::MissingTemplateFile: return "MissingTemplateFile";
        case ErrorCode::OutputExists: return "OutputExists";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

std::string Literal::to_string() const {
    if (!composite) return text;
    std::string out = "{";
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ", ";
        out += fields[i].first + "=" + fields[i].second.to_string();
    }
    return out + "}";
}

ConstraintOperator parse_constraint_operator(std::string_view keyword) {
    if (keyword == "Precedes") return ConstraintOperator::Precedes;
    throw Error(ErrorCode::InvalidConstruction,
                "unknown constraint operator '" + std::string(keyword) + "'");
}

ActionInstance::ActionInstance(std::string name, std::string action_type, std::string resource,
                               std::vector<ArgBinding> args,
                               std::optional<std::string> return_variable,
                               std::vector<ConstraintEdge> constraints)
    : name_(std::move(name)),
      action_type_(std::move(action_type)),
      resource_(std::move(resource)),
      args_(std::move(args)),
      return_variable_(std::move(return_variable)),
      constraints_(std::move(constraints)) {
    if (name_.empty()) throw Error(ErrorCode::InvalidConstruction, "action name must not be empty");
    std::sort(constraints_.begin(), constraints_.end());
    constraints_.erase(std::unique(constraints_.begin(), constraints_.end()), constraints_.end());
    for (const auto& edge : constraints_) {
        if (edge.predecessor == name_)
            throw Error(ErrorCode::InvalidConstruction,
                        "action '" + name_ + "' cannot be its own predecessor", {name_});
    }
}

const ArgBinding* ActionInstance::arg(std::string_view parameter) const {
    for (const auto& a : args_)
        if (a.parameter == parameter) return &a;
    return nullptr;
}

bool ActionInstance::has_predecessor(std::string_view name) const {
    return std::any_of(constraints_.begin(), constraints_.end(),
                       [&](const ConstraintEdge& e) { return e.predecessor == name; });
}

namespace {

template <typename T, typename Key>
void sort_unique(std::vector<T>& items, Key key, std::string_view kind) {
    std::sort(items.begin(), items.end(),
              [&](const T& a, const T& b) { return key(a) < key(b); });
    for (std::size_t i = 1; i < items.size(); ++i) {
        if (key(items[i]) == key(items[i - 1]))
            throw Error(ErrorCode::DuplicateIdentifier,
                        "duplicate " + std::string(kind) + " name '" + key(items[i]) + "'",
                        {key(items[i])});
    }
}

template <typename T, typename Key>
const T* find_sorted(const std::vector<T>& items, std::string_view name, Key key) {
    auto it = std::lower_bound(items.begin(), items.end(), name,
                               [&](const T& item, std::string_view n) { return key(item) < n; });
    if (it != items.end() && key(*it) == name) return &*it;
    return nullptr;
}

}  // namespace

Program::Program(std::string name, std::string robot_class,
                 std::vector<ResourceInstance> resources, std::vector<VariableDecl> variables,
                 std::vector<ActionInstance> actions)
    : name_(std::move(name)),
      robot_class_(std::move(robot_class)),
      resources_(std::move(resources)),
      variables_(std::move(variables)),
      actions_(std::move(actions)) {
    sort_unique(resources_, [](const ResourceInstance& r) -> const std::string& { return r.name; },
                "resource");
    sort_unique(variables_, [](const VariableDecl& v) -> const std::string& { return v.name; },
                "variable");
    sort_unique(actions_, [](const ActionInstance& a) -> const std::string& { return a.name(); },
                "action");

    for (const auto& a : actions_) {
        if (!find_resource(a.resource()))
            throw Error(ErrorCode::UnresolvedReference,
                        "action '" + a.name() + "' uses undeclared resource '" + a.resource() + "'",
                        {a.name(), a.resource()});
        for (const auto& edge : a.constraints()) {
            if (!find_action(edge.predecessor))
                throw Error(ErrorCode::UnresolvedReference,
                            "action '" + a.name() + "' follows undeclared action '" +
                                edge.predecessor + "'",
                            {a.name(), edge.predecessor});
        }
    }
}

const ActionInstance* Program::find_action(std::string_view name) const {
    return find_sorted(actions_, name,
                       [](const ActionInstance& a) -> const std::string& { return a.name(); });
}

const ResourceInstance* Program::find_resource(std::string_view name) const {
    return find_sorted(resources_, name,
                       [](const ResourceInstance& r) -> const std::string& { return r.name; });
}

const VariableDecl* Program::find_variable(std::string_view name) const {
    return find_sorted(variables_, name,
                       [](const VariableDecl& v) -> const std::string& { return v.name; });
}

const ActionInstance& Program::action(std::string_view name) const {
    if (const auto* a = find_action(name)) return *a;
    throw Error(ErrorCode::UnknownAction, "unknown action '" + std::string(name) + "'",
                {std::string(name)});
}

std::size_t Program::index_of(std::string_view name) const {
    return static_cast<std::size_t>(&action(name) - actions_.data());
}

std::size_t Program::edge_count() const {
    std::size_t n = 0;
    for (const auto& a : actions_) n += a.constraints().size();
    return n;
}

namespace {

std::vector<std::vector<std::size_t>> successor_lists(const Program& program) {
    std::vector<std::vector<std::size_t>> succ(program.actions().size());
    for (std::size_t i = 0; i < program.actions().size(); ++i)
        for (const auto& edge : program.actions()[i].constraints())
            succ[program.index_of(edge.predecessor)].push_back(i);
    return succ;
}

[[noreturn]] void throw_cycle(const Program& program) {
    auto cycle = find_cycle(program);
    std::string listing;
    for (const auto& n : cycle) listing += (listing.empty() ? "" : ", ") + n;
    throw Error(ErrorCode::CyclicGraph, "dependency graph contains a cycle: {" + listing + "}",
                std::move(cycle));
}

}  // namespace

std::set<std::string> successors(const Program& program, std::string_view action) {
    program.action(action);
    std::set<std::string> out;
    for (const auto& a : program.actions())
        if (a.has_predecessor(action)) out.insert(a.name());
    return out;
}

std::set<std::string> ancestors(const Program& program, std::string_view action) {
    std::size_t target = program.index_of(action);
    Reachability reach(program);
    if (!reach.acyclic()) throw_cycle(program);
    std::set<std::string> out;
    for (std::size_t i = 0; i < reach.size(); ++i)
        if (reach.reaches(i, target)) out.insert(program.actions()[i].name());
    return out;
}

bool potentially_parallel(const Program& program, std::string_view a, std::string_view b) {
    std::size_t ia = program.index_of(a);
    std::size_t ib = program.index_of(b);
    if (ia == ib)
        throw Error(ErrorCode::SameAction,
                    "potential parallelism needs two distinct actions, got '" + std::string(a) +
                        "' twice",
                    {std::string(a)});
    Reachability reach(program);
    if (!reach.acyclic()) throw_cycle(program);
    if (reach.ordered(ia, ib)) return false;
    return program.actions()[ia].resource() != program.actions()[ib].resource();
}

std::vector<std::string> topological_order(const Program& program) {
    const auto& actions = program.actions();
    auto succ = successor_lists(program);
    std::vector<std::size_t> indegree(actions.size());
    for (std::size_t i = 0; i < actions.size(); ++i) indegree[i] = actions[i].constraints().size();

    // actions() is sorted by name, so the smallest index is the smallest name
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < actions.size(); ++i)
        if (indegree[i] == 0) ready.push(i);

    std::vector<std::string> order;
    order.reserve(actions.size());
    while (!ready.empty()) {
        std::size_t cur = ready.top();
        ready.pop();
        order.push_back(actions[cur].name());
        for (std::size_t s : succ[cur])
            if (--indegree[s] == 0) ready.push(s);
    }
    if (order.size() != actions.size()) throw_cycle(program);
    return order;
}

std::vector<std::string> find_cycle(const Program& program) {
    const auto& actions = program.actions();
    auto succ = successor_lists(program);
    enum class Mark { White, Grey, Black };
    std::vector<Mark> mark(actions.size(), Mark::White);
    std::vector<std::size_t> path;

    std::function<std::vector<std::string>(std::size_t)> visit =
        [&](std::size_t v) -> std::vector<std::string> {
        mark[v] = Mark::Grey;
        path.push_back(v);
        for (std::size_t s : succ[v]) {
            if (mark[s] == Mark::Grey) {
                std::vector<std::string> cycle;
                auto from = std::find(path.begin(), path.end(), s);
                for (auto it = from; it != path.end(); ++it) cycle.push_back(actions[*it].name());
                std::sort(cycle.begin(), cycle.end());
                return cycle;
            }
            if (mark[s] == Mark::White) {
                auto cycle = visit(s);
                if (!cycle.empty()) return cycle;
            }
        }
        path.pop_back();
        mark[v] = Mark::Black;
        return {};
    };

    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (mark[i] != Mark::White) continue;
        auto cycle = visit(i);
        if (!cycle.empty()) return cycle;
    }
    return {};
}

Ticks critical_path_length(const Program& program,
                           const std::map<std::string, Ticks>& durations) {
    for (const auto& [name, ticks] : durations) {
        program.action(name);
        if (ticks <= 0)
            throw Error(ErrorCode::NonPositiveDuration,
                        "duration of '" + name + "' must be positive, got " +
                            std::to_string(ticks),
                        {name});
    }
    auto order = topological_order(program);
    std::vector<Ticks> finish(program.actions().size(), 0);
    Ticks longest = 0;
    for (const auto& name : order) {
        std::size_t i = program.index_of(name);
        Ticks start = 0;
        for (const auto& edge : program.actions()[i].constraints())
            start = std::max(start, finish[program.index_of(edge.predecessor)]);
        auto it = durations.find(name);
        finish[i] = start + (it == durations.end() ? 1 : it->second);
        longest = std::max(longest, finish[i]);
    }
    return longest;
}

Reachability::Reachability(const Program& program) {
    const std::size_t n = program.actions().size();
    auto succ = successor_lists(program);
    closure_.assign(n, std::vector<bool>(n, false));
    for (std::size_t from = 0; from < n; ++from) {
        std::vector<std::size_t> stack(succ[from].begin(), succ[from].end());
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            if (closure_[v][from]) continue;
            closure_[v][from] = true;
            for (std::size_t s : succ[v]) stack.push_back(s);
        }
        if (closure_[from][from]) acyclic_ = false;
    }
}

}  // namespace seqc
