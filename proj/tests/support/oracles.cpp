#include "oracles.hpp"

#include <algorithm>
#include <functional>

namespace seqc::oracle {

namespace {

// adjacency predecessor -> successors, by name
std::map<std::string, std::vector<std::string>> forward_edges(const Program& program) {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& a : program.actions()) {
        out[a.name()];
        for (const auto& e : a.constraints()) out[e.predecessor].push_back(a.name());
    }
    return out;
}

template <typename Visit>
void each_simple_path(const Program& program, Visit&& visit) {
    auto adj = forward_edges(program);
    std::vector<std::string> path;
    std::set<std::string> on_path;
    std::function<void(const std::string&)> walk = [&](const std::string& node) {
        path.push_back(node);
        on_path.insert(node);
        visit(path);
        for (const auto& next : adj[node])
            if (!on_path.count(next)) walk(next);
        on_path.erase(node);
        path.pop_back();
    };
    for (const auto& a : program.actions()) walk(a.name());
}

}  // namespace

std::set<std::string> ancestors_by_paths(const Program& program, const std::string& target) {
    std::set<std::string> out;
    each_simple_path(program, [&](const std::vector<std::string>& path) {
        if (path.size() > 1 && path.back() == target) out.insert(path.front());
    });
    return out;
}

Ticks longest_path_by_paths(const Program& program, const std::map<std::string, Ticks>& durations) {
    Ticks best = 0;
    each_simple_path(program, [&](const std::vector<std::string>& path) {
        Ticks sum = 0;
        for (const auto& n : path) {
            auto it = durations.find(n);
            sum += it == durations.end() ? 1 : it->second;
        }
        best = std::max(best, sum);
    });
    return best;
}

std::set<std::pair<std::string, std::string>> overlapping_pairs(const Program& program) {
    const auto& actions = program.actions();
    const int n = static_cast<int>(actions.size());
    std::vector<int> start(n, -1);
    std::set<std::pair<std::string, std::string>> out;

    auto consistent = [&](int i) {
        for (int j = 0; j < i; ++j) {
            if (actions[i].resource() == actions[j].resource() && start[i] == start[j]) return false;
            if (actions[i].has_predecessor(actions[j].name()) && start[i] < start[j] + 1) return false;
            if (actions[j].has_predecessor(actions[i].name()) && start[j] < start[i] + 1) return false;
        }
        return true;
    };
    std::function<void(int)> assign = [&](int i) {
        if (i == n) {
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b)
                    if (start[a] == start[b]) out.insert({actions[a].name(), actions[b].name()});
            return;
        }
        for (int t = 0; t < n; ++t) {
            start[i] = t;
            if (consistent(i)) assign(i + 1);
        }
        start[i] = -1;
    };
    assign(0);
    return out;
}

std::set<std::pair<std::string, std::string>> mutex_violations(const Program& program, const RobotClassDsl& dsl) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& [a, b] : overlapping_pairs(program)) {
        const auto& ta = program.action(a).action_type();
        const auto& tb = program.action(b).action_type();
        if (dsl.mutex_relation().count(make_mutex_pair(ta, tb))) out.insert({a, b});
    }
    return out;
}

std::map<std::string, Interval> tick_simulation(const Program& program, const RobotClassDsl& dsl,
                                                const DurationMap& durations, bool force) {
    std::map<std::string, Interval> done;     // finished or running, with their interval
    std::map<std::string, Ticks> finish_at;   // running only
    const auto& actions = program.actions();  // already in name order
    for (Ticks t = 0; done.size() < actions.size(); ++t) {
        for (auto it = finish_at.begin(); it != finish_at.end();)
            it = it->second == t ? finish_at.erase(it) : std::next(it);
        for (const auto& a : actions) {
            if (done.count(a.name())) continue;
            bool ready = std::all_of(a.constraints().begin(), a.constraints().end(), [&](const ConstraintEdge& e) {
                return done.count(e.predecessor) && !finish_at.count(e.predecessor);
            });
            if (!ready) continue;
            bool blocked = false;
            for (const auto& [running, _] : finish_at) {
                const auto& r = program.action(running);
                if (r.resource() == a.resource()) blocked = true;
                if (force && dsl.are_mutex(r.action_type(), a.action_type())) blocked = true;
            }
            if (blocked) continue;
            Ticks d = durations.of(a.name());
            done[a.name()] = {t, t + d};
            finish_at[a.name()] = t + d;
        }
        if (t > 100000) break;  // a cycle would never finish
    }
    return done;
}

std::string naive_replace(std::string text, const std::vector<std::pair<std::string, std::string>>& tokens) {
    for (const auto& [token, value] : tokens) {
        std::size_t pos = 0;
        while ((pos = text.find(token, pos)) != std::string::npos) {
            text.replace(pos, token.size(), value);
            pos += value.size();
        }
    }
    return text;
}

}  // namespace seqc::oracle
