#include "seqc/simulator.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "seqc/error.hpp"
#include "seqc/validator.hpp"

namespace seqc {

namespace {

void require_positive(std::string_view what, Ticks ticks) {
    if (ticks < 1)
        throw Error(ErrorCode::NonPositiveDuration,
                    "duration of " + std::string(what) + " must be at least 1 tick, got " +
                        std::to_string(ticks),
                    {std::string(what)});
}

}  // namespace

DurationMap::DurationMap(std::map<std::string, Ticks> per_action, Ticks fallback)
    : per_action_(std::move(per_action)), fallback_(fallback) {
    require_positive("default", fallback_);
    for (const auto& [name, ticks] : per_action_) require_positive(name, ticks);
}

Ticks DurationMap::of(std::string_view action) const {
    auto it = per_action_.find(std::string(action));
    return it == per_action_.end() ? fallback_ : it->second;
}

DurationMap DurationMap::from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Io, std::string("invalid durations JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::Io, "durations JSON must be an object");
    try {
        Ticks fallback = j.value("default", Ticks{1});
        std::map<std::string, Ticks> per_action;
        if (j.contains("actions"))
            for (const auto& [name, ticks] : j.at("actions").items()) per_action[name] = ticks.get<Ticks>();
        return DurationMap(std::move(per_action), fallback);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Io, std::string("invalid durations JSON: ") + e.what());
    }
}

namespace {

void sort_events(std::vector<TraceEvent>& events) {
    std::sort(events.begin(), events.end(), [](const TraceEvent& a, const TraceEvent& b) {
        if (a.time != b.time) return a.time < b.time;
        if (a.kind != b.kind) return a.kind == EventKind::Finish;
        return a.action < b.action;
    });
}

}  // namespace

ExecutionTrace ExecutionTrace::from_schedule(const Program& program,
                                             std::map<std::string, Interval> schedule) {
    ExecutionTrace trace;
    for (const auto& [name, iv] : schedule) {
        const auto& a = program.action(name);
        trace.events.push_back({iv.start, EventKind::Start, name, a.resource()});
        trace.events.push_back({iv.finish, EventKind::Finish, name, a.resource()});
        trace.makespan = std::max(trace.makespan, iv.finish);
    }
    sort_events(trace.events);
    trace.schedule = std::move(schedule);
    return trace;
}

std::string ExecutionTrace::to_json() const {
    nlohmann::json j;
    j["makespan"] = makespan;
    j["events"] = nlohmann::json::array();
    for (const auto& e : events)
        j["events"].push_back({{"t", e.time},
                               {"kind", e.kind == EventKind::Start ? "start" : "finish"},
                               {"action", e.action},
                               {"resource", e.resource}});
    return j.dump(2) + "\n";
}

std::string ExecutionTrace::to_timeline(const Program& program) const {
    constexpr Ticks kMaxBar = 100;
    std::size_t name_w = 6, res_w = 8;
    for (const auto& [name, iv] : schedule) {
        name_w = std::max(name_w, name.size());
        res_w = std::max(res_w, program.action(name).resource().size());
    }

    std::vector<std::pair<std::string, Interval>> rows(schedule.begin(), schedule.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return a.second.start < b.second.start;
    });

    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(name_w)) << "action" << "  "
        << std::setw(static_cast<int>(res_w)) << "resource" << std::right << "  start  finish\n";
    for (const auto& [name, iv] : rows) {
        out << std::left << std::setw(static_cast<int>(name_w)) << name << "  "
            << std::setw(static_cast<int>(res_w)) << program.action(name).resource() << std::right
            << "  " << std::setw(5) << iv.start << "  " << std::setw(6) << iv.finish;
        if (makespan <= kMaxBar) {
            out << "  |";
            for (Ticks t = 0; t < makespan; ++t) out << (t >= iv.start && t < iv.finish ? '#' : '.');
            out << '|';
        }
        out << '\n';
    }
    out << "makespan: " << makespan << '\n';
    return out.str();
}

ExecutionTrace simulate(const Program& program, const RobotClassDsl& dsl,
                        const DurationMap& durations, bool force) {
    for (const auto& [name, ticks] : durations.per_action()) program.action(name);

    Reachability reach(program);
    if (!reach.acyclic()) topological_order(program);  // throws CyclicGraph with the cycle

    if (!force) {
        auto report = validate(program, dsl);
        if (!report.ok) {
            std::string first;
            for (const auto& f : report.findings)
                if (f.severity == Severity::Error) {
                    first = std::string(to_string(f.code)) + ": " + f.message;
                    break;
                }
            throw Error(ErrorCode::InvalidProgram,
                        "program '" + program.name() + "' has " +
                            std::to_string(report.count(Severity::Error)) +
                            " validation error(s); first: " + first);
        }
    }

    const auto& actions = program.actions();
    const std::size_t n = actions.size();
    std::vector<std::vector<std::size_t>> preds(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& e : actions[i].constraints()) preds[i].push_back(program.index_of(e.predecessor));

    std::vector<bool> started(n, false), finished(n, false);
    std::map<std::string, bool> resource_busy;
    std::vector<std::pair<Ticks, std::size_t>> running;  // (finish, action)
    ExecutionTrace trace;
    std::size_t started_count = 0;
    Ticks now = 0;

    while (true) {
        for (auto it = running.begin(); it != running.end();) {
            if (it->first == now) {
                finished[it->second] = true;
                resource_busy[actions[it->second].resource()] = false;
                it = running.erase(it);
            } else {
                ++it;
            }
        }

        // actions() is name-sorted, so index order is the dispatch order
        for (std::size_t i = 0; i < n; ++i) {
            if (started[i] || resource_busy[actions[i].resource()]) continue;
            if (!std::all_of(preds[i].begin(), preds[i].end(), [&](std::size_t p) { return finished[p]; }))
                continue;
            if (force && std::any_of(running.begin(), running.end(), [&](const auto& r) {
                    return dsl.are_mutex(actions[i].action_type(), actions[r.second].action_type());
                }))
                continue;
            Ticks finish = now + durations.of(actions[i].name());
            started[i] = true;
            ++started_count;
            resource_busy[actions[i].resource()] = true;
            running.emplace_back(finish, i);
            trace.schedule[actions[i].name()] = {now, finish};
        }

        if (running.empty()) break;
        now = std::min_element(running.begin(), running.end())->first;
    }

    if (started_count != n)
        throw Error(ErrorCode::CyclicGraph, "simulation stalled with unstartable actions");
    return ExecutionTrace::from_schedule(program, std::move(trace.schedule));
}

std::string_view to_string(TraceRule rule) {
    switch (rule) {
        case TraceRule::Precedence: return "precedence";
        case TraceRule::ResourceOverlap: return "resource-overlap";
        case TraceRule::MutexOverlap: return "mutex-overlap";
    }
    return "?";
}

std::vector<TraceViolation> verify_trace(const ExecutionTrace& trace, const Program& program,
                                         const RobotClassDsl& dsl) {
    for (const auto& [name, iv] : trace.schedule) program.action(name);
    for (const auto& e : trace.events) program.action(e.action);

    std::vector<TraceViolation> out;
    for (const auto& a : program.actions()) {
        auto self = trace.schedule.find(a.name());
        if (self == trace.schedule.end()) continue;
        for (const auto& e : a.constraints()) {
            auto pred = trace.schedule.find(e.predecessor);
            if (pred == trace.schedule.end()) {
                out.push_back({TraceRule::Precedence, {e.predecessor, a.name()},
                               "'" + a.name() + "' ran but its predecessor '" + e.predecessor +
                                   "' never did"});
            } else if (self->second.start < pred->second.finish) {
                out.push_back({TraceRule::Precedence, {e.predecessor, a.name()},
                               "'" + a.name() + "' starts at " + std::to_string(self->second.start) +
                                   " before predecessor '" + e.predecessor + "' finishes at " +
                                   std::to_string(pred->second.finish)});
            }
        }
    }

    std::vector<std::pair<std::string, Interval>> items(trace.schedule.begin(), trace.schedule.end());
    for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t j = i + 1; j < items.size(); ++j) {
            const auto& [na, ia] = items[i];
            const auto& [nb, ib] = items[j];
            if (!(ia.start < ib.finish && ib.start < ia.finish)) continue;
            const auto& a = program.action(na);
            const auto& b = program.action(nb);
            if (a.resource() == b.resource())
                out.push_back({TraceRule::ResourceOverlap, {na, nb},
                               "'" + na + "' and '" + nb + "' overlap on resource '" + a.resource() + "'"});
            if (dsl.are_mutex(a.action_type(), b.action_type()))
                out.push_back({TraceRule::MutexOverlap, {na, nb},
                               "'" + na + "' (" + a.action_type() + ") and '" + nb + "' (" +
                                   b.action_type() + ") must not run simultaneously"});
        }
    }
    return out;
}

Ticks makespan(const ExecutionTrace& trace) {
    Ticks m = 0;
    for (const auto& [name, iv] : trace.schedule) m = std::max(m, iv.finish);
    return m;
}

}  // namespace seqc
