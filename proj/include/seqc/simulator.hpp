#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "seqc/dsl.hpp"
#include "seqc/model.hpp"

namespace seqc {

/// Per-action durations in ticks with a fallback for unlisted actions.
class DurationMap {
public:
    /// Throws NonPositiveDuration when the default or any entry is < 1.
    explicit DurationMap(std::map<std::string, Ticks> per_action = {}, Ticks fallback = 1);

    Ticks of(std::string_view action) const;
    const std::map<std::string, Ticks>& per_action() const { return per_action_; }
    Ticks fallback() const { return fallback_; }

    /// JSON of the form {"default": 1, "actions": {"C": 5}}; both keys optional.
    static DurationMap from_json(std::string_view text);

private:
    std::map<std::string, Ticks> per_action_;
    Ticks fallback_;
};

enum class EventKind { Start, Finish };

struct TraceEvent {
    Ticks time;
    EventKind kind;
    std::string action;
    std::string resource;

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct Interval {
    Ticks start;
    Ticks finish;  // exclusive
    friend bool operator==(const Interval&, const Interval&) = default;
};

struct ExecutionTrace {
    std::vector<TraceEvent> events;  // by (time, Finish before Start, action)
    Ticks makespan = 0;
    std::map<std::string, Interval> schedule;

    /// Builds the events and makespan for a hand-written schedule.
    static ExecutionTrace from_schedule(const Program& program, std::map<std::string, Interval> schedule);

    std::string to_json() const;
    /// One row per action: name, resource, interval and a bar over the ticks.
    std::string to_timeline(const Program& program) const;

    friend bool operator==(const ExecutionTrace&, const ExecutionTrace&) = default;
};

/// Greedy earliest-start list scheduling. At every event time finishes are
/// processed first; then, in lexicographic order, each action whose
/// predecessors have finished and whose resource is free starts. With
/// `force`, mutex-related actions are additionally kept apart at runtime and
/// validation errors are tolerated.
/// Throws InvalidProgram (validation errors without force) or CyclicGraph.
ExecutionTrace simulate(const Program& program, const RobotClassDsl& dsl,
                        const DurationMap& durations = DurationMap{}, bool force = false);

enum class TraceRule { Precedence, ResourceOverlap, MutexOverlap };

std::string_view to_string(TraceRule rule);

struct TraceViolation {
    TraceRule rule;
    std::vector<std::string> actions;
    std::string message;
};

/// Checks precedence, per-resource exclusivity and mutex separation on
/// half-open intervals. Throws UnknownAction for actions the program lacks.
std::vector<TraceViolation> verify_trace(const ExecutionTrace& trace, const Program& program,
                                         const RobotClassDsl& dsl);

Ticks makespan(const ExecutionTrace& trace);

}  // namespace seqc
