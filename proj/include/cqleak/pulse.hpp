#pragma once

// Control pulse schedules: piecewise-constant levels on two channels (eps_q
// and g) with optional error-function rise/fall transitions.

#include <string>
#include <utility>
#include <vector>

namespace cqleak {

enum class Channel { EpsQ, G };

std::string to_string(Channel c);
Channel channel_from_string(const std::string& s);

// One constant-level pulse on a channel. The switch instants `start` and
// `end` are the midpoints of the erf transitions, each `rise` wide.
struct PulseSegment {
    Channel channel = Channel::EpsQ;
    double level = 0.0;  // GHz
    double start = 0.0;  // ns
    double end = 0.0;    // ns
    double rise = 0.0;   // ns, 0 = bang-bang
};

struct ControlSample {
    double eps_q;
    double g;
};

class PulseSchedule {
public:
    PulseSchedule() = default;

    /// Validates ordering, non-overlap within each channel and that every
    /// transition window fits inside [0, duration].
    PulseSchedule(std::vector<PulseSegment> segments, double duration);

    const std::vector<PulseSegment>& segments() const { return segments_; }
    double duration() const { return duration_; }
    bool empty() const { return segments_.empty(); }

    /// Control values at time t; throws std::out_of_range outside [0, duration].
    ControlSample sample(double t) const;

    /// Sorted instants where the controls are non-smooth (window edges and
    /// bang-bang jumps), including 0 and duration.
    std::vector<double> breakpoints() const;

    /// True if neither channel is inside a transition window anywhere in (a, b).
    /// Assumes (a, b) lies between two consecutive breakpoints.
    bool is_flat(double a, double b) const;

private:
    double channel_value(Channel c, double t) const;

    std::vector<PulseSegment> segments_;
    double duration_ = 0.0;
};

/// Error-function switch from f1 (at t1) to f2 (at t2), centred on (t1+t2)/2.
/// Throws std::invalid_argument if t2 <= t1.
double erf_switch(double t, double t1, double t2, double f1, double f2);

ControlSample sample_schedule(const PulseSchedule& s, double t);

// A bang-bang step of a composite sequence, played in time order.
struct TemplateStep {
    Channel channel;
    double level;     // GHz
    double duration;  // ns, between switch midpoints
};

struct SmoothingOptions {
    double rise = 0.05;  // ns
    // Offset between the switch midpoint of an outgoing channel and that of
    // the incoming one. Negative means "equal to rise", i.e. the incoming
    // transition starts exactly when the outgoing one has finished.
    double handover = -1.0;
};

/// Lays template steps out on a time axis. Each level change becomes an erf
/// switch of width `rise` centred on the nominal switching instant. Steps on
/// the same channel switch directly into one another. The first window starts
/// at t = 0 and the last one ends at the schedule duration.
/// Throws std::invalid_argument if rise < 0 or a step is shorter than rise.
PulseSchedule build_smooth_schedule(const std::vector<TemplateStep>& steps,
                                    const SmoothingOptions& opts);

/// The same controls played backwards in time, f(T - t).
PulseSchedule time_reversed(const PulseSchedule& s);

/// Samples both channels on a uniform grid (including both end points).
std::vector<std::pair<double, ControlSample>> tabulate(const PulseSchedule& s, double step);

}  // namespace cqleak
