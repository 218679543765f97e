#include "cqleak/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cqleak {

namespace {

// 0 before the window, 1 after, erf-shaped inside. Tails beyond the window
// are truncated, so the value jumps by (1 - erf(2))/2 at both window edges.
double step_profile(double t, double centre, double rise) {
    if (rise <= 0.0) return t >= centre ? 1.0 : 0.0;
    const double half = 0.5 * rise;
    if (t <= centre - half) return 0.0;
    if (t >= centre + half) return 1.0;
    return 0.5 + 0.5 * std::erf(4.0 / rise * (t - centre));
}

constexpr double kTimeEps = 1e-12;

}  // namespace

std::string to_string(Channel c) { return c == Channel::EpsQ ? "eps_q" : "g"; }

Channel channel_from_string(const std::string& s) {
    if (s == "eps_q") return Channel::EpsQ;
    if (s == "g") return Channel::G;
    throw std::invalid_argument("unknown channel '" + s + "'");
}

double erf_switch(double t, double t1, double t2, double f1, double f2) {
    if (!(t2 > t1)) throw std::invalid_argument("erf_switch: requires t2 > t1");
    const double mid = 0.5 * (t1 + t2);
    return 0.5 * (f1 + f2) + 0.5 * (f2 - f1) * std::erf(4.0 / (t2 - t1) * (t - mid));
}

PulseSchedule::PulseSchedule(std::vector<PulseSegment> segments, double duration)
    : segments_(std::move(segments)), duration_(duration) {
    if (!(duration_ > 0.0)) throw std::invalid_argument("PulseSchedule: duration must be positive");
    for (const auto& s : segments_) {
        if (!(s.end > s.start)) throw std::invalid_argument("PulseSegment: end must exceed start");
        if (s.rise < 0.0) throw std::invalid_argument("PulseSegment: negative rise time");
        if (s.rise > s.end - s.start + kTimeEps) {
            throw std::invalid_argument("PulseSegment: rise time longer than the segment");
        }
        if (s.start - 0.5 * s.rise < -kTimeEps || s.end + 0.5 * s.rise > duration_ + kTimeEps) {
            throw std::invalid_argument("PulseSegment: transition window outside the schedule");
        }
    }
    for (Channel c : {Channel::EpsQ, Channel::G}) {
        double last_end = -1.0;
        for (const auto& s : segments_) {
            if (s.channel != c) continue;
            if (s.start < last_end - kTimeEps) {
                throw std::invalid_argument("PulseSchedule: overlapping or unordered segments on " +
                                            to_string(c));
            }
            last_end = s.end;
        }
    }
}

double PulseSchedule::channel_value(Channel c, double t) const {
    double v = 0.0;
    for (const auto& s : segments_) {
        if (s.channel != c) continue;
        v += s.level * (step_profile(t, s.start, s.rise) - step_profile(t, s.end, s.rise));
    }
    return v;
}

ControlSample PulseSchedule::sample(double t) const {
    if (t < -kTimeEps || t > duration_ + kTimeEps) {
        throw std::out_of_range("PulseSchedule::sample: time outside the schedule");
    }
    return {channel_value(Channel::EpsQ, t), channel_value(Channel::G, t)};
}

std::vector<double> PulseSchedule::breakpoints() const {
    std::vector<double> bp{0.0, duration_};
    for (const auto& s : segments_) {
        for (double c : {s.start, s.end}) {
            if (s.rise > 0.0) {
                bp.push_back(c - 0.5 * s.rise);
                bp.push_back(c + 0.5 * s.rise);
            } else {
                bp.push_back(c);
            }
        }
    }
    for (double& b : bp) b = std::clamp(b, 0.0, duration_);
    std::sort(bp.begin(), bp.end());
    std::vector<double> out;
    for (double b : bp) {
        if (out.empty() || b - out.back() > kTimeEps) out.push_back(b);
    }
    out.back() = duration_;
    return out;
}

bool PulseSchedule::is_flat(double a, double b) const {
    const double mid = 0.5 * (a + b);
    for (const auto& s : segments_) {
        if (s.rise <= 0.0) continue;
        for (double c : {s.start, s.end}) {
            if (std::abs(mid - c) < 0.5 * s.rise) return false;
        }
    }
    return true;
}

ControlSample sample_schedule(const PulseSchedule& s, double t) { return s.sample(t); }

PulseSchedule build_smooth_schedule(const std::vector<TemplateStep>& steps,
                                    const SmoothingOptions& opts) {
    if (steps.empty()) throw std::invalid_argument("build_smooth_schedule: empty template");
    const double rise = opts.rise;
    if (rise < 0.0) throw std::invalid_argument("build_smooth_schedule: negative rise time");
    const double handover = opts.handover < 0.0 ? rise : opts.handover;

    std::vector<PulseSegment> segs;
    segs.reserve(steps.size());
    double cursor = 0.5 * rise;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const auto& st = steps[k];
        if (!(st.duration > 0.0) || st.duration < rise) {
            throw std::invalid_argument("build_smooth_schedule: step shorter than the rise time");
        }
        if (k > 0 && steps[k - 1].channel != st.channel) cursor += handover;
        segs.push_back({st.channel, st.level, cursor, cursor + st.duration, rise});
        cursor += st.duration;
    }
    return PulseSchedule(std::move(segs), cursor + 0.5 * rise);
}

std::vector<std::pair<double, ControlSample>> tabulate(const PulseSchedule& s, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("tabulate: step must be positive");
    const auto n = static_cast<long>(std::ceil(s.duration() / step - 1e-9));
    std::vector<std::pair<double, ControlSample>> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    for (long k = 0; k <= n; ++k) {
        const double t = std::min(static_cast<double>(k) * step, s.duration());
        out.emplace_back(t, s.sample(t));
    }
    return out;
}

PulseSchedule time_reversed(const PulseSchedule& s) {
    std::vector<PulseSegment> segs;
    for (auto it = s.segments().rbegin(); it != s.segments().rend(); ++it) {
        PulseSegment r = *it;
        r.start = s.duration() - it->end;
        r.end = s.duration() - it->start;
        segs.push_back(r);
    }
    return PulseSchedule(std::move(segs), s.duration());
}

}  // namespace cqleak
