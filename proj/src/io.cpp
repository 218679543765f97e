#include "cqleak/io.hpp"

#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cqleak::io {

namespace {

// Round-trip precision for doubles.
constexpr int kDigits = std::numeric_limits<double>::max_digits10;

void prepare(std::ostream& os) {
    os.precision(kDigits);
    os.unsetf(std::ios::floatfield);
}

}  // namespace

void write_metadata(std::ostream& os, const Json& meta) {
    std::istringstream lines(meta.dump(2));
    for (std::string line; std::getline(lines, line);) os << "# " << line << '\n';
}

Json read_metadata(std::istream& is) {
    std::string text;
    for (std::string line; is.peek() == '#' && std::getline(is, line);) {
        text += line.substr(line.size() > 1 ? 2 : 1);
        text += '\n';
    }
    if (text.empty()) return Json::object();
    return Json::parse(text);
}

void write_levels_csv(std::ostream& os, const std::vector<LevelRow>& rows, const Json& meta) {
    write_metadata(os, meta);
    prepare(os);
    os << "param,E1,E2,E3\n";
    for (const auto& r : rows) {
        os << r.param << ',' << r.energies[0] << ',' << r.energies[1] << ',' << r.energies[2] << '\n';
    }
}

void write_state_trajectory_csv(std::ostream& os, const std::vector<TrajectoryPoint>& traj,
                                const Json& meta) {
    write_metadata(os, meta);
    prepare(os);
    os << "t,re_c,im_c,re_e,im_e,re_l,im_l\n";
    for (const auto& p : traj) {
        os << p.t;
        for (int k = 0; k < 3; ++k) os << ',' << p.psi(k).real() << ',' << p.psi(k).imag();
        os << '\n';
    }
}

void write_sphere_trajectory_csv(std::ostream& os, const std::vector<SpherePoint>& traj,
                                 const Json& meta) {
    write_metadata(os, meta);
    prepare(os);
    os << "t,chi,varrho,vartheta,varsigma,p_leak\n";
    for (const auto& p : traj) {
        const auto& s = p.state;
        os << p.t << ',' << s.chi << ',' << s.varrho << ',' << s.vartheta << ',' << s.varsigma << ','
           << p.p_leak << '\n';
    }
}

void write_schedule_csv(std::ostream& os, const PulseSchedule& s, double step, const Json& meta) {
    write_metadata(os, meta);
    prepare(os);
    os << "t,eps_q,g\n";
    for (const auto& [t, c] : tabulate(s, step)) os << t << ',' << c.eps_q << ',' << c.g << '\n';
}

void write_nogo_csv(std::ostream& os, const NogoReport& r, const Json& meta) {
    write_metadata(os, meta);
    prepare(os);
    os << "theta,phi,eps_q,g,c1,c2,min_abs,order,is_zero,is_null\n";
    for (const auto& c : r.candidates) {
        os << c.theta << ',' << c.phi << ',' << c.eps_q << ',' << c.g << ',' << c.c1 << ',' << c.c2
           << ',' << c.min_abs << ',' << (c.order == TwoPulseOrder::ZX ? "zx" : "xz") << ','
           << c.is_zero << ',' << c.is_null << '\n';
    }
}

void write_scaling_csv(std::ostream& os, const std::vector<ScalingRow>& rows, const Json& meta) {
    write_metadata(os, meta);
    prepare(os);
    os << "ratio,comp_error,p_lc,p_le,infidelity\n";
    for (const auto& r : rows) {
        os << r.ratio << ',' << r.comp_error << ',' << r.p_lc << ',' << r.p_le << ',' << r.infidelity
           << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, const Json& meta) {
    write_metadata(os, meta);
    prepare(os);
    os << "d_eps_d,d_eps_q,approach,infidelity,t_z,t_x,eps_q_peak,evals\n";
    for (const auto& r : rows) {
        const auto& b = r.result.best;
        os << r.d_eps_d << ',' << r.d_eps_q << ',' << to_string(r.approach) << ','
           << r.result.infidelity << ',' << b.t_z << ',' << b.t_x << ',' << b.eps_peak << ','
           << r.result.evals << '\n';
    }
}

Json to_json(const GateReport& r) {
    Json params = Json::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    return Json{{"fidelity", r.fidelity}, {"infidelity", r.infidelity}, {"p_lc", r.p_lc},
                {"p_le", r.p_le},         {"comp_error", r.comp_error}, {"params", params}};
}

Json to_json(const PulseSchedule& s) {
    Json segs = Json::array();
    for (const auto& seg : s.segments()) {
        segs.push_back({{"channel", to_string(seg.channel)},
                        {"level", seg.level},
                        {"start", seg.start},
                        {"end", seg.end},
                        {"rise", seg.rise}});
    }
    return Json{{"duration", s.duration()}, {"segments", segs}};
}

PulseSchedule schedule_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("duration") || !j.contains("segments")) {
        throw std::invalid_argument("schedule_from_json: expected {duration, segments}");
    }
    std::vector<PulseSegment> segs;
    for (const auto& s : j.at("segments")) {
        segs.push_back({channel_from_string(s.at("channel").get<std::string>()), s.at("level").get<double>(),
                        s.at("start").get<double>(), s.at("end").get<double>(),
                        s.value("rise", 0.0)});
    }
    return PulseSchedule(std::move(segs), j.at("duration").get<double>());
}

}  // namespace cqleak::io
