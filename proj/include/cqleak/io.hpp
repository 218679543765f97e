#pragma once

// CSV and JSON export. Every CSV starts with "# " comment lines holding the
// run metadata as JSON, so a file is self-describing.

#include "cqleak/analysis.hpp"
#include "cqleak/bloch.hpp"
#include "cqleak/hamiltonian.hpp"
#include "cqleak/optimizer.hpp"
#include "cqleak/propagator.hpp"
#include "cqleak/pulse.hpp"
#include "cqleak/sequences.hpp"

#include <json.hpp>

#include <iosfwd>
#include <vector>

namespace cqleak::io {

using Json = nlohmann::ordered_json;

void write_metadata(std::ostream& os, const Json& meta);

/// Reads the metadata block back from a stream written by any CSV writer.
Json read_metadata(std::istream& is);

void write_levels_csv(std::ostream& os, const std::vector<LevelRow>& rows, const Json& meta);
void write_state_trajectory_csv(std::ostream& os, const std::vector<TrajectoryPoint>& traj,
                                const Json& meta);
void write_sphere_trajectory_csv(std::ostream& os, const std::vector<SpherePoint>& traj,
                                 const Json& meta);
void write_schedule_csv(std::ostream& os, const PulseSchedule& s, double step, const Json& meta);
void write_nogo_csv(std::ostream& os, const NogoReport& r, const Json& meta);

struct ScalingRow {
    double ratio;
    double comp_error;
    double p_lc;
    double p_le;
    double infidelity;
};
void write_scaling_csv(std::ostream& os, const std::vector<ScalingRow>& rows, const Json& meta);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, const Json& meta);

Json to_json(const GateReport& r);
Json to_json(const PulseSchedule& s);

/// Throws std::invalid_argument (or nlohmann::json::exception) on malformed input.
PulseSchedule schedule_from_json(const Json& j);

}  // namespace cqleak::io
