#pragma once

#include <filesystem>
#include <string>

#include "flexcap/mpc.hpp"

// Plot-ready output files. Trajectory CSV columns, in order:
//   hour,lmp_<bus>...,flex,soc,import_trans,gen_dist,load,step_cost
// with one lmp column per bus in network order. All numbers are written
// with %.12g, so identical runs produce byte-identical files.

namespace flexcap::report {

std::string fmt(double v);

// Writes are atomic: compose, write to a temp file, rename into place.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);

std::string trajectory_csv(const mpc::Trajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path,
                          const mpc::Trajectory& traj);

// Reads a trajectory CSV back; bus ids are recovered from the lmp_ columns.
// Throws Error(parse_error) on malformed input.
mpc::Trajectory read_trajectory_csv(const std::filesystem::path& path);

std::string savings_json(const mpc::SavingsReport& rep,
                         const std::string& scenario_name);
std::string savings_csv(const mpc::SavingsReport& rep);

}  // namespace flexcap::report
