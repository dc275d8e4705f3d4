#pragma once

#include "phmoc/simulate.hpp"

#include <iosfwd>
#include <string>

namespace phmoc {

/// Writes the trajectory as CSV with header
/// `t,x1..xn,w1..wr,u1..um,upsilon,V,vdot,cost`, one row per recorded
/// sample in time order, floating point at 9 significant digits. The
/// output is byte-deterministic for a given trajectory.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

[[nodiscard]] std::string trajectory_csv(const Trajectory& traj);

void write_trajectory_csv_file(const std::string& path, const Trajectory& traj);

}  // namespace phmoc
