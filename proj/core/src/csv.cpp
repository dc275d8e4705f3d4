#include "phmoc/csv.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace phmoc {

namespace {

void append_number(std::string& row, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  row += buf;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  std::string header = "t";
  for (int i = 1; i <= traj.dim_x; ++i) header += ",x" + std::to_string(i);
  for (int i = 1; i <= traj.dim_r; ++i) header += ",w" + std::to_string(i);
  for (int i = 1; i <= traj.dim_u; ++i) header += ",u" + std::to_string(i);
  header += ",upsilon,V,vdot,cost\n";
  out << header;

  std::string row;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    row.clear();
    append_number(row, traj.time[k]);
    for (int i = 0; i < traj.dim_x; ++i) {
      row += ',';
      append_number(row, traj.state[k](i));
    }
    for (int i = 0; i < traj.dim_r; ++i) {
      row += ',';
      append_number(row, traj.weights[k](i));
    }
    for (int i = 0; i < traj.dim_u; ++i) {
      row += ',';
      append_number(row, traj.input[k](i));
    }
    row += ',';
    append_number(row, traj.upsilon[k]);
    row += ',';
    append_number(row, traj.clf_value[k]);
    row += ',';
    append_number(row, traj.vdot_closed[k]);
    row += ',';
    append_number(row, traj.cost_accum[k]);
    row += '\n';
    out << row;
  }
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  write_trajectory_csv(os, traj);
  return os.str();
}

void write_trajectory_csv_file(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_trajectory_csv(out, traj);
}

}  // namespace phmoc
