#ifndef KFM_IO_HPP
#define KFM_IO_HPP

#include <string>
#include <vector>

#include "kfm/evolution.hpp"

namespace kfm {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

/** Trajectory CSV: header t, re(a_k), im(a_k) per mode, then mu, domE
 *  (and energy for wave rows); one row per grid time. */
std::string trajectory_to_csv(const Trajectory& traj);

struct ParsedTrajectory {
  std::vector<double> times;
  std::vector<std::vector<Complex>> coefficients;
  std::vector<double> norm_mu;
  std::vector<double> norm_dom_e;
  std::vector<double> energy;  // empty unless present in the header
};

ParsedTrajectory trajectory_from_csv(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace kfm

#endif
