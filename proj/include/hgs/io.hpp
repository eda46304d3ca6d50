#ifndef HGS_IO_HPP
#define HGS_IO_HPP

#include <iosfwd>
#include <string>

#include "hgs/types.hpp"

namespace hgs {

// Shortest locale-independent decimal form with 17 significant digits.
std::string format_g17(double x);

// CSV with header `t,u,du,v,dv`, one row per accepted step.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace hgs

#endif
