#include "hgs/io.hpp"

#include <charconv>
#include <ostream>
#include <system_error>

namespace hgs {

std::string format_g17(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,u,du,v,dv\n";
  for (const RadialState& s : traj.states()) {
    os << format_g17(s.t) << ',' << format_g17(s.u) << ',' << format_g17(s.du) << ','
       << format_g17(s.v) << ',' << format_g17(s.dv) << '\n';
  }
}

}  // namespace hgs
