#ifndef HGS_VERSION_HPP
#define HGS_VERSION_HPP

namespace hgs {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hgs

#endif
