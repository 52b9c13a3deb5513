#ifndef HESSLV_VERSION_HPP
#define HESSLV_VERSION_HPP

namespace hesslv {

inline constexpr const char* version = "0.1.0";

} // namespace hesslv

#endif
