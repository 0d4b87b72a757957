#ifndef RABISIM_VERSION_HPP
#define RABISIM_VERSION_HPP

namespace rabisim {

inline constexpr const char* version_string = "0.1.0";

} // namespace rabisim

#endif
