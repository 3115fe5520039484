#ifndef LEVYEDGE_VERSION_HPP
#define LEVYEDGE_VERSION_HPP

namespace levyedge {

inline constexpr const char* version = "0.1.0";

} // namespace levyedge

#endif
