#ifndef MATMAP_VERSION_HPP
#define MATMAP_VERSION_HPP

namespace matmap {

inline constexpr const char* kVersion = "1.0.0";

} // namespace matmap

#endif
