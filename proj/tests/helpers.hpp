#ifndef MATMAP_TESTS_HELPERS_HPP
#define MATMAP_TESTS_HELPERS_HPP

#include "matmap/time.hpp"

namespace testutil {

inline matmap::Time usec(long long v) { return matmap::Time{v}; }
inline matmap::Time sec(long long v) { return matmap::Time{v * matmap::kMicrosPerSecond}; }

} // namespace testutil

#endif
