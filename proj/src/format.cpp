#include "gwrd/format.hpp"

#include <cstdio>

namespace gwrd {

std::string fmt17(double x)
{
    if (x == 0.0)
        x = 0.0; // drop the sign of -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace gwrd
