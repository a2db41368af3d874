#pragma once

#include <string>

namespace gwrd {

// %.17g: round-trips every double.
std::string fmt17(double x);

} // namespace gwrd
