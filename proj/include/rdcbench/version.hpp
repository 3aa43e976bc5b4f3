#pragma once

#define RDCBENCH_VERSION "0.1.0"

namespace rdc {
inline const char* version() { return RDCBENCH_VERSION; }
}
