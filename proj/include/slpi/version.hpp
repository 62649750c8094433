#pragma once

#define SLPI_VERSION_MAJOR 0
#define SLPI_VERSION_MINOR 1
#define SLPI_VERSION_PATCH 0
#define SLPI_VERSION_STRING "0.1.0"

namespace slpi {
inline const char* version() { return SLPI_VERSION_STRING; }
}
