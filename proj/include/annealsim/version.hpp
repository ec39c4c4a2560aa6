#pragma once

namespace annealsim {
inline constexpr const char* version = "1.0.0";
}
