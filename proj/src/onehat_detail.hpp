#pragma once

#include "ittm/compilers.hpp"

namespace ittm::detail {

// Stretching phase of the four-wide layout, standalone: halts a few steps
// past the w^2 limit after erasing the completion flag.
Program stretch_four_wide_standalone();

}  // namespace ittm::detail
