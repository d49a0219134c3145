#pragma once

#include "simploscore/kernels.hpp"

namespace simploscore::kernels::detail {

// Null when the variant was not compiled for this target.
const KernelTable* avx2_table();
const KernelTable* neon_table();

}  // namespace simploscore::kernels::detail
