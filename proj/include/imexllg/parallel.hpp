#pragma once

#include <cstddef>

namespace llg::parallel {

/// Cell count below which kernels run their loops serially.
inline constexpr std::size_t kMinParallelCells = 4096;

/// Caps the OpenMP team size from the LLG_THREADS environment variable, if
/// set to a positive integer. Returns the thread count in effect.
int configure_from_env();

int max_threads();

}  // namespace llg::parallel
