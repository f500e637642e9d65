#pragma once

#include <omp.h>

namespace hopim {

/// Worker count for OpenMP regions; 0 or negative means "all available".
inline int resolve_workers(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

}  // namespace hopim
