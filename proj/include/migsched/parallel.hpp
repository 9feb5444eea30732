#pragma once

#if defined(_OPENMP)
#include <omp.h>
#define MIGSCHED_HAS_OPENMP 1
#else
#define MIGSCHED_HAS_OPENMP 0
inline int omp_get_max_threads() { return 1; }
inline int omp_get_thread_num() { return 0; }
inline void omp_set_num_threads(int) {}
#endif

namespace migsched {

/// Selects between the OpenMP kernel and its serial reference.
enum class Execution { Serial, Parallel };

}  // namespace migsched
