#include "vta/exec.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vta {

int parallel_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace vta
