#include "imexllg/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace llg::parallel {

int configure_from_env() {
  if (const char* env = std::getenv("LLG_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) omp_set_num_threads(n);
    } catch (const std::exception&) {
      // ignored: an unparsable cap leaves the OpenMP default in place
    }
  }
  return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace llg::parallel
