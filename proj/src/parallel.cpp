#include "renflow/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace renflow::par {

int max_threads() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (const char* env = std::getenv("RENFLOW_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

void set_num_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

std::vector<BlockRange> make_blocks(std::size_t n_items, std::size_t block_size) {
  std::vector<BlockRange> out;
  if (block_size == 0) block_size = 1;
  std::size_t idx = 0;
  for (std::size_t lo = 0; lo < n_items; lo += block_size) {
    out.push_back({idx++, lo, std::min(lo + block_size, n_items)});
  }
  return out;
}

}  // namespace renflow::par
