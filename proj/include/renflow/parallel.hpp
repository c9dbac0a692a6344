#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace renflow::par {

// serial runs the block loop on one thread; parallel hands blocks to OpenMP.
// Results are identical either way: work is split into fixed blocks, each
// block computes with its own RNG stream / accumulator, and the final
// reduction walks blocks in index order.
enum class Exec { serial, parallel };

// omp_get_max_threads() capped by the RENFLOW_THREADS environment variable.
int max_threads();
void set_num_threads(int n);

struct BlockRange {
  std::size_t index;
  std::size_t begin;
  std::size_t end;
};

std::vector<BlockRange> make_blocks(std::size_t n_items, std::size_t block_size);

// f(BlockRange) for every block; scheduling depends on exec.
template <class F>
void for_blocks(const std::vector<BlockRange>& blocks, Exec exec, F&& f) {
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long b = 0; b < static_cast<long long>(blocks.size()); ++b)
      f(blocks[static_cast<std::size_t>(b)]);
  } else {
    for (const auto& blk : blocks) f(blk);
  }
}

}  // namespace renflow::par
