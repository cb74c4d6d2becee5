#include "chaoslab/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace chaoslab {

void set_worker_lanes(int lanes) {
#ifdef _OPENMP
  if (lanes > 0) omp_set_num_threads(lanes);
#else
  (void)lanes;
#endif
}

int worker_lanes() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 16;
  if (values.size() <= kLeaf) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace chaoslab
