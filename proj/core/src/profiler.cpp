#include "ellcfd/profiler.hpp"

#include "ellcfd/parallel.hpp"

#if defined(ELLCFD_HAVE_OPENMP)
#include <omp.h>
#endif

namespace ellcfd {

double StageTimes::total() const {
  double t = 0.0;
  for (double s : seconds) t += s;
  return t;
}

StageTimes& StageTimes::operator+=(const StageTimes& o) {
  for (std::size_t i = 0; i < seconds.size(); ++i) {
    seconds[i] += o.seconds[i];
    calls[i] += o.calls[i];
  }
  return *this;
}

void Profiler::add(std::string_view name, double seconds) {
  auto it = entries_.find(name);
  if (it == entries_.end()) it = entries_.emplace(std::string(name), Entry{}).first;
  it->second.seconds += seconds;
  ++it->second.calls;
}

double Profiler::seconds(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? 0.0 : it->second.seconds;
}

std::uint64_t Profiler::calls(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? 0 : it->second.calls;
}

void set_worker_count(int n) {
#if defined(ELLCFD_HAVE_OPENMP)
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int worker_count() {
#if defined(ELLCFD_HAVE_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace ellcfd
