#include "cansys/kernels.hpp"

#include <exception>
#include <mutex>

#include <omp.h>

namespace cansys {

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& f, Exec exec) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr first;
  std::size_t first_index = n;
  std::mutex mu;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      f(static_cast<std::size_t>(i));
    } catch (...) {
      // Keep the lowest failing index so the reported error is deterministic.
      std::lock_guard lock(mu);
      if (static_cast<std::size_t>(i) < first_index) {
        first_index = static_cast<std::size_t>(i);
        first = std::current_exception();
      }
    }
  }
  if (first) std::rethrow_exception(first);
}

int worker_count() { return omp_get_max_threads(); }

std::vector<Matrix2> transfer_nodes(const ArovProfile& p, std::span<const cplx> z, double T,
                                    const TransferOptions& opts, Exec exec) {
  std::vector<Matrix2> out(z.size());
  for_each_index(z.size(), [&](std::size_t k) { out[k] = transfer(p, z[k], T, opts).matrix; }, exec);
  return out;
}

}  // namespace cansys
