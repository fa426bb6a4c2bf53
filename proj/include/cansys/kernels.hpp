#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cansys/matrix2.hpp"
#include "cansys/profile.hpp"
#include "cansys/transfer.hpp"

namespace cansys {

/// serial is the reference path; parallel spreads indices over OpenMP threads.
/// Both produce identical per-index results.
enum class Exec { serial, parallel };

/// Calls f(i) for i in [0, n). In parallel mode the first exception thrown by
/// any index is rethrown on the caller's thread after the loop.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& f, Exec exec = Exec::parallel);

int worker_count();

/// M(z_k, T) for every z_k.
std::vector<Matrix2> transfer_nodes(const ArovProfile& p, std::span<const cplx> z, double T,
                                    const TransferOptions& opts, Exec exec = Exec::parallel);

}  // namespace cansys
