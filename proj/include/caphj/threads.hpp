#pragma once

namespace caphj {

/// Worker count for data-parallel scans: the CAPHJ_THREADS environment
/// variable when set (clamped to [1, 256]), otherwise all hardware cores.
/// Only order-independent reductions (max/min) are parallelized, so the
/// results stay bit-identical for any thread count.
int thread_count();

}  // namespace caphj
