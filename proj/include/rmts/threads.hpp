#pragma once

namespace rmts {

// Worker cap for parallel path sets: the RMTS_THREADS environment variable,
// with 0 or unset meaning the hardware concurrency.
unsigned worker_count();

} // namespace rmts
