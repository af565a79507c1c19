#pragma once

namespace popdyn {

enum class ExecutionPolicy { Serial, Parallel };

/// Number of worker threads for parallel kernels: the OpenMP maximum,
/// capped by the POPDYN_THREADS environment variable when set. Returns 1
/// in builds without OpenMP.
int effective_threads();

}  // namespace popdyn
