#pragma once

namespace occ {

/// Selects between the OpenMP kernels and their serial reference implementations.
/// Both paths produce bit-identical results; the serial one exists for testing and
/// benchmarking.
enum class Exec { Serial, Parallel };

/// Threads OpenMP would use for a parallel region (1 when built without OpenMP).
int available_threads() noexcept;

}  // namespace occ
