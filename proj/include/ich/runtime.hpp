#pragma once

namespace ich {

// Process-wide execution policy.
//
// Deterministic mode forces the serial kernel path and sequential batch
// assembly; it is what the CLI enables for seeded, reproducible runs. The
// OpenMP kernels parallelize only over independent output elements with a
// fixed per-element summation order, so they are bit-identical to the serial
// reference anyway, but deterministic mode honors the stricter contract.
void set_deterministic_mode(bool on);
bool deterministic_mode();

/// Caps the OpenMP worker count; <= 0 means the OpenMP default.
void set_thread_cap(int n);
int thread_cap();

/// Reads the ICH_THREADS environment variable (ignored in deterministic mode).
void apply_thread_env();

/// True when the OpenMP kernel path should be used.
bool parallel_kernels_enabled();

}  // namespace ich
