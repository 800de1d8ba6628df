#include "ich/runtime.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace ich {

namespace {
std::atomic<bool> g_deterministic{false};
std::atomic<int> g_thread_cap{0};
}  // namespace

void set_deterministic_mode(bool on) { g_deterministic.store(on); }
bool deterministic_mode() { return g_deterministic.load(); }

void set_thread_cap(int n) {
    g_thread_cap.store(n);
    if (n > 0) omp_set_num_threads(n);
    omp_set_max_active_levels(1);
}

int thread_cap() { return g_thread_cap.load(); }

void apply_thread_env() {
    if (deterministic_mode()) return;
    const char* env = std::getenv("ICH_THREADS");
    if (!env || !*env) return;
    int n = std::atoi(env);
    if (n > 0) set_thread_cap(n);
}

bool parallel_kernels_enabled() {
    if (deterministic_mode()) return false;
    return g_thread_cap.load() != 1;
}

}  // namespace ich
