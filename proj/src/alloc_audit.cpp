#include "sdpr/alloc_audit.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

extern "C" {
void* __libc_malloc(std::size_t);
void* __libc_calloc(std::size_t, std::size_t);
void* __libc_realloc(void*, std::size_t);
void __libc_free(void*);
}

namespace sdpr::audit {
namespace {

// -1: not yet resolved from the environment, 0: off, 1: on.
std::atomic<int> g_state{-1};
std::atomic<std::size_t> g_peak{0};

bool resolve_state() {
  int s = g_state.load(std::memory_order_relaxed);
  if (s < 0) {
    const char* env = std::getenv("SDP_AUDIT_ALLOC");
    s = (env != nullptr && std::strcmp(env, "1") == 0) ? 1 : 0;
    int expected = -1;
    g_state.compare_exchange_strong(expected, s);
    s = g_state.load(std::memory_order_relaxed);
  }
  return s == 1;
}

inline void note(std::size_t bytes) {
  if (!resolve_state()) return;
  std::size_t cur = g_peak.load(std::memory_order_relaxed);
  while (bytes > cur &&
         !g_peak.compare_exchange_weak(cur, bytes, std::memory_order_relaxed)) {
  }
}

}  // namespace

bool enabled() { return resolve_state(); }

void set_enabled(bool on) { g_state.store(on ? 1 : 0); }

void reset() { g_peak.store(0); }

std::size_t peak_bytes() { return g_peak.load(); }

}  // namespace sdpr::audit

extern "C" {

void* malloc(std::size_t n) {
  sdpr::audit::note(n);
  return __libc_malloc(n);
}

void* calloc(std::size_t count, std::size_t size) {
  sdpr::audit::note(count * size);
  return __libc_calloc(count, size);
}

void* realloc(void* p, std::size_t n) {
  sdpr::audit::note(n);
  return __libc_realloc(p, n);
}

void free(void* p) { __libc_free(p); }

}  // extern "C"
