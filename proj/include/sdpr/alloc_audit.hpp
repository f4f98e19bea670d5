#pragma once

#include <cstddef>

// Allocation audit. When enabled (SDP_AUDIT_ALLOC=1 in the environment, or
// set_enabled(true)), every heap request made through malloc/calloc/realloc
// is observed and the largest single request is recorded. Numeric buffers
// are doubles, so peak_doubles() is the figure compared against storage
// budgets such as n * lanczos_dim.
namespace sdpr::audit {

bool enabled();
void set_enabled(bool on);

// Clears the recorded peak.
void reset();

std::size_t peak_bytes();
inline std::size_t peak_doubles() { return peak_bytes() / sizeof(double); }

}  // namespace sdpr::audit
