#pragma once

namespace mmt {

enum class Execution { serial, parallel };

/// Worker cap for OpenMP regions: THREADS env var if set, else all cores.
int max_workers();
/// Override the cap (tests use this to compare worker counts).
void set_max_workers(int n);

}  // namespace mmt
