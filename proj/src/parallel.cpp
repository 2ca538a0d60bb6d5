#include "mmt/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace mmt {

namespace {

int from_env() {
  const char* s = std::getenv("THREADS");
  if (s != nullptr) {
    try {
      const int n = std::stoi(s);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return omp_get_num_procs();
}

std::atomic<int>& cap() {
  static std::atomic<int> n{from_env()};
  return n;
}

}  // namespace

int max_workers() { return cap().load(); }

void set_max_workers(int n) { cap().store(n > 0 ? n : from_env()); }

}  // namespace mmt
