// Runs the full verification suite and prints one PASS/FAIL line per
// criterion.  Exit status is the number of failed criteria (0 on success).
// ADDBASIS_THREADS overrides the worker count.

#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "addbasis/verify.hpp"

int main() {
  int threads = int(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (threads > 8) threads = 8;
  if (const char* env = std::getenv("ADDBASIS_THREADS")) {
    try {
      threads = std::max(1, std::min(64, std::stoi(env)));
    } catch (...) {
      std::cerr << "ignoring unparsable ADDBASIS_THREADS\n";
    }
  }
  int failed = addbasis::run_acceptance(std::cout, threads);
  return failed > 0 ? 1 : 0;
}
