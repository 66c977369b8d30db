#pragma once

#include <cstdint>
#include <string>

namespace bpv {

struct SelftestResult {
  bool pass = false;
  int checks = 0;
  int failures = 0;
  std::string report;  // JSON; no timestamps, so equal seeds give equal bytes
};

// Fast invariant suite over every module. The seed drives the random grid
// functions and the PDE multistart.
SelftestResult run_selftest(std::uint64_t seed);

}  // namespace bpv
