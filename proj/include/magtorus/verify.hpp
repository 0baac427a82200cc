#pragma once

// The invariant suite behind `magtorus verify`: cocycle and flux checks,
// group laws, orthonormality, quasiperiodicity, and the bundle cocycle, each
// reported as a measured residual against its pinned tolerance.

#include <string>
#include <vector>

#include "magtorus/gauge.hpp"

namespace magtorus {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyOptions {
  int grid = 0;        // 0: pick from the dimension
  int samples = 100;   // cocycle / sampling loops
  int basis_n_max = 2; // orthonormality block size
  Exec exec = Exec::parallel;
};

std::vector<CheckResult> run_verify_suite(const GaugeConfig& cfg, const VerifyOptions& opts = {});

}  // namespace magtorus
