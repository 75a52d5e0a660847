#pragma once

#include <cstdint>
#include <vector>

#include "scopt/surrogate.hpp"

namespace scopt {

/// Randomized validity sweep over the six surrogate constructors: draws
/// positive instances and in-domain sample points, aggregates the worst
/// ConditionReport entries per kind.
struct SweepOptions {
  int instances = 100;
  int samples = 200;
  std::uint64_t seed = 1;
  double upper_tol = 1e-9;
  double gap_tol = 1e-9;
  double gradient_tol = 1e-6;
};

struct SweepResult {
  int kind = 0;  // 1..6
  double max_upper_violation = 0.;
  double max_anchor_gap = 0.;
  double max_gradient_mismatch = 0.;

  bool pass(const SweepOptions& opt) const {
    return max_upper_violation <= opt.upper_tol && max_anchor_gap <= opt.gap_tol &&
           max_gradient_mismatch <= opt.gradient_tol;
  }
};

SweepResult sweep_surrogate(int kind, const SweepOptions& opt = {});
std::vector<SweepResult> sweep_all_surrogates(const SweepOptions& opt = {});

}  // namespace scopt
