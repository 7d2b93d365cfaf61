#pragma once

// Central finite-difference checking of analytic gradients. The caller runs
// one analytic backward pass (filling Parameter::grad), then hands the same
// parameters plus a pure forward closure to grad_check, which perturbs every
// element in turn and compares.

#include <cmath>
#include <string>
#include <vector>

#include "emoseq/graph.hpp"

namespace emoseq {

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::size_t elements_checked = 0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;

  bool pass(double tolerance) const { return max_rel_error < tolerance; }
};

inline double relative_error(double analytic, double numeric) {
  const double diff = std::fabs(analytic - numeric);
  const double denom = std::max(std::fabs(analytic), std::fabs(numeric));
  // near-zero gradients compared absolutely; a ratio of noise is meaningless
  if (denom < 1e-6) return diff;
  return diff / denom;
}

template <class LossFn>
GradCheckReport grad_check(const std::vector<Parameter*>& params, LossFn&& loss_fn,
                           double step = 1e-5) {
  GradCheckReport report;
  for (Parameter* p : params) {
    for (std::size_t i = 0; i < p->value.numel(); ++i) {
      const double orig = p->value.data[i];
      p->value.data[i] = orig + step;
      const double lp = loss_fn();
      p->value.data[i] = orig - step;
      const double lm = loss_fn();
      p->value.data[i] = orig;
      const double numeric = (lp - lm) / (2.0 * step);
      const double analytic = p->grad.data[i];
      const double rel = relative_error(analytic, numeric);
      ++report.elements_checked;
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_param = p->name;
        report.worst_index = i;
        report.worst_analytic = analytic;
        report.worst_numeric = numeric;
      }
    }
  }
  return report;
}

}  // namespace emoseq
