#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace triq {

struct NelderMeadOptions {
  std::size_t max_iters = 2000;
  /// Stop when the simplex characteristic size falls below this.
  double size_tol = 1e-10;
  double initial_step = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Unconstrained minimization by the downhill simplex method.
NelderMeadResult nelder_mead_minimize(const Objective& f, const std::vector<double>& x0,
                                      const NelderMeadOptions& options = {});

}  // namespace triq
