#include "triq/nelder_mead.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "triq/error.hpp"

namespace triq {

namespace {

struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

double trampoline(const gsl_vector* v, void* params) {
  const auto& f = *static_cast<const Objective*>(params);
  const double value = f(std::span<const double>(v->data, v->size));
  // GSL aborts on non-finite values; steer the simplex away instead.
  return std::isfinite(value) ? value : std::numeric_limits<double>::max();
}

}  // namespace

NelderMeadResult nelder_mead_minimize(const Objective& f, const std::vector<double>& x0,
                                      const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0) throw DomainError("nelder_mead_minimize needs at least one variable");

  static const bool handler_off = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)handler_off;

  std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(n));
  std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(n));
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x.get(), i, x0[i]);
  gsl_vector_set_all(step.get(), options.initial_step);

  gsl_multimin_function fn;
  fn.n = n;
  fn.f = &trampoline;
  fn.params = const_cast<Objective*>(&f);

  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> m(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
  gsl_multimin_fminimizer_set(m.get(), &fn, x.get(), step.get());

  NelderMeadResult out;
  for (std::size_t it = 0; it < options.max_iters; ++it) {
    ++out.iterations;
    if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
    const double size = gsl_multimin_fminimizer_size(m.get());
    if (gsl_multimin_test_size(size, options.size_tol) == GSL_SUCCESS) {
      out.converged = true;
      break;
    }
  }

  const gsl_vector* best = gsl_multimin_fminimizer_x(m.get());
  out.x.assign(best->data, best->data + n);
  out.value = gsl_multimin_fminimizer_minimum(m.get());
  return out;
}

}  // namespace triq
