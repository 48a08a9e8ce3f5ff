#pragma once

// Thin RAII wrapper over GSL's Nelder-Mead simplex minimiser.

#include "majorana/errors.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <functional>
#include <memory>
#include <vector>

namespace majorana::simplex {

using Objective = std::function<double(const std::vector<double>&)>;

struct Result {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimises `f` from `start` with initial simplex steps `step`. Stops when
/// the simplex characteristic size drops below `size_tolerance`.
inline Result minimize(const Objective& f, const std::vector<double>& start, const std::vector<double>& step,
                       double size_tolerance = 1e-10, int max_iterations = 20000) {
  // Non-finite objective values are reported through the return status.
  gsl_set_error_handler_off();
  const std::size_t n = start.size();
  if (n == 0 || step.size() != n) throw InvalidArgument("simplex::minimize: bad dimensions");

  struct VectorDeleter {
    void operator()(gsl_vector* v) const { gsl_vector_free(v); }
  };
  struct MinimizerDeleter {
    void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
  };
  std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(n));
  std::unique_ptr<gsl_vector, VectorDeleter> ss(gsl_vector_alloc(n));
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(x.get(), i, start[i]);
    gsl_vector_set(ss.get(), i, step[i]);
  }

  auto trampoline = [](const gsl_vector* v, void* params) -> double {
    const auto* obj = static_cast<const Objective*>(params);
    std::vector<double> arg(v->size);
    for (std::size_t i = 0; i < v->size; ++i) arg[i] = gsl_vector_get(v, i);
    return (*obj)(arg);
  };
  gsl_multimin_function fn;
  fn.n = n;
  fn.f = trampoline;
  fn.params = const_cast<Objective*>(&f);

  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> m(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
  gsl_multimin_fminimizer_set(m.get(), &fn, x.get(), ss.get());

  Result r;
  int status = GSL_CONTINUE;
  while (status == GSL_CONTINUE && r.iterations < max_iterations) {
    ++r.iterations;
    if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(m.get()), size_tolerance);
  }
  r.converged = status == GSL_SUCCESS;
  r.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.x[i] = gsl_vector_get(m->x, i);
  r.value = m->fval;
  return r;
}

}  // namespace majorana::simplex
