#pragma once

#include <functional>

namespace qdcor {

/// Adaptive Gauss-Kronrod (G7/K15) integration of `f` over (a, b). Either
/// endpoint may be +-infinity; infinite pieces are mapped to finite panels
/// by a rational substitution and the interval is split at 0 when 0 lies
/// inside. Refines panels until the summed error estimate drops below
/// rel_tol * |integral| (with a tiny absolute floor), throws NumericError
/// after `max_refinements` panel splits.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, int max_refinements = 10000);

}  // namespace qdcor
