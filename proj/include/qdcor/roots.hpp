#pragma once

#include <functional>

namespace qdcor {

/// Bisection on [lo, hi] for f(x) = 0, assuming f(lo) and f(hi) bracket the
/// root (f(lo) <= 0 <= f(hi) or the reverse). Runs until the bracket width
/// drops below `tol` (absolute). Throws NumericError when the initial
/// bracket carries no sign change.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol = 1e-12, int max_iter = 200);

}  // namespace qdcor
