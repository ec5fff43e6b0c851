#include "qdcor/roots.hpp"

#include <cmath>

#include "qdcor/errors.hpp"

namespace qdcor {

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::isnan(flo) || std::isnan(fhi) || (flo > 0.0) == (fhi > 0.0))
        throw NumericError("bisect: no sign change over [" + std::to_string(lo) +
                           ", " + std::to_string(hi) + "]");
    for (int i = 0; i < max_iter && (hi - lo) > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (fhi > 0.0)) {
            hi = mid;
            fhi = fmid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace qdcor
