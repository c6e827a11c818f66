#pragma once

#include <cstddef>
#include <vector>

namespace hamflow {

/// Thomas algorithm for a tridiagonal system. lower[0] and upper[n-1] are
/// ignored. Overwrites rhs with the solution; scratch must have size n.
inline void thomas_solve(const std::vector<double>& lower,
                         const std::vector<double>& diag,
                         const std::vector<double>& upper,
                         std::vector<double>& rhs,
                         std::vector<double>& scratch) {
    const std::size_t n = diag.size();
    scratch[0] = upper[0] / diag[0];
    rhs[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double m = 1.0 / (diag[i] - lower[i] * scratch[i - 1]);
        scratch[i] = upper[i] * m;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) * m;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i] * rhs[i + 1];
}

/// y = T x for the tridiagonal matrix given by (lower, diag, upper).
inline void tridiag_apply(const std::vector<double>& lower,
                          const std::vector<double>& diag,
                          const std::vector<double>& upper,
                          const std::vector<double>& x,
                          std::vector<double>& y) {
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        double v = diag[i] * x[i];
        if (i > 0) v += lower[i] * x[i - 1];
        if (i + 1 < n) v += upper[i] * x[i + 1];
        y[i] = v;
    }
}

}  // namespace hamflow
