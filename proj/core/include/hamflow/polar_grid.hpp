#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "hamflow/errors.hpp"

namespace hamflow {

/// Cell-centered polar-angle grid on (0, pi). Cell centers sit at
/// theta_j = (j + 1/2) * pi/n, so the poles are never grid points and
/// pole regularity is handled by parity ghost cells in the stencils.
struct PolarGrid {
    int n = 0;
    double dtheta = 0.0;
    std::vector<double> theta;

    static PolarGrid make(int n) {
        if (n < 16 || n % 2 != 0)
            throw_error(ErrorKind::domain,
                        "grid size must be even and >= 16, got " + std::to_string(n));
        PolarGrid g;
        g.n = n;
        g.dtheta = std::numbers::pi / n;
        g.theta.resize(n);
        for (int j = 0; j < n; ++j) g.theta[j] = (j + 0.5) * g.dtheta;
        return g;
    }
};

using GridPtr = std::shared_ptr<const PolarGrid>;

inline GridPtr make_grid(int n) {
    return std::make_shared<const PolarGrid>(PolarGrid::make(n));
}

}  // namespace hamflow
