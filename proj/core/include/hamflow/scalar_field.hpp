#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "hamflow/errors.hpp"
#include "hamflow/polar_grid.hpp"

namespace hamflow {

/// Behavior across the poles, used by the ghost-cell extension:
/// even fields mirror (v[-1] = v[0]), odd fields flip sign (v[-1] = -v[0]).
enum class Parity { even, odd };

struct ScalarField {
    GridPtr grid;
    std::vector<double> values;
    Parity parity = Parity::even;

    ScalarField() = default;
    ScalarField(GridPtr g, std::vector<double> v, Parity p = Parity::even)
        : grid(std::move(g)), values(std::move(v)), parity(p) {}

    static ScalarField constant(const GridPtr& g, double c) {
        return ScalarField(g, std::vector<double>(g->n, c), Parity::even);
    }

    template <typename F>
    static ScalarField from_function(const GridPtr& g, F&& f, Parity p = Parity::even) {
        std::vector<double> v(g->n);
        for (int j = 0; j < g->n; ++j) v[j] = f(g->theta[j]);
        return ScalarField(g, std::move(v), p);
    }

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int j) const { return values[j]; }
    double& operator[](int j) { return values[j]; }

    bool finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

}  // namespace hamflow
