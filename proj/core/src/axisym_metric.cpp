#include "hamflow/axisym_metric.hpp"

#include <cmath>
#include <sstream>

#include "hamflow/sphere_ops.hpp"

namespace hamflow {

AxisymMetric::AxisymMetric(GridPtr g, std::vector<double> a_in, std::vector<double> b_in)
    : grid(std::move(g)), a(std::move(a_in)), b(std::move(b_in)) {
    if (static_cast<int>(a.size()) != grid->n || static_cast<int>(b.size()) != grid->n)
        throw_error(ErrorKind::invalid_metric, "metric component size does not match grid");
    validate();
}

void AxisymMetric::validate() const {
    for (int j = 0; j < grid->n; ++j) {
        if (!std::isfinite(a[j]) || !std::isfinite(b[j]) || a[j] <= 0.0 || b[j] <= 0.0)
            throw_error(ErrorKind::invalid_metric,
                        "metric components must be finite and positive (cell " +
                            std::to_string(j) + ")");
    }
}

AxisymMetric make_round(const GridPtr& g) {
    std::vector<double> a(g->n, 1.0), b(g->n);
    for (int j = 0; j < g->n; ++j) {
        const double s = std::sin(g->theta[j]);
        b[j] = s * s;
    }
    return normalize_area(AxisymMetric(g, std::move(a), std::move(b)));
}

AxisymMetric make_ellipsoid(const GridPtr& g, double A, double B, double C) {
    if (!(A > 0) || !(B > 0) || !(C > 0))
        throw_error(ErrorKind::invalid_metric, "ellipsoid semi-axes must be positive");
    if (std::abs(A - B) > 1e-14 * std::max(A, B))
        throw_error(ErrorKind::invalid_metric,
                    "ellipsoid must be axisymmetric (first two semi-axes equal)");
    std::vector<double> a(g->n), b(g->n);
    for (int j = 0; j < g->n; ++j) {
        const double ct = std::cos(g->theta[j]);
        const double st = std::sin(g->theta[j]);
        a[j] = A * A * ct * ct + C * C * st * st;
        b[j] = A * A * st * st;
    }
    return normalize_area(AxisymMetric(g, std::move(a), std::move(b)));
}

AxisymMetric make_warped(const GridPtr& g, const std::vector<double>& coeffs) {
    double q0 = 1.0;
    for (double c : coeffs) q0 += c;
    std::vector<double> a(g->n), b(g->n);
    for (int j = 0; j < g->n; ++j) {
        const double th = g->theta[j];
        double q = 1.0;
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            q += coeffs[k] * std::cos(2.0 * (k + 1) * th);
        if (q <= 0.0)
            throw_error(ErrorKind::invalid_metric,
                        "warp profile must stay positive on (0, pi)");
        const double w = std::sin(th) * q;
        a[j] = q0 * q0;
        b[j] = w * w;
    }
    return normalize_area(AxisymMetric(g, std::move(a), std::move(b)));
}

double ellipsoid_gauss_curvature(double A, double C, double theta) {
    const double ct = std::cos(theta), st = std::sin(theta);
    const double Q = A * A * ct * ct + C * C * st * st;
    return C * C / (Q * Q);
}

namespace {

std::vector<double> parse_args(const std::string& spec, std::size_t open) {
    if (spec.back() != ')')
        throw_error(ErrorKind::config, "malformed metric spec: " + spec);
    std::vector<double> args;
    std::string body = spec.substr(open + 1, spec.size() - open - 2);
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            throw_error(ErrorKind::config, "bad numeric argument in spec: " + spec);
        }
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        if (pos != tok.size())
            throw_error(ErrorKind::config, "bad numeric argument in spec: " + spec);
        args.push_back(v);
    }
    return args;
}

}  // namespace

AxisymMetric parse_metric_spec(const std::string& spec, const GridPtr& g) {
    if (spec == "round") return make_round(g);
    const std::size_t open = spec.find('(');
    if (open == std::string::npos)
        throw_error(ErrorKind::config, "unknown metric family: " + spec);
    const std::string name = spec.substr(0, open);
    const std::vector<double> args = parse_args(spec, open);
    if (name == "ellipsoid") {
        if (args.size() != 3)
            throw_error(ErrorKind::config, "ellipsoid expects 3 semi-axes: " + spec);
        return make_ellipsoid(g, args[0], args[1], args[2]);
    }
    if (name == "warped") {
        if (args.empty())
            throw_error(ErrorKind::config, "warped expects at least one coefficient: " + spec);
        return make_warped(g, args);
    }
    throw_error(ErrorKind::config, "unknown metric family: " + spec);
}

}  // namespace hamflow
