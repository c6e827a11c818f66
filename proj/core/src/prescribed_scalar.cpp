#include "hamflow/prescribed_scalar.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "hamflow/errors.hpp"

namespace hamflow {

namespace {

void check_params(double c, double p) {
    if (!std::isfinite(c) || c < 0.0)
        throw_error(ErrorKind::config, "prescribed scalar curvature requires c >= 0");
    if (!std::isfinite(p) || p <= 0.0)
        throw_error(ErrorKind::config, "prescribed scalar curvature requires p > 0");
}

std::string trim_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

PrescribedScalar PrescribedScalar::zero() { return PrescribedScalar{}; }

PrescribedScalar PrescribedScalar::rotsym_power(double c, double p) {
    check_params(c, p);
    PrescribedScalar r;
    r.family = Family::rotsym_power;
    r.c = c;
    r.p = p;
    return r;
}

PrescribedScalar PrescribedScalar::separable(double c, double p,
                                             std::vector<double> psi_poly) {
    check_params(c, p);
    if (psi_poly.empty())
        throw_error(ErrorKind::config, "separable profile needs at least one coefficient");
    PrescribedScalar r;
    r.family = Family::separable;
    r.c = c;
    r.p = p;
    r.psi_poly = std::move(psi_poly);
    // psi must be nonnegative; for even polynomials in cos^2 it suffices to
    // scan s = cos^2 theta over [0, 1].
    for (int i = 0; i <= 256; ++i) {
        const double s = i / 256.0;
        double v = 0.0, pw = 1.0;
        for (double q : r.psi_poly) {
            v += q * pw;
            pw *= s;
        }
        if (v < 0.0)
            throw_error(ErrorKind::config, "separable angular profile must be nonnegative");
    }
    double best = 0.0;
    for (int i = 0; i <= 4096; ++i) {
        const double s = i / 4096.0;
        double v = 0.0, pw = 1.0;
        for (double q : r.psi_poly) {
            v += q * pw;
            pw *= s;
        }
        best = std::max(best, v);
    }
    r.sup_psi_cache = best;
    return r;
}

double PrescribedScalar::psi(double theta) const {
    if (family != Family::separable) return 1.0;
    const double s = std::cos(theta) * std::cos(theta);
    double v = 0.0, pw = 1.0;
    for (double q : psi_poly) {
        v += q * pw;
        pw *= s;
    }
    return v;
}

double PrescribedScalar::sup_psi() const { return sup_psi_cache; }

double PrescribedScalar::value(double t, double theta) const {
    switch (family) {
        case Family::zero: return 0.0;
        case Family::rotsym_power: return c * std::pow(t, -p);
        case Family::separable: return c * std::pow(t, -p) * psi(theta);
    }
    return 0.0;
}

double PrescribedScalar::sup_theta(double t) const {
    if (family == Family::zero) return 0.0;
    return c * std::pow(t, -p) * sup_psi();
}

double PrescribedScalar::integral_decay() const {
    if (is_zero()) return 0.0;
    if (p <= 3.0) return std::numeric_limits<double>::infinity();
    return c * sup_psi() / (p - 3.0);
}

double PrescribedScalar::e_tail(double T) const {
    if (is_zero()) return 0.0;
    if (p <= 3.0) return std::numeric_limits<double>::infinity();
    // 1/2 int_T^inf (tau^2/2) c sup_psi tau^-p dtau
    return 0.25 * c * sup_psi() * std::pow(T, 3.0 - p) / (p - 3.0);
}

std::string PrescribedScalar::spec_string() const {
    switch (family) {
        case Family::zero: return "zero";
        case Family::rotsym_power:
            return "rotsym_power(" + trim_float(c) + "," + trim_float(p) + ")";
        case Family::separable: {
            std::string s = "separable(" + trim_float(c) + "," + trim_float(p) + ";";
            for (std::size_t i = 0; i < psi_poly.size(); ++i)
                s += (i ? "," : "") + trim_float(psi_poly[i]);
            return s + ")";
        }
    }
    return "zero";
}

namespace {

std::vector<double> parse_number_list(const std::string& body, char sep) {
    std::vector<double> out;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, sep)) {
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            throw_error(ErrorKind::config, "bad number in scalar-curvature spec: " + tok);
        }
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        if (pos != tok.size())
            throw_error(ErrorKind::config, "bad number in scalar-curvature spec: " + tok);
        out.push_back(v);
    }
    return out;
}

}  // namespace

PrescribedScalar PrescribedScalar::parse(const std::string& spec) {
    if (spec == "zero") return zero();
    const std::size_t open = spec.find('(');
    if (open == std::string::npos || spec.back() != ')')
        throw_error(ErrorKind::config, "unknown scalar-curvature family: " + spec);
    const std::string name = spec.substr(0, open);
    const std::string body = spec.substr(open + 1, spec.size() - open - 2);
    if (name == "rotsym_power") {
        const auto args = parse_number_list(body, ',');
        if (args.size() != 2)
            throw_error(ErrorKind::config, "rotsym_power expects (c,p): " + spec);
        return rotsym_power(args[0], args[1]);
    }
    if (name == "separable") {
        const std::size_t semi = body.find(';');
        if (semi == std::string::npos)
            throw_error(ErrorKind::config, "separable expects (c,p;q0,q1,...): " + spec);
        const auto cp = parse_number_list(body.substr(0, semi), ',');
        const auto qs = parse_number_list(body.substr(semi + 1), ',');
        if (cp.size() != 2 || qs.empty())
            throw_error(ErrorKind::config, "separable expects (c,p;q0,q1,...): " + spec);
        return separable(cp[0], cp[1], qs);
    }
    throw_error(ErrorKind::config, "unknown scalar-curvature family: " + spec);
}

}  // namespace hamflow
