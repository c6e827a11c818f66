#include "hamflow/rotsym.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hamflow/errors.hpp"

namespace hamflow {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Fritsch-Carlson monotone knot derivatives.
std::vector<double> pchip_derivs(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> h(n - 1), delta(n - 1), d(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    d[0] = delta[0];
    d[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    // Clamp the end slopes to preserve monotonicity.
    for (std::size_t i : {std::size_t(0), n - 1}) {
        const double del = (i == 0) ? delta[0] : delta[n - 2];
        if (d[i] * del <= 0.0)
            d[i] = 0.0;
        else if (std::abs(d[i]) > 3.0 * std::abs(del))
            d[i] = 3.0 * del;
    }
    return d;
}

struct CubicPiece {
    double c0, c1, c2, c3, x0;
    double eval(double x) const {
        const double s = x - x0;
        return c0 + s * (c1 + s * (c2 + s * c3));
    }
    double eval_d(double x) const {
        const double s = x - x0;
        return c1 + s * (2.0 * c2 + s * 3.0 * c3);
    }
    double eval_dd(double x) const {
        const double s = x - x0;
        return 2.0 * c2 + 6.0 * c3 * s;
    }
};

CubicPiece piece(const MassProfile& p, std::size_t i) {
    const double h = p.r_knots[i + 1] - p.r_knots[i];
    const double y0 = p.m_knots[i], y1 = p.m_knots[i + 1];
    const double d0 = p.d_knots[i], d1 = p.d_knots[i + 1];
    CubicPiece c;
    c.x0 = p.r_knots[i];
    c.c0 = y0;
    c.c1 = d0;
    c.c2 = (3.0 * (y1 - y0) / h - 2.0 * d0 - d1) / h;
    c.c3 = (d0 + d1 - 2.0 * (y1 - y0) / h) / (h * h);
    return c;
}

std::size_t locate(const MassProfile& p, double r) {
    const auto it = std::upper_bound(p.r_knots.begin(), p.r_knots.end(), r);
    std::size_t i = static_cast<std::size_t>(it - p.r_knots.begin());
    if (i == 0) return 0;
    if (i >= p.r_knots.size()) return p.r_knots.size() - 2;
    return i - 1;
}

void validate_profile(const MassProfile& p, double r_probe_max = 1e4) {
    // m_H nondecreasing, below r/2, finite at infinity.
    double prev = -1e308;
    for (int i = 0; i <= 512; ++i) {
        const double r = std::max(p.r_min, 1e-12) +
                         (r_probe_max - std::max(p.r_min, 1e-12)) * i / 512.0;
        const double m = p.value(r);
        if (!std::isfinite(m))
            throw_error(ErrorKind::domain, "mass profile not finite at r=" + fmt(r));
        if (m < prev - 1e-12)
            throw_error(ErrorKind::domain, "mass profile must be nondecreasing");
        if (m >= 0.5 * r)
            throw_error(ErrorKind::domain,
                        "mass profile violates m_H(r) < r/2 at r=" + fmt(r));
        prev = m;
    }
}

}  // namespace

MassProfile MassProfile::constant(double m) {
    if (!(m >= 0.0))
        throw_error(ErrorKind::domain, "constant profile requires m >= 0");
    MassProfile p;
    p.kind = Kind::constant;
    p.m_const = m;
    p.r_min = 2.0 * m;  // domain limited by m < r/2
    return p;
}

MassProfile MassProfile::powerlaw_approach(double m_inf, double p_exp) {
    if (!(m_inf >= 0.0) || !(p_exp > 0.0))
        throw_error(ErrorKind::domain, "powerlaw_approach requires m_inf >= 0 and p > 0");
    MassProfile p;
    p.kind = Kind::powerlaw;
    p.m_inf = m_inf;
    p.p = p_exp;
    p.r_min = 1.0;  // m_H(1) = 0
    validate_profile(p);
    return p;
}

MassProfile MassProfile::table(std::vector<double> r, std::vector<double> m) {
    if (r.size() < 3 || r.size() != m.size())
        throw_error(ErrorKind::domain, "table profile needs >= 3 matching knots");
    for (std::size_t i = 1; i < r.size(); ++i) {
        if (r[i] <= r[i - 1])
            throw_error(ErrorKind::domain, "table radii must be strictly increasing");
        if (m[i] < m[i - 1])
            throw_error(ErrorKind::domain, "table masses must be nondecreasing");
    }
    MassProfile p;
    p.kind = Kind::table;
    p.r_min = r.front();
    p.d_knots = pchip_derivs(r, m);
    p.r_knots = std::move(r);
    p.m_knots = std::move(m);
    validate_profile(p, p.r_knots.back());
    return p;
}

double MassProfile::value(double r) const {
    switch (kind) {
        case Kind::constant: return m_const;
        case Kind::powerlaw: return m_inf * (1.0 - std::pow(r, -p));
        case Kind::table: {
            if (r <= r_knots.front()) return m_knots.front();
            if (r >= r_knots.back()) return m_knots.back();
            return piece(*this, locate(*this, r)).eval(r);
        }
    }
    return 0.0;
}

double MassProfile::deriv(double r) const {
    switch (kind) {
        case Kind::constant: return 0.0;
        case Kind::powerlaw: return m_inf * p * std::pow(r, -p - 1.0);
        case Kind::table: {
            if (r < r_knots.front() || r > r_knots.back()) return 0.0;
            return piece(*this, locate(*this, r)).eval_d(r);
        }
    }
    return 0.0;
}

double MassProfile::second_deriv(double r) const {
    switch (kind) {
        case Kind::constant: return 0.0;
        case Kind::powerlaw: return -m_inf * p * (p + 1.0) * std::pow(r, -p - 2.0);
        case Kind::table: {
            if (r < r_knots.front() || r > r_knots.back()) return 0.0;
            return piece(*this, locate(*this, r)).eval_dd(r);
        }
    }
    return 0.0;
}

double MassProfile::second_deriv_knot_jump() const {
    if (kind != Kind::table) return 0.0;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < r_knots.size(); ++i) {
        const double left = piece(*this, i - 1).eval_dd(r_knots[i]);
        const double right = piece(*this, i).eval_dd(r_knots[i]);
        const double scale = std::max({std::abs(left), std::abs(right), 1e-14});
        worst = std::max(worst, std::abs(left - right) / scale);
    }
    return worst;
}

double MassProfile::adm_limit() const {
    switch (kind) {
        case Kind::constant: return m_const;
        case Kind::powerlaw: return m_inf;
        case Kind::table: return m_knots.back();
    }
    return 0.0;
}

std::string MassProfile::spec_string() const {
    switch (kind) {
        case Kind::constant: return "constant(" + fmt(m_const) + ")";
        case Kind::powerlaw:
            return "powerlaw_approach(" + fmt(m_inf) + "," + fmt(p) + ")";
        case Kind::table: {
            std::string s = "table(";
            for (std::size_t i = 0; i < r_knots.size(); ++i)
                s += (i ? ";" : "") + fmt(r_knots[i]) + ":" + fmt(m_knots[i]);
            return s + ")";
        }
    }
    return "constant(0)";
}

MassProfile MassProfile::parse(const std::string& spec) {
    const std::size_t open = spec.find('(');
    if (open == std::string::npos || spec.back() != ')')
        throw_error(ErrorKind::config, "unknown mass profile: " + spec);
    const std::string name = spec.substr(0, open);
    const std::string body = spec.substr(open + 1, spec.size() - open - 2);
    auto nums = [&](const std::string& s, char sep) {
        std::vector<double> out;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, sep)) out.push_back(std::stod(tok));
        return out;
    };
    try {
        if (name == "constant") {
            const auto a = nums(body, ',');
            if (a.size() != 1) throw std::invalid_argument(spec);
            return constant(a[0]);
        }
        if (name == "powerlaw_approach") {
            const auto a = nums(body, ',');
            if (a.size() != 2) throw std::invalid_argument(spec);
            return powerlaw_approach(a[0], a[1]);
        }
        if (name == "table") {
            std::vector<double> rs, ms;
            std::stringstream ss(body);
            std::string pair;
            while (std::getline(ss, pair, ';')) {
                const std::size_t colon = pair.find(':');
                if (colon == std::string::npos) throw std::invalid_argument(spec);
                rs.push_back(std::stod(pair.substr(0, colon)));
                ms.push_back(std::stod(pair.substr(colon + 1)));
            }
            return table(std::move(rs), std::move(ms));
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw_error(ErrorKind::config, "malformed mass profile spec: " + spec);
    }
    throw_error(ErrorKind::config, "unknown mass profile: " + spec);
}

double scalar_from_profile(const MassProfile& p, double t) {
    if (t < std::max(p.r_min, 1.0) - 1e-12)
        throw_error(ErrorKind::domain,
                    "profile scalar curvature requested below the domain start");
    return 4.0 * p.deriv(t) / (t * t);
}

double schwarzschild_u(double m, double t) {
    if (t <= 2.0 * m)
        throw_error(ErrorKind::horizon,
                    "lapse undefined at or inside the horizon: t=" + fmt(t) +
                        " <= 2m=" + fmt(2.0 * m));
    return 1.0 / std::sqrt(1.0 - 2.0 * m / t);
}

double rotsym_u(const MassProfile& p, double t) {
    const double m = p.value(t);
    if (t <= 2.0 * m)
        throw_error(ErrorKind::horizon, "profile lapse undefined: m_H(t) >= t/2");
    return 1.0 / std::sqrt(1.0 - 2.0 * m / t);
}

ProfileDecayReport check_profile_decay(const MassProfile& p, double alpha, double r_max) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw_error(ErrorKind::domain, "alpha must lie in (0, 1)");
    ProfileDecayReport rep;
    rep.alpha = alpha;
    if (p.second_deriv_knot_jump() > 1e-6) {
        // A kinked interpolant has no usable second derivative; report
        // honestly instead of asserting a bound.
        rep.verifiable = false;
        rep.passes = false;
        return rep;
    }
    const double r_lo = std::max(p.r_min, 1.0);
    double sup_weighted = 0.0;
    double sup_holder = 0.0;
    for (double r = r_lo; r <= r_max; r *= 2.0) {
        double window_sup = 0.0;
        for (int i = 0; i <= 32; ++i) {
            const double rr = r * std::pow(4.0, i / 32.0);
            window_sup = std::max(window_sup, std::abs(p.second_deriv(rr)));
        }
        sup_weighted = std::max(sup_weighted, r * r * window_sup);
        sup_holder = std::max(sup_holder,
                              16.0 * std::pow(3.0, 1.0 - alpha) * r * window_sup);
    }
    rep.sup_r2_mpp = sup_weighted;
    rep.holder_constant = sup_holder;
    rep.passes = std::isfinite(sup_weighted);
    return rep;
}

double c0_rotsym(const MassProfile& p, double t_max) {
    const double t_lo = std::max(p.r_min, 1.0);
    if (t_max < t_lo)
        throw_error(ErrorKind::domain, "c0_rotsym needs t_max >= the domain start");
    const double m1 = p.value(t_lo);
    auto g = [&](double t) { return 2.0 * p.value(t) - 2.0 * m1 - (t - t_lo); };

    // Coarse scan, then golden-section refinement around the best cell.
    const int N = 4096;
    double best = 0.0, best_t = t_lo;
    for (int i = 0; i <= N; ++i) {
        const double t = t_lo + (t_max - t_lo) * i / N;
        const double v = g(t);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    double lo = std::max(t_lo, best_t - (t_max - t_lo) / N);
    double hi = std::min(t_max, best_t + (t_max - t_lo) / N);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = g(x1);
        }
    }
    best = std::max(best, std::max(f1, f2));
    return std::max(0.0, best);
}

}  // namespace hamflow
