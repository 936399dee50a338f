#include "hardylab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "hardylab/errors.hpp"

namespace hardylab::quadrature {

namespace {

// Kronrod abscissae (non-negative half) and weights; the 7-point Gauss rule
// uses the odd-indexed abscissae.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
    double a;
    double b;
    double value;
    double error;
    double abs_value;  // integral of |f|, for the roundoff floor
};

Panel gk15(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

    Panel p{a, b, resk * half, std::abs((resk - resg) * half), resabs * std::abs(half)};
    resasc *= std::abs(half);
    if (resasc != 0.0 && p.error != 0.0) {
        p.error = resasc * std::min(1.0, std::pow(200.0 * p.error / resasc, 1.5));
    }
    if (p.abs_value > std::numeric_limits<double>::min() / (50.0 * kEps)) {
        p.error = std::max(p.error, 50.0 * kEps * p.abs_value);
    }
    if (!std::isfinite(p.value) || !std::isfinite(p.error)) {
        throw NonConvergence("integrand is not finite on [" + std::to_string(a) + ", " +
                             std::to_string(b) + "]");
    }
    return p;
}

struct ByError {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a;  // deterministic tie break
    }
};

}  // namespace

QuadResult QuadResult::scaled(double c) const {
    return {value * c, error_estimate * std::abs(c), subdivisions};
}

QuadResult integrate(const Integrand& f, double a, double b, double tol, double tol_abs) {
    if (!(std::isfinite(a) && std::isfinite(b))) throw InvalidArgument("integration limits must be finite");
    if (a == b) return {};
    if (a > b) throw InvalidArgument("integration interval must satisfy a < b");
    if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");

    std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
    Panel first = gk15(f, a, b);
    double total = first.value;
    double total_err = first.error;
    double total_abs = first.abs_value;
    heap.push(first);
    long panels = 1;

    auto converged = [&] {
        const double target = std::max(tol * std::abs(total), tol_abs);
        return total_err <= target || total_err <= 50.0 * kEps * total_abs;
    };

    while (!converged()) {
        if (panels >= kPanelBudget) {
            throw NonConvergence("subdivision budget exhausted on [" + std::to_string(a) + ", " +
                                 std::to_string(b) + "]");
        }
        Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Panel cannot be split further in floating point; accept what we have.
            break;
        }
        heap.pop();
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_abs += left.abs_value + right.abs_value - worst.abs_value;
        heap.push(left);
        heap.push(right);
        ++panels;
        if (panels % 1024 == 0) {
            // Refresh the running sums to stop drift.
            auto copy = heap;
            total = total_err = total_abs = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                total_err += copy.top().error;
                total_abs += copy.top().abs_value;
                copy.pop();
            }
        }
    }

    std::vector<Panel> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    QuadResult r;
    for (const Panel& p : all) {
        r.value += p.value;
        r.error_estimate += p.error;
    }
    r.subdivisions = panels;
    return r;
}

QuadResult integrate_power_distance(const Integrand& f, double alpha, double x_near, double x_far,
                                    double tol) {
    if (!(x_near >= 0.0 && x_near < x_far && std::isfinite(x_far))) {
        if (x_near == x_far) return {};
        throw InvalidArgument("power integral needs 0 <= x_near < x_far < inf");
    }
    if (x_near == 0.0) {
        if (!(alpha > -1.0)) throw DivergentIntegral("x^alpha is not integrable at 0 for alpha <= -1");
        const double p = alpha + 1.0;
        const double u_far = std::pow(x_far, p);
        auto g = [&](double u) { return f(std::pow(u, 1.0 / p)); };
        return integrate(g, 0.0, u_far, tol).scaled(1.0 / p);
    }
    const double p = alpha + 1.0;
    auto g = [&](double sigma) { return f(std::exp(sigma)) * std::exp(p * sigma); };
    return integrate(g, std::log(x_near), std::log(x_far), tol);
}

QuadResult integrate_power_endpoint(const Integrand& f_smooth, double alpha, Endpoint endpoint,
                                    double a, double b, double tol) {
    if (!(alpha > -1.0)) throw InvalidArgument("alpha must exceed -1 for an integrable endpoint");
    if (!(a < b)) {
        if (a == b) return {};
        throw InvalidArgument("integration interval must satisfy a < b");
    }
    if (endpoint == Endpoint::Left) {
        return integrate_power_distance([&](double x) { return f_smooth(a + x); }, alpha, 0.0, b - a, tol);
    }
    return integrate_power_distance([&](double x) { return f_smooth(b - x); }, alpha, 0.0, b - a, tol);
}

QuadResult integrate_log_weighted(const Integrand& f_smooth, double gamma, double delta, double b,
                                  double tol) {
    if (!(delta > 0.0 && b <= 1.0 && delta <= b)) {
        throw InvalidArgument("log-weighted interval must lie in (0, 1]");
    }
    if (!(gamma >= 1.0)) throw InvalidArgument("log weight exponent gamma must be >= 1");
    if (delta == b) return {};
    const double tau_lo = 1.0 - std::log(b);
    const double tau_hi = 1.0 - std::log(delta);
    auto g = [&](double tau) { return f_smooth(std::exp(1.0 - tau)) * std::pow(tau, -gamma); };
    return integrate(g, tau_lo, tau_hi, tol);
}

double power_integral(double alpha, double x1, double x2) {
    if (!(x1 >= 0.0 && x1 <= x2)) throw InvalidArgument("power integral needs 0 <= x1 <= x2");
    if (x1 == x2) return 0.0;
    const double p = alpha + 1.0;
    if (x1 == 0.0 && p <= 0.0) throw DivergentIntegral("x^alpha diverges at 0");
    if (std::isinf(x2) && p >= 0.0) throw DivergentIntegral("x^alpha diverges at infinity");
    if (p == 0.0) return std::log(x2 / x1);
    if (x1 == 0.0) return std::pow(x2, p) / p;
    if (std::isinf(x2)) return std::pow(x1, p) / -p;
    const double lr = std::log(x1 / x2);
    if (p > 0.0) return std::pow(x2, p) * -std::expm1(p * lr) / p;
    return std::pow(x1, p) * -std::expm1(-p * lr) / -p;
}

double log_weight_integral(double gamma, double delta, double b) {
    if (!(delta > 0.0 && b <= 1.0 && delta <= b)) {
        throw InvalidArgument("log-weighted interval must lie in (0, 1]");
    }
    const double tau_lo = 1.0 - std::log(b);
    // log(tau_hi / tau_lo) without forming the ratio of two close numbers.
    const double lratio = std::log1p(std::log(b / delta) / tau_lo);
    if (gamma == 1.0) return lratio;
    return std::pow(tau_lo, 1.0 - gamma) * -std::expm1((1.0 - gamma) * lratio) / (gamma - 1.0);
}

}  // namespace hardylab::quadrature
