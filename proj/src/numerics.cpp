// SPDX-License-Identifier: Apache-2.0

#include "oam/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "oam/errors.hpp"

namespace oam::numerics {
namespace {

constexpr double kSeriesLimit = 20.0;

double bessel_series(int order, double x) {
    const long double half = static_cast<long double>(x) / 2.0L;
    const long double half_sq = half * half;
    long double term = 1.0L;
    for (int i = 1; i <= order; ++i) {
        term *= half / static_cast<long double>(i);
    }
    long double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= -half_sq / (static_cast<long double>(k) * static_cast<long double>(k + order));
        sum += term;
        if (k > half && std::fabs(term) < 1e-22L) {
            break;
        }
    }
    return static_cast<double>(sum);
}

// Miller's algorithm: recur downward from an order far above max(order, x)
// and normalize with J_0 + 2 * sum J_2k = 1.
double bessel_miller(int order, double x) {
    const double ax = std::fabs(x);
    const double top = std::max(static_cast<double>(order), ax);
    int start = static_cast<int>(top + 20.0 + 15.0 * std::cbrt(top));
    start += start % 2;

    constexpr double kBig = 1e250;
    constexpr double kSmall = 1e-250;
    const double two_over_x = 2.0 / ax;
    double next = 0.0;   // J_{k+1}
    double cur = 1e-300; // J_k
    double norm = 0.0;
    double result = 0.0;
    for (int k = start; k > 0; --k) {
        const double prev = k * two_over_x * cur - next; // J_{k-1}
        next = cur;
        cur = prev;
        if (std::fabs(cur) > kBig) {
            cur *= kSmall;
            next *= kSmall;
            norm *= kSmall;
            result *= kSmall;
        }
        if ((k - 1) % 2 == 0 && k - 1 > 0) {
            norm += cur;
        }
        if (k - 1 == order) {
            result = cur;
        }
    }
    norm = 2.0 * norm + cur;
    double value = result / norm;
    if (x < 0.0 && order % 2 == 1) {
        value = -value;
    }
    return value;
}

void require_fit_samples(std::span<const Sample> samples) {
    if (samples.size() < 3) {
        throw FitError("curve fit needs at least 3 samples, got " + std::to_string(samples.size()));
    }
    for (const auto& s : samples) {
        if (!std::isfinite(s.x) || !std::isfinite(s.y) || s.x <= 0.0 || s.y <= 0.0) {
            throw FitError("curve fit samples must be finite and strictly positive");
        }
    }
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(),
                                              [](const Sample& a, const Sample& b) { return a.x < b.x; });
    if (lo->x == hi->x) {
        throw FitError("curve fit is degenerate: all abscissae are equal");
    }
}

// Two-parameter model with analytic partial derivatives.
struct Model {
    virtual ~Model() = default;
    virtual bool admissible(const std::array<double, 2>& p, std::span<const Sample> s) const = 0;
    virtual double value(const std::array<double, 2>& p, double x) const = 0;
    virtual std::array<double, 2> gradient(const std::array<double, 2>& p, double x) const = 0;
};

struct PowerModel final : Model {
    bool admissible(const std::array<double, 2>& p, std::span<const Sample>) const override {
        return std::isfinite(p[0]) && std::isfinite(p[1]);
    }
    double value(const std::array<double, 2>& p, double x) const override { return p[0] * std::pow(x, p[1]); }
    std::array<double, 2> gradient(const std::array<double, 2>& p, double x) const override {
        const double xb = std::pow(x, p[1]);
        return {xb, p[0] * xb * std::log(x)};
    }
};

struct RationalModel final : Model {
    bool admissible(const std::array<double, 2>& p, std::span<const Sample> s) const override {
        if (!std::isfinite(p[0]) || !std::isfinite(p[1])) {
            return false;
        }
        return std::all_of(s.begin(), s.end(), [&](const Sample& v) { return v.x + p[1] > 0.0; });
    }
    double value(const std::array<double, 2>& p, double x) const override { return p[0] / (x + p[1]); }
    std::array<double, 2> gradient(const std::array<double, 2>& p, double x) const override {
        const double inv = 1.0 / (x + p[1]);
        return {inv, -p[0] * inv * inv};
    }
};

double sum_sq(const Model& m, const std::array<double, 2>& p, std::span<const Sample> s) {
    double acc = 0.0;
    for (const auto& v : s) {
        const double r = v.y - m.value(p, v.x);
        acc += r * r;
    }
    return acc;
}

// Damped Gauss-Newton (Levenberg-Marquardt) refinement from a seed.
FitResult refine(const Model& m, std::array<double, 2> p, std::span<const Sample> s) {
    constexpr int kMaxIterations = 200;
    constexpr double kStepTol = 1e-10;
    double damping = 1e-3;
    double sse = sum_sq(m, p, s);
    int iter = 0;
    while (iter < kMaxIterations) {
        ++iter;
        double h00 = 0.0, h01 = 0.0, h11 = 0.0, g0 = 0.0, g1 = 0.0;
        for (const auto& v : s) {
            const auto grad = m.gradient(p, v.x);
            const double r = v.y - m.value(p, v.x);
            h00 += grad[0] * grad[0];
            h01 += grad[0] * grad[1];
            h11 += grad[1] * grad[1];
            g0 += grad[0] * r;
            g1 += grad[1] * r;
        }
        bool accepted = false;
        bool converged = false;
        while (damping < 1e16) {
            const double a00 = h00 * (1.0 + damping);
            const double a11 = h11 * (1.0 + damping);
            const double det = a00 * a11 - h01 * h01;
            if (det == 0.0 || !std::isfinite(det)) {
                damping *= 10.0;
                continue;
            }
            const std::array<double, 2> step{(a11 * g0 - h01 * g1) / det, (a00 * g1 - h01 * g0) / det};
            const std::array<double, 2> trial{p[0] + step[0], p[1] + step[1]};
            if (!m.admissible(trial, s)) {
                damping *= 10.0;
                continue;
            }
            const double trial_sse = sum_sq(m, trial, s);
            if (trial_sse <= sse) {
                const double rel = std::max(std::fabs(step[0]) / std::max(std::fabs(trial[0]), 1e-300),
                                            std::fabs(step[1]) / std::max(std::fabs(trial[1]), 1e-300));
                p = trial;
                sse = trial_sse;
                damping = std::max(damping / 10.0, 1e-12);
                accepted = true;
                converged = rel < kStepTol;
                break;
            }
            damping *= 10.0;
        }
        if (!accepted || converged) {
            break;
        }
    }
    FitResult out;
    out.params = {p[0], p[1]};
    out.residual_rms = std::sqrt(sse / static_cast<double>(s.size()));
    out.iterations = iter;
    return out;
}

} // namespace

double bessel_j(int order, double x) {
    if (order < 0 || order > kMaxBesselOrder) {
        throw DomainError("bessel_j: order " + std::to_string(order) + " outside [0, 64]");
    }
    if (!std::isfinite(x) || std::fabs(x) > kMaxBesselArgument) {
        throw DomainError("bessel_j: argument must be finite with |x| <= 1e4");
    }
    if (x == 0.0) {
        return order == 0 ? 1.0 : 0.0;
    }
    if (std::fabs(x) < kSeriesLimit) {
        return bessel_series(order, x);
    }
    return bessel_miller(order, x);
}

double bessel_j_signed(int order, double x) {
    if (order >= 0) {
        return bessel_j(order, x);
    }
    const double v = bessel_j(-order, x);
    return (-order) % 2 == 0 ? v : -v;
}

FitResult fit_power_model(std::span<const Sample> samples) {
    require_fit_samples(samples);
    // Exponent grid; the scale factor has a closed-form optimum per exponent.
    std::array<double, 2> best{};
    double best_sse = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 240; ++i) {
        const double b = -6.0 + 0.05 * i;
        double num = 0.0, den = 0.0;
        for (const auto& s : samples) {
            const double xb = std::pow(s.x, b);
            num += s.y * xb;
            den += xb * xb;
        }
        const std::array<double, 2> p{num / den, b};
        const double sse = sum_sq(PowerModel{}, p, samples);
        if (sse < best_sse) {
            best_sse = sse;
            best = p;
        }
    }
    return refine(PowerModel{}, best, samples);
}

FitResult fit_rational_model(std::span<const Sample> samples) {
    require_fit_samples(samples);
    const double x_min =
        std::min_element(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) {
            return a.x < b.x;
        })->x;
    // Log-spaced grid over the pole distance x_min + q.
    std::array<double, 2> best{};
    double best_sse = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 240; ++i) {
        const double shift = x_min * std::pow(10.0, -3.0 + 0.025 * i);
        const double q = shift - x_min;
        double num = 0.0, den = 0.0;
        for (const auto& s : samples) {
            const double inv = 1.0 / (s.x + q);
            num += s.y * inv;
            den += inv * inv;
        }
        const std::array<double, 2> p{num / den, q};
        const double sse = sum_sq(RationalModel{}, p, samples);
        if (sse < best_sse) {
            best_sse = sse;
            best = p;
        }
    }
    return refine(RationalModel{}, best, samples);
}

double solve_scalar(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (!(lo < hi) || !(tol > 0.0)) {
        throw DomainError("solve_scalar: requires lo < hi and tol > 0");
    }
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fb)) {
        throw BracketError("solve_scalar: function is not finite at the bracket ends");
    }
    if (fa == 0.0) {
        return a;
    }
    if (fb == 0.0) {
        return b;
    }
    if ((fa > 0.0) == (fb > 0.0)) {
        throw BracketError("solve_scalar: no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < 400; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = std::max(2.0 * eps * std::fabs(b), 0.5 * tol);
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) {
            return b;
        }
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) {
                q = -q;
            }
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::fabs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    return b;
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (!(lo <= hi) || !(tol > 0.0)) {
        throw DomainError("golden_section_max: requires lo <= hi and tol > 0");
    }
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

double simpson(const std::function<double(double)>& f, double lo, double hi, int intervals) {
    if (intervals < 2) {
        throw DomainError("simpson: needs at least 2 intervals");
    }
    intervals += intervals % 2;
    const double h = (hi - lo) / intervals;
    double acc = f(lo) + f(hi);
    for (int i = 1; i < intervals; ++i) {
        acc += (i % 2 == 1 ? 4.0 : 2.0) * f(lo + i * h);
    }
    return acc * h / 3.0;
}

} // namespace oam::numerics
