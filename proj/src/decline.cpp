#include "wellcast/decline.hpp"

#include "wellcast/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace wellcast {

namespace {

constexpr double kExponentialB = 1e-3; // below this the hyperbolic form is unstable

double rate_at(double qi, double di, double b, double t) {
    if (b <= kExponentialB) {
        return qi * std::exp(-di * t);
    }
    return qi / std::pow(1.0 + b * di * t, 1.0 / b);
}

struct InnerFit {
    double qi = 0.0;
    double di = 0.0;
    double sse = 0.0;
};

double sse_for(const std::vector<double>& q, double qi, double di, double b) {
    double sse = 0.0;
    for (size_t t = 0; t < q.size(); ++t) {
        const double r = q[t] - rate_at(qi, di, b, double(t));
        sse += r * r;
    }
    return sse;
}

/// Gauss-Newton over (q_initial, decline_rate) at fixed b, with step halving.
InnerFit gauss_newton(const std::vector<double>& q, double b) {
    const size_t n = q.size();

    // Log-linear slope seeds the decline rate.
    double sum_t = 0.0, sum_l = 0.0, sum_tt = 0.0, sum_tl = 0.0;
    for (size_t t = 0; t < n; ++t) {
        const double l = std::log(q[t]);
        sum_t += double(t);
        sum_l += l;
        sum_tt += double(t) * double(t);
        sum_tl += double(t) * l;
    }
    const double denom = double(n) * sum_tt - sum_t * sum_t;
    const double slope = denom > 0.0 ? (double(n) * sum_tl - sum_t * sum_l) / denom : 0.0;

    double qi = std::max(q.front(), 1e-12);
    double di = std::max(-slope, 1e-6);
    double sse = sse_for(q, qi, di, b);

    for (int iter = 0; iter < 200; ++iter) {
        double jtj00 = 0.0, jtj01 = 0.0, jtj11 = 0.0, jtr0 = 0.0, jtr1 = 0.0;
        for (size_t t = 0; t < n; ++t) {
            const double td = double(t);
            const double value = rate_at(qi, di, b, td);
            const double r = q[t] - value;
            const double d_qi = value / qi;
            double d_di;
            if (b <= kExponentialB) {
                d_di = -qi * td * std::exp(-di * td);
            } else {
                d_di = -qi * td * std::pow(1.0 + b * di * td, -1.0 / b - 1.0);
            }
            jtj00 += d_qi * d_qi;
            jtj01 += d_qi * d_di;
            jtj11 += d_di * d_di;
            jtr0 += d_qi * r;
            jtr1 += d_di * r;
        }
        const double det = jtj00 * jtj11 - jtj01 * jtj01;
        double step_qi, step_di;
        if (std::abs(det) > 1e-300) {
            step_qi = (jtj11 * jtr0 - jtj01 * jtr1) / det;
            step_di = (jtj00 * jtr1 - jtj01 * jtr0) / det;
        } else {
            step_qi = jtj00 > 0.0 ? jtr0 / jtj00 : 0.0;
            step_di = 0.0;
        }

        double scale = 1.0;
        bool improved = false;
        for (int halving = 0; halving < 40; ++halving, scale *= 0.5) {
            const double try_qi = std::max(qi + scale * step_qi, 1e-12);
            const double try_di = std::max(di + scale * step_di, 0.0);
            const double try_sse = sse_for(q, try_qi, try_di, b);
            if (try_sse < sse) {
                const double rel = (sse - try_sse) / std::max(sse, 1e-300);
                qi = try_qi;
                di = try_di;
                sse = try_sse;
                improved = rel > 1e-13;
                break;
            }
        }
        if (!improved) {
            break;
        }
    }
    return {qi, di, sse};
}

} // namespace

void ArpsParams::validate() const {
    if (q_initial <= 0.0) {
        throw DataError("arps q_initial must be > 0");
    }
    if (decline_rate < 0.0) {
        throw DataError("arps decline_rate must be >= 0");
    }
    if (b < 0.0 || b > 1.0) {
        throw DataError("arps b must lie in [0, 1]");
    }
}

double arps_rate(const ArpsParams& p, double t) {
    if (t < 0.0) {
        throw DataError("arps_rate needs t >= 0");
    }
    return rate_at(p.q_initial, p.decline_rate, p.b, t);
}

ArpsFit fit_arps(const RateSeries& series) {
    const auto& q = series.values;
    if (q.size() < 3) {
        throw DataError("arps fit needs at least 3 points");
    }
    for (double v : q) {
        if (v <= 0.0) {
            throw DataError("arps fit needs strictly positive rates");
        }
    }

    // Coarse scan over b brackets the minimum, golden-section refines it.
    double best_b = 0.0;
    double best_sse = std::numeric_limits<double>::infinity();
    InnerFit best_fit;
    const int coarse = 20;
    std::vector<double> coarse_sse(coarse + 1);
    for (int s = 0; s <= coarse; ++s) {
        const double b = double(s) / double(coarse);
        const InnerFit fit = gauss_newton(q, b);
        coarse_sse[size_t(s)] = fit.sse;
        if (fit.sse < best_sse) {
            best_sse = fit.sse;
            best_b = b;
            best_fit = fit;
        }
    }
    {
        const int s_best = int(std::lround(best_b * coarse));
        double lo = double(std::max(0, s_best - 1)) / double(coarse);
        double hi = double(std::min(coarse, s_best + 1)) / double(coarse);
        const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
        double b1 = hi - golden * (hi - lo);
        double b2 = lo + golden * (hi - lo);
        InnerFit f1 = gauss_newton(q, b1);
        InnerFit f2 = gauss_newton(q, b2);
        while (hi - lo > 1e-4) {
            if (f1.sse <= f2.sse) {
                hi = b2;
                b2 = b1;
                f2 = f1;
                b1 = hi - golden * (hi - lo);
                f1 = gauss_newton(q, b1);
            } else {
                lo = b1;
                b1 = b2;
                f1 = f2;
                b2 = lo + golden * (hi - lo);
                f2 = gauss_newton(q, b2);
            }
        }
        const double b_mid = 0.5 * (lo + hi);
        const InnerFit fm = gauss_newton(q, b_mid);
        if (fm.sse < best_sse) {
            best_sse = fm.sse;
            best_b = b_mid;
            best_fit = fm;
        }
        if (f1.sse < best_sse) {
            best_sse = f1.sse;
            best_b = b1;
            best_fit = f1;
        }
        if (f2.sse < best_sse) {
            best_sse = f2.sse;
            best_b = b2;
            best_fit = f2;
        }
    }

    ArpsFit out;
    out.params.q_initial = best_fit.qi;
    out.params.decline_rate = best_fit.di;
    out.params.b = best_b;
    out.residual_norm = std::sqrt(best_sse);
    out.non_decaying = best_fit.di < 1e-8;
    return out;
}

RateSeries forecast_arps(const ArpsParams& p, int start_step, int horizon, Date series_start,
                         int step_days) {
    if (horizon < 1) {
        throw DataError("arps forecast horizon must be >= 1");
    }
    p.validate();
    RateSeries out;
    out.start_date = series_start.plus_days(int64_t(start_step) * step_days);
    out.step_days = step_days;
    out.values.reserve(size_t(horizon));
    for (int s = 0; s < horizon; ++s) {
        out.values.push_back(arps_rate(p, double(start_step + s)));
    }
    return out;
}

} // namespace wellcast
