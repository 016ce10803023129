#ifndef WELLCAST_DECLINE_HPP
#define WELLCAST_DECLINE_HPP

#include "wellcast/dataset.hpp"

namespace wellcast {

/**
 * Decline-curve parameters: q(t) = q_initial / (1 + b * decline_rate * t)^(1/b),
 * with the exponential form q_initial * exp(-decline_rate * t) for b <= 1e-3
 * and the harmonic curve as the b = 1 case. decline_rate is per step.
 */
struct ArpsParams {
    double q_initial = 1.0;
    double decline_rate = 0.0;
    double b = 0.5;

    void validate() const;
};

double arps_rate(const ArpsParams& p, double t);

struct ArpsFit {
    ArpsParams params;
    double residual_norm = 0.0;
    bool non_decaying = false; // decline_rate pinned at ~0
};

/// Least-squares fit of the decline curve: golden-section search over
/// b in [0, 1] around a Gauss-Newton solve for (q_initial, decline_rate).
/// Needs at least 3 strictly positive points.
ArpsFit fit_arps(const RateSeries& series);

/// Rates at steps start_step .. start_step+horizon-1 on the given grid.
RateSeries forecast_arps(const ArpsParams& p, int start_step, int horizon,
                         Date series_start = {}, int step_days = 1);

} // namespace wellcast

#endif
