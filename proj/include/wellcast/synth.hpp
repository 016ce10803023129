#ifndef WELLCAST_SYNTH_HPP
#define WELLCAST_SYNTH_HPP

#include "wellcast/dataset.hpp"
#include "wellcast/decline.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace wellcast {

/// Piecewise-constant planned rate: value of the last change at or before t,
/// 0 before the first change point.
struct InjectionProgram {
    std::vector<std::pair<size_t, double>> changes; // (step, rate), sorted by step

    double rate_at(int64_t t) const;
};

struct ProducerSpec {
    std::string id;
    ArpsParams base;       // decline of the uncoupled oil rate, per step
    size_t start_step = 0; // zero rates before this step (ramp-up)
};

struct InjectorSpec {
    std::string id;
    std::map<Phase, InjectionProgram> programs; // WaterInj and/or GasInj (both = WAG)
    size_t start_step = 0;
};

/**
 * Injection-driven synthetic field. Producer oil is the Arps base plus
 * linear lagged couplings to total injection; water follows the field water
 * cut; gas is GOR-proportional plus lagged gas-injection recycle. All rates
 * are clamped at 0 and reproducible per seed.
 */
struct SynthSpec {
    std::vector<ProducerSpec> producers;
    std::vector<InjectorSpec> injectors;
    size_t n_steps = 0;
    int step_days = 1;
    Date start_date;

    Eigen::MatrixXd gains; // producers x injectors, applied to total injection
    Eigen::MatrixXi lags;  // producers x injectors, steps >= 0

    double gas_oil_ratio = 1.2;
    double gas_coupling_scale = 0.3; // recycle of lagged gas injection into q_g

    // Water cut: water_cut_initial when growth = 0, otherwise a logistic ramp
    // to water_cut_max centered at water_cut_mid_frac * n_steps.
    double water_cut_initial = 0.25;
    double water_cut_max = 0.8;
    double water_cut_growth = 0.0; // per step
    double water_cut_mid_frac = 0.5;

    double noise_level = 0.0; // relative std of multiplicative noise
    uint64_t seed = 0;

    void validate() const;
};

/// Config-facing knobs expanded deterministically (per seed) into a SynthSpec.
struct SynthPreset {
    size_t n_producers = 6;
    size_t n_injectors = 7;
    size_t n_water_injectors = 3; // remainder inject gas
    size_t n_wag_injectors = 0;   // taken from the water count, carry both phases
    size_t n_steps = 2920;
    int step_days = 1;
    Date start_date = Date::from_ymd(2015, 1, 1);

    double oil_initial_min = 800.0, oil_initial_max = 2400.0;
    double decline_min = 0.0003, decline_max = 0.0012; // per step
    double b_min = 0.0, b_max = 0.0;                   // 0 = exponential declines

    double gain_min = 0.02, gain_max = 0.08;
    int lag_min = 1, lag_max = 5;

    size_t program_changes = 10; // strategy changes per injector
    double injection_min = 500.0, injection_max = 3000.0;

    double gas_oil_ratio = 1.2;
    double gas_coupling_scale = 0.3;
    double water_cut_initial = 0.25;
    double water_cut_max = 0.8;
    double water_cut_growth = 0.0;
    double noise_level = 0.0;
    size_t rampup_steps = 0; // wells start within [0, rampup_steps]
    uint64_t seed = 1;
};

SynthSpec make_synth_spec(const SynthPreset& preset);

FieldDataset generate_field(const SynthSpec& spec);

} // namespace wellcast

#endif
