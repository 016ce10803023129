#include "wellcast/synth.hpp"

#include "wellcast/errors.hpp"
#include "wellcast/rng.hpp"

#include <algorithm>
#include <cmath>

namespace wellcast {

double InjectionProgram::rate_at(int64_t t) const {
    if (t < 0) {
        return 0.0;
    }
    double rate = 0.0;
    for (const auto& [step, value] : changes) {
        if (int64_t(step) > t) {
            break;
        }
        rate = value;
    }
    return rate;
}

void SynthSpec::validate() const {
    if (producers.empty()) {
        throw ConfigError("synth spec needs at least one producer");
    }
    if (n_steps == 0) {
        throw ConfigError("synth spec needs n_steps >= 1");
    }
    if (gains.rows() != long(producers.size()) || gains.cols() != long(injectors.size()) ||
        lags.rows() != gains.rows() || lags.cols() != gains.cols()) {
        throw ConfigError("synth gains/lags must be producers x injectors");
    }
    if (!gains.allFinite()) {
        throw ConfigError("synth gains must be finite");
    }
    if ((lags.array() < 0).any()) {
        throw ConfigError("synth lags must be >= 0");
    }
    if (noise_level < 0.0) {
        throw ConfigError("synth noise level must be >= 0");
    }
    for (const auto& p : producers) {
        p.base.validate();
    }
    for (const auto& inj : injectors) {
        if (inj.programs.empty()) {
            throw ConfigError("injector '" + inj.id + "' has no injection program");
        }
        for (const auto& [phase, program] : inj.programs) {
            if (!is_injection_phase(phase)) {
                throw ConfigError("injector '" + inj.id + "' program on a production phase");
            }
            for (size_t c = 1; c < program.changes.size(); ++c) {
                if (program.changes[c].first <= program.changes[c - 1].first) {
                    throw ConfigError("injection program change points must be increasing");
                }
            }
            for (const auto& [step, rate] : program.changes) {
                if (rate < 0.0 || !std::isfinite(rate)) {
                    throw ConfigError("injection program rates must be finite and >= 0");
                }
            }
        }
    }
}

namespace {

double water_cut_at(const SynthSpec& spec, size_t t) {
    double wc;
    if (spec.water_cut_growth <= 0.0) {
        wc = spec.water_cut_initial;
    } else {
        const double mid = spec.water_cut_mid_frac * double(spec.n_steps);
        const double s = 1.0 / (1.0 + std::exp(-spec.water_cut_growth * (double(t) - mid)));
        wc = spec.water_cut_initial + (spec.water_cut_max - spec.water_cut_initial) * s;
    }
    return std::clamp(wc, 0.0, 0.95);
}

} // namespace

FieldDataset generate_field(const SynthSpec& spec) {
    spec.validate();
    const size_t n = spec.n_steps;
    const size_t n_prod = spec.producers.size();
    const size_t n_inj = spec.injectors.size();

    FieldDataset ds;
    ds.start_date = spec.start_date;
    ds.step_days = spec.step_days;
    ds.n_steps = n;

    // Injector series first: producers depend on them through the couplings.
    std::vector<std::vector<double>> inj_total(n_inj, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> inj_gas(n_inj, std::vector<double>(n, 0.0));
    std::vector<WellRecord> injector_wells(n_inj);
    for (size_t j = 0; j < n_inj; ++j) {
        const InjectorSpec& ispec = spec.injectors[j];
        WellRecord& w = injector_wells[j];
        w.well_id = ispec.id;
        w.role = WellRole::Injector;
        for (const auto& [phase, program] : ispec.programs) {
            RateSeries s;
            s.start_date = spec.start_date;
            s.step_days = spec.step_days;
            s.values.resize(n, 0.0);
            for (size_t t = 0; t < n; ++t) {
                if (t < ispec.start_step) {
                    continue;
                }
                const double rate = program.rate_at(int64_t(t));
                s.values[t] = rate;
                inj_total[j][t] += rate;
                if (phase == Phase::GasInj) {
                    inj_gas[j][t] += rate;
                }
            }
            w.series.emplace(phase, std::move(s));
        }
    }

    Rng rng(spec.seed);
    for (size_t p = 0; p < n_prod; ++p) {
        const ProducerSpec& pspec = spec.producers[p];
        WellRecord w;
        w.well_id = pspec.id;
        w.role = WellRole::Producer;
        RateSeries oil, gas, water;
        for (RateSeries* s : {&oil, &gas, &water}) {
            s->start_date = spec.start_date;
            s->step_days = spec.step_days;
            s->values.resize(n, 0.0);
        }
        for (size_t t = 0; t < n; ++t) {
            if (t < pspec.start_step) {
                if (spec.noise_level > 0.0) {
                    rng.normal(); // keep the draw sequence aligned across wells
                    rng.normal();
                    rng.normal();
                }
                continue;
            }
            const double age = double(t - pspec.start_step);
            double q_oil = arps_rate(pspec.base, age);
            double gas_recycle = 0.0;
            for (size_t j = 0; j < n_inj; ++j) {
                const int64_t lagged = int64_t(t) - int64_t(spec.lags(long(p), long(j)));
                if (lagged < 0) {
                    continue;
                }
                q_oil += spec.gains(long(p), long(j)) * inj_total[j][size_t(lagged)];
                gas_recycle += spec.gains(long(p), long(j)) * inj_gas[j][size_t(lagged)];
            }
            const double wc = water_cut_at(spec, t);
            double q_water = q_oil * wc / (1.0 - wc);
            double q_gas = spec.gas_oil_ratio * q_oil + spec.gas_coupling_scale * gas_recycle;
            if (spec.noise_level > 0.0) {
                q_oil *= 1.0 + spec.noise_level * rng.normal();
                q_gas *= 1.0 + spec.noise_level * rng.normal();
                q_water *= 1.0 + spec.noise_level * rng.normal();
            }
            oil.values[t] = std::max(0.0, q_oil);
            gas.values[t] = std::max(0.0, q_gas);
            water.values[t] = std::max(0.0, q_water);
        }
        w.series.emplace(Phase::Oil, std::move(oil));
        w.series.emplace(Phase::Gas, std::move(gas));
        w.series.emplace(Phase::Water, std::move(water));
        ds.wells.push_back(std::move(w));
    }
    for (auto& w : injector_wells) {
        ds.wells.push_back(std::move(w));
    }
    ds.validate();
    return ds;
}

SynthSpec make_synth_spec(const SynthPreset& preset) {
    if (preset.n_producers == 0) {
        throw ConfigError("synth preset needs at least one producer");
    }
    if (preset.n_water_injectors > preset.n_injectors ||
        preset.n_wag_injectors > preset.n_water_injectors) {
        throw ConfigError("synth preset injector counts are inconsistent");
    }
    Rng rng(preset.seed);
    SynthSpec spec;
    spec.n_steps = preset.n_steps;
    spec.step_days = preset.step_days;
    spec.start_date = preset.start_date;
    spec.gas_oil_ratio = preset.gas_oil_ratio;
    spec.gas_coupling_scale = preset.gas_coupling_scale;
    spec.water_cut_initial = preset.water_cut_initial;
    spec.water_cut_max = preset.water_cut_max;
    spec.water_cut_growth = preset.water_cut_growth;
    spec.noise_level = preset.noise_level;
    spec.seed = mix_seed(preset.seed, 0x6669656c64ULL);

    for (size_t p = 0; p < preset.n_producers; ++p) {
        ProducerSpec ps;
        ps.id = "P" + std::to_string(p + 1);
        ps.base.q_initial = rng.uniform(preset.oil_initial_min, preset.oil_initial_max);
        ps.base.decline_rate = rng.uniform(preset.decline_min, preset.decline_max);
        ps.base.b = rng.uniform(preset.b_min, preset.b_max);
        if (preset.rampup_steps > 0) {
            ps.start_step = size_t(rng.below(preset.rampup_steps + 1));
        }
        spec.producers.push_back(std::move(ps));
    }

    for (size_t j = 0; j < preset.n_injectors; ++j) {
        InjectorSpec is;
        is.id = "I" + std::to_string(j + 1);
        const bool water = j < preset.n_water_injectors;
        const bool wag = j < preset.n_wag_injectors;
        if (preset.rampup_steps > 0) {
            is.start_step = size_t(rng.below(preset.rampup_steps + 1));
        }
        auto make_program = [&](size_t offset) {
            InjectionProgram program;
            program.changes.emplace_back(offset,
                                         rng.uniform(preset.injection_min, preset.injection_max));
            if (preset.program_changes > 0 && preset.n_steps > 1) {
                // Strategy changes spread over the history, jittered per seed.
                const size_t span = preset.n_steps / (preset.program_changes + 1);
                size_t at = offset;
                for (size_t c = 0; c < preset.program_changes; ++c) {
                    at += std::max<size_t>(1, span / 2 + rng.below(std::max<size_t>(1, span)));
                    if (at >= preset.n_steps) {
                        break;
                    }
                    program.changes.emplace_back(
                        at, rng.uniform(preset.injection_min, preset.injection_max));
                }
            }
            return program;
        };
        if (wag) {
            is.programs.emplace(Phase::WaterInj, make_program(0));
            is.programs.emplace(Phase::GasInj, make_program(1));
        } else if (water) {
            is.programs.emplace(Phase::WaterInj, make_program(0));
        } else {
            is.programs.emplace(Phase::GasInj, make_program(0));
        }
        spec.injectors.push_back(std::move(is));
    }

    spec.gains.resize(long(preset.n_producers), long(preset.n_injectors));
    spec.lags.resize(long(preset.n_producers), long(preset.n_injectors));
    for (long p = 0; p < spec.gains.rows(); ++p) {
        for (long j = 0; j < spec.gains.cols(); ++j) {
            spec.gains(p, j) = rng.uniform(preset.gain_min, preset.gain_max);
            spec.lags(p, j) =
                preset.lag_min + int(rng.below(uint64_t(preset.lag_max - preset.lag_min + 1)));
        }
    }
    return spec;
}

} // namespace wellcast
