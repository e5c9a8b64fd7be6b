#include "hfs/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "hfs/rng.hpp"

namespace hfs {

std::string to_string(SweepDirection d) {
    return d == SweepDirection::down ? "down" : "up";
}

SweepDirection direction_from_string(const std::string& s) {
    if (s == "down") return SweepDirection::down;
    if (s == "up") return SweepDirection::up;
    throw std::invalid_argument("unknown sweep direction: " + s);
}

void SweepProtocol::validate() const {
    if (!(v_step > 0)) throw std::domain_error("SweepProtocol: v_step must be positive");
    if (!(v_start >= v_end))
        throw std::domain_error("SweepProtocol: v_start must be >= v_end for a downward sweep");
    if (!(v_ac > 0)) throw std::domain_error("SweepProtocol: v_ac must be positive");
    if (!(f_ac > 0)) throw std::domain_error("SweepProtocol: f_ac must be positive");
    if (!(integration_time > 0))
        throw std::domain_error("SweepProtocol: integration_time must be positive");
}

int SweepProtocol::samples_per_direction() const {
    return static_cast<int>(std::llround((v_start - v_end) / v_step)) + 1;
}

double ideal_conductance(const JunctionDevice& device, const Material2DEG& material,
                         double v_g, double temperature, const ConductanceModel& model) {
    device.calibration.validate();
    const auto& c = constants();
    const double v_p = device.calibration.v_pinch_star;
    if (v_g <= v_p) return 0.0;

    const double k_F = fermi_wavevector(material.n_s);
    const double E_F = fermi_energy(k_F, material.m_star_ratio);

    // smearing scale: thermal or gate, whichever dominates; the gate scale
    // maps smear_width through the lever arm E_F / |v_p|
    const double lever_arm = E_F / std::abs(v_p);
    const double gamma = std::max(c.k_B * temperature,
                                  lever_arm * device.calibration.smear_width);

    // linear depletion from W_c at v_g = 0 down to a residual width just
    // below the single-mode cutoff at v_p, so the conductance threshold
    // crossing tracks the calibrated pinch-off voltage for every W_c
    const double w_c = device.geometry.W_c();
    double w_floor = model.pinch_margin * M_PI / k_F;
    w_floor = std::min(w_floor, 0.999 * w_c);
    const double x = std::clamp((v_g - v_p) / (0.0 - v_p), 0.0, 1.0);
    const double w = w_floor + (w_c - w_floor) * x;

    const double e1 = M_PI * M_PI * c.hbar * c.hbar /
                      (2.0 * material.m_star_ratio * c.m_e * w * w);
    double sum = 0.0;
    for (int n = 1; n <= 100000; ++n) {
        const double arg = (e1 * n * n - E_F) / gamma;
        const double t_n = arg > 700.0 ? 0.0 : 1.0 / (1.0 + std::exp(arg));
        if (t_n < model.mode_cutoff) break;
        sum += t_n;
    }
    if (sum <= 0.0) return 0.0;
    const double g_ch = c.g_q * sum;
    const double g_s = device.calibration.g_series;
    if (!std::isfinite(g_s)) return g_ch;
    return 1.0 / (1.0 / g_ch + 1.0 / g_s);
}

double conductance_with_failure(const JunctionDevice& device, const Material2DEG& material,
                                double v_g, double temperature,
                                const ConductanceModel& model) {
    switch (device.failure) {
        case FailureMode::none:
            return ideal_conductance(device, material, v_g, temperature, model);
        case FailureMode::open_contact:
        case FailureMode::pre_pinched:
            return 0.0;
        case FailureMode::thick_oxide_no_pinchoff: {
            const double g0 = ideal_conductance(device, material, 0.0, temperature, model);
            const double g = ideal_conductance(device, material, v_g, temperature, model);
            return std::max(g, model.floor_frac * g0);
        }
        case FailureMode::gate_leak: {
            const double g = ideal_conductance(device, material, v_g, temperature, model);
            return g + model.leak_slope * std::abs(v_g);
        }
    }
    throw std::logic_error("unreachable failure mode");
}

double hysteretic_conductance(const JunctionDevice& device, const Material2DEG& material,
                              double v_g, double temperature, SweepDirection direction,
                              HysteresisState& state, const SweepProtocol& protocol,
                              const ConductanceModel& model) {
    const double g = conductance_with_failure(device, material, v_g, temperature, model);
    if (direction == SweepDirection::down) {
        // Joule proxy: dissipated power per step, normalized to the 5 uV
        // excitation scale, weighted by junction length
        const double v2 = protocol.v_dc_bias * protocol.v_dc_bias +
                          0.5 * protocol.v_ac * protocol.v_ac;
        const double v2_ref = 0.5 * 5e-6 * 5e-6;
        state.heat_level += (g / constants().g_q) * (v2 / v2_ref) *
                            (device.geometry.L_J() / model.heat_ref_length);
        return g;
    }
    const double h = state.heat_level;
    const double saturating = h / (h + model.heat_half);
    return g * (1.0 - device.calibration.hysteresis_amp * saturating);
}

double lockin_measure(double g_true, const SweepProtocol& protocol,
                      const NoiseConfig& noise, uint64_t seed) {
    protocol.validate();
    const long cycles = std::llround(protocol.integration_time * protocol.f_ac);
    if (cycles < 5)
        throw std::domain_error("lockin_measure: integration window shorter than 5 cycles");

    constexpr int kSamplesPerCycle = 32;
    static const std::array<double, kSamplesPerCycle> sin_table = [] {
        std::array<double, kSamplesPerCycle> t{};
        for (int k = 0; k < kSamplesPerCycle; ++k)
            t[k] = std::sin(2.0 * M_PI * k / kSamplesPerCycle);
        return t;
    }();

    const long n = cycles * kSamplesPerCycle;
    Rng rng(seed);
    double pink_state = 0.0;
    double acc = 0.0;  // fixed-order summation
    for (long k = 0; k < n; ++k) {
        const double s = sin_table[static_cast<size_t>(k % kSamplesPerCycle)];
        double current = g_true * (protocol.v_dc_bias + protocol.v_ac * s);
        if (noise.enabled) {
            current += noise.white_current_sd * rng.gauss();
            if (noise.pink_current_amp > 0.0) {
                pink_state = 0.995 * pink_state + 0.1 * rng.gauss();
                current += noise.pink_current_amp * pink_state;
            }
        }
        acc += current * s;
    }
    return 2.0 * (acc / static_cast<double>(n)) / protocol.v_ac;
}

namespace {

SweepTrace sweep_one_direction(const ChipManifest& chip, const JunctionDevice& device,
                               const SweepProtocol& protocol, const NoiseConfig& noise,
                               SweepDirection direction, HysteresisState& state,
                               uint64_t trace_seed, const ConductanceModel& model) {
    SweepTrace trace;
    trace.chip_id = chip.chip_id;
    trace.junction_id = device.junction_id;
    trace.direction = direction;
    trace.seed = trace_seed;
    trace.protocol = protocol;
    const int n = protocol.samples_per_direction();
    trace.samples.reserve(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        const int step = direction == SweepDirection::down ? k : n - 1 - k;
        double v_g = protocol.v_start - step * protocol.v_step;
        if (v_g < protocol.v_end) v_g = protocol.v_end;
        // both global pads driven together; validates shared-gate range
        const GateAddress addr = address(chip, device.junction_id, v_g, v_g);
        const double g_true = hysteretic_conductance(device, chip.material, addr.v_gate_left,
                                                     chip.temperature, direction, state,
                                                     protocol, model);
        const double g_raw =
            lockin_measure(g_true, protocol, noise,
                           hash_combine(trace_seed, static_cast<uint64_t>(k)));
        trace.samples.push_back({v_g, std::max(0.0, g_raw), g_raw});
    }
    return trace;
}

}  // namespace

std::pair<SweepTrace, SweepTrace> run_sweep(const ChipManifest& chip,
                                            const std::string& junction_id,
                                            const SweepProtocol& protocol,
                                            const NoiseConfig& noise, uint64_t seed,
                                            const ConductanceModel& model) {
    protocol.validate();
    const JunctionDevice& device = chip.junction(junction_id);
    HysteresisState state;
    const uint64_t down_seed = hash_combine(seed, hash_string("down"));
    const uint64_t up_seed = hash_combine(seed, hash_string("up"));
    SweepTrace down = sweep_one_direction(chip, device, protocol, noise,
                                          SweepDirection::down, state, down_seed, model);
    SweepTrace up = sweep_one_direction(chip, device, protocol, noise,
                                        SweepDirection::up, state, up_seed, model);
    return {std::move(down), std::move(up)};
}

EnsembleResult run_ensemble(const std::vector<ChipManifest>& chips,
                            const SweepProtocol& protocol,
                            const FailureConfig& failure_config,
                            const NoiseConfig& noise, uint64_t seed,
                            const ConductanceModel& model) {
    if (chips.empty()) throw std::invalid_argument("run_ensemble: empty chip list");
    protocol.validate();
    EnsembleResult result;
    for (const auto& chip : chips) {
        ChipManifest realized =
            sample_failures(chip, failure_config, hash_combine(seed, hash_string("fail")));
        for (const auto& j : realized.junctions) {
            const uint64_t junction_seed =
                hash_combine(hash_combine(seed, hash_string(realized.chip_id)),
                             hash_string(j.junction_id));
            auto [down, up] = run_sweep(realized, j.junction_id, protocol, noise,
                                        junction_seed, model);
            result.traces.push_back(std::move(down));
            result.traces.push_back(std::move(up));
        }
        result.chips.push_back(std::move(realized));
    }
    return result;
}

}  // namespace hfs
