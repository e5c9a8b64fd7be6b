#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hfs/chip.hpp"

namespace hfs {

enum class SweepDirection { down, up };

std::string to_string(SweepDirection d);
SweepDirection direction_from_string(const std::string& s);

struct SweepProtocol {
    double v_start = 0.0;           // V
    double v_end = -1.0;            // V
    double v_step = 5e-3;           // V, positive
    bool down_then_up = true;       // otherwise down only
    double v_ac = 5e-6;             // V, lock-in excitation amplitude
    double f_ac = 70.0;             // Hz
    double integration_time = 10.0 / 70.0;  // s, 10 cycles at 70 Hz
    double v_dc_bias = 0.0;         // V

    void validate() const;
    int samples_per_direction() const;
};

struct NoiseConfig {
    bool enabled = true;
    double white_current_sd = 2e-12;  // A, per time sample
    double pink_current_amp = 0.0;    // A, low-pass filtered term, off by default
};

// Hard-wall QPC staircase knobs. pinch_margin sets the residual effective
// width at v_pinch_star as a fraction of the single-mode cutoff width pi/k_F.
struct ConductanceModel {
    double pinch_margin = 0.9;
    double mode_cutoff = 1e-9;        // truncate subband sum below this transmission
    double leak_slope = 1e-5;         // S/V, gate_leak signature
    double floor_frac = 0.2;          // thick_oxide_no_pinchoff floor vs G(0)
    double heat_half = 50.0;          // heat level at half saturation
    double heat_ref_length = 1.4e-6;  // m, L_J scale for Joule proxy
};

struct SweepSample {
    double v_g;    // V
    double g_meas; // S, demodulated and clamped at 0
    double g_raw;  // S, raw demodulator output (may dip below 0 under noise)
};

struct SweepTrace {
    std::string chip_id;
    std::string junction_id;
    SweepDirection direction = SweepDirection::down;
    std::vector<SweepSample> samples;
    uint64_t seed = 0;
    SweepProtocol protocol;
};

struct HysteresisState {
    double heat_level = 0.0;  // accumulated dissipation proxy, nondecreasing
};

// Noise-free gate-controlled channel conductance: linear width depletion,
// hard-wall subbands, logistic thermal/gate smearing, series conductance.
// Returns 0 for v_g <= v_pinch_star.
double ideal_conductance(const JunctionDevice& device, const Material2DEG& material,
                         double v_g, double temperature,
                         const ConductanceModel& model = {});

// Same, with the failure-mode signatures applied.
double conductance_with_failure(const JunctionDevice& device, const Material2DEG& material,
                                double v_g, double temperature,
                                const ConductanceModel& model = {});

// Downward sweeps accumulate the Joule-heating proxy; upward sweeps are
// scaled multiplicatively so the pinch-off crossing is not shifted.
double hysteretic_conductance(const JunctionDevice& device, const Material2DEG& material,
                              double v_g, double temperature, SweepDirection direction,
                              HysteresisState& state, const SweepProtocol& protocol,
                              const ConductanceModel& model = {});

// Synchronous demodulation of a synthesized lock-in current over an integer
// number of excitation cycles. Returns the raw conductance estimate.
double lockin_measure(double g_true, const SweepProtocol& protocol,
                      const NoiseConfig& noise, uint64_t seed);

std::pair<SweepTrace, SweepTrace> run_sweep(const ChipManifest& chip,
                                            const std::string& junction_id,
                                            const SweepProtocol& protocol,
                                            const NoiseConfig& noise, uint64_t seed,
                                            const ConductanceModel& model = {});

struct EnsembleResult {
    std::vector<ChipManifest> chips;   // failure modes realized
    std::vector<SweepTrace> traces;    // chip order, junction order, down then up
};

EnsembleResult run_ensemble(const std::vector<ChipManifest>& chips,
                            const SweepProtocol& protocol,
                            const FailureConfig& failure_config,
                            const NoiseConfig& noise, uint64_t seed,
                            const ConductanceModel& model = {});

}  // namespace hfs
