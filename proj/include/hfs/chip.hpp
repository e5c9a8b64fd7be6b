#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hfs/physics.hpp"

namespace hfs {

// Designed split-gate junction dimensions. Stored in the manifest's native
// units (nm / um) so file round trips are exact; SI accessors derive meters.
struct JunctionGeometry {
    double L_c_nm = 400.0;  // constriction length
    double W_c_nm = 100.0;  // constriction width
    double L_J_um = 1.4;    // junction length, Nb to Nb
    double W_J_um = 5.0;    // junction width

    double L_c() const { return L_c_nm * 1e-9; }
    double W_c() const { return W_c_nm * 1e-9; }
    double L_J() const { return L_J_um * 1e-6; }
    double W_J() const { return W_J_um * 1e-6; }

    void validate() const;
    bool operator==(const JunctionGeometry&) const = default;
};

struct JunctionCalibration {
    double v_pinch_star = -0.56;   // V, intrinsic pinch-off, negative
    double g_series = 2e-3;        // S, series contact conductance bound
    double hysteresis_amp = 0.0;   // in [0, 1)
    double smear_width = 0.02;     // V, transition smearing

    void validate() const;
    bool operator==(const JunctionCalibration&) const = default;
};

enum class FailureMode {
    none,
    open_contact,
    gate_leak,
    thick_oxide_no_pinchoff,
    pre_pinched,
};

std::string to_string(FailureMode f);
FailureMode failure_from_string(const std::string& s);

struct JunctionDevice {
    std::string junction_id;  // J1..J8
    JunctionGeometry geometry;
    JunctionCalibration calibration;
    FailureMode failure = FailureMode::none;

    bool operator==(const JunctionDevice&) const = default;
};

struct ChipManifest {
    std::string chip_id;
    double temperature = 4.2;  // K
    Material2DEG material;
    std::vector<JunctionDevice> junctions;  // exactly 8
    std::string fabrication_notes;

    void validate() const;
    const JunctionDevice& junction(const std::string& junction_id) const;
    bool has_junction(const std::string& junction_id) const;
};

bool operator==(const Material2DEG& a, const Material2DEG& b);
bool operator==(const ChipManifest& a, const ChipManifest& b);

// Shared global-gate state: the two pad voltages are applied to every
// junction on the chip; selection only routes the source-drain pair.
struct GateAddress {
    std::string selected_junction;
    double v_gate_left = 0.0;   // V
    double v_gate_right = 0.0;  // V
};

// Voltage source range, Methods: +-10 V dc.
inline constexpr double kGateSourceRangeV = 10.0;

GateAddress address(const ChipManifest& chip, const std::string& junction_id,
                    double v_left, double v_right);

// Table 1 geometries with default calibrations; calibration scatter is drawn
// deterministically from (chip_id, junction_id).
ChipManifest default_chip(const std::string& chip_id, const Material2DEG& material);

// Per-(L_J, W_c) class failure probability plus failure-kind weights.
struct FailureClassProbability {
    double L_J_um;
    double W_c_nm;
    double probability;
};

struct FailureConfig {
    std::vector<FailureClassProbability> classes;
    // weights over {open_contact, gate_leak, thick_oxide_no_pinchoff, pre_pinched}
    double w_open_contact = 0.2;
    double w_gate_leak = 0.2;
    double w_thick_oxide = 0.2;
    double w_pre_pinched = 0.4;

    void validate() const;
    double probability_for(const JunctionGeometry& g) const;

    // Probabilities tuned so expected class yields match the reported
    // per-class values (85.7 / 85.7 / 75 / 74.3 / 55.6 %).
    static FailureConfig defaults();
    static FailureConfig none();
};

// Deterministic under (seed, chip_id, junction_id).
ChipManifest sample_failures(const ChipManifest& chip, const FailureConfig& config,
                             uint64_t seed);

}  // namespace hfs
