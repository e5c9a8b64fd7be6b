#include "hfs/chip.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "hfs/rng.hpp"

namespace hfs {

void JunctionGeometry::validate() const {
    if (!(L_c_nm > 0 && W_c_nm > 0 && L_J_um > 0 && W_J_um > 0))
        throw std::domain_error("JunctionGeometry: all dimensions must be positive");
    if (W_c() > W_J())
        throw std::domain_error("JunctionGeometry: W_c must not exceed W_J");
    if (L_c() > L_J())
        throw std::domain_error("JunctionGeometry: L_c must not exceed L_J");
}

void JunctionCalibration::validate() const {
    if (!(v_pinch_star < 0))
        throw std::domain_error("JunctionCalibration: v_pinch_star must be negative");
    if (!(g_series > 0))
        throw std::domain_error("JunctionCalibration: g_series must be positive");
    if (!(hysteresis_amp >= 0 && hysteresis_amp < 1))
        throw std::domain_error("JunctionCalibration: hysteresis_amp must be in [0, 1)");
    if (!(smear_width > 0))
        throw std::domain_error("JunctionCalibration: smear_width must be positive");
}

std::string to_string(FailureMode f) {
    switch (f) {
        case FailureMode::none: return "none";
        case FailureMode::open_contact: return "open_contact";
        case FailureMode::gate_leak: return "gate_leak";
        case FailureMode::thick_oxide_no_pinchoff: return "thick_oxide_no_pinchoff";
        case FailureMode::pre_pinched: return "pre_pinched";
    }
    throw std::logic_error("unreachable failure mode");
}

FailureMode failure_from_string(const std::string& s) {
    if (s == "none") return FailureMode::none;
    if (s == "open_contact") return FailureMode::open_contact;
    if (s == "gate_leak") return FailureMode::gate_leak;
    if (s == "thick_oxide_no_pinchoff") return FailureMode::thick_oxide_no_pinchoff;
    if (s == "pre_pinched") return FailureMode::pre_pinched;
    throw std::invalid_argument("unknown failure mode: " + s);
}

void ChipManifest::validate() const {
    if (chip_id.empty()) throw std::domain_error("ChipManifest: chip_id must be nonempty");
    if (junctions.size() != 8)
        throw std::domain_error("ChipManifest: chip must hold exactly 8 junctions, got " +
                                std::to_string(junctions.size()));
    material.validate();
    if (!(temperature > 0))
        throw std::domain_error("ChipManifest: temperature must be positive");
    std::set<std::string> ids;
    for (const auto& j : junctions) {
        if (!ids.insert(j.junction_id).second)
            throw std::domain_error("ChipManifest: duplicate junction_id " + j.junction_id);
        j.geometry.validate();
        j.calibration.validate();
    }
}

const JunctionDevice& ChipManifest::junction(const std::string& junction_id) const {
    for (const auto& j : junctions)
        if (j.junction_id == junction_id) return j;
    throw std::invalid_argument("chip " + chip_id + " has no junction " + junction_id);
}

bool ChipManifest::has_junction(const std::string& junction_id) const {
    return std::any_of(junctions.begin(), junctions.end(),
                       [&](const auto& j) { return j.junction_id == junction_id; });
}

bool operator==(const Material2DEG& a, const Material2DEG& b) {
    return a.n_s == b.n_s && a.mu_e == b.mu_e && a.m_star_ratio == b.m_star_ratio &&
           a.well_thickness == b.well_thickness && a.well_depth == b.well_depth;
}

bool operator==(const ChipManifest& a, const ChipManifest& b) {
    return a.chip_id == b.chip_id && a.temperature == b.temperature &&
           a.material == b.material && a.junctions == b.junctions &&
           a.fabrication_notes == b.fabrication_notes;
}

GateAddress address(const ChipManifest& chip, const std::string& junction_id,
                    double v_left, double v_right) {
    if (!chip.has_junction(junction_id))
        throw std::invalid_argument("address: chip " + chip.chip_id +
                                    " has no junction " + junction_id);
    if (std::abs(v_left) > kGateSourceRangeV || std::abs(v_right) > kGateSourceRangeV)
        throw std::out_of_range("address: gate voltage outside +-10 V source range");
    return GateAddress{junction_id, v_left, v_right};
}

namespace {

// Per-junction calibration scatter, deterministic in (chip_id, junction_id).
JunctionCalibration default_calibration(const std::string& chip_id,
                                        const std::string& junction_id,
                                        const JunctionGeometry& g) {
    Rng rng(hash_combine(hash_combine(0x5ca1ab1eULL, hash_string(chip_id)),
                         hash_string(junction_id)));
    JunctionCalibration c;
    // mean -0.56 V, s.d. 30 mV, plus +0.02 V/um shift for longer junctions
    c.v_pinch_star = -0.56 + 0.02 * (g.L_J_um - 1.4) + 0.03 * rng.gauss();
    if (c.v_pinch_star > -0.2) c.v_pinch_star = -0.2;
    // interface transparency bound; long junctions run lower, with
    // chip-to-chip log-normal spread
    double g0 = g.L_J_um > 2.0 ? 6e-4 : (g.W_c_nm >= 200.0 ? 2e-3 : 1.5e-3);
    c.g_series = g0 * std::exp(0.2 * rng.gauss());
    c.hysteresis_amp = g.L_J_um > 2.0 ? 0.12 : 0.0;
    c.smear_width = 0.02;
    return c;
}

}  // namespace

ChipManifest default_chip(const std::string& chip_id, const Material2DEG& material) {
    ChipManifest chip;
    chip.chip_id = chip_id;
    chip.material = material;
    chip.temperature = 4.2;
    const double widths_nm[8] = {400, 300, 200, 100, 100, 100, 100, 100};
    for (int i = 0; i < 8; ++i) {
        JunctionDevice d;
        d.junction_id = "J" + std::to_string(i + 1);
        d.geometry.L_c_nm = 400.0;
        d.geometry.W_c_nm = widths_nm[i];
        d.geometry.L_J_um = (i == 7) ? 3.2 : 1.4;
        d.geometry.W_J_um = 5.0;
        d.calibration = default_calibration(chip_id, d.junction_id, d.geometry);
        d.failure = FailureMode::none;
        chip.junctions.push_back(d);
    }
    chip.validate();
    return chip;
}

void FailureConfig::validate() const {
    for (const auto& c : classes)
        if (!(c.probability >= 0.0 && c.probability <= 1.0))
            throw std::domain_error("FailureConfig: probability outside [0, 1]");
    if (!(w_open_contact >= 0 && w_gate_leak >= 0 && w_thick_oxide >= 0 &&
          w_pre_pinched >= 0))
        throw std::domain_error("FailureConfig: kind weights must be nonnegative");
    if (w_open_contact + w_gate_leak + w_thick_oxide + w_pre_pinched <= 0)
        throw std::domain_error("FailureConfig: kind weights must not all be zero");
}

double FailureConfig::probability_for(const JunctionGeometry& g) const {
    for (const auto& c : classes) {
        if (std::abs(c.L_J_um - g.L_J_um) < 1e-9 && std::abs(c.W_c_nm - g.W_c_nm) < 1e-6)
            return c.probability;
    }
    return 0.0;
}

FailureConfig FailureConfig::defaults() {
    FailureConfig f;
    f.classes = {
        {1.4, 400.0, 0.143},
        {1.4, 300.0, 0.143},
        {1.4, 200.0, 0.250},
        {1.4, 100.0, 0.257},
        {3.2, 100.0, 0.444},
    };
    return f;
}

FailureConfig FailureConfig::none() { return FailureConfig{}; }

ChipManifest sample_failures(const ChipManifest& chip, const FailureConfig& config,
                             uint64_t seed) {
    chip.validate();
    config.validate();
    ChipManifest out = chip;
    for (auto& j : out.junctions) {
        Rng rng(hash_combine(hash_combine(seed, hash_string(out.chip_id)),
                             hash_string(j.junction_id)));
        const double p = config.probability_for(j.geometry);
        if (rng.uniform() >= p) {
            j.failure = FailureMode::none;
            continue;
        }
        const double total = config.w_open_contact + config.w_gate_leak +
                             config.w_thick_oxide + config.w_pre_pinched;
        double u = rng.uniform() * total;
        if ((u -= config.w_open_contact) < 0) j.failure = FailureMode::open_contact;
        else if ((u -= config.w_gate_leak) < 0) j.failure = FailureMode::gate_leak;
        else if ((u -= config.w_thick_oxide) < 0) j.failure = FailureMode::thick_oxide_no_pinchoff;
        else j.failure = FailureMode::pre_pinched;
    }
    return out;
}

}  // namespace hfs
