#include "hfs/manifest_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hfs {

using ordered_json = nlohmann::ordered_json;

namespace {

void reject_unknown(const ordered_json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) { ok = true; break; }
        if (!ok)
            throw ParseError("manifest: unknown field '" + it.key() + "' in " + where);
    }
}

double require_number(const ordered_json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key))
        throw ParseError("manifest: missing field '" + std::string(key) + "' in " + where);
    if (!obj[key].is_number())
        throw ParseError("manifest: field '" + std::string(key) + "' in " + where +
                         " must be a number");
    return obj[key].get<double>();
}

std::string require_string(const ordered_json& obj, const char* key,
                           const std::string& where) {
    if (!obj.contains(key))
        throw ParseError("manifest: missing field '" + std::string(key) + "' in " + where);
    if (!obj[key].is_string())
        throw ParseError("manifest: field '" + std::string(key) + "' in " + where +
                         " must be a string");
    return obj[key].get<std::string>();
}

ordered_json material_to_obj(const Material2DEG& m) {
    ordered_json o;
    o["n_s_per_m2"] = m.n_s;
    o["mu_e_m2_per_Vs"] = m.mu_e;
    o["m_star_ratio"] = m.m_star_ratio;
    return o;
}

Material2DEG material_from_obj(const ordered_json& o, const std::string& where) {
    if (!o.is_object()) throw ParseError("manifest: " + where + " must be an object");
    reject_unknown(o, {"n_s_per_m2", "mu_e_m2_per_Vs", "m_star_ratio"}, where);
    Material2DEG m;
    m.n_s = require_number(o, "n_s_per_m2", where);
    m.mu_e = require_number(o, "mu_e_m2_per_Vs", where);
    m.m_star_ratio = require_number(o, "m_star_ratio", where);
    return m;
}

}  // namespace

std::string manifest_to_json(const ChipManifest& chip) {
    chip.validate();
    ordered_json o;
    o["chip_id"] = chip.chip_id;
    o["temperature_K"] = chip.temperature;
    o["material"] = material_to_obj(chip.material);
    o["junctions"] = ordered_json::array();
    for (const auto& j : chip.junctions) {
        ordered_json jj;
        jj["id"] = j.junction_id;
        jj["L_c_nm"] = j.geometry.L_c_nm;
        jj["W_c_nm"] = j.geometry.W_c_nm;
        jj["L_J_um"] = j.geometry.L_J_um;
        jj["W_J_um"] = j.geometry.W_J_um;
        jj["calibration"]["v_pinch_star_V"] = j.calibration.v_pinch_star;
        jj["calibration"]["g_series_S"] = j.calibration.g_series;
        jj["calibration"]["hysteresis_amp"] = j.calibration.hysteresis_amp;
        jj["calibration"]["smear_width_V"] = j.calibration.smear_width;
        jj["failure"] = to_string(j.failure);
        o["junctions"].push_back(jj);
    }
    if (!chip.fabrication_notes.empty()) o["fabrication_notes"] = chip.fabrication_notes;
    return o.dump(2) + "\n";
}

ChipManifest manifest_from_json(const std::string& text) {
    ordered_json o;
    try {
        o = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("manifest: JSON syntax error: ") + e.what());
    }
    if (!o.is_object()) throw ParseError("manifest: top level must be an object");
    reject_unknown(o, {"chip_id", "temperature_K", "material", "junctions",
                       "fabrication_notes"}, "top level");

    ChipManifest chip;
    chip.chip_id = require_string(o, "chip_id", "top level");
    chip.temperature = require_number(o, "temperature_K", "top level");
    if (!o.contains("material"))
        throw ParseError("manifest: missing field 'material' in top level");
    chip.material = material_from_obj(o["material"], "material");
    if (!o.contains("junctions") || !o["junctions"].is_array())
        throw ParseError("manifest: 'junctions' must be an array");
    int index = 0;
    for (const auto& jj : o["junctions"]) {
        const std::string where = "junctions[" + std::to_string(index++) + "]";
        if (!jj.is_object()) throw ParseError("manifest: " + where + " must be an object");
        reject_unknown(jj, {"id", "L_c_nm", "W_c_nm", "L_J_um", "W_J_um",
                            "calibration", "failure"}, where);
        JunctionDevice d;
        d.junction_id = require_string(jj, "id", where);
        d.geometry.L_c_nm = require_number(jj, "L_c_nm", where);
        d.geometry.W_c_nm = require_number(jj, "W_c_nm", where);
        d.geometry.L_J_um = require_number(jj, "L_J_um", where);
        d.geometry.W_J_um = require_number(jj, "W_J_um", where);
        if (!jj.contains("calibration") || !jj["calibration"].is_object())
            throw ParseError("manifest: missing 'calibration' object in " + where);
        const auto& cc = jj["calibration"];
        reject_unknown(cc, {"v_pinch_star_V", "g_series_S", "hysteresis_amp",
                            "smear_width_V"}, where + ".calibration");
        d.calibration.v_pinch_star = require_number(cc, "v_pinch_star_V", where);
        d.calibration.g_series = require_number(cc, "g_series_S", where);
        d.calibration.hysteresis_amp = require_number(cc, "hysteresis_amp", where);
        d.calibration.smear_width = require_number(cc, "smear_width_V", where);
        d.failure = failure_from_string(require_string(jj, "failure", where));
        chip.junctions.push_back(d);
    }
    if (o.contains("fabrication_notes"))
        chip.fabrication_notes = o["fabrication_notes"].get<std::string>();
    try {
        chip.validate();
    } catch (const std::domain_error& e) {
        throw ParseError(std::string("manifest: ") + e.what());
    }
    return chip;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

ChipManifest load_manifest(const std::string& path) {
    return manifest_from_json(read_file(path));
}

void save_manifest(const ChipManifest& chip, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << manifest_to_json(chip);
}

Material2DEG material_from_json(const std::string& text) {
    ordered_json o;
    try {
        o = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("material: JSON syntax error: ") + e.what());
    }
    auto m = material_from_obj(o, "material");
    try {
        m.validate();
    } catch (const std::domain_error& e) {
        throw ParseError(std::string("material: ") + e.what());
    }
    return m;
}

Material2DEG load_material(const std::string& path) {
    return material_from_json(read_file(path));
}

FailureConfig load_failure_config(const std::string& path) {
    ordered_json o;
    try {
        o = ordered_json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("failure config: JSON syntax error: ") + e.what());
    }
    reject_unknown(o, {"classes", "kind_weights"}, "failure config");
    FailureConfig f;
    if (o.contains("classes")) {
        for (const auto& c : o["classes"]) {
            reject_unknown(c, {"L_J_um", "W_c_nm", "probability"}, "failure class");
            f.classes.push_back({require_number(c, "L_J_um", "failure class"),
                                 require_number(c, "W_c_nm", "failure class"),
                                 require_number(c, "probability", "failure class")});
        }
    }
    if (o.contains("kind_weights")) {
        const auto& w = o["kind_weights"];
        reject_unknown(w, {"open_contact", "gate_leak", "thick_oxide_no_pinchoff",
                           "pre_pinched"}, "kind_weights");
        if (w.contains("open_contact")) f.w_open_contact = w["open_contact"].get<double>();
        if (w.contains("gate_leak")) f.w_gate_leak = w["gate_leak"].get<double>();
        if (w.contains("thick_oxide_no_pinchoff"))
            f.w_thick_oxide = w["thick_oxide_no_pinchoff"].get<double>();
        if (w.contains("pre_pinched")) f.w_pre_pinched = w["pre_pinched"].get<double>();
    }
    try {
        f.validate();
    } catch (const std::domain_error& e) {
        throw ParseError(std::string("failure config: ") + e.what());
    }
    return f;
}

}  // namespace hfs
