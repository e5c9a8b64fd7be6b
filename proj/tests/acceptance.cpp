// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the binary exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hfs/pipeline.hpp"
#include "hfs/rng.hpp"

using namespace hfs;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void note(const std::string& s) { g_notes.push_back(s); }

void criterion(int num, const std::string& desc, bool ok) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", num, desc.c_str());
    if (!ok) {
        ++g_failures;
        for (const auto& n : g_notes) std::printf("       %s\n", n.c_str());
    }
    g_notes.clear();
}

bool within(double value, double target, double rel) {
    return std::abs(value - target) <= rel * std::abs(target);
}

// ---------------------------------------------------------------- criterion 1

bool check_transport() {
    const auto q = derive_transport(Material2DEG{}, 4.2);
    bool ok = true;
    if (!within(q.l_e, 1.95e-6, 0.01)) ok = false;
    if (!within(q.l_e, 2.0e-6, 0.05)) ok = false;
    if (!within(q.v_F, 3.52e5, 0.01)) ok = false;
    if (!within(q.zeta_N, 1.02e-7, 0.01)) ok = false;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "l_e=%.4e m, v_F=%.4e m/s, zeta_N=%.4e m", q.l_e,
                  q.v_F, q.zeta_N);
    note(buf);
    return ok;
}

// ---------------------------------------------------------------- criterion 2

bool check_yield_fixtures() {
    const std::string dir = std::string(HFS_DATA_DIR) + "/fixtures";
    bool ok = true;

    {  // per-chip counts, 0-decimal rows, 2-decimal total
        std::ifstream in(dir + "/yield_chips.csv");
        if (!in) return false;
        std::string line;
        std::getline(in, line);  // header
        std::vector<YieldRecord> records;
        std::map<std::string, std::pair<int, int>> counts;
        while (std::getline(in, line)) {
            std::istringstream ss(line);
            std::string chip, sw, me;
            std::getline(ss, chip, ',');
            std::getline(ss, sw, ',');
            std::getline(ss, me, ',');
            counts[chip] = {std::stoi(sw), std::stoi(me)};
            for (int i = 0; i < std::stoi(me); ++i)
                records.push_back({chip, i < std::stoi(sw), true});
        }
        const auto table = yield_table(records);
        const std::map<std::string, std::string> expected = {
            {"C1", "0"},   {"C2", "86"},  {"C3", "38"},  {"C4", "88"},  {"C7", "75"},
            {"C8", "100"}, {"D1", "100"}, {"D6", "100"}, {"D8", "100"}, {"D9", "100"},
        };
        for (const auto& row : table.rows) {
            const std::string got =
                row.yield_percent ? format_percent(*row.yield_percent, 0) : "-";
            if (got != expected.at(row.group_key)) {
                note(row.group_key + ": got " + got + " want " + expected.at(row.group_key));
                ok = false;
            }
        }
        if (table.total.switching_count != 49 || table.total.measured_count != 66) ok = false;
        const std::string total = format_percent(*table.total.yield_percent, 2);
        if (total != "74.24") {
            note("total: got " + total + " want 74.24");
            ok = false;
        }
    }

    {  // per-class rows, 1-decimal
        std::ifstream in(dir + "/yield_classes.csv");
        if (!in) return false;
        std::string line;
        std::getline(in, line);
        const std::vector<std::string> expected = {"85.7", "85.7", "75.0", "74.3", "55.6"};
        size_t idx = 0;
        while (std::getline(in, line)) {
            std::istringstream ss(line);
            std::string lj, wc, sw, me;
            std::getline(ss, lj, ',');
            std::getline(ss, wc, ',');
            std::getline(ss, sw, ',');
            std::getline(ss, me, ',');
            std::vector<YieldRecord> records;
            for (int i = 0; i < std::stoi(me); ++i)
                records.push_back({"k", i < std::stoi(sw), true});
            const auto table = yield_table(records);
            const std::string got = format_percent(*table.total.yield_percent, 1);
            if (idx >= expected.size() || got != expected[idx]) {
                note("class row " + std::to_string(idx) + ": got " + got);
                ok = false;
            }
            ++idx;
        }
        if (idx != expected.size()) ok = false;
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 3

bool check_ensemble_statistics(double& elapsed_s) {
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<ChipManifest> chips;
    const Material2DEG material;
    for (int w = 1; w <= 10; ++w) {
        for (int c = 1; c <= 9; ++c) {
            char id[16];
            std::snprintf(id, sizeof(id), "W%02dC%d", w, c);
            chips.push_back(default_chip(id, material));
        }
    }
    SweepProtocol protocol;
    NoiseConfig noise;
    const auto result =
        run_ensemble(chips, protocol, FailureConfig::defaults(), noise, 2024);

    std::vector<std::pair<SweepTrace, SweepTrace>> pairs;
    for (size_t i = 0; i + 1 < result.traces.size(); i += 2)
        pairs.emplace_back(result.traces[i], result.traces[i + 1]);
    const auto report = analyze_pairs(pairs);

    elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool ok = true;
    if (report.devices.size() != 720) {
        note("device count " + std::to_string(report.devices.size()));
        ok = false;
    }

    double vp_sum = 0.0;
    int vp_n = 0, switching = 0;
    std::vector<double> lj, vp;
    for (const auto& d : report.devices) {
        if (d.metrics.is_switching) ++switching;
        if (d.metrics.v_pinch) {
            vp_sum += *d.metrics.v_pinch;
            ++vp_n;
            if (d.has_geometry) {
                lj.push_back(d.L_J_um);
                vp.push_back(*d.metrics.v_pinch);
            }
        }
    }
    const double vp_mean = vp_n ? vp_sum / vp_n : 0.0;
    const double yield = 100.0 * switching / static_cast<double>(report.devices.size());
    const auto corr = correlate(lj, vp);

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "mean V_p=%.4f V (n=%d), yield=%.2f%%, r(V_p,L_J)=%.3f, %.1f s", vp_mean,
                  vp_n, yield, corr.pearson_r, elapsed_s);
    note(buf);

    if (!(vp_mean >= -0.60 && vp_mean <= -0.52)) ok = false;
    if (!(yield >= 69.0 && yield <= 79.0)) ok = false;
    if (!(corr.pearson_r > 0.0)) ok = false;
    if (!(elapsed_s < 60.0)) ok = false;
    return ok;
}

// ---------------------------------------------------------------- criterion 4

bool check_hysteresis_property() {
    const Material2DEG material;
    SweepProtocol protocol;
    NoiseConfig noise;
    bool ok = true;
    for (int s = 0; s < 100; ++s) {
        const auto chip = default_chip("H" + std::to_string(s), material);
        const auto [d4, u4] = run_sweep(chip, "J4", protocol, noise, 1000 + s);
        const auto [d8, u8] = run_sweep(chip, "J8", protocol, noise, 2000 + s);
        const double h4 = hysteresis_max(d4, u4);
        const double h8 = hysteresis_max(d8, u8);
        if (!(h8 > h4)) {
            note("seed " + std::to_string(s) + ": h(J8) <= h(J4)");
            ok = false;
        }
        for (const auto* pair : {&d4, &d8}) {
            const auto& down = *pair;
            const auto& up = (pair == &d4) ? u4 : u8;
            const auto vpd = extract_pinch_off(down);
            const auto vpu = extract_pinch_off(up);
            if (!vpd || !vpu) {
                note("seed " + std::to_string(s) + ": missing pinch-off");
                ok = false;
                continue;
            }
            if (std::abs(*vpd - *vpu) > protocol.v_step + 1e-12) {
                char buf[120];
                std::snprintf(buf, sizeof(buf), "seed %d %s: |dV_p|=%.4f V", s,
                              down.junction_id.c_str(), std::abs(*vpd - *vpu));
                note(buf);
                ok = false;
            }
        }
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 5

bool check_quantized_open_channel() {
    const Material2DEG material;
    const double k_F = fermi_wavevector(material.n_s);
    const double g_q = constants().g_q;
    bool ok = true;
    for (double w_nm : {400.0, 300.0, 200.0, 100.0}) {
        JunctionDevice d;
        d.junction_id = "JX";
        d.geometry.W_c_nm = w_nm;
        d.calibration.g_series = std::numeric_limits<double>::infinity();
        d.calibration.smear_width = 1e-9;
        const int modes = max_modes(k_F, w_nm * 1e-9);
        const double g0 = ideal_conductance(d, material, 0.0, 0.01);
        char buf[120];
        std::snprintf(buf, sizeof(buf), "W_c=%.0f nm: G(0)/G_q=%.6f, modes=%d", w_nm,
                      g0 / g_q, modes);
        note(buf);
        if (!within(g0, modes * g_q, 1e-6)) ok = false;
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 6

SweepTrace synthetic_ramp(double v_pinch, double ramp, double g_on) {
    SweepTrace t;
    t.chip_id = "S";
    t.junction_id = "J1";
    t.direction = SweepDirection::down;
    for (int k = 0; k <= 200; ++k) {
        const double v = -k * 0.005;
        const double x = std::clamp((v - v_pinch) / ramp, 0.0, 1.0);
        t.samples.push_back({v, g_on * x, g_on * x});
    }
    return t;
}

BoxStats reference_box(std::vector<double> v) {
    BoxStats b;
    std::sort(v.begin(), v.end());
    b.n = static_cast<int>(v.size());
    for (double x : v) b.mean += x;
    b.mean /= b.n;
    auto q = [&](double p) {
        const double pos = p * (b.n - 1);
        const size_t lo = static_cast<size_t>(pos);
        const size_t hi = std::min(lo + 1, v.size() - 1);
        return v[lo] + (pos - lo) * (v[hi] - v[lo]);
    };
    b.median = q(0.5);
    b.q1 = q(0.25);
    b.q3 = q(0.75);
    b.iqr = b.q3 - b.q1;
    const double lo_fence = b.q1 - 1.5 * b.iqr;
    const double hi_fence = b.q3 + 1.5 * b.iqr;
    b.whisker_low = 1e308;
    b.whisker_high = -1e308;
    for (double x : v) {
        if (x >= lo_fence && x <= hi_fence) {
            b.whisker_low = std::min(b.whisker_low, x);
            b.whisker_high = std::max(b.whisker_high, x);
        } else {
            b.outliers.push_back(x);
        }
    }
    if (b.whisker_low > b.whisker_high) b.whisker_low = b.whisker_high = b.median;
    return b;
}

bool check_extraction_oracles() {
    bool ok = true;

    // planted pinch-off recovered on synthetic ramps
    Rng rng(31);
    const AnalysisConfig cfg;
    for (int i = 0; i < 1000; ++i) {
        const double v_pinch = -0.9 + 0.65 * rng.uniform();
        const double ramp = 0.02 + 0.18 * rng.uniform();
        const double g_on = 1e-5 * std::pow(10.0, 2.0 * rng.uniform());
        const auto trace = synthetic_ramp(v_pinch, ramp, g_on);
        const auto vp = extract_pinch_off(trace, cfg.off_frac, cfg.persistence);
        const double budget = (cfg.persistence + 1) * 0.005;
        if (!vp || std::abs(*vp - v_pinch) > budget) {
            char buf[120];
            std::snprintf(buf, sizeof(buf), "ramp %d: planted %.4f got %s", i, v_pinch,
                          vp ? std::to_string(*vp).c_str() : "none");
            note(buf);
            ok = false;
        }
    }

    // box summaries against an independent reference
    Rng box_rng(37);
    for (int i = 0; i < 10000 && ok; ++i) {
        const int n = 1 + static_cast<int>(box_rng.uniform() * 40.0);
        std::vector<double> v(n);
        for (auto& x : v) x = 20.0 * (box_rng.uniform() - 0.5) +
                              (box_rng.uniform() < 0.1 ? 100.0 * box_rng.gauss() : 0.0);
        const auto got = box_stats(v);
        const auto want = reference_box(v);
        auto eq = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
        auto out_a = got.outliers, out_b = want.outliers;
        std::sort(out_a.begin(), out_a.end());
        std::sort(out_b.begin(), out_b.end());
        if (got.n != want.n || !eq(got.mean, want.mean) || !eq(got.median, want.median) ||
            !eq(got.q1, want.q1) || !eq(got.q3, want.q3) ||
            !eq(got.whisker_low, want.whisker_low) ||
            !eq(got.whisker_high, want.whisker_high) || out_a != out_b) {
            note("box summary mismatch at array " + std::to_string(i));
            ok = false;
        }
    }

    // noise-free demodulation recovers the programmed conductance
    SweepProtocol protocol;
    NoiseConfig quiet;
    quiet.enabled = false;
    for (double g : {1e-6, 7.748091729e-5, 2.3e-4}) {
        const double got = lockin_measure(g, protocol, quiet, 5);
        if (!within(got, g, 1e-4)) {
            char buf[120];
            std::snprintf(buf, sizeof(buf), "lock-in: g=%.3e got %.6e", g, got);
            note(buf);
            ok = false;
        }
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 7

bool files_identical(const fs::path& a, const fs::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    std::ostringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    return fa.good() == fb.good() && sa.str() == sb.str();
}

bool check_determinism() {
    const fs::path base = fs::temp_directory_path() / "hfs_acceptance";
    fs::remove_all(base);
    const fs::path dirs[2] = {base / "run_a", base / "run_b"};

    for (const auto& dir : dirs) {
        fs::create_directories(dir);
        std::vector<ChipManifest> chips = {default_chip("C1", Material2DEG{})};
        SweepProtocol protocol;
        NoiseConfig noise;
        const auto result =
            run_ensemble(chips, protocol, FailureConfig::defaults(), noise, 123);
        write_ensemble(result, noise, 123, dir.string());
        const auto analyzed = analyze_dir(dir.string());
        write_report(analyzed.report, dir.string());
    }

    bool ok = true;
    size_t compared = 0;
    for (const auto& de : fs::directory_iterator(dirs[0])) {
        const auto other = dirs[1] / de.path().filename();
        ++compared;
        if (!fs::exists(other) || !files_identical(de.path(), other)) {
            note("differs: " + de.path().filename().string());
            ok = false;
        }
    }
    note("compared " + std::to_string(compared) + " files");
    if (compared < 19) ok = false;  // 16 traces + index + report + metrics at minimum
    return ok;
}

}  // namespace

int main() {
    criterion(1, "derived transport matches the wafer characterization values",
              check_transport());
    criterion(2, "yield bookkeeping reproduces the reference chip and class tables",
              check_yield_fixtures());
    double elapsed = 0.0;
    criterion(3, "90-chip ensemble: mean V_p, total yield, V_p-length correlation, runtime",
              check_ensemble_statistics(elapsed));
    criterion(4, "long-junction hysteresis dominates and never shifts pinch-off",
              check_hysteresis_property());
    criterion(5, "open-channel conductance is quantized at the designed mode counts",
              check_quantized_open_channel());
    criterion(6, "extraction oracles: planted pinch-off, box summaries, demodulation",
              check_extraction_oracles());
    criterion(7, "simulate+analyze pipeline is byte-identical across equal-seed runs",
              check_determinism());

    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", g_failures);
    return 1;
}
