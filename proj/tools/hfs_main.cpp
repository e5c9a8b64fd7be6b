#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hfs/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitIo = 3;

std::string default_out_dir() {
    const char* env = std::getenv("HFS_OUTPUT_DIR");
    return env ? env : ".";
}

hfs::Material2DEG load_material_or_default(const std::string& path) {
    if (path.empty()) return hfs::Material2DEG{};
    return hfs::load_material(path);
}

int cmd_physics(const std::string& material_path, double temperature) {
    const hfs::Material2DEG m = load_material_or_default(material_path);
    const hfs::TransportQuantities q = hfs::derive_transport(m, temperature);
    std::cout << "n_s_per_m2=" << m.n_s << "\n";
    std::cout << "mu_e_m2_per_Vs=" << m.mu_e << "\n";
    std::cout << "m_star_ratio=" << m.m_star_ratio << "\n";
    std::cout << "temperature_K=" << q.temperature << "\n";
    std::cout << "k_F_per_m=" << q.k_F << "\n";
    std::cout << "v_F_m_per_s=" << q.v_F << "\n";
    std::cout << "E_F_J=" << q.E_F << "\n";
    std::cout << "l_e_m=" << q.l_e << "\n";
    std::cout << "zeta_N_m=" << q.zeta_N << "\n";
    for (double w_nm : {400.0, 300.0, 200.0, 100.0})
        std::cout << "max_modes_Wc_" << static_cast<int>(w_nm)
                  << "nm=" << hfs::max_modes(q.k_F, w_nm * 1e-9) << "\n";
    const auto clean = hfs::classify_regime(q.l_e, q.zeta_N, 400e-9, 3.0);
    std::cout << "clean_limit=" << (clean.is_clean ? "true" : "false") << "\n";
    std::cout << "ballistic_vs_Lc="
              << (hfs::classify_regime(q.l_e, q.zeta_N, 400e-9, 3.0).is_ballistic ? "true"
                                                                                  : "false")
              << "\n";
    std::cout << "ballistic_vs_LJ="
              << (hfs::classify_regime(q.l_e, q.zeta_N, 1.4e-6, 3.0).is_ballistic ? "true"
                                                                                  : "false")
              << "\n";
    return kExitOk;
}

int cmd_chip_new(const std::string& chip_id, const std::string& material_path,
                 const std::string& out_path) {
    const auto chip = hfs::default_chip(chip_id, load_material_or_default(material_path));
    if (out_path.empty() || out_path == "-")
        std::cout << hfs::manifest_to_json(chip);
    else
        hfs::save_manifest(chip, out_path);
    return kExitOk;
}

struct SimulateArgs {
    std::vector<std::string> manifests;
    int gen_chips = 0;
    std::string material_path;
    std::string failure_config_path;
    bool with_failures = false;
    bool noise_off = false;
    uint64_t seed = 1;
    std::string out_dir;
    double v_start = 0.0, v_end = -1.0, v_step = 5e-3;
};

int cmd_simulate(const SimulateArgs& a) {
    std::vector<hfs::ChipManifest> chips;
    for (const auto& path : a.manifests) chips.push_back(hfs::load_manifest(path));
    const hfs::Material2DEG material = load_material_or_default(a.material_path);
    for (int i = 0; i < a.gen_chips; ++i)
        chips.push_back(hfs::default_chip("C" + std::to_string(i + 1), material));
    if (chips.empty()) chips.push_back(hfs::default_chip("C1", material));

    hfs::SweepProtocol protocol;
    protocol.v_start = a.v_start;
    protocol.v_end = a.v_end;
    protocol.v_step = a.v_step;
    protocol.validate();

    hfs::NoiseConfig noise;
    noise.enabled = !a.noise_off;

    hfs::FailureConfig failures = hfs::FailureConfig::none();
    if (!a.failure_config_path.empty())
        failures = hfs::load_failure_config(a.failure_config_path);
    else if (a.with_failures)
        failures = hfs::FailureConfig::defaults();

    const auto result = hfs::run_ensemble(chips, protocol, failures, noise, a.seed);
    const auto paths = hfs::write_ensemble(result, noise, a.seed, a.out_dir);
    std::cout << "traces_written=" << paths.size() << "\n";
    std::cout << "out_dir=" << a.out_dir << "\n";
    return kExitOk;
}

int cmd_analyze(const std::string& trace_dir, const std::string& out_dir) {
    const auto result = hfs::analyze_dir(trace_dir);
    hfs::write_report(result.report, out_dir);
    std::cout << "devices_analyzed=" << result.report.devices.size() << "\n";
    std::cout << "report=" << (std::filesystem::path(out_dir) / "report.json").string()
              << "\n";
    for (const auto& err : result.file_errors) std::cerr << "error: " << err << "\n";
    return result.file_errors.empty() ? kExitOk : kExitInput;
}

int cmd_report(const std::string& metrics_path, const std::string& out_dir) {
    hfs::write_plot_data(metrics_path, out_dir);
    std::cout << "plot_data_dir=" << out_dir << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid field-effect switch array: simulation and characterization"};
    app.require_subcommand(1);

    std::string material_path;
    double temperature = 4.2;
    auto* physics = app.add_subcommand("physics", "Derived 2DEG transport quantities");
    physics->add_option("--material", material_path, "Material JSON file");
    physics->add_option("--temperature", temperature, "Operating temperature (K)");

    std::string chip_id = "C1";
    std::string chip_material;
    std::string chip_out;
    auto* chip_new = app.add_subcommand("chip-new", "Emit a default chip manifest");
    chip_new->add_option("--chip-id", chip_id, "Chip identifier");
    chip_new->add_option("--material", chip_material, "Material JSON file");
    chip_new->add_option("--out,-o", chip_out, "Output path (default stdout)");

    SimulateArgs sim;
    sim.out_dir = default_out_dir();
    auto* simulate = app.add_subcommand("simulate", "Run gate sweeps and write trace CSVs");
    simulate->add_option("--manifest", sim.manifests, "Chip manifest file (repeatable)");
    simulate->add_option("--gen-chips", sim.gen_chips, "Generate N default chips");
    simulate->add_option("--material", sim.material_path, "Material for generated chips");
    simulate->add_option("--failure-config", sim.failure_config_path,
                         "Failure probability JSON");
    simulate->add_flag("--with-failures", sim.with_failures,
                       "Sample default failure probabilities");
    simulate->add_flag("--no-noise", sim.noise_off, "Disable measurement noise");
    simulate->add_option("--seed", sim.seed, "Master seed");
    simulate->add_option("--out", sim.out_dir, "Output directory");
    simulate->add_option("--v-start", sim.v_start, "Sweep start (V)");
    simulate->add_option("--v-end", sim.v_end, "Sweep end (V)");
    simulate->add_option("--v-step", sim.v_step, "Sweep step (V)");

    std::string trace_dir;
    std::string analyze_out = default_out_dir();
    auto* analyze = app.add_subcommand("analyze", "Extract metrics from a trace directory");
    analyze->add_option("--traces", trace_dir, "Directory of trace CSVs")->required();
    analyze->add_option("--out", analyze_out, "Output directory");

    std::string metrics_path;
    std::string report_out = default_out_dir();
    auto* report = app.add_subcommand("report", "Plot-ready data from a metrics report");
    report->add_option("--metrics", metrics_path, "report.json from analyze")->required();
    report->add_option("--out", report_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitInput;
    }

    try {
        if (physics->parsed()) return cmd_physics(material_path, temperature);
        if (chip_new->parsed()) return cmd_chip_new(chip_id, chip_material, chip_out);
        if (simulate->parsed()) return cmd_simulate(sim);
        if (analyze->parsed()) return cmd_analyze(trace_dir, analyze_out);
        if (report->parsed()) return cmd_report(metrics_path, report_out);
    } catch (const hfs::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitInput;
}
