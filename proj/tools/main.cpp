// nanotip: two-color multiphoton nanotip emission simulator.
//
// Subcommands run one experiment campaign from a config file and write
// scan.csv, summary.json, and manifest.json into the output directory;
// `info` prints the derived setup quantities for a configuration.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nanotip/config.hpp"
#include "nanotip/constants.hpp"
#include "nanotip/io.hpp"
#include "nanotip/tip.hpp"
#include "nanotip/version.hpp"

namespace {

using namespace nanotip;

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::string engine;
    int threads = 0;
    bool quiet = false;
};

ScanConfig load_config(const CommonArgs& args, CampaignKind kind, std::string* echo_digest) {
    std::string text;
    if (!args.config_path.empty()) text = read_file(args.config_path);
    ParsedConfig parsed = parse_config(text, kind);
    if (!args.engine.empty()) {
        if (args.engine == "tdse") parsed.scan.engine = EngineKind::tdse;
        else if (args.engine == "dyson") parsed.scan.engine = EngineKind::dyson;
        else if (args.engine == "scaling") parsed.scan.engine = EngineKind::scaling;
        else throw ConfigError("invalid --engine '" + args.engine + "'");
    }
    if (args.threads > 0) parsed.scan.threads = args.threads;
    if (!args.quiet)
        for (const auto& d : parsed.defaulted) std::cerr << "# default: " << d << "\n";
    if (echo_digest) *echo_digest = digest_hex(serialize_config(parsed.scan));
    return parsed.scan;
}

int run_campaign(const CommonArgs& args, CampaignKind kind) {
    std::string config_digest;
    ScanConfig cfg = load_config(args, kind, &config_digest);
    const ScanResult result = run_scan(cfg);

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(args.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + args.out_dir + "'");

    const std::string csv_path = (fs::path(args.out_dir) / "scan.csv").string();
    const std::string summary_path = (fs::path(args.out_dir) / "summary.json").string();
    const std::string manifest_path = (fs::path(args.out_dir) / "manifest.json").string();

    const std::string csv = render_scan_csv(result);
    write_file(csv_path, csv);
    const std::string summary = render_summary_json(result, digest_hex(csv));
    write_file(summary_path, summary);

    RunManifest manifest;
    manifest.tool_version = version;
    manifest.created_utc = utc_now();
    manifest.campaign = to_string(cfg.kind);
    manifest.engine = to_string(cfg.engine);
    manifest.config_digest = config_digest;
    manifest.outputs.push_back({"scan.csv", csv.size(), digest_hex(csv)});
    manifest.outputs.push_back({"summary.json", summary.size(), digest_hex(summary)});
    write_manifest_json(manifest, manifest_path);

    if (!args.quiet) {
        std::cerr << "# wrote " << csv_path << ", " << summary_path << ", "
                  << manifest_path << "\n";
        for (const auto& [k, v] : result.derived)
            std::cerr << "# " << k << " = " << format_double(v) << "\n";
        if (result.regime_warning)
            std::cerr << "# warning: " << result.notes.at("regime") << "\n";
    }
    return 0;
}

int run_info(const CommonArgs& args) {
    std::string text;
    if (!args.config_path.empty()) text = read_file(args.config_path);
    // defaults mirror the delay campaign (paper setup) when no config given
    ParsedConfig parsed = parse_config(text, text.empty() ? std::optional<CampaignKind>(
                                                                CampaignKind::delay)
                                                          : std::nullopt);
    const ScanConfig& cfg = parsed.scan;

    const double e_dc = dc_field_v_per_m(cfg.tip);
    const SchottkyResult schottky =
        schottky_effective_work_function(cfg.tip.work_function_ev, e_dc);

    std::cout << "tool_version = " << version << "\n";
    std::cout << "dc_field_v_per_m = " << format_double(e_dc) << "\n";
    std::cout << "schottky_lowering_ev = " << format_double(schottky.lowering_ev) << "\n";
    std::cout << "effective_work_function_ev = " << format_double(schottky.effective_ev)
              << "\n";
    std::cout << "barrier_suppressed = " << (schottky.barrier_suppressed ? "true" : "false")
              << "\n";
    for (const auto& p : cfg.field.pulses) {
        const std::string tag = "pulse_" + p.label;
        std::cout << tag << "_photon_energy_ev = "
                  << format_double(units::photon_energy_ev(p.wavelength_nm)) << "\n";
        std::cout << tag << "_peak_field_v_per_nm = " << format_double(p.peak_field_v_nm())
                  << "\n";
    }
    const PulseSpec* w = cfg.field.find("w");
    const PulseSpec* w2 = cfg.field.find("2w");
    if (w && w2)
        std::cout << "two_color_intensity_wcm2 = "
                  << format_double(units::two_color_intensity(w->peak_intensity_wcm2,
                                                              w2->peak_intensity_wcm2))
                  << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-color multiphoton nanotip emission simulator"};
    app.set_version_flag("--version", nanotip::version);
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common = [&](CLI::App* sub, bool needs_out) {
        sub->add_option("--config", args.config_path, "config file (key = value sections)");
        if (needs_out)
            sub->add_option("--out", args.out_dir, "output directory")->required();
        sub->add_option("--engine", args.engine, "tdse | dyson | scaling");
        sub->add_option("--threads", args.threads, "concurrent scan-point evaluations");
        sub->add_flag("--quiet", args.quiet, "suppress progress notes on stderr");
    };

    CLI::App* sc_int = app.add_subcommand("scan-intensity", "intensity sweep campaign");
    CLI::App* sc_pol = app.add_subcommand("scan-polarization", "polarization sweep campaign");
    CLI::App* sc_del = app.add_subcommand("scan-delay", "pulse-delay correlation campaign");
    CLI::App* sc_fri = app.add_subcommand("fringe", "sub-cycle delay fringe campaign");
    CLI::App* sc_inf = app.add_subcommand("info", "print derived setup quantities");
    add_common(sc_int, true);
    add_common(sc_pol, true);
    add_common(sc_del, true);
    add_common(sc_fri, true);
    add_common(sc_inf, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sc_inf->parsed()) return run_info(args);
        if (sc_int->parsed()) return run_campaign(args, nanotip::CampaignKind::intensity);
        if (sc_pol->parsed()) return run_campaign(args, nanotip::CampaignKind::polarization);
        if (sc_del->parsed()) return run_campaign(args, nanotip::CampaignKind::delay);
        if (sc_fri->parsed()) return run_campaign(args, nanotip::CampaignKind::fringe);
    } catch (const nanotip::ConfigError& e) {
        std::cerr << "error[config]: " << e.what() << "\n";
        return 2;
    } catch (const nanotip::NumericError& e) {
        std::cerr << "error[numeric]: " << e.what() << "\n";
        return 3;
    } catch (const nanotip::IoError& e) {
        std::cerr << "error[io]: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "error[numeric]: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
