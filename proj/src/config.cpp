#include "nanotip/config.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "nanotip/io.hpp"

namespace nanotip {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct RawConfig {
    std::map<std::string, std::string> values;
    std::vector<std::string> order;  // file order, for stable unknown-key reporting
};

RawConfig tokenize(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!section.empty()) key = section + "." + key;
        if (raw.values.count(key))
            throw ConfigError("duplicate key '" + key + "'");
        raw.values[key] = value;
        raw.order.push_back(key);
    }
    return raw;
}

// Pulls keys out of the raw map, recording defaults for anything absent.
struct Reader {
    RawConfig& raw;
    std::vector<std::string> consumed;
    std::vector<std::string>* defaulted;

    bool has(const std::string& key) const { return raw.values.count(key) > 0; }
    bool has_prefix(const std::string& prefix) const {
        for (const auto& [k, v] : raw.values)
            if (k.rfind(prefix, 0) == 0) return true;
        return false;
    }

    std::string take(const std::string& key, const std::string& fallback) {
        auto it = raw.values.find(key);
        if (it == raw.values.end()) {
            defaulted->push_back(key + " = " + fallback);
            return fallback;
        }
        consumed.push_back(key);
        const std::string v = it->second;
        raw.values.erase(it);
        return v;
    }

    double take_double(const std::string& key, double fallback) {
        const std::string v = take(key, format_double(fallback));
        double out = 0.0;
        const char* b = v.data();
        const char* e = v.data() + v.size();
        auto [p, ec] = std::from_chars(b, e, out);
        if (ec != std::errc() || p != e)
            throw ConfigError("invalid value for '" + key + "': '" + v + "'");
        return out;
    }

    int take_int(const std::string& key, int fallback) {
        const std::string v = take(key, std::to_string(fallback));
        int out = 0;
        const char* b = v.data();
        const char* e = v.data() + v.size();
        auto [p, ec] = std::from_chars(b, e, out);
        if (ec != std::errc() || p != e)
            throw ConfigError("invalid value for '" + key + "': '" + v + "'");
        return out;
    }

    bool take_bool(const std::string& key, bool fallback) {
        const std::string v = take(key, fallback ? "true" : "false");
        if (v == "true") return true;
        if (v == "false") return false;
        throw ConfigError("invalid value for '" + key + "': expected true or false");
    }
};

CampaignKind parse_kind(const std::string& v) {
    if (v == "intensity") return CampaignKind::intensity;
    if (v == "polarization") return CampaignKind::polarization;
    if (v == "delay") return CampaignKind::delay;
    if (v == "fringe") return CampaignKind::fringe;
    throw ConfigError("invalid value for 'scan.kind': '" + v + "'");
}

EngineKind parse_engine(const std::string& v) {
    if (v == "tdse") return EngineKind::tdse;
    if (v == "dyson") return EngineKind::dyson;
    if (v == "scaling") return EngineKind::scaling;
    throw ConfigError("invalid value for 'engine.kind': '" + v + "'");
}

ConvergencePolicy parse_convergence(const std::string& v) {
    if (v == "off") return ConvergencePolicy::off;
    if (v == "first") return ConvergencePolicy::first_point;
    if (v == "all") return ConvergencePolicy::all_points;
    throw ConfigError("invalid value for 'engine.convergence_check': '" + v + "'");
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        double x = 0.0;
        auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
        if (ec != std::errc() || p != item.data() + item.size())
            throw ConfigError("invalid value for '" + key + "': '" + item + "'");
        out.push_back(x);
    }
    if (out.empty()) throw ConfigError("empty list for '" + key + "'");
    return out;
}

struct PulseDefaults {
    double wavelength, intensity, fwhm, delay, phase, angle;
};

PulseSpec read_pulse(Reader& r, const std::string& section, const std::string& label,
                     const PulseDefaults& d) {
    PulseSpec p;
    p.label = label;
    p.wavelength_nm = r.take_double(section + ".wavelength_nm", d.wavelength);
    p.peak_intensity_wcm2 = r.take_double(section + ".peak_intensity_wcm2", d.intensity);
    p.fwhm_fs = r.take_double(section + ".fwhm_fs", d.fwhm);
    p.delay_fs = r.take_double(section + ".delay_fs", d.delay);
    p.carrier_phase_rad = r.take_double(section + ".carrier_phase_rad", d.phase);
    p.polarization_angle_deg = r.take_double(section + ".polarization_angle_deg", d.angle);
    return p;
}

std::string channels_to_string(const std::vector<ChannelSpec>& channels) {
    std::string s;
    for (const auto& ch : channels) {
        if (!s.empty()) s += "; ";
        s += ch.to_string();
    }
    return s;
}

std::vector<ChannelSpec> parse_channels(const std::string& v) {
    std::vector<ChannelSpec> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ';')) {
        item = trim(item);
        if (!item.empty()) out.push_back(ChannelSpec::parse(item));
    }
    if (out.empty()) throw ConfigError("empty list for 'scan.channels'");
    return out;
}

} // namespace

ParsedConfig parse_config(const std::string& text, std::optional<CampaignKind> kind_override) {
    RawConfig raw = tokenize(text);
    ParsedConfig out;
    ScanConfig& cfg = out.scan;
    Reader r{raw, {}, &out.defaulted};

    // campaign kind decides the remaining defaults
    std::optional<CampaignKind> file_kind;
    if (r.has("scan.kind")) file_kind = parse_kind(r.take("scan.kind", ""));
    if (file_kind && kind_override && *file_kind != *kind_override)
        throw ConfigError("scan.kind = " + to_string(*file_kind) +
                          " conflicts with the requested campaign " +
                          to_string(*kind_override));
    if (!file_kind && !kind_override)
        throw ConfigError("missing required key 'scan.kind'");
    cfg.kind = file_kind ? *file_kind : *kind_override;
    if (!file_kind) out.defaulted.push_back("scan.kind = " + to_string(cfg.kind));
    const bool fringe = cfg.kind == CampaignKind::fringe;

    cfg.tip.bias_voltage_v = r.take_double("tip.bias_voltage_v", 170.0);
    cfg.tip.radius_nm = r.take_double("tip.radius_nm", 50.0);
    cfg.tip.enhancement_factor = r.take_double("tip.enhancement_factor", 4.0);
    cfg.tip.work_function_ev = r.take_double("tip.work_function_ev", 6.0);

    const PulseDefaults w_def = fringe ? PulseDefaults{1560.0, 3.0e11, 100.0, 0.0, 0.0, 0.0}
                                       : PulseDefaults{800.0, 6.7e11, 100.0, 0.0, 0.0, 48.0};
    const PulseDefaults w2_def = fringe ? PulseDefaults{780.0, 1.0e10, 400.0, 0.0, 0.0, 0.0}
                                        : PulseDefaults{400.0, 2.2e10, 400.0, 0.0, 0.0, -64.0};
    cfg.field.pulses.push_back(read_pulse(r, "pulse.omega", "w", w_def));
    cfg.field.pulses.push_back(read_pulse(r, "pulse.two_omega", "2w", w2_def));

    if (r.has_prefix("levels.")) {
        if (!r.has("levels.energies_ev"))
            throw ConfigError("missing required key 'levels.energies_ev' "
                              "(required when [levels] is customized)");
        LevelSystem sys;
        sys.energies_ev = parse_double_list("levels.energies_ev",
                                            r.take("levels.energies_ev", ""));
        const std::size_t nl = sys.energies_ev.size();
        sys.dipoles_enm.assign(nl, std::vector<double>(nl, 0.0));
        for (std::size_t i = 0; i < nl; ++i)
            for (std::size_t j = i + 1; j < nl; ++j) {
                const std::string key =
                    "levels.dipole_" + std::to_string(i) + "_" + std::to_string(j);
                if (r.has(key)) {
                    const double d = r.take_double(key, 0.0);
                    sys.dipoles_enm[i][j] = sys.dipoles_enm[j][i] = d;
                }
            }
        sys.initial_index = r.take_int("levels.initial_index", 0);
        sys.final_index = r.take_int("levels.final_index", static_cast<int>(nl) - 1);
        cfg.system = sys;
    } else {
        cfg.system = fringe ? default_w310_system(cfg.field.pulses[0].wavelength_nm)
                            : default_two_color_system(cfg.field.pulses[0].wavelength_nm);
        out.defaulted.push_back(std::string("levels = ") +
                                 (fringe ? "default shifted ladder (W(310) parameters)"
                                         : "default shifted ladder (two-color parameters)"));
    }

    // campaign axis defaults
    double def_start = 0.0, def_stop = 0.0;
    int def_points = 0;
    std::string def_sweep;
    switch (cfg.kind) {
        case CampaignKind::intensity:
            def_start = 0.1; def_stop = 1.0; def_points = 10; def_sweep = "scale";
            break;
        case CampaignKind::polarization:
            def_start = -90.0; def_stop = 90.0; def_points = 37; def_sweep = "theta_w";
            break;
        case CampaignKind::delay:
            def_start = -1000.0; def_stop = 1000.0; def_points = 201; def_sweep = "tau_w";
            break;
        case CampaignKind::fringe:
            def_start = -13.0; def_stop = 13.0; def_points = 161; def_sweep = "tau_w";
            break;
    }
    cfg.axis_start = r.take_double("scan.start", def_start);
    cfg.axis_stop = r.take_double("scan.stop", def_stop);
    cfg.axis_points = r.take_int("scan.points", def_points);
    cfg.sweep = r.take("scan.sweep", def_sweep);
    cfg.background_subtraction = r.take_bool("scan.background_subtraction", true);
    cfg.shared_final_state = r.take_bool("scan.shared_final_state", fringe);
    cfg.locus_exponent_w = r.take_double("scan.locus_exponent_w", 1.0);
    cfg.locus_exponent_2w = r.take_double("scan.locus_exponent_2w", 1.0);
    const std::string def_channels = fringe ? "w:4; w:2,2w:1" : "w:4; 2w:2; w:2,2w:1";
    cfg.channels = parse_channels(r.take("scan.channels", def_channels));
    cfg.subscan = r.take_bool("scan.subscan", false);
    cfg.subscan_center_fs = r.take_double("scan.subscan_center_fs", 67.0);
    cfg.subscan_halfwidth_fs = r.take_double("scan.subscan_halfwidth_fs", 20.0);

    cfg.engine = parse_engine(r.take("engine.kind", "dyson"));
    cfg.steps_per_cycle = r.take_double("engine.steps_per_cycle", 40.0);
    cfg.grid_padding_fwhm = r.take_double("engine.grid_padding_fwhm", 3.0);
    cfg.material_ratio = r.take_double("engine.material_ratio", 1.0);
    cfg.phase_average = r.take_bool("engine.phase_average", true);
    cfg.convergence = parse_convergence(r.take("engine.convergence_check", "first"));
    cfg.threads = r.take_int("engine.threads", 1);

    if (!raw.values.empty()) {
        for (const auto& key : raw.order)
            if (raw.values.count(key))
                throw ConfigError("unknown key '" + key + "'");
    }

    std::sort(out.defaulted.begin(), out.defaulted.end());
    cfg.validate();
    return out;
}

std::string serialize_config(const ScanConfig& cfg) {
    std::ostringstream os;
    os << "[tip]\n";
    os << "bias_voltage_v = " << format_double(cfg.tip.bias_voltage_v) << "\n";
    os << "radius_nm = " << format_double(cfg.tip.radius_nm) << "\n";
    os << "enhancement_factor = " << format_double(cfg.tip.enhancement_factor) << "\n";
    os << "work_function_ev = " << format_double(cfg.tip.work_function_ev) << "\n";
    for (const auto& p : cfg.field.pulses) {
        os << "\n[pulse." << (p.label == "w" ? "omega" : "two_omega") << "]\n";
        os << "wavelength_nm = " << format_double(p.wavelength_nm) << "\n";
        os << "peak_intensity_wcm2 = " << format_double(p.peak_intensity_wcm2) << "\n";
        os << "fwhm_fs = " << format_double(p.fwhm_fs) << "\n";
        os << "delay_fs = " << format_double(p.delay_fs) << "\n";
        os << "carrier_phase_rad = " << format_double(p.carrier_phase_rad) << "\n";
        os << "polarization_angle_deg = " << format_double(p.polarization_angle_deg) << "\n";
    }
    os << "\n[levels]\n";
    os << "energies_ev = ";
    for (std::size_t i = 0; i < cfg.system.energies_ev.size(); ++i)
        os << (i ? ", " : "") << format_double(cfg.system.energies_ev[i]);
    os << "\n";
    for (std::size_t i = 0; i < cfg.system.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.system.size(); ++j)
            if (cfg.system.dipoles_enm[i][j] != 0.0)
                os << "dipole_" << i << "_" << j << " = "
                   << format_double(cfg.system.dipoles_enm[i][j]) << "\n";
    os << "initial_index = " << cfg.system.initial_index << "\n";
    os << "final_index = " << cfg.system.final_index << "\n";
    os << "\n[scan]\n";
    os << "kind = " << to_string(cfg.kind) << "\n";
    os << "start = " << format_double(cfg.axis_start) << "\n";
    os << "stop = " << format_double(cfg.axis_stop) << "\n";
    os << "points = " << cfg.axis_points << "\n";
    os << "sweep = " << cfg.sweep << "\n";
    os << "background_subtraction = " << (cfg.background_subtraction ? "true" : "false") << "\n";
    os << "shared_final_state = " << (cfg.shared_final_state ? "true" : "false") << "\n";
    os << "locus_exponent_w = " << format_double(cfg.locus_exponent_w) << "\n";
    os << "locus_exponent_2w = " << format_double(cfg.locus_exponent_2w) << "\n";
    os << "channels = " << channels_to_string(cfg.channels) << "\n";
    os << "subscan = " << (cfg.subscan ? "true" : "false") << "\n";
    os << "subscan_center_fs = " << format_double(cfg.subscan_center_fs) << "\n";
    os << "subscan_halfwidth_fs = " << format_double(cfg.subscan_halfwidth_fs) << "\n";
    os << "\n[engine]\n";
    os << "kind = " << to_string(cfg.engine) << "\n";
    os << "steps_per_cycle = " << format_double(cfg.steps_per_cycle) << "\n";
    os << "grid_padding_fwhm = " << format_double(cfg.grid_padding_fwhm) << "\n";
    os << "material_ratio = " << format_double(cfg.material_ratio) << "\n";
    os << "phase_average = " << (cfg.phase_average ? "true" : "false") << "\n";
    os << "convergence_check = " << to_string(cfg.convergence) << "\n";
    os << "threads = " << cfg.threads << "\n";
    return os.str();
}

} // namespace nanotip
