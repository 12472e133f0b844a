// Experiment campaigns: intensity, polarization, delay, fringe.  Each sweep
// evaluates per-channel emission probabilities with the selected engine and
// runs the campaign's fits.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nanotip/channels.hpp"
#include "nanotip/fitting.hpp"
#include "nanotip/levels.hpp"
#include "nanotip/pulse.hpp"
#include "nanotip/tip.hpp"

namespace nanotip {

enum class CampaignKind { intensity, polarization, delay, fringe };
enum class EngineKind { tdse, dyson, scaling };
enum class ConvergencePolicy { off, first_point, all_points };

std::string to_string(CampaignKind k);
std::string to_string(EngineKind k);
std::string to_string(ConvergencePolicy p);

struct ScanConfig {
    CampaignKind kind = CampaignKind::intensity;
    EngineKind engine = EngineKind::dyson;

    TipSpec tip;
    TwoColorField field;        // base pulses; sweeps modify copies
    LevelSystem system;
    std::vector<ChannelSpec> channels;

    // axis: intensity scans sweep the scale factor s in [start, stop]
    // (log-spaced) along (I_w s^a, I_2w s^b); polarization sweeps an angle in
    // degrees; delay and fringe sweep a pulse delay in fs.
    double axis_start = 0.0;
    double axis_stop = 0.0;
    int axis_points = 0;
    std::string sweep = "";     // polarization: "theta_w" | "theta_2w"; delay/fringe: "tau_w"

    bool background_subtraction = true;
    bool shared_final_state = false;  // coherent channel sum (W(310)-like scenario)
    double locus_exponent_w = 1.0;    // a in I_w -> I_w s^a
    double locus_exponent_2w = 1.0;   // b in I_2w -> I_2w s^b

    // delay-campaign fine sub-scan probing for carrier-frequency fringes
    bool subscan = false;
    double subscan_center_fs = 67.0;
    double subscan_halfwidth_fs = 20.0;

    // engine tuning
    double steps_per_cycle = 40.0;
    double grid_padding_fwhm = 3.0;
    double material_ratio = 1.0;      // scaling engine: 2w vertex strength / w vertex strength
    bool phase_average = true;        // tdse engine: average over relative carrier phase
    ConvergencePolicy convergence = ConvergencePolicy::first_point;
    int threads = 1;

    void validate() const;
};

// One evaluated sweep point.
struct PointResult {
    double p_w = 0.0;       // single-color first-color channel(s)
    double p_2w = 0.0;      // single-color second-color channel(s)
    double p_multi = 0.0;   // multicolor channel(s), background-subtracted sense
    double p_total = 0.0;
    bool regime_flag = false;
};

struct PeakSummary {
    double center_fs = 0.0;
    double height = 0.0;
    double fwhm_fs = 0.0;
};

struct ScanResult {
    ScanConfig config;                    // echo of the evaluated configuration
    std::string axis_label;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;  // column-major, data[c][i]

    std::map<std::string, double> derived;   // fits, peaks, c1/c2, ...
    std::map<std::string, std::string> notes;
    bool regime_warning = false;

    const std::vector<double>& column(const std::string& name) const;
};

PointResult evaluate_point(const ScanConfig& cfg, const TwoColorField& field,
                           const LadderOptions& ladder_opts);

ScanResult run_intensity_scan(const ScanConfig& cfg);
ScanResult run_polarization_scan(const ScanConfig& cfg);
ScanResult run_delay_scan(const ScanConfig& cfg);
ScanResult run_fringe_scan(const ScanConfig& cfg);
ScanResult run_scan(const ScanConfig& cfg);  // dispatch on cfg.kind

// Default desk-model level systems.  Both are uniformly shifted ladders
// E_k = k p - D (k = 1..3), E_4 = 4 p with photon energy p: the intermediate
// levels sit a fixed detuning D below every partial photon sum, so all
// intermediate configurations stay virtual while the final level is exactly
// n-photon resonant.  Nearest-neighbor dipoles carry the one-photon hops,
// next-nearest the two-photon hops.
LevelSystem default_two_color_system(double wavelength_w_nm);  // D = 0.5 eV, d = 0.12/0.06
LevelSystem default_w310_system(double wavelength_nu_nm);      // D = 0.3 eV, d = 0.10/0.05

} // namespace nanotip
