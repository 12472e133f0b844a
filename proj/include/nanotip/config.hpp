// Sectioned key = value configuration files.  Keys mirror the domain-type
// fields, e.g.
//
//   [pulse.omega]
//   wavelength_nm = 800
//
// Unknown keys are errors; omitted keys take documented defaults and every
// defaulted key is reported.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nanotip/scans.hpp"

namespace nanotip {

struct ParsedConfig {
    ScanConfig scan;
    std::vector<std::string> defaulted;  // "section.key = value" for every default applied
};

// kind_override comes from the CLI subcommand; a conflicting scan.kind in the
// text is a ConfigError.
ParsedConfig parse_config(const std::string& text,
                          std::optional<CampaignKind> kind_override = std::nullopt);

// Canonical full rendering; parse(serialize(parse(text))) == parse(text).
std::string serialize_config(const ScanConfig& cfg);

} // namespace nanotip
