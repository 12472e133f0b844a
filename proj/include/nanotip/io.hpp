// Result persistence: CSV tables for plotting, JSON summary with provenance,
// and a run manifest with per-file content digests.  All numeric output uses
// 17-significant-digit formatting so doubles round-trip losslessly and
// identical configs reproduce byte-identical files.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nanotip/scans.hpp"

namespace nanotip {

// Locale-independent shortest-17-digit rendering of a double.
std::string format_double(double v);

std::string render_scan_csv(const ScanResult& result);
void write_scan_csv(const ScanResult& result, const std::string& path);

// scan_csv_digest, when known, is echoed so the summary carries the digest of
// the table it describes.
std::string render_summary_json(const ScanResult& result,
                                const std::string& scan_csv_digest = "");
void write_summary_json(const ScanResult& result, const std::string& path,
                        const std::string& scan_csv_digest = "");

// FNV-1a 64-bit content digest, rendered as 16 hex digits.
std::uint64_t fnv1a64(const std::string& bytes);
std::string digest_hex(const std::string& bytes);

struct ManifestEntry {
    std::string path;       // relative to the output directory
    std::size_t bytes = 0;
    std::string fnv1a64;
};

struct RunManifest {
    std::string tool_version;
    std::string created_utc;   // informational; digests carry the determinism contract
    std::string campaign;
    std::string engine;
    std::string config_digest;
    std::vector<ManifestEntry> outputs;
};

std::string render_manifest_json(const RunManifest& manifest);
void write_manifest_json(const RunManifest& manifest, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

} // namespace nanotip
