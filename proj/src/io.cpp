#include "nanotip/io.hpp"

#include <charconv>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "nanotip/config.hpp"
#include "nanotip/version.hpp"

namespace nanotip {

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
    if (ec != std::errc()) return "nan";
    return std::string(buf, p);
}

std::string render_scan_csv(const ScanResult& result) {
    std::string out;
    for (std::size_t c = 0; c < result.columns.size(); ++c) {
        if (c) out += ",";
        out += result.columns[c];
    }
    out += "\n";
    const std::size_t rows = result.data.empty() ? 0 : result.data.front().size();
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t c = 0; c < result.data.size(); ++c) {
            if (c) out += ",";
            out += format_double(result.data[c][i]);
        }
        out += "\n";
    }
    return out;
}

void write_scan_csv(const ScanResult& result, const std::string& path) {
    write_file(path, render_scan_csv(result));
}

std::string render_summary_json(const ScanResult& result, const std::string& scan_csv_digest) {
    nlohmann::ordered_json j;
    j["tool_version"] = version;
    j["campaign"] = to_string(result.config.kind);
    j["engine"] = to_string(result.config.engine);
    j["axis_label"] = result.axis_label;
    j["points"] = result.config.axis_points;
    j["regime_warning"] = result.regime_warning;
    nlohmann::ordered_json derived = nlohmann::ordered_json::object();
    for (const auto& [k, v] : result.derived) derived[k] = v;
    j["derived"] = derived;
    nlohmann::ordered_json notes = nlohmann::ordered_json::object();
    for (const auto& [k, v] : result.notes) notes[k] = v;
    j["notes"] = notes;
    nlohmann::ordered_json channels = nlohmann::ordered_json::array();
    for (const auto& ch : result.config.channels) channels.push_back(ch.to_string());
    j["channels"] = channels;
    if (!scan_csv_digest.empty()) j["scan_csv_fnv1a64"] = scan_csv_digest;
    j["config_echo"] = serialize_config(result.config);
    return j.dump(2) + "\n";
}

void write_summary_json(const ScanResult& result, const std::string& path,
                        const std::string& scan_csv_digest) {
    write_file(path, render_summary_json(result, scan_csv_digest));
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string digest_hex(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string render_manifest_json(const RunManifest& manifest) {
    nlohmann::ordered_json j;
    j["tool_version"] = manifest.tool_version;
    j["created_utc"] = manifest.created_utc;
    j["campaign"] = manifest.campaign;
    j["engine"] = manifest.engine;
    j["digest_algorithm"] = "fnv1a64";
    j["config_digest"] = manifest.config_digest;
    nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
    for (const auto& e : manifest.outputs) {
        nlohmann::ordered_json o;
        o["path"] = e.path;
        o["bytes"] = e.bytes;
        o["fnv1a64"] = e.fnv1a64;
        outputs.push_back(o);
    }
    j["outputs"] = outputs;
    return j.dump(2) + "\n";
}

void write_manifest_json(const RunManifest& manifest, const std::string& path) {
    write_file(path, render_manifest_json(manifest));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes;
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for '" + path + "'");
}

} // namespace nanotip
