#pragma once

// CSV + manifest output. Every CSV starts with '#' comment lines embedding
// the run manifest (tool version, subcommand, resolved parameters, seed), so
// a file is self-describing; the sidecar .manifest.json additionally records
// FNV-1a checksums of the written files. Deterministic subcommands reproduce
// byte-identical CSVs from an identical manifest.
//
// Dialect: comma-separated, '.' decimal point, %.12g numbers, UTF-8, LF.

#include <filesystem>
#include <fstream>
#include <iomanip>

#include <json.hpp>

#include "config.hpp"
#include "numerics.hpp"

namespace qmem {

inline const char* kToolVersion = "qmem 0.1.0";

inline std::string format_number(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

struct RunManifest {
    std::string subcommand;
    std::string version = kToolVersion;
    std::map<std::string, std::string> params;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> outputs;  // filename, checksum

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["tool"] = version;
        j["subcommand"] = subcommand;
        j["seed"] = seed;
        j["params"] = params;
        nlohmann::json outs = nlohmann::json::array();
        for (const auto& [f, c] : outputs) outs.push_back({{"file", f}, {"checksum_fnv1a", c}});
        j["outputs"] = outs;
        return j;
    }

    std::string header_comment() const {
        std::ostringstream os;
        os << "# " << version << "\n# subcommand = " << subcommand << "\n";
        for (const auto& [k, v] : params) os << "# " << k << " = " << v << "\n";
        os << "# seed = " << seed << "\n";
        return os.str();
    }
};

class CsvBuilder {
  public:
    explicit CsvBuilder(const RunManifest& manifest) { body_ << manifest.header_comment(); }

    void columns(const std::vector<std::string>& names) {
        for (std::size_t i = 0; i < names.size(); ++i)
            body_ << names[i] << (i + 1 < names.size() ? "," : "\n");
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            body_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
    }

    void numeric_row(const std::vector<double>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            body_ << format_number(cells[i]) << (i + 1 < cells.size() ? "," : "\n");
    }

    std::string str() const { return body_.str(); }

  private:
    std::ostringstream body_;
};

class OutputWriter {
  public:
    explicit OutputWriter(std::string dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    // env QMEM_OUT_DIR, else the given fallback (usually ".")
    static std::string resolve_dir(const std::string& flag_value) {
        if (!flag_value.empty()) return flag_value;
        if (const char* env = std::getenv("QMEM_OUT_DIR"); env && *env) return env;
        return ".";
    }

    std::string write(RunManifest& manifest, const std::string& filename,
                      const CsvBuilder& csv) {
        const std::string content = csv.str();
        const auto path = std::filesystem::path(dir_) / filename;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write output file " + path.string());
        out << content;
        out.close();
        std::ostringstream hex;
        hex << std::hex << std::setw(16) << std::setfill('0')
            << fnv1a(std::span<const char>(content.data(), content.size()));
        manifest.outputs.emplace_back(filename, hex.str());
        return path.string();
    }

    std::string write_manifest(const RunManifest& manifest) {
        const auto path =
            std::filesystem::path(dir_) / (manifest.subcommand + ".manifest.json");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write manifest " + path.string());
        out << manifest.to_json().dump(2) << "\n";
        return path.string();
    }

  private:
    std::string dir_;
};

}  // namespace qmem
