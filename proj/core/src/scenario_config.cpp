#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "subnyq/evaluation.hpp"
#include "subnyq/io_util.hpp"

namespace subnyq {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

struct RawConfig {
    // section.key -> values (repeated keys like "band" accumulate)
    std::map<std::string, std::vector<std::string>> entries;

    bool has(const std::string& key) const { return entries.count(key) > 0; }
    std::string get(const std::string& key, const std::string& fallback = "") const {
        auto it = entries.find(key);
        return it == entries.end() ? fallback : it->second.back();
    }
    double get_double(const std::string& key, double fallback) const {
        auto it = entries.find(key);
        return it == entries.end() ? fallback : std::stod(it->second.back());
    }
    long long get_int(const std::string& key, long long fallback) const {
        auto it = entries.find(key);
        return it == entries.end() ? fallback : std::stoll(it->second.back());
    }
};

RawConfig parse_ini(std::istream& in) {
    RawConfig raw;
    std::string line;
    std::string section;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw IoError("config: expected key = value, got '" + line + "'");
        const std::string key = section + "." + trim(line.substr(0, eq));
        raw.entries[key].push_back(trim(line.substr(eq + 1)));
    }
    return raw;
}

std::vector<ExperimentArm> parse_arms(const std::string& text) {
    std::vector<ExperimentArm> arms;
    std::istringstream stream(text);
    std::string token;
    while (stream >> token) {
        ExperimentArm arm;
        const auto colon = token.find(':');
        const std::string mode_part = colon == std::string::npos ? token : token.substr(0, colon);
        arm.mode = array_mode_from_id(std::stoi(mode_part));
        if (colon != std::string::npos) {
            const std::string kind = token.substr(colon + 1);
            if (kind == "cognitive" || kind == "cog")
                arm.spectrum = SpectrumKind::Cognitive;
            else if (kind == "full" || kind == "noncognitive")
                arm.spectrum = SpectrumKind::Full;
            else if (kind == "flat" || kind == "subband-flat")
                arm.spectrum = SpectrumKind::SubbandFlat;
            else
                throw IoError("config: unknown arm spectrum '" + kind + "'");
        }
        arms.push_back(arm);
    }
    return arms;
}

}  // namespace

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path);
    const RawConfig raw = parse_ini(in);

    ScenarioConfig config;
    config.params = RadarParams::make(
        static_cast<int>(raw.get_int("radar.tx_count", 8)),
        static_cast<int>(raw.get_int("radar.rx_count", 10)),
        raw.get_double("radar.pri_s", 100e-6),
        static_cast<int>(raw.get_int("radar.pulses", 10)),
        raw.get_double("radar.tx_bandwidth_hz", 15e6),
        raw.get_double("radar.carrier_hz", 10e9));
    config.guard_hz = raw.get_double("radar.guard_hz", 0.2 * config.params.tx_bandwidth_hz);

    if (raw.has("spectrum.band")) {
        for (const std::string& text : raw.entries.at("spectrum.band")) {
            std::istringstream pair(text);
            Band band;
            if (!(pair >> band.start_hz >> band.stop_hz))
                throw IoError("config: band needs 'start stop', got '" + text + "'");
            config.cognitive_bands.push_back(band);
        }
    }

    if (raw.has("experiment.arms")) config.arms = parse_arms(raw.get("experiment.arms"));
    if (config.arms.empty()) config.arms = {{ArrayMode::Ula, SpectrumKind::Full}};

    config.target_count = static_cast<int>(raw.get_int("scene.targets", 10));
    config.separation.sine_azimuth = raw.get_double("scene.min_azimuth_separation", 0.0);
    config.amplitude_spread_db = raw.get_double("scene.amplitude_spread_db", 0.0);
    config.scene_file = raw.get("scene.file");

    const std::string snr = raw.get("noise.snr_db", "inf");
    config.snr_db = (snr == "inf" || snr == "+inf")
                        ? std::numeric_limits<double>::infinity()
                        : std::stod(snr);

    if (raw.has("recovery.residual_ratio"))
        config.residual_stop_ratio = raw.get_double("recovery.residual_ratio", 0.0);
    config.refine_factor = static_cast<int>(raw.get_int("recovery.refine", 0));

    config.trials = static_cast<int>(raw.get_int("experiment.trials", 1));
    config.seed = static_cast<std::uint64_t>(raw.get_int("experiment.seed", 1));
    config.array_seed =
        static_cast<std::uint64_t>(raw.get_int("experiment.array_seed", config.seed));
    config.sample_rate_hz =
        raw.get_double("experiment.sample_rate_hz", 2.0 * config.params.tx_bandwidth_hz);
    config.stopband_atten_db = raw.get_double("experiment.stopband_atten_db", 30.0);
    config.out_dir = raw.get("experiment.out", "out");
    return config;
}

void write_scenario_config(std::ostream& out, const ScenarioConfig& config) {
    out << "[radar]\n";
    out << "tx_count = " << config.params.tx_count << '\n';
    out << "rx_count = " << config.params.rx_count << '\n';
    out << "pri_s = " << fmt_double(config.params.pri_s) << '\n';
    out << "pulses = " << config.params.pulse_count << '\n';
    out << "tx_bandwidth_hz = " << fmt_double(config.params.tx_bandwidth_hz) << '\n';
    out << "carrier_hz = " << fmt_double(config.params.carrier_hz) << '\n';
    out << "guard_hz = " << fmt_double(config.guard_hz) << '\n';
    out << "\n[spectrum]\n";
    for (const Band& band : config.cognitive_bands)
        out << "band = " << fmt_double(band.start_hz) << ' ' << fmt_double(band.stop_hz) << '\n';
    out << "\n[scene]\n";
    out << "targets = " << config.target_count << '\n';
    out << "min_azimuth_separation = " << fmt_double(config.separation.sine_azimuth) << '\n';
    out << "amplitude_spread_db = " << fmt_double(config.amplitude_spread_db) << '\n';
    if (!config.scene_file.empty()) out << "file = " << config.scene_file << '\n';
    out << "\n[noise]\n";
    if (std::isfinite(config.snr_db))
        out << "snr_db = " << fmt_double(config.snr_db) << '\n';
    else
        out << "snr_db = inf\n";
    out << "\n[recovery]\n";
    if (config.residual_stop_ratio)
        out << "residual_ratio = " << fmt_double(*config.residual_stop_ratio) << '\n';
    out << "refine = " << config.refine_factor << '\n';
    out << "\n[experiment]\n";
    out << "arms =";
    for (const ExperimentArm& arm : config.arms) {
        const char* kind = arm.spectrum == SpectrumKind::Cognitive    ? "cognitive"
                           : arm.spectrum == SpectrumKind::SubbandFlat ? "flat"
                                                                       : "full";
        out << ' ' << static_cast<int>(arm.mode) << ':' << kind;
    }
    out << '\n';
    out << "trials = " << config.trials << '\n';
    out << "seed = " << config.seed << '\n';
    out << "array_seed = " << config.array_seed << '\n';
    out << "sample_rate_hz = " << fmt_double(config.sample_rate_hz) << '\n';
    out << "stopband_atten_db = " << fmt_double(config.stopband_atten_db) << '\n';
    out << "out = " << config.out_dir << '\n';
}

}  // namespace subnyq
