#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rdstc/channel.hpp"
#include "rdstc/errors.hpp"
#include "rdstc/randomized.hpp"
#include "rdstc/receiver.hpp"

namespace rdstc {

enum class Scheme { sm, d_alamouti, r_alamouti_fixed, armo };

inline std::string scheme_label(Scheme s) {
    switch (s) {
        case Scheme::sm: return "SM";
        case Scheme::d_alamouti: return "D-Alamouti";
        case Scheme::r_alamouti_fixed: return "R-Alamouti-fixed";
        case Scheme::armo: return "ARMO";
    }
    return "?";
}

inline Scheme scheme_from_label(const std::string& label) {
    if (label == "SM") return Scheme::sm;
    if (label == "D-Alamouti") return Scheme::d_alamouti;
    if (label == "R-Alamouti-fixed") return Scheme::r_alamouti_fixed;
    if (label == "ARMO") return Scheme::armo;
    throw ConfigError("unknown scheme: " + label);
}

enum class ChannelModel { rayleigh, awgn_identity };
enum class StepMode { plain, normalized };

/// Full description of a simulation run. Keys in the config file mirror the
/// field names in lower_snake_case.
struct SimConfig {
    SystemDims dims{2, 1, 2, false};
    std::vector<double> snr_grid_db{0, 2, 4, 6, 8, 10, 12, 14, 16};
    std::vector<Scheme> schemes{Scheme::sm, Scheme::d_alamouti, Scheme::r_alamouti_fixed, Scheme::armo};
    std::size_t packets_per_point = 10000;
    /// ARMO pilot packets per fading block.
    std::size_t training_packets = 40;
    /// Fading-block length in data packets (quasi-static span).
    std::size_t block_len_packets = 50;
    double mu = 0.5;
    StepMode mu_mode = StepMode::normalized;
    RandomizedInit r_init = RandomizedInit::identity;
    std::uint64_t master_seed = 12345;
    std::string output_path = "results.csv";
    std::size_t threads = 0; // 0 = hardware concurrency
    std::size_t channel_draws = 1000;
    ChannelModel channel_model = ChannelModel::rayleigh;
    NoiseCov noise_cov = NoiseCov::paper_white;

    void validate() const {
        dims.validate();
        if (snr_grid_db.empty()) throw ConfigError("snr grid must be nonempty");
        for (std::size_t i = 1; i < snr_grid_db.size(); ++i) {
            if (!(snr_grid_db[i] > snr_grid_db[i - 1])) {
                throw ConfigError("snr grid must be strictly increasing");
            }
        }
        if (packets_per_point < 100) throw ConfigError("packets_per_point must be at least 100");
        if (schemes.empty()) throw ConfigError("scheme list must be nonempty");
        if (!(mu > 0.0)) throw ConfigError("mu must be positive");
        if (block_len_packets == 0) throw ConfigError("block_len_packets must be positive");
        if (dims.n_antennas != 2 || dims.codeword_slots != 2) {
            throw ConfigError("Alamouti scheme requires N == T == 2");
        }
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("bad boolean for " + key + ": " + v);
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad number for " + key + ": " + v);
    }
}

inline std::uint64_t parse_u64(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        unsigned long long u = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return u;
    } catch (const std::exception&) {
        throw ConfigError("bad integer for " + key + ": " + v);
    }
}

} // namespace detail

inline RandomizedInit r_init_from_string(const std::string& v) {
    if (v == "identity") return RandomizedInit::identity;
    if (v == "phase-diagonal") return RandomizedInit::phase_diagonal;
    if (v == "random-unitary") return RandomizedInit::random_unitary;
    if (v == "gaussian") return RandomizedInit::gaussian;
    throw ConfigError("unknown r_init: " + v);
}

/// Applies one key/value pair onto a config. Shared by the file parser and
/// the CLI override path so both accept the same vocabulary.
inline void apply_config_key(SimConfig& cfg, const std::string& key, const std::string& value) {
    using namespace detail;
    if (key == "n_antennas") cfg.dims.n_antennas = parse_u64(value, key);
    else if (key == "n_relays") cfg.dims.n_relays = parse_u64(value, key);
    else if (key == "codeword_slots") cfg.dims.codeword_slots = parse_u64(value, key);
    else if (key == "direct_link") cfg.dims.direct_link = parse_bool(value, key);
    else if (key == "snr_grid_db") {
        cfg.snr_grid_db.clear();
        for (const std::string& item : split_list(value)) cfg.snr_grid_db.push_back(parse_double(item, key));
    } else if (key == "schemes" || key == "scheme") {
        cfg.schemes.clear();
        for (const std::string& item : split_list(value)) cfg.schemes.push_back(scheme_from_label(item));
    } else if (key == "packets_per_point") cfg.packets_per_point = parse_u64(value, key);
    else if (key == "training_packets") cfg.training_packets = parse_u64(value, key);
    else if (key == "block_len_packets") cfg.block_len_packets = parse_u64(value, key);
    else if (key == "mu") cfg.mu = parse_double(value, key);
    else if (key == "mu_mode") {
        if (value == "plain") cfg.mu_mode = StepMode::plain;
        else if (value == "normalized") cfg.mu_mode = StepMode::normalized;
        else throw ConfigError("unknown mu_mode: " + value);
    } else if (key == "r_init") cfg.r_init = r_init_from_string(value);
    else if (key == "master_seed") cfg.master_seed = parse_u64(value, key);
    else if (key == "output_path") cfg.output_path = value;
    else if (key == "threads") cfg.threads = parse_u64(value, key);
    else if (key == "channel_draws") cfg.channel_draws = parse_u64(value, key);
    else if (key == "channel_model") {
        if (value == "rayleigh") cfg.channel_model = ChannelModel::rayleigh;
        else if (value == "awgn-identity") cfg.channel_model = ChannelModel::awgn_identity;
        else throw ConfigError("unknown channel_model: " + value);
    } else if (key == "noise_cov") {
        if (value == "paper-white") cfg.noise_cov = NoiseCov::paper_white;
        else if (value == "exact-colored") cfg.noise_cov = NoiseCov::exact_colored;
        else throw ConfigError("unknown noise_cov: " + value);
    } else {
        throw ConfigError("unknown config key: " + key);
    }
}

/// Flat `key = value` file with `#` comments.
inline SimConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    SimConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        apply_config_key(cfg, key, value);
    }
    return cfg;
}

} // namespace rdstc
