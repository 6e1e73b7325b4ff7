// rdstc-sim: Monte Carlo BER sweeps, PEP bound curves and convergence traces
// for randomized distributed space-time coding over two-hop AF relays.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rdstc/rdstc.hpp"

namespace {

struct Overrides {
    std::optional<double> snr_start, snr_stop, snr_step;
    std::optional<std::string> schemes;
    std::optional<std::uint64_t> relays, antennas, packets, seed, threads;
    std::optional<std::string> direct_link;
    std::optional<std::string> out;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--snr-start", ov.snr_start, "Grid start in dB");
    cmd->add_option("--snr-stop", ov.snr_stop, "Grid stop in dB (inclusive)");
    cmd->add_option("--snr-step", ov.snr_step, "Grid step in dB");
    cmd->add_option("--scheme", ov.schemes, "Comma-separated scheme list");
    cmd->add_option("--relays", ov.relays, "Number of relay nodes");
    cmd->add_option("--antennas", ov.antennas, "Antennas per node");
    cmd->add_option("--packets", ov.packets, "Data packets per SNR point");
    cmd->add_option("--seed", ov.seed, "Master seed");
    cmd->add_option("--direct-link", ov.direct_link, "true/false");
    cmd->add_option("--threads", ov.threads, "Worker threads (0 = auto)");
    cmd->add_option("--out", ov.out, "Output CSV path");
}

rdstc::SimConfig load_config(const std::string& config_path, const Overrides& ov) {
    rdstc::SimConfig cfg =
        config_path.empty() ? rdstc::SimConfig{} : rdstc::parse_config_file(config_path);
    if (ov.snr_start || ov.snr_stop || ov.snr_step) {
        if (!(ov.snr_start && ov.snr_stop)) {
            throw rdstc::ConfigError("--snr-start and --snr-stop must be given together");
        }
        const double step = ov.snr_step.value_or(2.0);
        if (!(step > 0.0)) throw rdstc::ConfigError("--snr-step must be positive");
        cfg.snr_grid_db.clear();
        for (double snr = *ov.snr_start; snr <= *ov.snr_stop + 1e-9; snr += step) {
            cfg.snr_grid_db.push_back(snr);
        }
    }
    if (ov.schemes) rdstc::apply_config_key(cfg, "schemes", *ov.schemes);
    if (ov.relays) cfg.dims.n_relays = *ov.relays;
    if (ov.antennas) cfg.dims.n_antennas = *ov.antennas;
    if (ov.packets) cfg.packets_per_point = *ov.packets;
    if (ov.seed) cfg.master_seed = *ov.seed;
    if (ov.threads) cfg.threads = *ov.threads;
    if (ov.direct_link) rdstc::apply_config_key(cfg, "direct_link", *ov.direct_link);
    if (ov.out) cfg.output_path = *ov.out;
    cfg.validate();
    return cfg;
}

int run_command(const std::string& config_path, const Overrides& ov) {
    const rdstc::SimConfig cfg = load_config(config_path, ov);
    std::ofstream out(cfg.output_path);
    if (!out) throw rdstc::IoError("cannot open for writing: " + cfg.output_path);
    out << "snr_db,scheme,bits_sent,bit_errors,ber,packets,seed\n";
    out.flush();
    rdstc::run_sweep(cfg, [&](const rdstc::BerRecord& r) {
        out << rdstc::detail::format_double(r.snr_db) << ',' << r.scheme << ',' << r.bits_sent << ','
            << r.bit_errors << ',' << rdstc::detail::format_double(r.ber, 6) << ',' << r.packets
            << ',' << r.seed << '\n';
        out.flush();
        if (!out) throw rdstc::IoError("write failure: " + cfg.output_path);
        std::cerr << "snr " << r.snr_db << " dB  " << r.scheme << "  ber " << r.ber << "\n";
    });
    std::cout << "wrote " << cfg.output_path << "\n";
    return 0;
}

int bounds_command(const std::string& config_path, const Overrides& ov) {
    const rdstc::SimConfig cfg = load_config(config_path, ov);
    const std::vector<rdstc::BoundRecord> records = rdstc::run_bound_curves(cfg);
    rdstc::write_csv(records, cfg.output_path);
    std::cout << "wrote " << cfg.output_path << "\n";
    return 0;
}

int converge_command(const std::string& config_path, const Overrides& ov, double snr_db) {
    const rdstc::SimConfig cfg = load_config(config_path, ov);
    const std::vector<rdstc::ConvergenceRecord> records = rdstc::run_convergence_trace(cfg, snr_db);
    rdstc::write_csv(records, cfg.output_path);
    std::cout << "wrote " << cfg.output_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"randomized DSTC link-level simulator"};
    app.require_subcommand(1);

    std::string config_path;
    double converge_snr = 10.0;
    Overrides ov;

    CLI::App* run = app.add_subcommand("run", "Monte Carlo BER sweep");
    run->add_option("--config", config_path, "Config file (key = value lines)");
    add_override_flags(run, ov);

    CLI::App* bounds = app.add_subcommand("bounds", "Channel-averaged PEP bound curves");
    bounds->add_option("--config", config_path, "Config file");
    add_override_flags(bounds, ov);

    CLI::App* converge = app.add_subcommand("converge", "Running-BER convergence trace");
    converge->add_option("--config", config_path, "Config file");
    converge->add_option("--snr", converge_snr, "Operating SNR in dB");
    add_override_flags(converge, ov);

    try {
        app.parse(argc, argv);
        if (run->parsed()) return run_command(config_path, ov);
        if (bounds->parsed()) return bounds_command(config_path, ov);
        if (converge->parsed()) return converge_command(config_path, ov, converge_snr);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const rdstc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const rdstc::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const rdstc::Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
