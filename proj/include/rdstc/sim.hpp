#pragma once

#include <atomic>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rdstc/channel.hpp"
#include "rdstc/config.hpp"
#include "rdstc/errors.hpp"
#include "rdstc/matrix.hpp"
#include "rdstc/modulation.hpp"
#include "rdstc/pep.hpp"
#include "rdstc/randomized.hpp"
#include "rdstc/receiver.hpp"
#include "rdstc/stc.hpp"

namespace rdstc {

struct BerRecord {
    double snr_db = 0.0;
    std::string scheme;
    std::uint64_t bits_sent = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    std::uint64_t packets = 0;
    std::uint64_t seed = 0;
};

struct ConvergenceRecord {
    std::uint64_t symbols_received = 0;
    std::string scheme;
    double running_ber = 0.0;
};

struct BoundRecord {
    double snr_db = 0.0;
    std::string bound_case;
    double bound_value = 0.0;
    std::uint64_t channel_draws = 0;
};

namespace detail {

// Substream purposes. Channel, bit and noise streams are keyed without the
// scheme so every scheme sees the same draws (common random numbers); ARMO
// pilot traffic uses its own tags so data-packet draws stay aligned.
enum Tag : std::uint64_t {
    tag_channel = 1,
    tag_bits,
    tag_relay_noise,
    tag_dest_noise,
    tag_direct_noise,
    tag_pilot_bits,
    tag_pilot_relay_noise,
    tag_pilot_dest_noise,
    tag_fixed_r,
    tag_armo_init,
};

inline std::uint64_t point_key(double snr_db) { return std::bit_cast<std::uint64_t>(snr_db); }

inline ChannelSet block_channel(const SimConfig& cfg, const SystemDims& dims, std::uint64_t pk,
                                std::uint64_t block) {
    RngStream rng = RngStream::derive(cfg.master_seed, {tag_channel, pk, block});
    ChannelSet cs = draw_channel_set(dims, rng);
    cs.block_index = static_cast<long>(block);
    if (cfg.channel_model == ChannelModel::awgn_identity) {
        cs.h = ComplexMatrix::identity(dims.n_antennas);
    }
    return cs;
}

/// Noise draws of one packet; pilots and data use disjoint streams.
struct PacketNoise {
    std::vector<ComplexMatrix> relay; // n_SR per relay, N x 1
    ComplexMatrix dest;               // n_RD, NT x 1
    ComplexMatrix direct;             // n_SD, N x 1 (direct link only)
};

inline PacketNoise draw_packet_noise(const SimConfig& cfg, const SystemDims& dims,
                                     const NoiseModel& noise, std::uint64_t pk, std::uint64_t idx,
                                     bool pilot) {
    PacketNoise pn;
    const std::size_t n = dims.n_antennas;
    const std::size_t nt = n * dims.codeword_slots;
    if (dims.n_relays > 0) {
        RngStream relay_rng = RngStream::derive(
            cfg.master_seed, {pilot ? tag_pilot_relay_noise : tag_relay_noise, pk, idx});
        for (std::size_t k = 0; k < dims.n_relays; ++k) {
            pn.relay.push_back(draw_noise(n, noise, relay_rng));
        }
        RngStream dest_rng = RngStream::derive(
            cfg.master_seed, {pilot ? tag_pilot_dest_noise : tag_dest_noise, pk, idx});
        pn.dest = draw_noise(nt, noise, dest_rng);
    }
    if (dims.direct_link) {
        RngStream direct_rng = RngStream::derive(cfg.master_seed, {tag_direct_noise, pk, idx});
        pn.direct = draw_noise(n, noise, direct_rng);
    }
    return pn;
}

/// Received stack for one packet: the direct block H s + n_SD on top (when
/// enabled), then sum_k X_k (F_k s + n_SR,k) + n_RD, where X_k = R_eq G_eq A
/// is exactly the slot-level relay chain folded through the conjugation mask.
inline ComplexMatrix received_stack(const EquivalentModel& model, const ChannelSet& cs,
                                    const ComplexMatrix& s, const PacketNoise& pn) {
    const std::size_t n = model.dims.n_antennas;
    ComplexMatrix r(model.stack_rows(), 1);
    if (model.dims.direct_link) {
        const ComplexMatrix top = cs.h * s + pn.direct;
        for (std::size_t i = 0; i < n; ++i) r(i, 0) = top(i, 0);
    }
    if (model.dims.n_relays > 0) {
        ComplexMatrix u = pn.dest;
        for (std::size_t k = 0; k < model.dims.n_relays; ++k) {
            // X_k = R_eq G_eq A, so X_k (F_k s + n_SR) is the relay chain output.
            u += model.relays[k].x * (cs.f[k] * s + pn.relay[k]);
        }
        for (std::size_t i = 0; i < u.rows(); ++i) r(model.direct_rows + i, 0) = u(i, 0);
    }
    return r;
}

struct SchemeState {
    std::vector<RandomizedMatrix> randomized;
    std::vector<ArmoState> armo;
};

inline SchemeState init_scheme_state(const SimConfig& cfg, Scheme scheme, const SystemDims& dims) {
    SchemeState st;
    const RandomizedMatrix identity_r =
        make_randomized(ComplexMatrix::identity(dims.n_antennas), dims.codeword_slots);
    switch (scheme) {
        case Scheme::sm:
            break;
        case Scheme::d_alamouti:
            st.randomized.assign(dims.n_relays, identity_r);
            break;
        case Scheme::r_alamouti_fixed: {
            RngStream rng = RngStream::derive(cfg.master_seed, {tag_fixed_r});
            for (std::size_t k = 0; k < dims.n_relays; ++k) {
                st.randomized.push_back(init_randomized(dims, rng, RandomizedInit::gaussian));
            }
            break;
        }
        case Scheme::armo: {
            RngStream rng = RngStream::derive(cfg.master_seed, {tag_armo_init});
            for (std::size_t k = 0; k < dims.n_relays; ++k) {
                ArmoState a;
                a.r = init_randomized(dims, rng, cfg.r_init);
                a.mu = cfg.mu;
                st.armo.push_back(std::move(a));
            }
            st.randomized.reserve(dims.n_relays);
            for (const ArmoState& a : st.armo) st.randomized.push_back(a.r);
            break;
        }
    }
    return st;
}

inline SystemDims scheme_dims(const SimConfig& cfg, Scheme scheme) {
    SystemDims dims = cfg.dims;
    if (scheme == Scheme::sm) {
        // Spatial-multiplexing baseline: first-phase direct transmission only.
        dims.n_relays = 0;
        dims.direct_link = true;
    }
    return dims;
}

/// Rebuilds model + filter for the current channel block and randomization.
struct BlockContext {
    EquivalentModel model;
    MmseFilter filter;
};

inline BlockContext build_block_context(const SimConfig& cfg, const ChannelSet& cs,
                                        const std::vector<RandomizedMatrix>& randomized,
                                        const AmplifyGain& gain, const SystemDims& dims,
                                        const NoiseModel& noise) {
    BlockContext ctx;
    ctx.model = assemble_full_model(cs, randomized, gain, dims, noise);
    auto [autocorr, crosscorr] = analytic_correlations(ctx.model, cfg.noise_cov);
    ctx.filter = mmse_filter(std::move(autocorr), std::move(crosscorr));
    return ctx;
}

/// One ARMO pilot: simulate the pilot reception under the current R, compute
/// the error vector against the known pilot, and take one gradient step per
/// relay. The relay receives the updated matrix over the idealized feedback
/// channel before the next transmission.
inline void armo_train_step(const SimConfig& cfg, SchemeState& st, const ChannelSet& cs,
                            const AmplifyGain& gain, const SystemDims& dims, const NoiseModel& noise,
                            std::uint64_t pk, std::uint64_t pilot_idx) {
    RngStream bits_rng = RngStream::derive(cfg.master_seed, {tag_pilot_bits, pk, pilot_idx});
    const BitVector bits = random_bits(2 * dims.n_antennas, bits_rng);
    const ComplexMatrix s = qpsk_modulate(bits);

    const BlockContext ctx = build_block_context(cfg, cs, st.randomized, gain, dims, noise);
    const PacketNoise pn = draw_packet_noise(cfg, dims, noise, pk, pilot_idx, true);
    const ComplexMatrix r = received_stack(ctx.model, cs, s, pn);
    const Detection det = filter_and_detect(ctx.filter, r, &s);

    // Gradient of the relay block only: slice the relay rows of W.
    const std::size_t nt = dims.n_antennas * dims.codeword_slots;
    ComplexMatrix w_relay(nt, dims.n_antennas);
    for (std::size_t i = 0; i < nt; ++i) {
        for (std::size_t j = 0; j < dims.n_antennas; ++j) {
            w_relay(i, j) = ctx.filter.w(ctx.model.direct_rows + i, j);
        }
    }
    for (std::size_t k = 0; k < dims.n_relays; ++k) {
        ArmoState next = cfg.mu_mode == StepMode::plain
                             ? armo_step(st.armo[k], *det.error, s, ctx.model.relays[k].c, w_relay)
                             : armo_step_normalized(st.armo[k], *det.error, s, ctx.model.relays[k].c, w_relay);
        st.armo[k] = std::move(next);
        st.randomized[k] = feedback_to_relay(st.armo[k].r);
    }
}

} // namespace detail

/// Monte Carlo BER of one scheme at one SNR point. Fading is quasi-static
/// over blocks of block_len_packets data packets; ARMO prepends
/// training_packets pilot transmissions to every block, adapts R on them and
/// freezes it for the block's data. Bit errors are counted on data packets
/// only, so bits_sent == packets * 2N.
inline BerRecord run_point(const SimConfig& cfg, double snr_db, Scheme scheme) {
    cfg.validate();
    const SystemDims dims = detail::scheme_dims(cfg, scheme);
    const NoiseModel noise{1.0 / snr_to_gamma(snr_db)};
    const AmplifyGain gain = amplify_gain(noise, 1.0, dims.n_antennas);
    const std::uint64_t pk = detail::point_key(snr_db);
    const std::size_t bits_per_packet = 2 * dims.n_antennas;

    detail::SchemeState st = detail::init_scheme_state(cfg, scheme, dims);

    std::uint64_t errors = 0;
    std::uint64_t packet = 0;
    const std::uint64_t n_packets = cfg.packets_per_point;
    const std::uint64_t block_len = cfg.block_len_packets;

    for (std::uint64_t block = 0; packet < n_packets; ++block) {
        const ChannelSet cs = detail::block_channel(cfg, dims, pk, block);

        if (scheme == Scheme::armo) {
            for (std::uint64_t j = 0; j < cfg.training_packets; ++j) {
                detail::armo_train_step(cfg, st, cs, gain, dims, noise, pk,
                                        block * cfg.training_packets + j);
            }
        }

        const detail::BlockContext ctx =
            detail::build_block_context(cfg, cs, st.randomized, gain, dims, noise);

        const std::uint64_t block_end = std::min<std::uint64_t>(n_packets, packet + block_len);
        for (; packet < block_end; ++packet) {
            RngStream bits_rng = RngStream::derive(cfg.master_seed, {detail::tag_bits, pk, packet});
            const BitVector bits = random_bits(bits_per_packet, bits_rng);
            const ComplexMatrix s = qpsk_modulate(bits);
            const detail::PacketNoise pn = detail::draw_packet_noise(cfg, dims, noise, pk, packet, false);
            const ComplexMatrix r = detail::received_stack(ctx.model, cs, s, pn);
            const Detection det = filter_and_detect(ctx.filter, r);
            errors += count_bit_errors(det.bits, bits);
        }
    }

    BerRecord rec;
    rec.snr_db = snr_db;
    rec.scheme = scheme_label(scheme);
    rec.packets = n_packets;
    rec.bits_sent = n_packets * bits_per_packet;
    rec.bit_errors = errors;
    rec.ber = static_cast<double>(errors) / static_cast<double>(rec.bits_sent);
    rec.seed = cfg.master_seed;
    return rec;
}

/// Runs every (snr, scheme) pair of the config. Tasks execute on a small
/// worker pool; each task derives all randomness from (master_seed, snr,
/// indices), so parallel and serial runs produce identical records. The
/// callback receives records in deterministic order (snr ascending, scheme
/// label ascending); records completed before a failing task are delivered
/// before the error propagates.
inline void run_sweep(const SimConfig& cfg, const std::function<void(const BerRecord&)>& sink) {
    cfg.validate();
    struct Task {
        double snr_db;
        Scheme scheme;
    };
    std::vector<Task> tasks;
    for (double snr : cfg.snr_grid_db) {
        std::vector<Scheme> sorted = cfg.schemes;
        std::sort(sorted.begin(), sorted.end(), [](Scheme a, Scheme b) {
            return scheme_label(a) < scheme_label(b);
        });
        for (Scheme s : sorted) tasks.push_back({snr, s});
    }

    std::vector<std::optional<BerRecord>> results(tasks.size());
    std::vector<std::exception_ptr> failures(tasks.size());
    std::atomic<std::size_t> next{0};

    std::size_t n_threads = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
    n_threads = std::max<std::size_t>(1, std::min(n_threads, tasks.size()));

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                results[i] = run_point(cfg, tasks[i].snr_db, tasks[i].scheme);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (failures[i]) std::rethrow_exception(failures[i]);
        sink(*results[i]);
    }
}

inline std::vector<BerRecord> run_sweep(const SimConfig& cfg) {
    std::vector<BerRecord> records;
    run_sweep(cfg, [&](const BerRecord& r) { records.push_back(r); });
    return records;
}

/// Running BER versus received symbol vectors for the four schemes on one
/// shared channel/noise stream. Every packet is detected first and then, for
/// ARMO, used as a pilot to adapt R, so the trace shows the adaptation
/// transient against the flat baselines.
inline std::vector<ConvergenceRecord> run_convergence_trace(const SimConfig& cfg, double snr_db) {
    cfg.validate();
    const NoiseModel noise{1.0 / snr_to_gamma(snr_db)};
    const std::uint64_t pk = detail::point_key(snr_db);

    const std::vector<Scheme> schemes{Scheme::armo, Scheme::d_alamouti, Scheme::r_alamouti_fixed,
                                      Scheme::sm};
    struct PerScheme {
        SystemDims dims;
        AmplifyGain gain;
        detail::SchemeState st;
        std::optional<detail::BlockContext> ctx;
        std::uint64_t errors = 0;
        std::uint64_t bits = 0;
    };
    std::vector<PerScheme> lanes;
    for (Scheme s : schemes) {
        PerScheme lane;
        lane.dims = detail::scheme_dims(cfg, s);
        lane.gain = amplify_gain(noise, 1.0, lane.dims.n_antennas);
        lane.st = detail::init_scheme_state(cfg, s, lane.dims);
        lanes.push_back(std::move(lane));
    }

    const std::uint64_t n_packets = cfg.packets_per_point;
    const std::uint64_t stride = std::max<std::uint64_t>(1, n_packets / 1000);
    std::vector<ConvergenceRecord> trace;

    ChannelSet cs_full; // full-topology channel; lanes slice what they need
    for (std::uint64_t p = 0; p < n_packets; ++p) {
        const std::uint64_t block = p / cfg.block_len_packets;
        if (p % cfg.block_len_packets == 0) {
            cs_full = detail::block_channel(cfg, cfg.dims, pk, block);
            for (std::size_t li = 0; li < lanes.size(); ++li) lanes[li].ctx.reset();
        }

        RngStream bits_rng = RngStream::derive(cfg.master_seed, {detail::tag_bits, pk, p});
        const BitVector bits = random_bits(2 * cfg.dims.n_antennas, bits_rng);
        const ComplexMatrix s = qpsk_modulate(bits);

        for (std::size_t li = 0; li < lanes.size(); ++li) {
            PerScheme& lane = lanes[li];
            const Scheme scheme = schemes[li];
            ChannelSet cs = cs_full;
            if (scheme == Scheme::sm) {
                cs.f.clear();
                cs.g.clear();
            }
            SystemDims dims = lane.dims;
            dims.direct_link = lane.dims.direct_link;

            if (scheme == Scheme::armo || !lane.ctx.has_value()) {
                lane.ctx = detail::build_block_context(cfg, cs, lane.st.randomized, lane.gain, dims, noise);
            }
            // Shared noise stream: every lane re-derives the same per-packet draws.
            const detail::PacketNoise pn = detail::draw_packet_noise(cfg, dims, noise, pk, p, false);
            const ComplexMatrix r = detail::received_stack(lane.ctx->model, cs, s, pn);
            const Detection det = filter_and_detect(lane.ctx->filter, r, &s);
            lane.errors += count_bit_errors(det.bits, bits);
            lane.bits += bits.size();

            if (scheme == Scheme::armo) {
                const std::size_t nt = dims.n_antennas * dims.codeword_slots;
                ComplexMatrix w_relay(nt, dims.n_antennas);
                for (std::size_t i = 0; i < nt; ++i) {
                    for (std::size_t j = 0; j < dims.n_antennas; ++j) {
                        w_relay(i, j) = lane.ctx->filter.w(lane.ctx->model.direct_rows + i, j);
                    }
                }
                for (std::size_t k = 0; k < dims.n_relays; ++k) {
                    ArmoState nextst =
                        cfg.mu_mode == StepMode::plain
                            ? armo_step(lane.st.armo[k], *det.error, s, lane.ctx->model.relays[k].c, w_relay)
                            : armo_step_normalized(lane.st.armo[k], *det.error, s,
                                                   lane.ctx->model.relays[k].c, w_relay);
                    lane.st.armo[k] = std::move(nextst);
                    lane.st.randomized[k] = feedback_to_relay(lane.st.armo[k].r);
                }
            }
        }

        if ((p + 1) % stride == 0 || p + 1 == n_packets) {
            std::vector<std::size_t> order{0, 1, 2, 3};
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return scheme_label(schemes[a]) < scheme_label(schemes[b]);
            });
            for (std::size_t li : order) {
                ConvergenceRecord rec;
                rec.symbols_received = p + 1;
                rec.scheme = scheme_label(schemes[li]);
                rec.running_ber = static_cast<double>(lanes[li].errors) / static_cast<double>(lanes[li].bits);
                trace.push_back(std::move(rec));
            }
        }
    }
    return trace;
}

/// Channel-averaged PEP bound curves (traditional and MMSE-randomized cases)
/// for the relay-path analysis scenario.
inline std::vector<BoundRecord> run_bound_curves(const SimConfig& cfg) {
    cfg.validate();
    const std::vector<BoundCurvePoint> curve =
        average_bound_curve(cfg.dims, cfg.snr_grid_db, cfg.channel_draws, cfg.master_seed);
    std::vector<BoundRecord> records;
    for (const BoundCurvePoint& p : curve) {
        records.push_back({p.snr_db, "randomized", p.randomized, p.channel_draws});
        records.push_back({p.snr_db, "traditional", p.traditional, p.channel_draws});
    }
    return records;
}

namespace detail {

inline std::string format_double(double v, int significant = 10) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant, v);
    return buf;
}

} // namespace detail

inline void write_csv(const std::vector<BerRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "snr_db,scheme,bits_sent,bit_errors,ber,packets,seed\n";
    for (const BerRecord& r : records) {
        out << detail::format_double(r.snr_db) << ',' << r.scheme << ',' << r.bits_sent << ','
            << r.bit_errors << ',' << detail::format_double(r.ber, 6) << ',' << r.packets << ','
            << r.seed << '\n';
        if (!out) throw IoError("write failure: " + path);
    }
}

inline void write_csv(const std::vector<ConvergenceRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "symbols_received,scheme,running_ber\n";
    for (const ConvergenceRecord& r : records) {
        out << r.symbols_received << ',' << r.scheme << ',' << detail::format_double(r.running_ber, 6)
            << '\n';
        if (!out) throw IoError("write failure: " + path);
    }
}

inline void write_csv(const std::vector<BoundRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "snr_db,case,bound_value,channel_draws\n";
    for (const BoundRecord& r : records) {
        out << detail::format_double(r.snr_db) << ',' << r.bound_case << ','
            << detail::format_double(r.bound_value, 6) << ',' << r.channel_draws << '\n';
        if (!out) throw IoError("write failure: " + path);
    }
}

/// Round-trip reader for BER result files.
inline std::vector<BerRecord> read_ber_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty csv: " + path);
    std::vector<BerRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        BerRecord r;
        std::getline(ss, field, ',');
        r.snr_db = std::stod(field);
        std::getline(ss, r.scheme, ',');
        std::getline(ss, field, ',');
        r.bits_sent = std::stoull(field);
        std::getline(ss, field, ',');
        r.bit_errors = std::stoull(field);
        std::getline(ss, field, ',');
        r.ber = std::stod(field);
        std::getline(ss, field, ',');
        r.packets = std::stoull(field);
        std::getline(ss, field, ',');
        r.seed = std::stoull(field);
        records.push_back(std::move(r));
    }
    return records;
}

} // namespace rdstc
