#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "hrcc/crc_search.hpp"
#include "hrcc/encoder.hpp"
#include "hrcc/slvd.hpp"

namespace hrcc {

// BI-AWGN channel with unit-variance noise; the SNR knob is the BPSK
// amplitude, snr_db = 10*log10(A^2).
struct ChannelConfig {
    double snr_db = 0.0;
    double amplitude = 1.0;

    static ChannelConfig from_snr_db(double snr_db) {
        return {snr_db, std::pow(10.0, snr_db / 20.0)};
    }
};

inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

struct UnionBound {
    double value = 0.0;
    bool truncated = false;  // the spectrum omits weights at and above its threshold
};

inline UnionBound union_bound(const DistanceSpectrum& spectrum, double amplitude) {
    UnionBound b;
    b.truncated = spectrum.d_tilde > 0;
    for (auto [d, count] : spectrum.counts)
        b.value += static_cast<double>(count) * q_function(amplitude * std::sqrt(double(d)));
    return b;
}

inline SoftWord transmit(const BitVec& codeword, const ChannelConfig& cfg, std::mt19937_64& rng) {
    SoftWord rx;
    rx.amplitude = cfg.amplitude;
    rx.values.resize(codeword.size());
    std::normal_distribution<double> noise(0.0, 1.0);
    for (size_t i = 0; i < codeword.size(); ++i)
        rx.values[i] = (codeword[i] ? -cfg.amplitude : cfg.amplitude) + noise(rng);
    return rx;
}

inline double squared_distance(const SoftWord& rx, std::span<const uint8_t> word) {
    double m = 0.0;
    for (size_t t = 0; t < word.size(); ++t) {
        const double d = rx.values[t] - (word[t] ? -rx.amplitude : rx.amplitude);
        m += d * d;
    }
    return m;
}

struct ConfidenceInterval {
    double low = 0.0, high = 1.0;
};

// Wilson score interval at 95% coverage.
inline ConfidenceInterval wilson_95(long long errors, long long frames) {
    if (frames <= 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double n = static_cast<double>(frames);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

// Stop once the ordered frame sequence has accumulated `target_errors` error
// frames or `max_frames` frames, whichever comes first; evaluated at batch
// boundaries so the decision is independent of the worker count.
struct StopRule {
    long long target_errors = 400;
    long long max_frames = 100'000'000;
};

struct FERStats {
    double snr_db = 0.0;
    long long frames = 0;
    long long undetected_errors = 0;  // decoded message != sent message
    long long list_exhausted = 0;     // no CRC-consistent path within the list cap
    long long resampled = 0;          // redraws of payloads with no tail-biting state
    double fer = 0.0;
    double fer_ci_low = 0.0, fer_ci_high = 1.0;
    double avg_list_rank = 0.0;   // empirical E[L]
    double avg_insertions = 0.0;  // empirical E[I]
    uint64_t seed = 0;

    long long errors() const { return undetected_errors + list_exhausted; }
};

struct FerConfig {
    ParityCheckMatrix code;
    FrameLayout layout;
    CrcPolynomial crc;
    RailPolicy policy = RailPolicy::Stepwise;
    int max_list = 0;  // 0 = decoder default
    StopRule stop;
    uint64_t seed = 1;
    int workers = 1;
};

namespace detail {

inline uint64_t mix64(uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// One RNG stream per frame index: reproducible for any worker count.
inline std::mt19937_64 frame_rng(uint64_t seed, uint64_t frame_index) {
    return std::mt19937_64(mix64(seed + (frame_index + 1) * 0x9e3779b97f4a7c15ull));
}

struct BatchTally {
    long long frames = 0;
    long long undetected = 0;
    long long exhausted = 0;
    long long resampled = 0;
    long long sum_rank = 0;
    long long sum_insertions = 0;
};

constexpr long long kFerBatch = 256;

inline BatchTally simulate_batch(const FerConfig& cfg, const DualTrellis& dt,
                                 const ChannelConfig& ch, long long first, long long count) {
    BatchTally t;
    SystematicEncoder enc(cfg.code);
    SerialListDecoder dec(dt, cfg.code, cfg.layout, cfg.crc, cfg.policy, cfg.max_list);
    const bool zt_mode = cfg.layout.mode == Termination::ZT;
    ZtPatterns zt;
    std::vector<uint32_t> state_map;
    if (zt_mode)
        zt = zt_patterns(dt, cfg.code);
    else
        state_map = zero_input_state_map(enc, cfg.layout.payload_sections);
    const auto map = make_payload_map(cfg.code, cfg.layout, cfg.policy);
    std::vector<int> payload_pos(cfg.layout.payload_bits(), -1);
    for (int i = 0; i < cfg.layout.N; ++i)
        if (map[i] >= 0) payload_pos[map[i]] = i;

    BitVec message(cfg.layout.K);
    BitVec payload_scratch(cfg.layout.payload_bits());
    for (long long i = 0; i < count; ++i) {
        auto rng = frame_rng(cfg.seed, static_cast<uint64_t>(first + i));
        BitVec codeword;
        for (long long attempt = 0;; ++attempt) {
            if (attempt > (1 << 20))
                throw DomainError("run_fer: tail-biting resampling failed to find a payload");
            for (auto& b : message) b = static_cast<uint8_t>(rng() & 1);
            BitVec payload = crc_encode(message, cfg.crc);
            if (zt_mode) {
                codeword = encode_zt(enc, cfg.layout, payload, zt, cfg.policy);
                break;
            }
            try {
                codeword = encode_tb(enc, cfg.layout, payload, cfg.policy, &state_map).codeword;
                break;
            } catch (const NoTailBitingStateError&) {
                ++t.resampled;
            }
        }
        SoftWord rx = transmit(codeword, ch, rng);
        auto res = dec.decode(rx);
        ++t.frames;
        t.sum_rank += res.list_rank;
        t.sum_insertions += res.insertions;

        // The accepted path can never beat the transmitted codeword by more
        // than floating-point dust: a cheaper consistent word would have been
        // extracted first.
        if (res.metric > squared_distance(rx, codeword) + 1e-6)
            throw std::logic_error("run_fer: decoded metric exceeds the transmitted word's");

        if (res.status == DecodeStatus::Success) {
            if (*res.message != message) {
                ++t.undetected;
                for (size_t j = 0; j < payload_pos.size(); ++j)
                    payload_scratch[j] = res.codeword[payload_pos[j]];
                if (!crc_check(payload_scratch, cfg.crc))
                    throw std::logic_error("run_fer: accepted an undetected error that fails the CRC");
            }
        } else {
            ++t.exhausted;
        }
    }
    return t;
}

}  // namespace detail

// Monte-Carlo FER at one SNR point. Frames are simulated in fixed 256-frame
// batches whose RNG streams depend only on (seed, frame index); the stop rule
// is applied to batch results in frame order, so any worker count produces
// byte-identical statistics.
inline FERStats run_fer_point(const FerConfig& cfg, double snr_db) {
    if (cfg.stop.max_frames < 1 || cfg.stop.target_errors < 1)
        throw std::invalid_argument("run_fer_point: stop rule must be positive");
    const int workers = std::max(1, cfg.workers);
    const auto dt = DualTrellis::build(cfg.code, cfg.layout.sections());
    const auto ch = ChannelConfig::from_snr_db(snr_db);

    detail::BatchTally total;
    long long next_batch = 0;
    bool stopped = false;
    while (!stopped) {
        std::vector<detail::BatchTally> round(workers);
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; ++w) {
            const long long first = (next_batch + w) * detail::kFerBatch;
            const long long count = std::min(detail::kFerBatch, cfg.stop.max_frames - first);
            if (count <= 0) continue;
            threads.emplace_back([&, w, first, count] {
                try {
                    round[w] = detail::simulate_batch(cfg, dt, ch, first, count);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : threads) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);

        for (int w = 0; w < workers && !stopped; ++w) {
            const auto& b = round[w];
            total.frames += b.frames;
            total.undetected += b.undetected;
            total.exhausted += b.exhausted;
            total.resampled += b.resampled;
            total.sum_rank += b.sum_rank;
            total.sum_insertions += b.sum_insertions;
            if (total.undetected + total.exhausted >= cfg.stop.target_errors ||
                total.frames >= cfg.stop.max_frames)
                stopped = true;
        }
        next_batch += workers;
    }

    FERStats s;
    s.snr_db = snr_db;
    s.frames = total.frames;
    s.undetected_errors = total.undetected;
    s.list_exhausted = total.exhausted;
    s.resampled = total.resampled;
    s.fer = total.frames ? static_cast<double>(s.errors()) / static_cast<double>(total.frames) : 0.0;
    const auto ci = wilson_95(s.errors(), total.frames);
    s.fer_ci_low = ci.low;
    s.fer_ci_high = ci.high;
    s.avg_list_rank =
        total.frames ? static_cast<double>(total.sum_rank) / static_cast<double>(total.frames) : 0.0;
    s.avg_insertions = total.frames ? static_cast<double>(total.sum_insertions) /
                                          static_cast<double>(total.frames)
                                    : 0.0;
    s.seed = cfg.seed;
    return s;
}

inline std::vector<FERStats> run_fer(const FerConfig& cfg, const std::vector<double>& snrs_db) {
    std::vector<FERStats> out;
    out.reserve(snrs_db.size());
    for (double snr : snrs_db) out.push_back(run_fer_point(cfg, snr));
    return out;
}

// One CSV row per SNR point, preceded by `# key=value` configuration echo
// lines so every artifact records how it was produced.
inline void write_fer_csv(std::ostream& os, std::span<const FERStats> rows,
                          std::span<const std::string> config_echo) {
    for (const auto& line : config_echo) os << "# " << line << "\n";
    os << "snr_db,frames,undetected_errors,list_exhausted,fer,fer_ci_low,fer_ci_high,"
          "avg_L,avg_I,seed\n";
    char buf[256];
    for (const FERStats& r : rows) {
        std::snprintf(buf, sizeof buf, "%.6g,%lld,%lld,%lld,%.6g,%.6g,%.6g,%.6g,%.6g,%llu\n",
                      r.snr_db, r.frames, r.undetected_errors, r.list_exhausted, r.fer,
                      r.fer_ci_low, r.fer_ci_high, r.avg_list_rank, r.avg_insertions,
                      static_cast<unsigned long long>(r.seed));
        os << buf;
    }
}

}  // namespace hrcc
