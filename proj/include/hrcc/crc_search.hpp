#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hrcc/code.hpp"
#include "hrcc/encoder.hpp"
#include "hrcc/gf2.hpp"

namespace hrcc {

// One irreducible error event: a primal-trellis path that leaves its anchor
// state once and returns to it once, with every intermediate boundary state
// strictly greater than the anchor.
struct ErrorEvent {
    int start_state = 0;
    int length = 0;  // sections
    BitVec inputs;   // (omega-1)*length bits, section-major
    BitVec outputs;  // omega*length bits
    int output_weight = 0;
};

struct EventCollection {
    std::vector<ErrorEvent> events;
    // True when some search branch was cut by max_len while still under the
    // weight budget: events longer than max_len might exist below d_tilde.
    bool truncated = false;
};

namespace detail {

struct PrimalEdge {
    uint32_t next;
    uint32_t inputs;    // bit r = rail-r input
    uint32_t out_bits;  // bit j = output stream j
    int weight;
};

// One encoder step per state and input combination.
inline std::vector<std::vector<PrimalEdge>> primal_edges(const SystematicEncoder& enc) {
    const auto& code = enc.code();
    const int rails = code.omega - 1;
    std::vector<std::vector<PrimalEdge>> edges(enc.num_states());
    uint8_t in[32], out[32];
    for (int s = 0; s < enc.num_states(); ++s) {
        edges[s].reserve(size_t{1} << rails);
        for (uint32_t u = 0; u < (uint32_t{1} << rails); ++u) {
            for (int r = 0; r < rails; ++r) in[r] = (u >> r) & 1;
            const uint32_t next = enc.step(static_cast<uint32_t>(s), in, out);
            uint32_t ob = 0;
            int w = 0;
            for (int j = 0; j < code.omega; ++j) {
                ob |= static_cast<uint32_t>(out[j]) << j;
                w += out[j];
            }
            edges[s].push_back({next, u, ob, w});
        }
    }
    return edges;
}

}  // namespace detail

// Depth-first collection of the irreducible error events anchored at `sigma`
// with output weight <= d_tilde-1 and length <= max_len sections.
inline EventCollection collect_iee(const ParityCheckMatrix& code, int sigma, int d_tilde,
                                   int max_len) {
    if (d_tilde < 1 || max_len < 1)
        throw std::invalid_argument("collect_iee: d_tilde and max_len must be positive");
    SystematicEncoder enc(code);
    const auto edges = detail::primal_edges(enc);
    const int rails = code.omega - 1;
    EventCollection out;
    BitVec ins, outs;
    int weight_acc = 0;
    std::function<void(uint32_t, int)> go = [&](uint32_t s, int len) {
        for (const auto& e : edges[s]) {
            if (weight_acc + e.weight >= d_tilde) continue;
            if (static_cast<int>(e.next) < sigma) continue;
            if (static_cast<int>(e.next) == sigma && weight_acc + e.weight == 0) continue;
            for (int r = 0; r < rails; ++r) ins.push_back((e.inputs >> r) & 1);
            for (int j = 0; j < code.omega; ++j) outs.push_back((e.out_bits >> j) & 1);
            weight_acc += e.weight;
            if (static_cast<int>(e.next) == sigma) {
                out.events.push_back({sigma, len + 1, ins, outs, weight_acc});
            } else if (len + 1 < max_len) {
                go(e.next, len + 1);
            } else {
                out.truncated = true;
            }
            weight_acc -= e.weight;
            ins.resize(ins.size() - rails);
            outs.resize(outs.size() - code.omega);
        }
    };
    go(static_cast<uint32_t>(sigma), 0);
    return out;
}

inline EventCollection collect_iee_zt(const ParityCheckMatrix& code, int d_tilde, int max_len) {
    return collect_iee(code, 0, d_tilde, max_len);
}

// Per anchor state sigma = 0 .. 2^v - 1.
inline std::vector<EventCollection> collect_iee_tb(const ParityCheckMatrix& code, int d_tilde,
                                                   int max_len) {
    std::vector<EventCollection> per_state;
    per_state.reserve(size_t{1} << code.v);
    for (int s = 0; s < (1 << code.v); ++s)
        per_state.push_back(collect_iee(code, s, d_tilde, max_len));
    return per_state;
}

// Free distance of the convolutional code: minimum output weight over all
// nonzero paths that leave the zero state and return to it, any length.
inline int d_free(const ParityCheckMatrix& code) {
    SystematicEncoder enc(code);
    const auto edges = detail::primal_edges(enc);
    constexpr int kInf = std::numeric_limits<int>::max();
    std::vector<int> dist(enc.num_states(), kInf);
    using Item = std::pair<int, int>;  // (weight, state)
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    int best = kInf;
    for (const auto& e : edges[0]) {
        if (e.next == 0) {
            if (e.weight > 0) best = std::min(best, e.weight);
            continue;
        }
        if (e.weight < dist[e.next]) {
            dist[e.next] = e.weight;
            pq.push({e.weight, static_cast<int>(e.next)});
        }
    }
    while (!pq.empty()) {
        auto [d, s] = pq.top();
        pq.pop();
        if (d > dist[s] || d >= best) continue;
        for (const auto& e : edges[s]) {
            if (e.next == 0) {
                best = std::min(best, d + e.weight);
                continue;
            }
            if (d + e.weight < dist[e.next]) {
                dist[e.next] = d + e.weight;
                pq.push({d + e.weight, static_cast<int>(e.next)});
            }
        }
    }
    if (best == kInf) throw DomainError("d_free: no nonzero zero-to-zero path exists");
    return best;
}

// One low-weight trellis word rebuilt from error events.
struct ReconstructedPath {
    PackedWord word;  // full n*omega-bit codeword
    int weight = 0;
};

namespace detail {

struct PlacedEvent {
    std::vector<int> one_positions;  // output bit offsets within the event
    int length = 0;                  // sections
    int weight = 0;
};

inline std::vector<PlacedEvent> placeable(const std::vector<ErrorEvent>& events, int omega) {
    std::vector<PlacedEvent> out;
    out.reserve(events.size());
    for (const auto& e : events) {
        PlacedEvent p;
        p.length = e.length;
        p.weight = e.output_weight;
        for (size_t i = 0; i < e.outputs.size(); ++i)
            if (e.outputs[i]) p.one_positions.push_back(static_cast<int>(i));
        (void)omega;
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace detail

// Zero-termination reconstruction: every zero-to-zero trellis path of the full
// frame length and weight < d_tilde is a unique interleaving of zero-state
// idle sections and anchored events, so no deduplication is required.
inline std::vector<ReconstructedPath> reconstruct_paths_zt(const std::vector<ErrorEvent>& events,
                                                           int sections, int omega, int d_tilde) {
    if (sections * omega > PackedWord::kCapacity)
        throw std::invalid_argument("reconstruct_paths_zt: frame too long for packed words");
    auto evs = detail::placeable(events, omega);
    std::vector<ReconstructedPath> out;
    PackedWord word;
    word.nbits = static_cast<uint16_t>(sections * omega);
    std::function<void(int, int)> place = [&](int pos, int weight) {
        if (pos == sections) {
            if (weight > 0) out.push_back({word, weight});
            return;
        }
        place(pos + 1, weight);  // idle section at state zero
        for (const auto& e : evs) {
            if (pos + e.length > sections || weight + e.weight >= d_tilde) continue;
            for (int b : e.one_positions) word.flip(pos * omega + b);
            place(pos + e.length, weight + e.weight);
            for (int b : e.one_positions) word.flip(pos * omega + b);
        }
    };
    place(0, 0);
    return out;
}

// Tail-biting reconstruction: per anchor state, compositions of same-anchor
// events that start at section zero (idle sections exist only at anchor
// zero), then every circular shift of each composition. Shifts of different
// compositions can coincide, so words are deduplicated globally.
inline std::vector<ReconstructedPath> reconstruct_paths_tb(
    const std::vector<EventCollection>& per_state, int sections, int omega, int d_tilde) {
    if (sections * omega > PackedWord::kCapacity)
        throw std::invalid_argument("reconstruct_paths_tb: frame too long for packed words");
    std::unordered_set<PackedWord, PackedWordHash> seen;
    std::vector<ReconstructedPath> out;
    PackedWord word;
    word.nbits = static_cast<uint16_t>(sections * omega);
    for (size_t sigma = 0; sigma < per_state.size(); ++sigma) {
        auto evs = detail::placeable(per_state[sigma].events, omega);
        std::function<void(int, int)> compose = [&](int pos, int weight) {
            if (pos == sections) {
                for (int j = 0; j < sections; ++j) {
                    PackedWord rot = word.rotated_left(j * omega);
                    if (seen.insert(rot).second) out.push_back({rot, weight});
                }
                return;
            }
            if (sigma == 0 && pos > 0) compose(pos + 1, weight);  // idle at state zero
            for (const auto& e : evs) {
                if (pos + e.length > sections || weight + e.weight >= d_tilde) continue;
                for (int b : e.one_positions) word.flip(pos * omega + b);
                compose(pos + e.length, weight + e.weight);
                for (int b : e.one_positions) word.flip(pos * omega + b);
            }
        };
        compose(0, 0);
    }
    return out;
}

// Undetected-error spectrum: weight -> number of distinct trellis words whose
// systematic payload is nonzero and divisible by the CRC, for weights below
// the collection threshold (0 = exact enumeration).
struct DistanceSpectrum {
    std::map<int, long long> counts;
    int d_tilde = 0;
};

struct SearchResult {
    CrcPolynomial crc{0, 0};
    int d_min = 0;
    DistanceSpectrum spectrum;  // the winner's spectrum below d_tilde
    int d_tilde = 0;
    int candidates_examined = 0;
    bool tie_broken = false;              // more than one candidate reached d_min
    std::vector<CrcPolynomial> tied;      // every candidate achieving the best d_min
};

// Scans all degree-m candidates with p_0 = p_m = 1 for the polynomial that
// maximizes the minimum weight of an undetected path. Ties are broken by
// fewer undetected paths at that weight, then at each successive weight, then
// by the smallest numeric value. payload_pos maps payload index -> codeword
// position (the rail layout the decoder uses).
inline SearchResult find_dso_crc(const std::vector<ReconstructedPath>& paths, int m,
                                 const std::vector<int>& payload_pos, int d_tilde) {
    if (m < 1 || m > 24) throw std::invalid_argument("find_dso_crc: m out of range");
    if (static_cast<int>(payload_pos.size()) <= m)
        throw std::invalid_argument("find_dso_crc: payload shorter than the CRC");

    // Bucket the nonzero-payload words by weight; a path whose payload bits
    // all vanish decodes to the transmitted message and is not a message error.
    std::vector<std::vector<PackedWord>> buckets(d_tilde);
    const int payload_bits = static_cast<int>(payload_pos.size());
    for (const auto& p : paths) {
        PackedWord payload;
        payload.nbits = static_cast<uint16_t>(payload_bits);
        for (int j = 0; j < payload_bits; ++j)
            if (p.word.get(payload_pos[j])) payload.set(j, true);
        if (!payload.any()) continue;
        buckets[p.weight].push_back(payload);
    }

    const uint32_t count = uint32_t{1} << (m - 1);
    std::vector<int> d_min(count, -1);
    for (uint32_t mid = 0; mid < count; ++mid) {
        const CrcPolynomial cand{(uint32_t{1} << m) | (mid << 1) | 1u, m};
        for (int w = 1; w < d_tilde && d_min[mid] < 0; ++w)
            for (const auto& payload : buckets[w])
                if (crc_divides(payload, cand)) {
                    d_min[mid] = w;
                    break;
                }
        if (d_min[mid] < 0)
            throw InsufficientThresholdError(
                "find_dso_crc: candidate " + format_hex_crc(cand) +
                " has no undetected path below d_tilde=" + std::to_string(d_tilde));
    }

    const int best_d = *std::max_element(d_min.begin(), d_min.end());
    std::vector<uint32_t> finalists;
    for (uint32_t mid = 0; mid < count; ++mid)
        if (d_min[mid] == best_d) finalists.push_back(mid);

    // Full spectra for the finalists only.
    auto spectrum_of = [&](uint32_t mid) {
        const CrcPolynomial cand{(uint32_t{1} << m) | (mid << 1) | 1u, m};
        std::vector<long long> counts(d_tilde, 0);
        for (int w = best_d; w < d_tilde; ++w)
            for (const auto& payload : buckets[w]) counts[w] += crc_divides(payload, cand);
        return counts;
    };
    uint32_t winner = finalists[0];
    std::vector<long long> winner_counts = spectrum_of(winner);
    for (size_t i = 1; i < finalists.size(); ++i) {
        auto c = spectrum_of(finalists[i]);
        if (c < winner_counts) {  // fewer paths at the first differing weight
            winner = finalists[i];
            winner_counts = std::move(c);
        }
    }

    SearchResult r;
    r.crc = CrcPolynomial{(uint32_t{1} << m) | (winner << 1) | 1u, m};
    r.d_min = best_d;
    r.d_tilde = d_tilde;
    r.candidates_examined = static_cast<int>(count);
    r.tie_broken = finalists.size() > 1;
    for (uint32_t mid : finalists)
        r.tied.push_back(CrcPolynomial{(uint32_t{1} << m) | (mid << 1) | 1u, m});
    r.spectrum.d_tilde = d_tilde;
    for (int w = 0; w < d_tilde; ++w)
        if (winner_counts[w] > 0) r.spectrum.counts[w] = winner_counts[w];
    return r;
}

// End-to-end search driver: collect events, reconstruct low-weight words, and
// scan candidates; the threshold starts at d_free + 2*ceil(m/2) and doubles
// (up to the cap) whenever some candidate has no undetected path below it.
struct DsoSearch {
    SearchResult result;
    int d_free = 0;
    long long reconstructed_paths = 0;
};

inline DsoSearch search_dso_crc(const ParityCheckMatrix& code, const FrameLayout& layout,
                                RailPolicy policy = RailPolicy::Stepwise, int d_tilde = 0,
                                int d_tilde_cap = 64) {
    DsoSearch out;
    out.d_free = d_free(code);
    int dt = d_tilde > 0 ? d_tilde : out.d_free + 2 * ((layout.m + 1) / 2);
    const int sections = layout.sections();
    const auto map = make_payload_map(code, layout, policy);
    std::vector<int> payload_pos(layout.payload_bits(), -1);
    for (int i = 0; i < layout.N; ++i)
        if (map[i] >= 0) payload_pos[map[i]] = i;

    for (;;) {
        std::vector<ReconstructedPath> paths;
        if (layout.mode == Termination::ZT) {
            auto events = collect_iee_zt(code, dt, sections);
            paths = reconstruct_paths_zt(events.events, sections, code.omega, dt);
        } else {
            auto per_state = collect_iee_tb(code, dt, sections);
            paths = reconstruct_paths_tb(per_state, sections, code.omega, dt);
        }
        out.reconstructed_paths = static_cast<long long>(paths.size());
        try {
            out.result = find_dso_crc(paths, layout.m, payload_pos, dt);
            return out;
        } catch (const InsufficientThresholdError&) {
            if (dt >= d_tilde_cap) throw;
            dt = std::min(dt * 2, d_tilde_cap);
        }
    }
}

// Exhaustive oracle: enumerate every trellis word of the frame (free inputs
// from every legal start state), keep the nonzero-payload CRC-divisible ones,
// and count them by weight. Exponential in (omega-1)*sections; guarded.
inline DistanceSpectrum brute_force_spectrum(const ParityCheckMatrix& code,
                                             const FrameLayout& layout, CrcPolynomial crc,
                                             RailPolicy policy = RailPolicy::Stepwise) {
    const int sections = layout.sections();
    const int free_bits = (code.omega - 1) * sections;
    if (free_bits > 26)
        throw std::invalid_argument("brute_force_spectrum: configuration too large to enumerate");
    if (sections * code.omega > PackedWord::kCapacity)
        throw std::invalid_argument("brute_force_spectrum: frame too long for packed words");

    SystematicEncoder enc(code);
    const auto map = make_payload_map(code, layout, policy);
    std::vector<int> payload_pos(layout.payload_bits(), -1);
    for (int i = 0; i < layout.N; ++i)
        if (map[i] >= 0) payload_pos[map[i]] = i;

    DistanceSpectrum spectrum;
    spectrum.d_tilde = 0;  // exact
    std::unordered_set<PackedWord, PackedWordHash> seen;
    const int rails = code.omega - 1;
    BitVec smaj(static_cast<size_t>(free_bits));
    BitVec codeword;
    const int starts = layout.mode == Termination::ZT ? 1 : enc.num_states();
    for (int s0 = 0; s0 < starts; ++s0) {
        for (uint64_t x = 0; x < (uint64_t{1} << free_bits); ++x) {
            for (int i = 0; i < free_bits; ++i) smaj[i] = (x >> i) & 1;
            codeword.clear();
            const uint32_t end = enc.run(static_cast<uint32_t>(s0), smaj, codeword);
            if (layout.mode == Termination::ZT ? end != 0 : end != static_cast<uint32_t>(s0))
                continue;
            PackedWord word = PackedWord::from_bits(codeword);
            PackedWord payload;
            payload.nbits = static_cast<uint16_t>(payload_pos.size());
            for (size_t j = 0; j < payload_pos.size(); ++j)
                if (word.get(payload_pos[j])) payload.set(static_cast<int>(j), true);
            if (!payload.any() || !crc_divides(payload, crc)) continue;
            if (!seen.insert(word).second) continue;
            ++spectrum.counts[word.popcount()];
        }
    }
    (void)rails;
    return spectrum;
}

}  // namespace hrcc
