#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "hrcc/code.hpp"

namespace hrcc {

// Dual (syndrome-former) trellis. One trellis section consumes the omega
// codeword bits of one encoder step, phase by phase. States are the (v+1)
// partial sums of the observer-canonical-form adders; at section boundaries
// the top bit is always zero, so boundary states coincide with the v-bit
// encoder state. Within a section:
//
//   phase j < omega-1 : s' = s xor (y * h^(j))
//   phase omega-1     : s' = (s xor (y * h^(omega-1))) >> 1   (time advance)
//   phase lambda      : only y = s_0 is allowed (the forced branch), which
//                       zeroes the syndrome bit that the shift drops.
//
// Tables are per phase (the trellis is time-invariant); states a boundary
// start can never reach within a section are pruned.
struct DualTrellis {
    int omega = 0;
    int v = 0;
    int lambda = -1;
    int num_states = 0;       // 2^(v+1)
    int boundary_states = 0;  // 2^v
    int sections = 0;         // default frame length (for dumps); traversals take lengths from input
    // transitions[j][s][y]: state after consuming bit y at phase j, or -1.
    std::vector<std::vector<std::array<int32_t, 2>>> transitions;
    std::vector<std::vector<uint8_t>> reachable;  // [phase][state]

    static DualTrellis build(const ParityCheckMatrix& code, int sections) {
        DualTrellis dt;
        dt.omega = code.omega;
        dt.v = code.v;
        dt.lambda = code.lambda;
        dt.num_states = 1 << (code.v + 1);
        dt.boundary_states = 1 << code.v;
        dt.sections = sections;
        dt.transitions.assign(dt.omega, std::vector<std::array<int32_t, 2>>(
                                            dt.num_states, {-1, -1}));
        dt.reachable.assign(dt.omega, std::vector<uint8_t>(dt.num_states, 0));

        for (int s = 0; s < dt.boundary_states; ++s) dt.reachable[0][s] = 1;
        for (int j = 0; j < dt.omega; ++j) {
            const uint32_t taps = code.taps(j);
            for (int s = 0; s < dt.num_states; ++s) {
                if (!dt.reachable[j][s]) continue;
                for (int y = 0; y < 2; ++y) {
                    if (j == dt.lambda && y != (s & 1)) continue;
                    uint32_t t = static_cast<uint32_t>(s) ^ (y ? taps : 0u);
                    int32_t next;
                    if (j == dt.omega - 1) {
                        if (t & 1) continue;  // nonzero syndrome bit: not on any valid path
                        next = static_cast<int32_t>(t >> 1);
                    } else {
                        next = static_cast<int32_t>(t);
                    }
                    dt.transitions[j][s][y] = next;
                    if (j + 1 < dt.omega) dt.reachable[j + 1][next] = 1;
                }
            }
        }
        return dt;
    }

    int32_t step(int phase, int state, int bit) const { return transitions[phase][state][bit]; }

    // Walks a full frame from a boundary state; nullopt when some bit
    // contradicts a forced branch (or hits a pruned entry).
    std::optional<int> traverse(std::span<const uint8_t> bits, int start) const {
        int s = start;
        for (size_t t = 0; t < bits.size(); ++t) {
            int32_t n = transitions[t % omega][s][bits[t] & 1];
            if (n < 0) return std::nullopt;
            s = n;
        }
        return s;
    }

    struct CodewordCheck {
        bool ok = false;
        int start_state = -1;
        int end_state = -1;
    };

    CodewordCheck is_codeword(std::span<const uint8_t> bits, Termination mode) const {
        if (bits.size() % omega != 0)
            throw std::invalid_argument("is_codeword: length not divisible by omega");
        if (mode == Termination::ZT) {
            auto end = traverse(bits, 0);
            if (end && *end == 0) return {true, 0, 0};
            return {false, 0, end.value_or(-1)};
        }
        for (int s = 0; s < boundary_states; ++s) {
            auto end = traverse(bits, s);
            if (end && *end == s) return {true, s, s};
        }
        return {false, -1, -1};
    }

    void dump(std::ostream& os) const {
        os << "omega=" << omega << " v=" << v << " lambda=" << lambda
           << " states=" << num_states << " sections=" << sections << "\n";
        for (int j = 0; j < omega; ++j) {
            for (int s = 0; s < num_states; ++s) {
                if (!reachable[j][s]) continue;
                for (int y = 0; y < 2; ++y) {
                    if (transitions[j][s][y] < 0) continue;
                    os << "phase=" << j << " state=" << s << " bit=" << y
                       << " next=" << transitions[j][s][y] << "\n";
                }
            }
        }
    }
};

inline DualTrellis::CodewordCheck is_codeword(std::span<const uint8_t> bits,
                                              const ParityCheckMatrix& code, Termination mode) {
    return DualTrellis::build(code, static_cast<int>(bits.size()) / code.omega)
        .is_codeword(bits, mode);
}

// All single-section trajectories out of one boundary state: the omega output
// bits consumed and the boundary state reached.
struct SectionEdge {
    uint32_t out_bits;  // bit j = output at phase j
    int next;
};

inline std::vector<SectionEdge> section_edges(const DualTrellis& dt, int start) {
    std::vector<SectionEdge> edges;
    struct Frame {
        int state;
        uint32_t bits;
    };
    std::vector<Frame> stack{{start, 0}};
    std::vector<Frame> next_stack;
    for (int j = 0; j < dt.omega; ++j) {
        next_stack.clear();
        for (const Frame& f : stack) {
            for (int y = 0; y < 2; ++y) {
                int32_t n = dt.transitions[j][f.state][y];
                if (n < 0) continue;
                next_stack.push_back({static_cast<int>(n), f.bits | (static_cast<uint32_t>(y) << j)});
            }
        }
        stack.swap(next_stack);
    }
    edges.reserve(stack.size());
    for (const Frame& f : stack) edges.push_back({f.bits, f.state});
    return edges;
}

// Zero-termination table: for every boundary state, the input/output bits of a
// fixed-length trajectory into the zero state. Shortest trajectories first,
// ties broken by lexicographically smallest output pattern, then padded with
// zero-state idle sections to exactly ceil(v/(omega-1)) sections.
struct ZtPatterns {
    int sections = 0;
    std::vector<BitVec> inputs;   // per boundary state, (omega-1)*sections bits
    std::vector<BitVec> outputs;  // per boundary state, omega*sections bits
};

inline ZtPatterns zt_patterns(const DualTrellis& dt, const ParityCheckMatrix& code) {
    const int rails = dt.omega - 1;
    const int T = (dt.v + rails - 1) / rails;
    const int S = dt.boundary_states;

    std::vector<std::vector<SectionEdge>> edges(S);
    for (int s = 0; s < S; ++s) edges[s] = section_edges(dt, s);

    constexpr int kUnset = -1;
    std::vector<int> dist(S, kUnset);
    dist[0] = 0;
    // Breadth-first over reversed section edges.
    std::vector<int> frontier{0};
    for (int d = 1; !frontier.empty(); ++d) {
        std::vector<int> next;
        for (int s = 0; s < S; ++s) {
            if (dist[s] != kUnset) continue;
            for (const auto& e : edges[s])
                if (dist[e.next] == d - 1) {
                    dist[s] = d;
                    next.push_back(s);
                    break;
                }
        }
        frontier.swap(next);
    }
    for (int s = 0; s < S; ++s)
        if (dist[s] == kUnset || dist[s] > T)
            throw DomainError("zt_patterns: state " + std::to_string(s) +
                              " has no zero-termination trajectory within " +
                              std::to_string(T) + " sections");

    // Lexicographically smallest output pattern among shortest trajectories,
    // built up by distance level.
    std::vector<BitVec> best(S);
    for (int d = 1; d <= T; ++d) {
        for (int s = 0; s < S; ++s) {
            if (dist[s] != d) continue;
            BitVec chosen;
            for (const auto& e : edges[s]) {
                if (dist[e.next] != d - 1) continue;
                BitVec cand(dt.omega);
                for (int j = 0; j < dt.omega; ++j) cand[j] = (e.out_bits >> j) & 1;
                cand.insert(cand.end(), best[e.next].begin(), best[e.next].end());
                if (chosen.empty() || cand < chosen) chosen = std::move(cand);
            }
            best[s] = std::move(chosen);
        }
    }

    ZtPatterns z;
    z.sections = T;
    z.inputs.resize(S);
    z.outputs.resize(S);
    for (int s = 0; s < S; ++s) {
        BitVec out = best[s];
        out.resize(static_cast<size_t>(T) * dt.omega, 0);  // idle padding at state zero
        BitVec in;
        in.reserve(static_cast<size_t>(T) * rails);
        for (int k = 0; k < T; ++k)
            for (int j = 0; j < dt.omega; ++j)
                if (j != code.parity_phase) in.push_back(out[k * dt.omega + j]);
        z.outputs[s] = std::move(out);
        z.inputs[s] = std::move(in);
    }
    return z;
}

}  // namespace hrcc
