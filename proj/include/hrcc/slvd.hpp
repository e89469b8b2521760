#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <vector>

#include "hrcc/code.hpp"
#include "hrcc/dual_trellis.hpp"
#include "hrcc/gf2.hpp"

namespace hrcc {

// Channel outputs for one frame: the BPSK-modulated codeword plus noise.
struct SoftWord {
    std::vector<double> values;
    double amplitude = 1.0;
};

namespace detail {
constexpr double kInfMetric = std::numeric_limits<double>::infinity();
}

// Forward Viterbi sweep over the dual trellis. Branch metric for bit b at
// position t is the squared Euclidean distance to the BPSK point (1-2b)*A.
// Every node keeps its winning branch and the single discarded branch (the
// trellis has in-degree <= 2), so list extraction can detour through losers
// without re-running the sweep.
struct ForwardPass {
    struct Node {
        double metric = detail::kInfMetric;        // best source-to-node metric
        double loser_metric = detail::kInfMetric;  // metric through the discarded branch
        int32_t prev_state = -1, loser_state = -1;
        int8_t prev_bit = -1, loser_bit = -1;
        bool has_loser() const { return loser_state >= 0; }
        double loser_delta() const { return loser_metric - metric; }
    };
    int nbits = 0;
    int num_states = 0;
    Termination mode = Termination::ZT;
    std::vector<Node> nodes;  // (nbits+1) layers x num_states

    Node& at(int t, int s) { return nodes[static_cast<size_t>(t) * num_states + s]; }
    const Node& at(int t, int s) const { return nodes[static_cast<size_t>(t) * num_states + s]; }
};

// mode selects the source layer: ZT anchors at state zero with metric 0; TB
// opens every boundary state at metric 0.
inline void viterbi_forward(const SoftWord& rx, const DualTrellis& dt, Termination mode,
                            ForwardPass& fp) {
    const int nbits = static_cast<int>(rx.values.size());
    if (nbits % dt.omega != 0)
        throw std::invalid_argument("viterbi_forward: length not divisible by omega");
    fp.nbits = nbits;
    fp.num_states = dt.num_states;
    fp.mode = mode;
    fp.nodes.assign(static_cast<size_t>(nbits + 1) * dt.num_states, ForwardPass::Node{});
    if (mode == Termination::ZT) {
        fp.at(0, 0).metric = 0.0;
    } else {
        for (int s = 0; s < dt.boundary_states; ++s) fp.at(0, s).metric = 0.0;
    }
    const double A = rx.amplitude;
    for (int t = 0; t < nbits; ++t) {
        const int phase = t % dt.omega;
        const double d0 = rx.values[t] - A;
        const double d1 = rx.values[t] + A;
        const double bm[2] = {d0 * d0, d1 * d1};
        for (int s = 0; s < dt.num_states; ++s) {
            const auto& cur = fp.at(t, s);
            if (cur.metric == detail::kInfMetric) continue;
            for (int y = 0; y < 2; ++y) {
                const int32_t nxt = dt.transitions[phase][s][y];
                if (nxt < 0) continue;
                const double total = cur.metric + bm[y];
                auto& n = fp.at(t + 1, nxt);
                // strict comparisons keep the first-processed branch on ties,
                // i.e. the smaller (state, bit) pair: deterministic decoding
                if (total < n.metric) {
                    n.loser_metric = n.metric;
                    n.loser_state = n.prev_state;
                    n.loser_bit = n.prev_bit;
                    n.metric = total;
                    n.prev_state = s;
                    n.prev_bit = static_cast<int8_t>(y);
                } else if (total < n.loser_metric) {
                    n.loser_metric = total;
                    n.loser_state = s;
                    n.loser_bit = static_cast<int8_t>(y);
                }
            }
        }
    }
}

inline ForwardPass viterbi_forward(const SoftWord& rx, const DualTrellis& dt, Termination mode) {
    ForwardPass fp;
    viterbi_forward(rx, dt, mode, fp);
    return fp;
}

// Serial detour enumeration of trellis paths in non-decreasing metric order.
// The terminal is the zero state (ZT) or a virtual root joined to every
// boundary state by zero-cost edges (TB), so both modes share one engine. A
// path is identified by its terminal choice plus the strictly decreasing list
// of layers where traceback takes the discarded branch instead of the
// survivor. When a path is expanded it spawns at most one child per merge
// node on its freshly exposed suffix -- and, for a pure survivor path, the
// next-best terminal; every candidate has a unique parent, which makes the
// enumeration complete and duplicate-free. (With tail-biting frames so short
// that a word bites from several states, each such start is its own path and
// the word appears once per start.)
class PathEnumerator {
public:
    PathEnumerator(const ForwardPass& fp, const DualTrellis& dt) : fp_(fp) {
        if (fp.mode == Termination::ZT) {
            if (fp.at(fp.nbits, 0).metric < detail::kInfMetric) roots_.push_back(0);
        } else {
            for (int s = 0; s < dt.boundary_states; ++s)
                if (fp.at(fp.nbits, s).metric < detail::kInfMetric) roots_.push_back(s);
            std::stable_sort(roots_.begin(), roots_.end(), [&](int a, int b) {
                return fp_.at(fp_.nbits, a).metric < fp_.at(fp_.nbits, b).metric;
            });
        }
        if (!roots_.empty()) push(fp_.at(fp_.nbits, roots_[0]).metric, -1, 0, -1);
    }

    struct Path {
        double metric = 0.0;
        int rank = 0;
        int start_state = -1;
        int end_state = -1;
    };

    // Codeword bits of the most recently extracted path; valid until next().
    const BitVec& bits() const { return bits_; }
    long long insertions() const { return insertions_; }

    std::optional<Path> next() {
        if (last_ >= 0) expand_last();
        if (heap_.empty()) return std::nullopt;
        Cand c = heap_.top();
        heap_.pop();
        Popped p;
        p.metric = c.metric;
        p.root_idx = c.root_idx;
        if (c.parent >= 0) {
            p.chain = popped_[c.parent].chain;  // parent chain + one deeper detour
            p.chain.push_back(c.detour_layer);
        }

        int s = roots_[c.root_idx];
        const int end_state = s;
        bits_.assign(fp_.nbits, 0);
        states_.assign(fp_.nbits + 1, -1);
        states_[fp_.nbits] = s;
        size_t ci = 0;  // chain layers are strictly decreasing
        for (int t = fp_.nbits; t > 0; --t) {
            const auto& n = fp_.at(t, s);
            const bool detour = ci < p.chain.size() && p.chain[ci] == t;
            if (detour) ++ci;
            bits_[t - 1] = static_cast<uint8_t>(detour ? n.loser_bit : n.prev_bit);
            s = detour ? n.loser_state : n.prev_state;
            states_[t - 1] = s;
        }
        last_ = static_cast<int>(popped_.size());
        popped_.push_back(std::move(p));
        ++rank_;
        return Path{c.metric, rank_, s, end_state};
    }

private:
    struct Cand {
        double metric;
        long long seq;  // FIFO tie-break for equal metrics
        int parent;     // index into popped_, or -1 for a terminal seed
        int root_idx;
        int detour_layer;
    };
    struct CandAfter {
        bool operator()(const Cand& a, const Cand& b) const {
            if (a.metric != b.metric) return a.metric > b.metric;
            return a.seq > b.seq;
        }
    };
    struct Popped {
        std::vector<int32_t> chain;
        int root_idx = 0;
        double metric = 0.0;
    };

    void push(double metric, int parent, int root_idx, int detour_layer) {
        heap_.push(Cand{metric, seq_++, parent, root_idx, detour_layer});
        ++insertions_;
    }

    // Children are deferred until another path is requested, so a decode that
    // stops at rank L never pays for rank-L expansion.
    void expand_last() {
        const Popped& p = popped_[last_];
        if (p.chain.empty() && p.root_idx + 1 < static_cast<int>(roots_.size()))
            push(fp_.at(fp_.nbits, roots_[p.root_idx + 1]).metric, -1, p.root_idx + 1, -1);
        const int bound = p.chain.empty() ? fp_.nbits : p.chain.back() - 1;
        for (int t = 1; t <= bound; ++t) {
            const auto& n = fp_.at(t, states_[t]);
            if (n.has_loser()) push(p.metric + n.loser_delta(), last_, p.root_idx, t);
        }
        last_ = -1;
    }

    const ForwardPass& fp_;
    std::vector<int> roots_;
    std::priority_queue<Cand, std::vector<Cand>, CandAfter> heap_;
    std::vector<Popped> popped_;
    std::vector<int32_t> states_;  // state sequence of the last popped path
    BitVec bits_;
    long long seq_ = 0;
    long long insertions_ = 0;
    int rank_ = 0;
    int last_ = -1;
};

enum class DecodeStatus { Success, ListExhausted };

inline std::string to_string(DecodeStatus s) {
    return s == DecodeStatus::Success ? "success" : "list_exhausted";
}

struct DecodeResult {
    std::optional<BitVec> message;  // K bits; absent when the list was exhausted
    BitVec codeword;                // accepted codeword, or the rank-1 codeword on failure
    int list_rank = 0;              // L: number of paths extracted
    long long insertions = 0;       // I: ordered-list insertions
    double metric = 0.0;
    int start_state = -1, end_state = -1;
    DecodeStatus status = DecodeStatus::ListExhausted;
};

// Serial list Viterbi decoding: extract trellis paths in non-decreasing
// metric order and return the first whose systematic payload passes the CRC
// -- and, for tail-biting frames, whose start state equals its end state.
class SerialListDecoder {
public:
    // max_list = 0 selects the default cap of 2^(m+2) candidates.
    SerialListDecoder(const DualTrellis& dt, const ParityCheckMatrix& code,
                      const FrameLayout& layout, CrcPolynomial crc,
                      RailPolicy policy = RailPolicy::Stepwise, int max_list = 0)
        : dt_(dt), layout_(layout), crc_(crc),
          max_list_(max_list == 0 ? default_max_list(crc.m) : max_list) {
        if (max_list_ < 1) throw std::invalid_argument("SerialListDecoder: max_list must be >= 1");
        if (layout.K <= 0 || crc.m != layout.m)
            throw std::invalid_argument("SerialListDecoder: CRC degree disagrees with the layout");
        auto map = make_payload_map(code, layout, policy);
        payload_pos_.assign(layout.payload_bits(), -1);
        for (int i = 0; i < layout.N; ++i)
            if (map[i] >= 0) payload_pos_[map[i]] = i;
        for (int i : payload_pos_)
            if (i < 0) throw std::logic_error("SerialListDecoder: incomplete payload map");
    }

    int max_list() const { return max_list_; }
    static int default_max_list(int m) { return 1 << std::min(m + 2, 24); }

    // Optional line-oriented trace of every extracted path.
    void set_trace(std::ostream* os) { trace_ = os; }

    DecodeResult decode(const SoftWord& rx) {
        if (static_cast<int>(rx.values.size()) != layout_.N)
            throw std::invalid_argument("decode: received length != N");
        viterbi_forward(rx, dt_, layout_.mode, fp_);
        PathEnumerator en(fp_, dt_);
        DecodeResult res;
        BitVec payload(layout_.payload_bits());
        double prev_metric = -detail::kInfMetric;
        while (res.list_rank < max_list_) {
            auto p = en.next();
            if (!p) break;  // the whole code was enumerated
            res.list_rank = p->rank;
            if (p->metric < prev_metric)
                throw std::logic_error("decode: path metrics decreased across extractions");
            prev_metric = p->metric;
            if (p->rank == 1) {
                res.codeword = en.bits();
                res.metric = p->metric;
                res.start_state = p->start_state;
                res.end_state = p->end_state;
            }
            const bool tb_ok = layout_.mode == Termination::ZT || p->start_state == p->end_state;
            bool crc_ok = false;
            if (tb_ok) {
                const BitVec& bits = en.bits();
                for (size_t j = 0; j < payload_pos_.size(); ++j) payload[j] = bits[payload_pos_[j]];
                crc_ok = crc_check(payload, crc_);
            }
            if (trace_)
                (*trace_) << "rank=" << p->rank << " metric=" << p->metric
                          << " start=" << p->start_state << " end=" << p->end_state
                          << " tb=" << (tb_ok ? "pass" : "fail")
                          << " crc=" << (crc_ok ? "pass" : "fail") << "\n";
            if (tb_ok && crc_ok) {
                res.message = BitVec(payload.begin(), payload.begin() + layout_.K);
                res.codeword = en.bits();
                res.metric = p->metric;
                res.start_state = p->start_state;
                res.end_state = p->end_state;
                res.status = DecodeStatus::Success;
                break;
            }
        }
        res.insertions = en.insertions();
        return res;
    }

private:
    const DualTrellis& dt_;
    FrameLayout layout_;
    CrcPolynomial crc_;
    int max_list_;
    std::vector<int> payload_pos_;  // payload index -> codeword position
    ForwardPass fp_;
    std::ostream* trace_ = nullptr;
};

inline DecodeResult slvd_decode(const SoftWord& rx, const DualTrellis& dt,
                                const ParityCheckMatrix& code, const FrameLayout& layout,
                                const CrcPolynomial& crc,
                                RailPolicy policy = RailPolicy::Stepwise, int max_list = 0) {
    SerialListDecoder dec(dt, code, layout, crc, policy, max_list);
    return dec.decode(rx);
}

}  // namespace hrcc
