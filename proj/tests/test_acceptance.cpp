// Acceptance suite: one pass/fail line per criterion, exit 0 only when every
// executed criterion passes. `--skip-slow` skips the long Monte-Carlo
// criterion for quick local runs; CI runs everything.
#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hrcc/complexity.hpp"
#include "hrcc/crc_search.hpp"
#include "hrcc/sim.hpp"
#include "hrcc/slvd.hpp"
#include "oracles.hpp"

using namespace hrcc;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string hex(uint32_t coeffs, int m) { return format_hex_crc(CrcPolynomial{coeffs, m}); }

bool contains_crc(const std::vector<CrcPolynomial>& tied, uint32_t coeffs) {
    for (const auto& c : tied)
        if (c.coeffs == coeffs) return true;
    return false;
}

// ---- criteria 1 and 2: reference CRC columns at v=4, N=128 -----------------
//
// The searched winner must equal the reference value; when the scan reports a
// tie at the best minimum distance, the reference value must be among the
// tied candidates (the pinned tie-break may then legitimately pick another).
Outcome reference_crc_column(Termination mode, int payload_budget,
                             const std::vector<uint32_t>& reference) {
    const auto code = ParityCheckMatrix::from_octal({"33", "25", "37", "31"}, 4);
    std::string detail;
    for (int m = 3; m <= 6; ++m) {
        const auto layout = FrameLayout::make(payload_budget - m, m, code, mode);
        if (layout.N != 128) return {false, "blocklength is not 128"};
        const auto res = search_dso_crc(code, layout);
        const uint32_t want = reference[static_cast<size_t>(m - 3)];
        if (!detail.empty()) detail += ", ";
        if (res.result.crc.coeffs == want) {
            detail += "m=" + std::to_string(m) + ":" + hex(want, m);
        } else if (res.result.tie_broken && contains_crc(res.result.tied, want)) {
            detail += "m=" + std::to_string(m) + ":" + hex(res.result.crc.coeffs, m) +
                      " (reference " + hex(want, m) + " tied at d_min=" +
                      std::to_string(res.result.d_min) + ")";
        } else {
            return {false, "m=" + std::to_string(m) + ": got " +
                               hex(res.result.crc.coeffs, m) + ", reference " + hex(want, m) +
                               " neither won nor tied"};
        }
    }
    return {true, detail};
}

Outcome criterion1() { return reference_crc_column(Termination::ZT, 90, {0x9, 0x1B, 0x25, 0x4D}); }
Outcome criterion2() { return reference_crc_column(Termination::TB, 96, {0x9, 0x1B, 0x25, 0x7D}); }

// ---- criterion 3: exhaustive oracle equivalence on tiny codes --------------

struct TinyConfig {
    const char* code;
    int v;
    int K;
    int m;
};

double word_metric(const BitVec& bits, const std::vector<double>& rx, double amp) {
    double sum = 0.0;
    for (size_t i = 0; i < bits.size(); ++i) {
        const double point = bits[i] ? -amp : amp;
        const double d = rx[i] - point;
        sum += d * d;
    }
    return sum;
}

// (a) IEE reconstruction equals the brute-force low-weight codeword set.
std::string check_reconstruction(const ParityCheckMatrix& code, const FrameLayout& layout,
                                 const DualTrellis& dt, int d_tilde) {
    std::vector<ReconstructedPath> paths;
    if (layout.mode == Termination::ZT) {
        const auto events = collect_iee_zt(code, d_tilde, layout.sections());
        paths = reconstruct_paths_zt(events.events, layout.sections(), code.omega, d_tilde);
    } else {
        const auto per_state = collect_iee_tb(code, d_tilde, layout.sections());
        paths = reconstruct_paths_tb(per_state, layout.sections(), code.omega, d_tilde);
    }
    std::set<std::pair<BitVec, int>> got;
    for (const auto& p : paths) {
        if (!got.insert({p.word.to_bits(), p.weight}).second) return "duplicate reconstructed word";
        if (p.weight != static_cast<int>(p.word.popcount())) return "weight/popcount mismatch";
    }
    std::set<std::pair<BitVec, int>> want;
    for (const auto& w : oracle::accepted_words(dt, layout.sections(), layout.mode)) {
        int wt = 0;
        for (uint8_t b : w) wt += b;
        if (wt > 0 && wt < d_tilde) want.insert({w, wt});
    }
    if (got != want)
        return "reconstructed set (" + std::to_string(got.size()) +
               " words) != brute-force set (" + std::to_string(want.size()) + " words)";
    return "";
}

// (b) the candidate scan's winner and d_min equal a from-scratch oracle that
// enumerates every valid trellis word and applies the pinned selection rule.
std::string check_search_oracle(const ParityCheckMatrix& code, const FrameLayout& layout,
                                const DualTrellis& dt, const DsoSearch& search,
                                RailPolicy policy) {
    const auto map = make_payload_map(code, layout, policy);
    std::vector<int> payload_pos(static_cast<size_t>(layout.payload_bits()), -1);
    for (int i = 0; i < layout.N; ++i)
        if (map[static_cast<size_t>(i)] >= 0) payload_pos[static_cast<size_t>(map[i])] = i;

    const int d_tilde = search.result.d_tilde;
    const int m = layout.m;
    const uint32_t count = uint32_t{1} << (m - 1);
    std::vector<int> d_min(count, INT32_MAX);
    std::vector<std::vector<long long>> counts(count, std::vector<long long>(d_tilde, 0));

    for (const auto& w : oracle::accepted_words(dt, layout.sections(), layout.mode)) {
        PackedWord payload;
        payload.nbits = static_cast<uint16_t>(layout.payload_bits());
        for (int j = 0; j < layout.payload_bits(); ++j)
            if (w[static_cast<size_t>(payload_pos[static_cast<size_t>(j)])])
                payload.set(j, true);
        if (!payload.any()) continue;
        int wt = 0;
        for (uint8_t b : w) wt += b;
        for (uint32_t mid = 0; mid < count; ++mid) {
            const CrcPolynomial cand{(uint32_t{1} << m) | (mid << 1) | 1u, m};
            if (!crc_divides(payload, cand)) continue;
            d_min[mid] = std::min(d_min[mid], wt);
            if (wt < d_tilde) counts[mid][static_cast<size_t>(wt)]++;
        }
    }
    int best_d = 0;
    for (uint32_t mid = 0; mid < count; ++mid) best_d = std::max(best_d, d_min[mid]);
    uint32_t winner = UINT32_MAX;
    for (uint32_t mid = 0; mid < count; ++mid) {
        if (d_min[mid] != best_d) continue;
        if (winner == UINT32_MAX || counts[mid] < counts[winner]) winner = mid;
    }
    const uint32_t winner_coeffs = (uint32_t{1} << m) | (winner << 1) | 1u;
    if (best_d != search.result.d_min)
        return "d_min " + std::to_string(search.result.d_min) + " != oracle " +
               std::to_string(best_d);
    if (winner_coeffs != search.result.crc.coeffs)
        return "winner " + hex(search.result.crc.coeffs, m) + " != oracle " +
               hex(winner_coeffs, m);
    return "";
}

// (c) the decoder's extracted path sequence equals the exhaustive list of all
// trellis paths sorted by metric, for random noise.
std::string check_list_sequence(const DualTrellis& dt, const FrameLayout& layout,
                                std::mt19937_64& rng) {
    // Oracle universe: every whole-frame trellis path (ZT: zero to zero;
    // TB: from each boundary start, any end -- the biting gate is applied
    // after extraction, so extraction order covers them all).
    std::vector<std::pair<double, BitVec>> universe;
    const int sections = layout.sections();
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> rx(static_cast<size_t>(layout.N));
    for (double& r : rx) r = noise(rng);

    if (layout.mode == Termination::ZT) {
        oracle::walk_paths(dt, sections, 0, [&](const BitVec& w, int end) {
            if (end == 0) universe.push_back({word_metric(w, rx, 1.0), w});
        });
    } else {
        for (int s = 0; s < dt.boundary_states; ++s)
            oracle::walk_paths(dt, sections, s, [&](const BitVec& w, int) {
                universe.push_back({word_metric(w, rx, 1.0), w});
            });
    }
    std::stable_sort(universe.begin(), universe.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    SoftWord soft;
    soft.values = rx;
    soft.amplitude = 1.0;
    auto fp = viterbi_forward(soft, dt, layout.mode);
    PathEnumerator en(fp, dt);

    constexpr double kTol = 1e-9;
    std::vector<BitVec> extracted;
    std::vector<double> metrics;
    while (auto p = en.next()) {
        extracted.push_back(en.bits());
        metrics.push_back(p->metric);
    }
    if (extracted.size() != universe.size())
        return "extracted " + std::to_string(extracted.size()) + " paths, universe has " +
               std::to_string(universe.size());
    for (size_t i = 0; i < universe.size(); ++i)
        if (std::abs(metrics[i] - universe[i].first) > kTol)
            return "metric mismatch at rank " + std::to_string(i + 1);
    // Within runs of equal metric the order is unspecified; compare multisets.
    size_t lo = 0;
    while (lo < universe.size()) {
        size_t hi = lo + 1;
        while (hi < universe.size() && universe[hi].first - universe[hi - 1].first <= kTol) ++hi;
        std::multiset<BitVec> a, b;
        for (size_t i = lo; i < hi; ++i) {
            a.insert(universe[i].second);
            b.insert(extracted[i]);
        }
        if (a != b) return "word mismatch in the metric-tie group at rank " + std::to_string(lo + 1);
        lo = hi;
    }
    return "";
}

Outcome criterion3() {
    const TinyConfig panel[] = {
        {"(17,15,13)", 3, 9, 3},   // omega=3, v=3
        {"(6,4,7)", 2, 8, 4},      // omega=3, v=2
        {"(2,5,7,6)", 2, 9, 3},    // omega=4, v=2
        {"(13,17,15,11)", 3, 8, 4} // omega=4, v=3
    };
    int configs = 0;
    for (const auto& t : panel) {
        const auto code = ParityCheckMatrix::from_text(t.code, t.v);
        for (Termination mode : {Termination::ZT, Termination::TB}) {
            const auto layout = FrameLayout::make(t.K, t.m, code, mode);
            const auto dt = DualTrellis::build(code, layout.sections());
            const auto search = search_dso_crc(code, layout);
            const std::string tag = std::string(t.code) + "/" + to_string(mode);

            if (auto e = check_reconstruction(code, layout, dt, search.result.d_tilde);
                !e.empty())
                return {false, tag + ": " + e};
            if (auto e = check_search_oracle(code, layout, dt, search, RailPolicy::Stepwise);
                !e.empty())
                return {false, tag + ": " + e};
            std::mt19937_64 rng(0x5eed0000u + static_cast<unsigned>(configs));
            for (int rep = 0; rep < 100; ++rep)
                if (auto e = check_list_sequence(dt, layout, rng); !e.empty())
                    return {false, tag + " rep " + std::to_string(rep) + ": " + e};
            ++configs;
        }
    }
    return {true, std::to_string(configs) + " tiny configurations, 100 noise draws each"};
}

// ---- criterion 4: frame layout (K, m, R) table at N=128 --------------------

Outcome criterion4() {
    struct Row {
        int K, m;
        double R;
    };
    const std::vector<Row> zt = {{87, 3, 0.680}, {86, 4, 0.672}, {85, 5, 0.664},
                                 {84, 6, 0.656}, {83, 7, 0.648}, {82, 8, 0.641},
                                 {81, 9, 0.633}, {80, 10, 0.625}};
    const std::vector<Row> tb = {{93, 3, 0.727}, {92, 4, 0.719}, {91, 5, 0.711},
                                 {90, 6, 0.703}, {89, 7, 0.695}, {88, 8, 0.688},
                                 {87, 9, 0.680}, {86, 10, 0.672}};
    const auto code = ParityCheckMatrix::from_octal({"33", "25", "37", "31"}, 4);
    int rows = 0;
    auto check = [&](const std::vector<Row>& table, Termination mode) -> std::string {
        for (const auto& row : table) {
            const auto layout = FrameLayout::make(row.K, row.m, code, mode);
            if (layout.N != 128)
                return "K=" + std::to_string(row.K) + " " + to_string(mode) + ": N=" +
                       std::to_string(layout.N);
            if (std::llround(layout.rate() * 1000.0) != std::llround(row.R * 1000.0))
                return "K=" + std::to_string(row.K) + " " + to_string(mode) +
                       ": rate mismatch";
            ++rows;
        }
        return "";
    };
    if (auto e = check(zt, Termination::ZT); !e.empty()) return {false, e};
    if (auto e = check(tb, Termination::TB); !e.empty()) return {false, e};
    return {true, std::to_string(rows) + " (K, m, R) rows at N=128"};
}

// ---- criterion 5: complexity formulas against hand-evaluated constants -----

Outcome criterion5() {
    struct Spot {
        int K, m, v;
        double EL;
        Termination mode;
        double c1, c2;
        double c_ssv, c_trace, EI;
    };
    // c_ssv / c_trace / EI evaluated by hand from the closed forms.
    const std::vector<Spot> spots = {
        {80, 10, 4, 1.0, Termination::ZT, 1, 1, 4526.0, 0.0, 90.0},
        {86, 10, 6, 1.0, Termination::TB, 1, 1, 18832.0, 0.0, 159.0},
        {87, 3, 4, 1.0, Termination::ZT, 1, 1, 4526.0, 0.0, 90.0},
        {87, 3, 3, 2.0, Termination::ZT, 1, 1, 2444.0, 321.0, 180.0},
        {10, 4, 3, 1.0, Termination::ZT, 1, 1, 354.0, 0.0, 14.0},
        {93, 3, 4, 1.0, Termination::TB, 1, 1, 4960.0, 0.0, 111.0},
        {9, 3, 2, 3.0, Termination::TB, 1, 1, 190.0, 84.0, 39.0},
        {86, 4, 5, 1.5, Termination::ZT, 1, 1, 8640.0, 162.5, 135.0},
        {88, 8, 6, 2.0, Termination::TB, 1, 1, 18832.0, 336.0, 255.0},
        {80, 10, 4, 1.0, Termination::ZT, 2, 0.5, 4849.0, 0.0, 90.0},
        {1, 0, 1, 1.0, Termination::ZT, 1, 1, 10.5, 0.0, 1.0},
    };
    for (size_t i = 0; i < spots.size(); ++i) {
        const auto& s = spots[i];
        const auto r = complexity_estimate(s.K, s.m, s.v, s.EL, s.mode, s.c1, s.c2);
        const double want_list = s.EI > 1.0 ? s.c2 * s.EI * std::log2(s.EI) : 0.0;
        const bool ok = r.c_ssv == s.c_ssv && r.c_trace == s.c_trace && r.EI == s.EI &&
                        r.c_list == want_list &&
                        r.c_slvd == s.c_ssv + s.c_trace + want_list &&
                        (s.EL != 1.0 || r.c_trace == 0.0);
        if (!ok)
            return {false, "spot " + std::to_string(i + 1) + ": got C_ssv=" +
                               std::to_string(r.c_ssv) + " C_trace=" + std::to_string(r.c_trace) +
                               " EI=" + std::to_string(r.EI)};
    }
    return {true, std::to_string(spots.size()) + " spot configurations, exact equality"};
}

// ---- criterion 6 (slow): expected list rank near FER 1e-4 ------------------

Outcome criterion6() {
    const auto code = ParityCheckMatrix::from_octal({"107", "135", "133", "141"}, 6);
    FerConfig cfg;
    cfg.code = code;
    cfg.layout = FrameLayout::make(86, 10, code, Termination::TB);
    cfg.crc = parse_hex_crc("0x723", 10);
    cfg.stop = StopRule{400, 12'000'000};
    cfg.seed = 20260815;
    cfg.workers = 1;

    // Pilot-calibrated: FER crosses [5e-5, 2e-4] between 5.0 and 5.25 dB, a
    // window only ~0.2 dB wide, hence the fine retry step.
    double snr = 5.1;
    for (int attempt = 0; attempt < 4; ++attempt) {
        const auto stats = run_fer_point(cfg, snr);
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "snr=%.2f dB fer=%.3g (%lld/%lld frames) E[L]=%.3f E[I]=%.1f", snr,
                      stats.fer, stats.errors(), stats.frames, stats.avg_list_rank,
                      stats.avg_insertions);
        if (stats.fer >= 5e-5 && stats.fer <= 2e-4) {
            if (stats.errors() < 400)
                return {false, std::string(buf) + ": fewer than 400 error frames"};
            if (!(stats.avg_list_rank < 7.0))
                return {false, std::string(buf) + ": expected list rank not below 7"};
            return {true, buf};
        }
        snr += stats.fer > 2e-4 ? 0.1 : -0.1;
    }
    return {false, "no SNR in the ladder landed in the FER window [5e-5, 2e-4]"};
}

// ---- criterion 7: union bound, monotonicity, insertion bound ---------------

Outcome criterion7() {
    struct Setup {
        const char* name;
        ParityCheckMatrix code;
        FrameLayout layout;
        double bound_snr;
    };
    const auto code_a = ParityCheckMatrix::from_text("(17,15,13)", 3);
    const auto code_b = ParityCheckMatrix::from_text("(2,5,7,6)", 2);
    const std::vector<Setup> setups = {
        {"zt", code_a, FrameLayout::make(10, 4, code_a, Termination::ZT), 3.0},
        {"tb", code_b, FrameLayout::make(9, 3, code_b, Termination::TB), 3.0},
    };
    std::string detail;
    for (const auto& s : setups) {
        const auto search = search_dso_crc(s.code, s.layout);
        FerConfig cfg;
        cfg.code = s.code;
        cfg.layout = s.layout;
        cfg.crc = search.result.crc;
        cfg.stop = StopRule{400, 3'000'000};
        cfg.seed = 0xACCE97;
        cfg.workers = 1;
        cfg.max_list = 1 << 20;  // effectively unbounded: no exhaustion events

        // (i) at the highest SNR of the sweep, the measured rate of wrong
        // decodes must not exceed the union bound of the exact spectrum
        // beyond Monte-Carlo confidence.
        const auto spectrum = brute_force_spectrum(s.code, s.layout, cfg.crc);
        if (spectrum.d_tilde != 0) return {false, std::string(s.name) + ": spectrum not exact"};
        const auto sweep = run_fer(cfg, {s.bound_snr - 2.0, s.bound_snr - 1.0, s.bound_snr});
        const auto& high = sweep.back();
        const auto ub = union_bound(spectrum, ChannelConfig::from_snr_db(s.bound_snr).amplitude);
        if (high.list_exhausted != 0)
            return {false, std::string(s.name) + ": unexpected list exhaustion"};
        if (high.fer_ci_low > ub.value) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s: fer_ci_low %.3g exceeds union bound %.3g",
                          s.name, high.fer_ci_low, ub.value);
            return {false, buf};
        }

        // (ii) FER is monotone non-increasing in SNR beyond the intervals.
        for (size_t i = 1; i < sweep.size(); ++i)
            if (sweep[i].fer_ci_low > sweep[i - 1].fer_ci_high)
                return {false, std::string(s.name) + ": FER rose with SNR beyond confidence"};

        // (iii) mean insertions against the per-frame structural bound.
        const double extra =
            s.layout.mode == Termination::TB ? std::ldexp(1.0, s.layout.v) - 1.0 : 0.0;
        for (const auto& st : sweep) {
            const double cap = s.layout.payload_bits() * st.avg_list_rank + extra;
            if (st.avg_insertions > cap + 1e-9) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "%s: E[I]=%.3f exceeds (K+m)E[L]%s=%.3f",
                              s.name, st.avg_insertions, extra > 0 ? "+2^v-1" : "", cap);
                return {false, buf};
            }
        }
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s[fer %.3g <= ub %.3g] ", s.name, high.fer, ub.value);
        detail += buf;
    }
    return {true, detail};
}

// ---- criterion 8: structural invariants and noiseless round trips ----------

Outcome criterion8() {
    struct Encoder {
        std::vector<std::string> octal;
        int v;
    };
    const std::vector<Encoder> encoders = {
        {{"33", "25", "37", "31"}, 4},
        {{"47", "73", "57", "75"}, 5},
        {{"107", "135", "133", "141"}, 6},
    };
    long long trips = 0;
    for (const auto& e : encoders) {
        const auto code = ParityCheckMatrix::from_octal(e.octal, e.v);
        const auto dt = DualTrellis::build(code, 1);

        // Branch census: at most two branches everywhere, exactly one at the
        // forced phase.
        for (int j = 0; j < dt.omega; ++j)
            for (int s = 0; s < dt.num_states; ++s) {
                if (!dt.reachable[j][s]) continue;
                const int deg = (dt.transitions[j][s][0] >= 0) + (dt.transitions[j][s][1] >= 0);
                if (deg > 2 || (j == dt.lambda && deg != 1))
                    return {false, code.to_text() + ": branch census violated at phase " +
                                       std::to_string(j)};
            }

        // Termination pattern lengths.
        const int rails = code.omega - 1;
        const int T = (code.v + rails - 1) / rails;
        const auto zt = zt_patterns(dt, code);
        for (int s = 0; s < dt.boundary_states; ++s)
            if (static_cast<int>(zt.inputs[s].size()) != rails * T ||
                static_cast<int>(zt.outputs[s].size()) != code.omega * T)
                return {false, code.to_text() + ": termination pattern length wrong"};

        // Noiseless round trips, both framings.
        const CrcPolynomial crc = parse_hex_crc("0x43", 6);
        std::mt19937_64 rng(0xA11CEu + static_cast<unsigned>(e.v));
        for (Termination mode : {Termination::ZT, Termination::TB}) {
            const int K = mode == Termination::ZT ? 84 : 90;
            const auto layout = FrameLayout::make(K, 6, code, mode);
            const auto frame_dt = DualTrellis::build(code, layout.sections());
            SystematicEncoder enc(code);
            const auto patterns = zt_patterns(frame_dt, code);
            const auto smap = zero_input_state_map(enc, layout.payload_sections);
            SerialListDecoder dec(frame_dt, code, layout, crc);

            for (int rep = 0; rep < 1000; ++rep) {
                BitVec message(static_cast<size_t>(K));
                BitVec codeword;
                for (int attempt = 0;; ++attempt) {
                    for (auto& b : message) b = static_cast<uint8_t>(rng() & 1);
                    const auto payload = crc_encode(message, crc);
                    if (mode == Termination::ZT) {
                        codeword = encode_zt(enc, layout, payload, patterns,
                                             RailPolicy::Stepwise);
                        break;
                    }
                    try {
                        codeword = encode_tb(enc, layout, payload, RailPolicy::Stepwise, &smap)
                                       .codeword;
                        break;
                    } catch (const NoTailBitingStateError&) {
                        if (attempt > 1000)
                            return {false, code.to_text() + ": no tail-biting payload found"};
                    }
                }
                SoftWord rx;
                rx.amplitude = 1.0;
                rx.values.reserve(codeword.size());
                for (uint8_t b : codeword) rx.values.push_back(b ? -1.0 : 1.0);
                const auto res = dec.decode(rx);
                if (res.status != DecodeStatus::Success || !res.message ||
                    *res.message != message || res.list_rank != 1 || res.metric != 0.0)
                    return {false, code.to_text() + "/" + to_string(mode) +
                                       ": noiseless round trip failed at rep " +
                                       std::to_string(rep)};
                if (mode == Termination::TB && res.start_state != res.end_state)
                    return {false, code.to_text() + ": accepted decode does not bite"};
                ++trips;
            }
        }
    }
    return {true, std::to_string(trips) + " noiseless round trips across " +
                      std::to_string(encoders.size()) + " encoders"};
}

}  // namespace

int main(int argc, char** argv) {
    bool skip_slow = false;
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--skip-slow") == 0) skip_slow = true;
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc)
            for (const char* p = argv[i + 1]; *p; ++p)
                if (*p >= '1' && *p <= '8') only.insert(*p - '0');
    }

    struct Entry {
        int id;
        const char* name;
        std::function<Outcome()> run;
        bool slow;
    };
    const std::vector<Entry> entries = {
        {1, "reference CRC column (ZT, v=4, N=128)", criterion1, false},
        {2, "reference CRC column (TB, v=4, N=128)", criterion2, false},
        {3, "exhaustive oracle equivalence (tiny codes)", criterion3, false},
        {4, "frame layout rate table (N=128)", criterion4, false},
        {5, "complexity formula spot values", criterion5, false},
        {6, "expected list rank near FER 1e-4 (v=6 TB)", criterion6, true},
        {7, "union bound, SNR monotonicity, insertion bound", criterion7, false},
        {8, "structural invariants and noiseless round trips", criterion8, false},
    };

    int failures = 0;
    for (const auto& e : entries) {
        if (!only.empty() && !only.count(e.id)) continue;
        if (e.slow && skip_slow) {
            std::printf("criterion %d (%s): SKIPPED (--skip-slow)\n", e.id, e.name);
            std::fflush(stdout);
            continue;
        }
        Outcome out;
        try {
            out = e.run();
        } catch (const std::exception& ex) {
            out = {false, std::string("exception: ") + ex.what()};
        }
        std::printf("criterion %d (%s): %s%s%s\n", e.id, e.name, out.pass ? "PASS" : "FAIL",
                    out.detail.empty() ? "" : " -- ", out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
