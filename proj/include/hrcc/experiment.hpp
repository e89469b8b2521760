#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hrcc/complexity.hpp"
#include "hrcc/crc_search.hpp"
#include "hrcc/sim.hpp"
#include "hrcc/slvd.hpp"

namespace hrcc {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit-code contract shared by every subcommand.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitDomainError = 1;  // valid request, unsatisfiable (e.g. threshold)
inline constexpr int kExitUsageError = 2;   // malformed request

// One fully resolved experiment: code, frame, CRC or search request, channel
// grid, stopping rule, and output target.
struct ExperimentConfig {
    std::vector<std::string> code_octal;  // highest-degree polynomial first
    int v = 0;
    int K = 0;
    std::vector<int> m_list;  // several degrees = table-style scan at fixed K+m
    Termination mode = Termination::ZT;
    RailPolicy policy = RailPolicy::Stepwise;
    std::string crc_hex;  // empty = run the search
    int d_tilde = 0;      // 0 = free-distance-based start threshold
    int d_tilde_cap = 64;
    std::vector<double> snrs_db;
    StopRule stop;
    uint64_t seed = 0;
    bool seed_set = false;
    int workers = 1;
    int max_list = 0;  // 0 = decoder default
    double EL = 1.0;
    double c1 = 1.0, c2 = 1.0;
    std::string out_path;  // empty = stdout
};

// ---- parsing helpers shared by the CLI and tests ---------------------------

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline Termination parse_mode(const std::string& text) {
    if (text == "zt" || text == "ZT") return Termination::ZT;
    if (text == "tb" || text == "TB") return Termination::TB;
    throw std::invalid_argument("mode must be zt or tb, got '" + text + "'");
}

inline RailPolicy parse_policy(const std::string& text) {
    if (text == "stepwise") return RailPolicy::Stepwise;
    if (text == "blockwise") return RailPolicy::Blockwise;
    throw std::invalid_argument("rail policy must be stepwise or blockwise, got '" + text + "'");
}

// "6" -> {6}; "3-6" -> {3,4,5,6}; "3,5,9" -> {3,5,9}.
inline std::vector<int> parse_m_list(const std::string& text) {
    std::vector<int> out;
    for (const std::string& part : split(text, ',')) {
        const auto dash = part.find('-');
        if (dash != std::string::npos) {
            const int lo = std::stoi(part.substr(0, dash));
            const int hi = std::stoi(part.substr(dash + 1));
            if (lo < 1 || hi < lo) throw std::invalid_argument("bad m range '" + part + "'");
            for (int m = lo; m <= hi; ++m) out.push_back(m);
        } else {
            out.push_back(std::stoi(part));
        }
    }
    if (out.empty()) throw std::invalid_argument("empty m list");
    return out;
}

// "1,1.5,2" -> grid; "0:0.5:2" -> start:step:stop inclusive.
inline std::vector<double> parse_snr_list(const std::string& text) {
    std::vector<double> out;
    if (std::count(text.begin(), text.end(), ':') == 2) {
        const auto parts = split(text, ':');
        const double start = std::stod(parts[0]);
        const double step = std::stod(parts[1]);
        const double stop = std::stod(parts[2]);
        if (step <= 0) throw std::invalid_argument("snr step must be positive");
        for (double s = start; s <= stop + 1e-9; s += step) out.push_back(s);
    } else {
        for (const std::string& part : split(text, ',')) out.push_back(std::stod(part));
    }
    if (out.empty()) throw std::invalid_argument("empty snr list");
    return out;
}

// "(33,25,37,31)" or "33,25,37,31" -> octal strings, highest degree first.
inline std::vector<std::string> parse_code_list(const std::string& text) {
    std::string body = text;
    if (!body.empty() && body.front() == '(') {
        if (body.back() != ')') throw std::invalid_argument("unbalanced parentheses in code");
        body = body.substr(1, body.size() - 2);
    }
    auto parts = split(body, ',');
    for (auto& p : parts)
        if (p.empty()) throw std::invalid_argument("empty polynomial in code list");
    return parts;
}

namespace detail {

inline std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out.push_back(sep);
        out += parts[i];
    }
    return out;
}

inline std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// Every artifact records the resolved configuration and the tool version.
inline std::vector<std::string> echo_lines(const ExperimentConfig& cfg, const char* command) {
    std::vector<std::string> lines;
    lines.push_back(std::string("tool=hrcc ") + kToolVersion);
    lines.push_back(std::string("command=") + command);
    lines.push_back("code=(" + join(cfg.code_octal, ',') + ") v=" + std::to_string(cfg.v));
    std::string ms;
    for (size_t i = 0; i < cfg.m_list.size(); ++i)
        ms += (i ? "," : "") + std::to_string(cfg.m_list[i]);
    lines.push_back("k=" + std::to_string(cfg.K) + " m=" + ms + " mode=" + to_string(cfg.mode) +
                    " rails=" + to_string(cfg.policy));
    if (!cfg.crc_hex.empty()) lines.push_back("crc=" + cfg.crc_hex);
    if (!cfg.snrs_db.empty()) {
        std::string snrs;
        for (size_t i = 0; i < cfg.snrs_db.size(); ++i)
            snrs += (i ? "," : "") + fmt_double(cfg.snrs_db[i]);
        lines.push_back("snr_db=" + snrs);
        lines.push_back("stop=min(" + std::to_string(cfg.stop.target_errors) + " errors," +
                        std::to_string(cfg.stop.max_frames) + " frames)");
        lines.push_back("seed=" + std::to_string(cfg.seed) +
                        " workers=" + std::to_string(cfg.workers) +
                        " max_list=" + std::to_string(cfg.max_list));
    }
    return lines;
}

// Output sink: --out writes a file, otherwise everything goes to `fallback`.
class OutputTarget {
public:
    OutputTarget(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::invalid_argument("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

private:
    std::ofstream file_;
    std::ostream& fallback_;
};

inline ParityCheckMatrix code_from(const ExperimentConfig& cfg) {
    if (cfg.code_octal.empty()) throw std::invalid_argument("no code polynomials given");
    return ParityCheckMatrix::from_octal(cfg.code_octal, cfg.v);
}

// Table-style scans hold the frame length fixed: growing the CRC shrinks the
// message so that K+m stays at its value for the first requested degree.
inline int k_for_degree(const ExperimentConfig& cfg, int m) {
    return cfg.K + cfg.m_list.front() - m;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& body) {
    try {
        return body();
    } catch (const InsufficientThresholdError& e) {
        err << "error: " << e.what()
            << " (raise --d-tilde or --d-tilde-cap to search deeper)\n";
        return kExitDomainError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomainError;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsageError;
    }
}

}  // namespace detail

// search-crc: one record per CRC degree, most-significant result fields first.
inline int cmd_search(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&]() {
        const auto code = detail::code_from(cfg);
        if (cfg.m_list.empty()) throw std::invalid_argument("search-crc needs --m");
        detail::OutputTarget target(cfg.out_path, out);
        std::ostream& os = target.stream();
        for (const auto& line : detail::echo_lines(cfg, "search-crc")) os << "# " << line << "\n";
        for (int m : cfg.m_list) {
            const int K = detail::k_for_degree(cfg, m);
            auto layout = FrameLayout::make(K, m, code, cfg.mode);
            auto res = search_dso_crc(code, layout, cfg.policy, cfg.d_tilde, cfg.d_tilde_cap);
            os << "m=" << m << " k=" << K << " n_bits=" << layout.N
               << " rate=" << detail::fmt_double(layout.rate())
               << " crc=" << format_hex_crc(res.result.crc) << " d_min=" << res.result.d_min
               << " d_free=" << res.d_free << " d_tilde=" << res.result.d_tilde
               << " tie_broken=" << (res.result.tie_broken ? 1 : 0);
            if (res.result.tie_broken) {
                os << " tied=";
                for (size_t i = 0; i < res.result.tied.size(); ++i)
                    os << (i ? "," : "") << format_hex_crc(res.result.tied[i]);
            }
            os << " spectrum=";
            bool first = true;
            for (auto [d, c] : res.result.spectrum.counts) {
                os << (first ? "" : ";") << d << ":" << c;
                first = false;
            }
            os << "\n";
        }
        return kExitSuccess;
    });
}

// simulate: CSV rows per SNR point plus a summary line.
inline int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&]() {
        const auto code = detail::code_from(cfg);
        if (cfg.m_list.size() != 1)
            throw std::invalid_argument("simulate needs exactly one CRC degree");
        if (cfg.crc_hex.empty())
            throw std::invalid_argument("simulate needs --crc (run search-crc first)");
        if (cfg.snrs_db.empty()) throw std::invalid_argument("simulate needs --snr");

        FerConfig fer;
        fer.code = code;
        fer.layout = FrameLayout::make(cfg.K, cfg.m_list.front(), code, cfg.mode);
        fer.crc = parse_hex_crc(cfg.crc_hex, cfg.m_list.front());
        fer.policy = cfg.policy;
        fer.max_list = cfg.max_list;
        fer.stop = cfg.stop;
        fer.seed = cfg.seed;
        fer.workers = cfg.workers;

        const auto start = std::chrono::steady_clock::now();
        auto stats = run_fer(fer, cfg.snrs_db);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        detail::OutputTarget target(cfg.out_path, out);
        write_fer_csv(target.stream(), stats, detail::echo_lines(cfg, "simulate"));
        long long frames = 0;
        for (const auto& s : stats) frames += s.frames;
        out << "summary: snr_points=" << stats.size() << " frames=" << frames
            << " wall_s=" << detail::fmt_double(wall) << "\n";
        return kExitSuccess;
    });
}

// complexity: closed-form operation counts per configuration row.
inline int cmd_complexity(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&]() {
        if (cfg.v < 1) throw std::invalid_argument("complexity needs --v");
        if (cfg.m_list.empty()) throw std::invalid_argument("complexity needs --m");
        detail::OutputTarget target(cfg.out_path, out);
        std::ostream& os = target.stream();
        for (const auto& line : detail::echo_lines(cfg, "complexity")) os << "# " << line << "\n";
        os << "# c1=" << detail::fmt_double(cfg.c1) << " c2=" << detail::fmt_double(cfg.c2)
           << " EL=" << detail::fmt_double(cfg.EL) << "\n";
        for (int m : cfg.m_list) {
            const int K = detail::k_for_degree(cfg, m);
            auto r = complexity_estimate(K, m, cfg.v, cfg.EL, cfg.mode, cfg.c1, cfg.c2);
            os << "k=" << K << " m=" << m << " v=" << cfg.v << " mode=" << to_string(cfg.mode)
               << " EI=" << detail::fmt_double(r.EI) << " C_ssv=" << detail::fmt_double(r.c_ssv)
               << " C_trace=" << detail::fmt_double(r.c_trace)
               << " C_list=" << detail::fmt_double(r.c_list)
               << " C_slvd=" << detail::fmt_double(r.c_slvd) << "\n";
        }
        return kExitSuccess;
    });
}

// inspect: structural dump of the code, trellis census, termination patterns,
// and frame layout.
inline int cmd_inspect(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&]() {
        const auto code = detail::code_from(cfg);
        detail::OutputTarget target(cfg.out_path, out);
        std::ostream& os = target.stream();
        for (const auto& line : detail::echo_lines(cfg, "inspect")) os << "# " << line << "\n";
        os << "code=" << code.to_text() << " omega=" << code.omega << " v=" << code.v
           << " lambda=" << code.lambda << " parity_phase=" << code.parity_phase << "\n";

        const auto dt = DualTrellis::build(code, 1);
        os << "states=" << dt.num_states << " boundary_states=" << dt.boundary_states << "\n";
        for (int j = 0; j < dt.omega; ++j) {
            int reachable = 0, edges = 0, forced = 0;
            for (int s = 0; s < dt.num_states; ++s) {
                if (!dt.reachable[j][s]) continue;
                ++reachable;
                const int deg = (dt.transitions[j][s][0] >= 0) + (dt.transitions[j][s][1] >= 0);
                edges += deg;
                forced += deg == 1;
            }
            os << "phase=" << j << " reachable=" << reachable << " edges=" << edges
               << " forced=" << forced << (j == dt.lambda ? "  (forced phase)" : "") << "\n";
        }

        const auto zt = zt_patterns(dt, code);
        os << "zt_sections=" << zt.sections << "\n";
        for (int s = 0; s < dt.boundary_states; ++s)
            os << "zt_state=" << s << " inputs=" << to_string(zt.inputs[s])
               << " outputs=" << to_string(zt.outputs[s]) << "\n";

        if (cfg.K > 0 && !cfg.m_list.empty()) {
            auto layout = FrameLayout::make(cfg.K, cfg.m_list.front(), code, cfg.mode);
            os << "layout k=" << layout.K << " m=" << layout.m
               << " mode=" << to_string(layout.mode)
               << " payload_sections=" << layout.payload_sections
               << " term_sections=" << layout.term_sections << " n_bits=" << layout.N
               << " rate=" << detail::fmt_double(layout.rate()) << "\n";
        }
        return kExitSuccess;
    });
}

}  // namespace hrcc
