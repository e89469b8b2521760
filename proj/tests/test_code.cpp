#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <random>

#include "hrcc/code.hpp"

using namespace hrcc;

TEST_CASE("parity check matrix parsing") {
    auto c = ParityCheckMatrix::from_text("(17,15,13)", 3);
    REQUIRE(c.omega == 3);
    REQUIRE(c.v == 3);
    REQUIRE(c.h[0].coeffs == 0b1011u);  // 13
    REQUIRE(c.h[1].coeffs == 0b1101u);  // 15
    REQUIRE(c.h[2].coeffs == 0b1111u);  // 17
    REQUIRE(c.lambda == 2);
    REQUIRE(c.parity_phase == 0);
    REQUIRE(c.to_text() == "(17,15,13)");

    auto f = ParityCheckMatrix::from_text("(2,5,7,6)", 2);
    REQUIRE(f.omega == 4);
    REQUIRE(max_instant_response(f) == 2);  // h0 bits by stream: (0,1,1,0)
    REQUIRE(f.parity_phase == 1);

    auto big = ParityCheckMatrix::from_text("(107,135,133,141)", 6);
    REQUIRE(big.omega == 4);
    REQUIRE(big.lambda == 3);
    REQUIRE(big.parity_phase == 0);

    SECTION("lambda with a single instant stream") {
        auto one = ParityCheckMatrix::from_text("(6,4,7)", 2);  // h0 bits (0,0,1)
        REQUIRE(one.lambda == 0);
        REQUIRE(one.parity_phase == 0);
    }

    SECTION("validation") {
        // no stream of degree exactly v
        REQUIRE_THROWS_AS(ParityCheckMatrix::from_text("(3,2,1)", 2), std::invalid_argument);
        // no instant response anywhere
        REQUIRE_THROWS_AS(ParityCheckMatrix::from_text("(6,4,2)", 2), std::invalid_argument);
        // stream value too wide for v
        REQUIRE_THROWS_AS(ParityCheckMatrix::from_text("(17,15,13)", 2), std::invalid_argument);
        // zero stream polynomial: its bits would never enter the check equation
        REQUIRE_THROWS_AS(ParityCheckMatrix::from_text("(7,0,1)", 2), std::invalid_argument);
        REQUIRE_THROWS_AS(ParityCheckMatrix::from_text("()", 3), std::invalid_argument);
    }
}

namespace {
std::string rate3(double r) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.3f", r);
    return buf;
}
}  // namespace

TEST_CASE("frame layouts reproduce the reference blocklengths and rates") {
    struct Row {
        int K, m;
        const char* rate;
    };
    const Row zt_rows[] = {{87, 3, "0.680"}, {86, 4, "0.672"}, {85, 5, "0.664"},
                           {84, 6, "0.656"}, {83, 7, "0.648"}, {82, 8, "0.641"},
                           {81, 9, "0.633"}, {80, 10, "0.625"}};
    const Row tb_rows[] = {{93, 3, "0.727"}, {92, 4, "0.719"}, {91, 5, "0.711"},
                           {90, 6, "0.703"}, {89, 7, "0.695"}, {88, 8, "0.688"},
                           {87, 9, "0.680"}, {86, 10, "0.672"}};

    const char* encoders[] = {"(33,25,37,31)", "(47,73,57,75)", "(107,135,133,141)"};
    const int vs[] = {4, 5, 6};

    for (int e = 0; e < 3; ++e) {
        auto code = ParityCheckMatrix::from_text(encoders[e], vs[e]);
        for (const Row& r : zt_rows) {
            auto f = FrameLayout::make(r.K, r.m, code, Termination::ZT);
            REQUIRE(f.N == 128);
            REQUIRE(rate3(f.rate()) == r.rate);
            REQUIRE(f.term_sections == 2);  // ceil(v/3) for v in 4..6
        }
        for (const Row& r : tb_rows) {
            auto f = FrameLayout::make(r.K, r.m, code, Termination::TB);
            REQUIRE(f.N == 128);
            REQUIRE(rate3(f.rate()) == r.rate);
            REQUIRE(f.term_sections == 0);
        }
    }

    SECTION("divisibility precondition") {
        auto code = ParityCheckMatrix::from_text("(33,25,37,31)", 4);
        REQUIRE_THROWS_AS(FrameLayout::make(87, 4, code, Termination::ZT),
                          std::invalid_argument);  // 91 % 3 != 0
        REQUIRE_THROWS_AS(FrameLayout::make(0, 3, code, Termination::ZT), std::invalid_argument);
    }

    SECTION("small layout arithmetic") {
        auto tiny = ParityCheckMatrix::from_text("(2,5,7,6)", 2);
        auto f = FrameLayout::make(6, 3, tiny, Termination::ZT);
        REQUIRE(f.payload_sections == 3);
        REQUIRE(f.term_sections == 1);
        REQUIRE(f.N == 16);
        auto t = FrameLayout::make(9, 3, tiny, Termination::TB);
        REQUIRE(t.N == 16);
    }
}

TEST_CASE("rail mapping") {
    BitVec payload = bits_from_string("101101");

    SECTION("stepwise tuples") {
        auto steps = map_rails(payload, 4, RailPolicy::Stepwise);
        REQUIRE(steps.size() == 2);
        REQUIRE(steps[0] == bits_from_string("101"));
        REQUIRE(steps[1] == bits_from_string("101"));
    }

    SECTION("blockwise tuples") {
        // rails get contiguous blocks 10 / 11 / 01
        auto steps = map_rails(payload, 4, RailPolicy::Blockwise);
        REQUIRE(steps.size() == 2);
        REQUIRE(steps[0] == bits_from_string("110"));
        REQUIRE(steps[1] == bits_from_string("011"));
    }

    SECTION("round trips") {
        std::mt19937_64 rng(23);
        for (RailPolicy policy : {RailPolicy::Stepwise, RailPolicy::Blockwise}) {
            for (int t = 0; t < 50; ++t) {
                int omega = 3 + static_cast<int>(rng() % 3);
                int steps = 1 + static_cast<int>(rng() % 8);
                BitVec p((omega - 1) * steps);
                for (auto& b : p) b = static_cast<uint8_t>(rng() & 1);
                auto smaj = payload_to_section_major(p, omega, policy);
                REQUIRE(section_major_to_payload(smaj, omega, policy) == p);
                auto tuples = map_rails(p, omega, policy);
                for (int k = 0; k < steps; ++k)
                    for (int r = 0; r < omega - 1; ++r)
                        REQUIRE(tuples[k][r] == smaj[k * (omega - 1) + r]);
            }
        }
    }

    SECTION("length validation") {
        REQUIRE_THROWS_AS(map_rails(bits_from_string("1011"), 4, RailPolicy::Stepwise),
                          std::invalid_argument);
    }
}
