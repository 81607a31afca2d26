#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <stdexcept>
#include <vector>

#include "mbm/map_code.hpp"
#include "oracles.hpp"

using mbm::Field;
using mbm::MapIndexCodebook;
using mbm::MirrorState;

namespace {

std::vector<std::uint8_t> word(std::span<const std::uint8_t> s) {
    return {s.begin(), s.end()};
}

int hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

} // namespace

TEST_CASE("reference codebook over GF(8)") {
    const Field f(3);
    const MapIndexCodebook code(f, 4, 2);
    CHECK(code.size() == 64);
    CHECK(code.design_distance() == 3);

    using W = std::vector<std::uint8_t>;
    CHECK(word(code.codeword(0)) == W{0, 0, 0, 0});
    CHECK(word(code.codeword(1)) == W{0, 1, 6, 3});
    CHECK(word(code.codeword(2)) == W{0, 2, 7, 6});
    CHECK(word(code.codeword(3)) == W{0, 3, 1, 5});
    CHECK(word(code.codeword(4)) == W{0, 4, 5, 7});
    CHECK(word(code.codeword(63)) == W{7, 7, 3, 5});

    // message index digits are base-8, most significant first
    const std::array<std::uint8_t, 2> msg{6, 2};
    CHECK(word(code.codeword(6 * 8 + 2)) == code.encode(msg));
}

TEST_CASE("encoding is systematic and linear") {
    const Field f(3);
    const MapIndexCodebook code(f, 4, 2);
    for (std::uint64_t i = 0; i < code.size(); ++i) {
        const auto cw = code.codeword(i);
        CHECK(cw[0] == std::uint8_t(i / 8));
        CHECK(cw[1] == std::uint8_t(i % 8));
        CHECK(code.contains(cw));
    }
    // sum of any two codewords is a codeword
    for (std::uint64_t a = 0; a < code.size(); ++a)
        for (std::uint64_t b = a + 1; b < code.size(); ++b) {
            const auto ca = code.codeword(a), cb = code.codeword(b);
            std::vector<std::uint8_t> sum(4);
            for (int t = 0; t < 4; ++t) sum[t] = ca[t] ^ cb[t];
            CHECK(code.contains(sum));
        }
}

TEST_CASE("every pairwise distance meets the design distance") {
    const Field f(3);
    const MapIndexCodebook code(f, 4, 2);
    int min_d = 4;
    for (std::uint64_t a = 0; a < code.size(); ++a)
        for (std::uint64_t b = a + 1; b < code.size(); ++b)
            min_d = std::min(min_d, hamming(code.codeword(a), code.codeword(b)));
    CHECK(min_d == code.design_distance());
}

TEST_CASE("Hamming spectra match the MDS closed form") {
    struct Case {
        int m, n, k;
        std::map<int, std::uint64_t> expect;
    };
    const std::vector<Case> cases{
        {4, 4, 2, {{3, 7680}, {4, 24960}}},
        {6, 4, 2, {{3, 516096}, {4, 7870464}}},
    };
    for (const auto& c : cases) {
        const Field f(c.m);
        const MapIndexCodebook code(f, c.n, c.k);
        const auto spec = code.hamming_spectrum();
        CHECK(spec.histogram == c.expect);
        CHECK(spec.min_distance == c.n - c.k + 1);
        CHECK(spec.total_pairs == code.size() * (code.size() - 1) / 2);
        // cross-check each count against the weight distribution of the
        // linear code: pairs at distance w = size * A_w / 2
        for (const auto& [w, count] : spec.histogram)
            CHECK(count ==
                  code.size() * oracle::mds_weight_count(c.n, c.k, f.order(), w) / 2);
    }
}

TEST_CASE("spectrum does not depend on the field polynomial") {
    const MapIndexCodebook a(Field(4), 4, 2);
    const MapIndexCodebook b(Field(4, 0x19), 4, 2);
    CHECK(a.hamming_spectrum().histogram == b.hamming_spectrum().histogram);
}

TEST_CASE("degenerate dimensions") {
    const Field f(3);
    const MapIndexCodebook rep(f, 4, 1);
    CHECK(rep.size() == 8);
    CHECK(rep.design_distance() == 4);
    const auto rep_spec = rep.hamming_spectrum();
    CHECK(rep_spec.histogram == std::map<int, std::uint64_t>{{4, 28}});

    const MapIndexCodebook high(f, 4, 3);
    CHECK(high.size() == 512);
    CHECK(high.design_distance() == 2);
    CHECK(high.hamming_spectrum().min_distance == 2);

    const MapIndexCodebook full(f, 7, 2);  // unshortened parent length
    CHECK(full.design_distance() == 6);
    CHECK(full.hamming_spectrum().min_distance == 6);
}

TEST_CASE("mirror states decode index bits") {
    using S = std::vector<MirrorState>;
    CHECK(mbm::mirror_states(0, 4) ==
          S{MirrorState::On, MirrorState::On, MirrorState::On, MirrorState::On});
    CHECK(mbm::mirror_states(0b1010, 4) ==
          S{MirrorState::Off, MirrorState::On, MirrorState::Off, MirrorState::On});
    CHECK(mbm::mirror_states(15, 4) ==
          S{MirrorState::Off, MirrorState::Off, MirrorState::Off, MirrorState::Off});
    CHECK(mbm::mirror_states(1, 1) == S{MirrorState::Off});
    CHECK_THROWS_AS(mbm::mirror_states(16, 4), std::out_of_range);
    CHECK_THROWS_AS(mbm::mirror_states(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(mbm::mirror_states(0, 9), std::invalid_argument);
}

TEST_CASE("parameter validation") {
    const Field f(3);
    CHECK_THROWS_AS(MapIndexCodebook(f, 8, 2), std::invalid_argument);
    CHECK_THROWS_AS(MapIndexCodebook(f, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(MapIndexCodebook(f, 4, 0), std::invalid_argument);
    CHECK_THROWS_AS(MapIndexCodebook(f, 4, 4), std::invalid_argument);
    const MapIndexCodebook code(f, 4, 2);
    const std::array<std::uint8_t, 3> bad{0, 0, 0};
    CHECK_THROWS_AS(code.encode(bad), std::invalid_argument);
    CHECK_THROWS_AS(code.codeword(64), std::out_of_range);
}
