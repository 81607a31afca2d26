#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <sstream>
#include <stdexcept>

#include "mbm/signal_set.hpp"
#include "oracles.hpp"

using mbm::Field;
using mbm::GaussInt;
using mbm::GaussVec;
using mbm::MapIndexCodebook;
using mbm::MbmSignalSet;
using mbm::SymbolConstellation;

namespace {

MbmSignalSet coded_set(int n, int k, int m_rf, int M) {
    const Field f(m_rf);
    const MapIndexCodebook code(f, n, k);
    int levels = 0;
    while ((1 << levels) < 2 * n) ++levels;
    return MbmSignalSet::coded(code, SymbolConstellation::build(M, levels));
}

GaussVec bpsk() { return {GaussInt{-1, 0}, GaussInt{1, 0}}; }

} // namespace

TEST_CASE("conventional spectra for one and two mirrors with antipodal symbols") {
    const auto s1 = MbmSignalSet::conventional(1, bpsk());
    CHECK(s1.size() == 4);
    CHECK(s1.n_uses() == 1);
    CHECK(s1.n_maps() == 2);
    CHECK(s1.bits_per_block() == 2);
    const auto spec1 = s1.distance_spectrum();
    CHECK(spec1.histogram == std::map<long long, std::uint64_t>{{2, 4}, {4, 2}});
    CHECK(spec1.min_distance == 2);
    CHECK(spec1.total_pairs == 6);

    const auto s2 = MbmSignalSet::conventional(2, bpsk());
    CHECK(s2.distance_spectrum().histogram ==
          std::map<long long, std::uint64_t>{{2, 24}, {4, 4}});
}

TEST_CASE("dense blocks place symbols at map-index rows") {
    const auto set = coded_set(4, 2, 3, 2);
    CHECK(set.size() == 128);
    CHECK(set.n_uses() == 4);
    CHECK(set.n_maps() == 8);
    CHECK(set.bits_per_block() == 7);

    // all-zero codeword, negative symbol: single non-zero per use at row 0
    const GaussVec x0 = set.dense(0);
    REQUIRE(x0.size() == 32);
    for (std::size_t f = 0; f < x0.size(); ++f) {
        if (f % 8 == 0)
            CHECK(x0[f] == GaussInt{-1, -1});
        else
            CHECK(x0[f] == GaussInt{0, 0});
    }

    // codeword [0,1,6,3] with the positive symbol: label 1*2 + 1
    const GaussVec x3 = set.dense(3);
    std::map<std::size_t, GaussInt> nonzero;
    for (std::size_t f = 0; f < x3.size(); ++f)
        if (x3[f] != GaussInt{0, 0}) nonzero[f] = x3[f];
    const GaussInt p{1, 1};
    CHECK(nonzero ==
          std::map<std::size_t, GaussInt>{{0, p}, {9, p}, {22, p}, {27, p}});
}

TEST_CASE("labels split into message and symbol indices") {
    const Field f(3);
    const MapIndexCodebook code(f, 4, 2);
    const auto symbols = SymbolConstellation::build(2, 3);
    const auto set = MbmSignalSet::coded(code, symbols);
    for (std::uint64_t label = 0; label < set.size(); ++label) {
        const auto& b = set.block(label);
        const auto cw = code.codeword(label / symbols.size());
        CHECK(std::equal(cw.begin(), cw.end(), b.map_indices.begin(), b.map_indices.end()));
        CHECK(b.symbols == symbols.vectors()[label % symbols.size()]);
    }
}

TEST_CASE("sparse pair distances equal the dense brute force") {
    for (const auto& set :
         {coded_set(4, 2, 3, 2), MbmSignalSet::conventional(2, mbm::GaussVec{
                                     {-1, -1}, {-1, 1}, {1, -1}, {1, 1}})}) {
        REQUIRE(set.size() <= 512);
        const mbm::PackedPairSweep packed(set);
        std::vector<GaussVec> dense;
        for (std::uint64_t i = 0; i < set.size(); ++i) dense.push_back(set.dense(i));
        for (std::uint64_t a = 0; a < set.size(); ++a)
            for (std::uint64_t b = a + 1; b < set.size(); ++b)
                REQUIRE(packed.pair_sq_dist(a, b) ==
                        oracle::dense_sq_dist(dense[a], dense[b]));
    }
}

TEST_CASE("reference spectrum with four mirrors") {
    const auto set = coded_set(4, 2, 4, 2);
    CHECK(set.size() == 512);
    CHECK(set.rate() == doctest::Approx(2.25));
    const auto spec = set.distance_spectrum();
    CHECK(spec.histogram == std::map<long long, std::uint64_t>{
                                {12, 15360}, {16, 99840}, {20, 15360}, {32, 256}});
    CHECK(spec.min_distance == 12);
    CHECK(spec.total_pairs == 130816);
}

TEST_CASE("rates follow bits per block over block length") {
    CHECK(coded_set(4, 2, 4, 2).rate() == doctest::Approx(2.25));
    CHECK(coded_set(4, 2, 6, 2).rate() == doctest::Approx(3.25));
    CHECK(coded_set(4, 2, 4, 4).rate() == doctest::Approx(3.25));
    CHECK(MbmSignalSet::conventional(1, bpsk()).rate() == doctest::Approx(2.0));
    CHECK(MbmSignalSet::conventional(2, bpsk()).rate() == doctest::Approx(3.0));
}

TEST_CASE("mean energy per channel use") {
    CHECK(coded_set(4, 2, 4, 2).mean_energy_per_use() == doctest::Approx(2.0));
    CHECK(MbmSignalSet::conventional(1, bpsk()).mean_energy_per_use() ==
          doctest::Approx(1.0));
    const mbm::GaussVec qam4{{-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
    CHECK(MbmSignalSet::conventional(3, qam4).mean_energy_per_use() ==
          doctest::Approx(2.0));
}

TEST_CASE("pair unranking inverts the row-major pair layout") {
    for (std::uint64_t n : {2ull, 3ull, 7ull, 100ull}) {
        std::uint64_t p = 0;
        for (std::uint64_t i = 0; i + 1 < n; ++i)
            for (std::uint64_t j = i + 1; j < n; ++j, ++p) {
                std::uint64_t gi, gj;
                mbm::unrank_pair(p, n, gi, gj);
                REQUIRE(gi == i);
                REQUIRE(gj == j);
            }
    }
}

TEST_CASE("spectrum sweep refuses sets above the cap") {
    const auto set = coded_set(4, 2, 3, 2);
    CHECK_THROWS_AS(set.distance_spectrum(0, 64), std::length_error);
    CHECK(set.distance_spectrum(0, 128).total_pairs == 8128);
}

TEST_CASE("spectrum is identical for any worker count") {
    const auto set = coded_set(4, 2, 3, 2);
    const auto one = set.distance_spectrum(1);
    const auto four = set.distance_spectrum(4);
    CHECK(one.histogram == four.histogram);
}

TEST_CASE("dump lists label, activation indices, and symbols") {
    const auto set = coded_set(4, 2, 3, 2);
    std::istringstream in(set.dump());
    std::string line;
    std::getline(in, line);
    CHECK(line == "00 | 0 0 0 0 | -1:-1 -1:-1 -1:-1 -1:-1");
    std::getline(in, line);
    CHECK(line == "01 | 0 0 0 0 | 1:1 1:1 1:1 1:1");
    std::getline(in, line);
    std::getline(in, line);
    CHECK(line == "03 | 0 1 6 3 | 1:1 1:1 1:1 1:1");
    int count = 2 + 2;
    while (std::getline(in, line))
        if (!line.empty()) ++count;
    CHECK(count == 128);
}

TEST_CASE("construction validation") {
    CHECK_THROWS_AS(MbmSignalSet::conventional(9, bpsk()), std::invalid_argument);
    CHECK_THROWS_AS(MbmSignalSet::conventional(2, GaussVec{{1, 0}, {0, 1}, {-1, 0}}),
                    std::invalid_argument);
    const Field f(3);
    const MapIndexCodebook code(f, 4, 2);
    CHECK_THROWS_AS(MbmSignalSet::coded(code, SymbolConstellation::build(2, 2)),
                    std::invalid_argument);
}
