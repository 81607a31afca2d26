#include "mbm/channel.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mbm/parallel.hpp"

namespace mbm {

namespace {

using cd = std::complex<double>;

std::uint64_t point_key(double snr_db) {
    return static_cast<std::uint64_t>(static_cast<std::int64_t>(std::llround(snr_db * 1000.0)));
}

} // namespace

void draw_channel(GaussianStream& g, cd* h, int n_r, int n_maps) {
    for (int r = 0; r < n_r; ++r)
        for (int k = 0; k < n_maps; ++k) h[r * n_maps + k] = g.next_cn();
}

MlDetector::MlDetector(const MbmSignalSet& set)
    : packed_(set), size_(set.size()), n_maps_(set.n_maps()) {}

std::uint64_t MlDetector::detect(const cd* y, const cd* h, int n_r, double scale,
                                 std::vector<double>& scratch) const {
    const int nu = packed_.n_uses;
    const int nm = n_maps_;
    const int nv = packed_.n_values;
    scratch.resize(std::size_t(nu) * nm * nv);
    double* table = scratch.data();
    cd sv[256];
    for (int v = 0; v < nv; ++v) sv[v] = scale * packed_.values[v].to_complex();

    for (int i = 0; i < nu; ++i)
        for (int k = 0; k < nm; ++k) {
            double* cell = table + (std::size_t(i) * nm + k) * nv;
            for (int v = 0; v < nv; ++v) {
                double acc = 0.0;
                for (int r = 0; r < n_r; ++r)
                    acc += std::norm(y[i * n_r + r] - sv[v] * h[r * nm + k]);
                cell[v] = acc;
            }
        }

    const std::uint8_t* idx = packed_.idx.data();
    const std::uint8_t* val = packed_.val.data();
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t best_label = 0;
    for (std::uint64_t l = 0; l < size_; ++l) {
        const std::uint8_t* ia = idx + l * nu;
        const std::uint8_t* va = val + l * nu;
        double s = 0.0;
        for (int i = 0; i < nu; ++i) s += table[(std::size_t(i) * nm + ia[i]) * nv + va[i]];
        if (s < best) {
            best = s;
            best_label = l;
        }
    }
    return best_label;
}

BerPoint simulate_point(const MbmSignalSet& set, double snr_db, const SimConfig& cfg) {
    if (cfg.n_r < 1) throw std::invalid_argument("need at least one receive antenna");
    if (set.size() < 2) throw std::invalid_argument("signal set has nothing to detect");
    if (cfg.stop.min_bit_errors < 1 || cfg.stop.max_blocks < 1 || cfg.stop.blocks_per_round < 1)
        throw std::invalid_argument("bad stopping rule");

    const MlDetector det(set);
    const PackedPairSweep packed(set);
    const double scale =
        cfg.normalize_energy ? 1.0 / std::sqrt(set.mean_energy_per_use()) : 1.0;
    const double rho = std::pow(10.0, snr_db / 10.0);
    const double sigma = std::sqrt(1.0 / rho);
    const std::uint64_t key = point_key(snr_db);
    const std::uint64_t mask = set.size() - 1;
    const int nu = set.n_uses();
    const int nm = set.n_maps();
    const int n_r = cfg.n_r;
    const unsigned nw = resolve_workers(cfg.workers);

    std::uint64_t done = 0, errors = 0;
    while (done < cfg.stop.max_blocks && errors < cfg.stop.min_bit_errors) {
        const std::uint64_t round =
            std::min<std::uint64_t>(cfg.stop.blocks_per_round, cfg.stop.max_blocks - done);
        std::vector<std::uint64_t> werr(nw, 0);

        parallel_ranges(round, nw, [&](unsigned w, std::uint64_t b0, std::uint64_t b1) {
            std::vector<double> scratch;
            std::vector<cd> h(std::size_t(n_r) * nm), y(std::size_t(nu) * n_r);
            std::uint64_t e = 0;
            for (std::uint64_t b = b0; b < b1; ++b) {
                CounterRng rng = CounterRng::stream(cfg.seed, key, done + b,
                                                   std::uint64_t(cfg.n_r));
                const std::uint64_t label = rng.next_u64() & mask;
                GaussianStream g(rng);
                draw_channel(g, h.data(), n_r, nm);
                const std::uint8_t* ia = packed.idx.data() + label * nu;
                const std::uint8_t* va = packed.val.data() + label * nu;
                for (int i = 0; i < nu; ++i) {
                    const cd tx = scale * packed.values[va[i]].to_complex();
                    for (int r = 0; r < n_r; ++r)
                        y[i * n_r + r] = tx * h[r * nm + ia[i]] + sigma * g.next_cn();
                }
                const std::uint64_t dec = det.detect(y.data(), h.data(), n_r, scale, scratch);
                e += std::popcount(label ^ dec);
            }
            werr[w] = e;
        });

        for (unsigned w = 0; w < nw; ++w) errors += werr[w];
        done += round;
    }

    BerPoint out;
    out.snr_db = snr_db;
    out.bit_errors = errors;
    out.blocks = done;
    out.bits = done * std::uint64_t(set.bits_per_block());
    out.ber = out.bits ? double(errors) / double(out.bits) : 0.0;
    out.n_r = n_r;
    return out;
}

std::vector<BerPoint> ber_curve(const MbmSignalSet& set, const std::vector<double>& snr_db_grid,
                                const SimConfig& cfg) {
    std::vector<BerPoint> out;
    out.reserve(snr_db_grid.size());
    for (double snr : snr_db_grid) out.push_back(simulate_point(set, snr, cfg));
    return out;
}

std::vector<BerPoint> ber_vs_nr(const MbmSignalSet& set, double snr_db,
                                const std::vector<int>& n_r_list, const SimConfig& cfg) {
    std::vector<BerPoint> out;
    out.reserve(n_r_list.size());
    for (int n_r : n_r_list) {
        SimConfig c = cfg;
        c.n_r = n_r;
        out.push_back(simulate_point(set, snr_db, c));
    }
    return out;
}

double ebn0_from_snr(double snr_db, double rate) {
    if (rate <= 0.0) throw std::invalid_argument("rate must be positive");
    return snr_db - 10.0 * std::log10(rate);
}

} // namespace mbm
