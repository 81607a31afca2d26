// Acceptance checks for the mbmsim library: one [PASS]/[FAIL] line per
// criterion, exit 0 only when every criterion passes. Monte-Carlo criteria
// use fixed seeds, so reruns are bit-identical.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mbm/experiment.hpp"
#include "oracles.hpp"

using namespace mbm;

namespace {

struct Result {
    bool ok = true;
    std::string detail;
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

struct Harness {
    int failed = 0;

    void run(int num, const std::string& name, const std::function<Result()>& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        Result r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r.ok = false;
            r.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %2d: %s — %s (%.1f s)\n", r.ok ? "PASS" : "FAIL", num,
                    name.c_str(), r.detail.c_str(), secs);
        std::fflush(stdout);
        if (!r.ok) ++failed;
    }
};

MbmSignalSet make_coded(int n, int k, int m_rf, int M) {
    const Field f(m_rf);
    const MapIndexCodebook code(f, n, k);
    int levels = 0;
    while ((1 << levels) < 2 * n) ++levels;
    return MbmSignalSet::coded(code, SymbolConstellation::build(M, levels));
}

bool spectrum_matches(const DistanceSpectrum& s,
                      const std::map<long long, std::uint64_t>& expect,
                      std::uint64_t total, std::string& why) {
    if (s.total_pairs != total) {
        why = fmt("total_pairs %llu, expected %llu", (unsigned long long)s.total_pairs,
                  (unsigned long long)total);
        return false;
    }
    if (s.histogram != expect) {
        why = "histogram mismatch:";
        for (const auto& [d, c] : s.histogram)
            why += fmt(" %lld:%llu", d, (unsigned long long)c);
        return false;
    }
    return true;
}

std::vector<double> grid_from(double start, double step, int count) {
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = start + step * i;
    return g;
}

// SNR where a strictly decreasing bound curve crosses `target`, log-linear.
std::optional<double> snr_at_bound(const BoundCurve& c, double target) {
    for (std::size_t i = 0; i + 1 < c.ber_bound.size(); ++i) {
        const double a = c.ber_bound[i], b = c.ber_bound[i + 1];
        if (a >= target && b < target) {
            const double f = (std::log10(a) - std::log10(target)) /
                             (std::log10(a) - std::log10(b));
            return c.snr_db[i] + f * (c.snr_db[i + 1] - c.snr_db[i]);
        }
    }
    return std::nullopt;
}

// SNR where simulated BER crosses `target`; reports the bracketing points'
// error counts so callers can enforce a statistics floor.
std::optional<double> snr_at_ber(const std::vector<BerPoint>& pts, double target,
                                 std::uint64_t& lo_err, std::uint64_t& hi_err) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i].ber >= target && pts[i + 1].ber < target && pts[i + 1].ber > 0.0) {
            lo_err = pts[i].bit_errors;
            hi_err = pts[i + 1].bit_errors;
            const double f = (std::log10(pts[i].ber) - std::log10(target)) /
                             (std::log10(pts[i].ber) - std::log10(pts[i + 1].ber));
            return pts[i].snr_db + f * (pts[i + 1].snr_db - pts[i].snr_db);
        }
    }
    return std::nullopt;
}

struct Crossover {
    double snr_db = 0.0;
    double log10_ber = 0.0;
};

// Intersection of the rank-one and higher-rank partial bounds: the knee where
// the curve's slope transitions to the rank-one asymptote.
std::optional<Crossover> bound_crossover(const BoundCurve& c) {
    for (std::size_t i = 1; i < c.snr_db.size(); ++i) {
        const double fp = std::log10(c.rank1_part[i - 1]) - std::log10(c.rest_part[i - 1]);
        const double fc = std::log10(c.rank1_part[i]) - std::log10(c.rest_part[i]);
        if (fp < 0.0 && fc >= 0.0) {
            const double f = -fp / (fc - fp);
            Crossover x;
            x.snr_db = c.snr_db[i - 1] + f * (c.snr_db[i] - c.snr_db[i - 1]);
            x.log10_ber = std::log10(c.ber_bound[i - 1]) +
                          f * (std::log10(c.ber_bound[i]) - std::log10(c.ber_bound[i - 1]));
            return x;
        }
    }
    return std::nullopt;
}

long long min_sq_dist_of(const std::vector<IntVec>& v) {
    long long best = -1;
    for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t b = a + 1; b < v.size(); ++b) {
            long long d = 0;
            for (std::size_t t = 0; t < v[a].size(); ++t) {
                const long long x = v[a][t] - v[b][t];
                d += x * x;
            }
            if (best < 0 || d < best) best = d;
        }
    return best;
}

SimConfig sim(std::uint64_t seed, int n_r, std::uint64_t min_err, std::uint64_t max_blocks) {
    SimConfig c;
    c.seed = seed;
    c.n_r = n_r;
    c.workers = 0;
    c.stop.min_bit_errors = min_err;
    c.stop.max_blocks = max_blocks;
    return c;
}

// Shared fixtures; the expensive sweeps and curves are built once on first use.
struct Ctx {
    MbmSignalSet set1 = make_coded(4, 2, 4, 2);       // 512 blocks, 2.25 bpcu
    MbmSignalSet set2 = make_coded(4, 2, 6, 2);       // 8192 blocks, 3.25 bpcu
    MbmSignalSet conv2 = MbmSignalSet::conventional(1, qam_alphabet(2));  // 2 bpcu
    MbmSignalSet conv3 = MbmSignalSet::conventional(2, qam_alphabet(2));  // 3 bpcu

    std::optional<LinkSweep> sw1_, sw2_;
    std::optional<std::vector<BerPoint>> p8_, c8_;
    std::vector<double> p8_grid_, c8_grid_;

    const LinkSweep& sweep1() {
        if (!sw1_) sw1_ = link_sweep(set1, grid_from(0.0, 0.1, 401), 4);
        return *sw1_;
    }
    const LinkSweep& sweep2() {
        if (!sw2_) sw2_ = link_sweep(set2, grid_from(0.0, 0.1, 401), 4);
        return *sw2_;
    }

    // Simulation grids are anchored where each scheme's own bound predicts the
    // target BER; the true curve crosses within the bound's tightness margin.
    std::vector<double> anchored_grid(const BoundCurve& bound, double target) {
        const auto s = snr_at_bound(bound, target);
        if (!s) throw std::runtime_error("bound never reaches the target error rate");
        const double start = std::round((*s - 3.0) * 2.0) / 2.0;
        return grid_from(start, 0.5, 9);
    }

    const std::vector<BerPoint>& points_p8() {
        if (!p8_) {
            p8_grid_ = anchored_grid(sweep1().bound, 1e-5);
            p8_ = ber_curve(set1, p8_grid_, sim(1, 4, 100, 3'000'000));
        }
        return *p8_;
    }
    const std::vector<BerPoint>& points_c8() {
        if (!c8_) {
            const auto bound = union_bound(conv2, grid_from(0.0, 0.1, 301), 4);
            c8_grid_ = anchored_grid(bound, 1e-5);
            c8_ = ber_curve(conv2, c8_grid_, sim(1, 4, 100, 20'000'000));
        }
        return *c8_;
    }
};

} // namespace

int main() {
    Harness h;
    Ctx ctx;

    h.run(1, "distance spectrum, coded set with 16 activation patterns", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const auto s = ctx.set1.distance_spectrum();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::string why;
        if (!spectrum_matches(s, {{12, 15360}, {16, 99840}, {20, 15360}, {32, 256}}, 130816,
                              why))
            return Result{false, why};
        if (secs >= 10.0) return Result{false, fmt("too slow: %.1f s", secs)};
        return Result{true, fmt("exact match, 130816 pairs in %.2f s", secs)};
    });

    h.run(2, "distance spectrum, coded set with 64 activation patterns", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const auto s = ctx.set2.distance_spectrum();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::string why;
        if (!spectrum_matches(
                s, {{12, 1032192}, {16, 31481856}, {20, 1032192}, {32, 4096}}, 33550336, why))
            return Result{false, why};
        if (secs >= 300.0) return Result{false, fmt("too slow: %.1f s", secs)};
        return Result{true, fmt("exact match, 33550336 pairs in %.2f s", secs)};
    });

    h.run(3, "distance spectra, conventional index-modulation sets", [&] {
        std::string why;
        if (!spectrum_matches(ctx.conv2.distance_spectrum(), {{2, 4}, {4, 2}}, 6, why))
            return Result{false, "1-mirror set: " + why};
        if (!spectrum_matches(ctx.conv3.distance_spectrum(), {{2, 24}, {4, 4}}, 28, why))
            return Result{false, "2-mirror set: " + why};
        return Result{true, "both exact"};
    });

    h.run(4, "squaring construction reference sets", [&] {
        const auto sym = SymbolConstellation::build(4, 2);
        std::vector<GaussVec> expect = {
            {{-3, -3}, {-3, -3}}, {{-3, -3}, {1, 1}},  {{1, 1}, {1, 1}},
            {{1, 1}, {-3, -3}},   {{-3, 1}, {-3, 1}},  {{-3, 1}, {1, -3}},
            {{1, -3}, {1, -3}},   {{1, -3}, {-3, 1}},  {{-1, -1}, {-1, -1}},
            {{-1, -1}, {3, 3}},   {{3, 3}, {3, 3}},    {{3, 3}, {-1, -1}},
            {{-1, 3}, {-1, 3}},   {{-1, 3}, {3, -1}},  {{3, -1}, {3, -1}},
            {{3, -1}, {-1, 3}}};
        auto lt = [](const GaussVec& a, const GaussVec& b) {
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (a[i].re != b[i].re) return a[i].re < b[i].re;
                if (a[i].im != b[i].im) return a[i].im < b[i].im;
            }
            return false;
        };
        auto got = sym.vectors();
        std::sort(got.begin(), got.end(), lt);
        std::sort(expect.begin(), expect.end(), lt);
        if (got != expect) return Result{false, "16-vector set differs"};

        auto node = PartitionNode::scalars({0, 1, 2, 3});
        auto [t0, t1] = node->split();
        auto u = square_union(t0->elements(), t1->elements());
        std::vector<IntVec> eu = {{0, 0}, {0, 2}, {2, 0}, {2, 2},
                                  {1, 1}, {1, 3}, {3, 1}, {3, 3}};
        std::sort(u.begin(), u.end());
        std::sort(eu.begin(), eu.end());
        if (u != eu) return Result{false, "squared 4-level union differs"};
        if (min_sq_dist_of(u) != 2)
            return Result{false, fmt("d(U) = %lld, expected 2", min_sq_dist_of(u))};
        return Result{true, "16-vector set and squared union both exact"};
    });

    h.run(5, "closed-form spectral efficiencies", [&] {
        const double r1 = mic_sq_rate(4, 2, 2, 4);
        const double r2 = mic_sq_rate(4, 2, 4, 2);
        const double r3 = mic_sq_rate(4, 2, 6, 2);
        if (r1 != 2.25 || r2 != 2.25 || r3 != 3.25)
            return Result{false, fmt("rates %.4f, %.4f, %.4f", r1, r2, r3)};
        return Result{true, "2.25, 2.25, 3.25 bpcu exact"};
    });

    h.run(6, "pairwise rank diagnostics", [&] {
        for (int which = 0; which < 2; ++which) {
            const LinkSweep& sw = which == 0 ? ctx.sweep1() : ctx.sweep2();
            const std::uint64_t total = which == 0 ? 130816u : 33550336u;
            const auto& r = sw.ranks;
            if (r.total_pairs != total || r.min_rank != 1 || r.rank_one_pairs != 1)
                return Result{false, fmt("set %d: min_rank=%d rank_one=%llu total=%llu",
                                         which + 1, r.min_rank,
                                         (unsigned long long)r.rank_one_pairs,
                                         (unsigned long long)r.total_pairs)};
            const auto tight = ranks_at_tolerance(sw, 1e-12);
            const auto loose = ranks_at_tolerance(sw, 1e-6);
            if (tight.histogram != r.histogram || loose.histogram != r.histogram)
                return Result{false, fmt("set %d: rank histogram tolerance-sensitive", which + 1)};
            const auto structural = rank_one_pairs_structural(which == 0 ? ctx.set1 : ctx.set2);
            if (structural != 1)
                return Result{false, fmt("set %d: structural rank-one count %llu", which + 1,
                                         (unsigned long long)structural)};
        }
        return Result{true, "min rank 1, exactly one rank-one pair each, tolerance-stable"};
    });

    h.run(7, "bound slope transition and crossover", [&] {
        const BoundCurve& b1 = ctx.sweep1().bound;
        double worst = 0.0;
        int segs = 0;
        for (std::size_t i = 0; i + 1 < b1.snr_db.size(); ++i) {
            const double ya = b1.ber_bound[i], yb = b1.ber_bound[i + 1];
            if (ya > 1e-4 || yb < 1e-8) continue;
            const double slope = 10.0 * (std::log10(yb) - std::log10(ya)) /
                                 (b1.snr_db[i + 1] - b1.snr_db[i]);
            worst = segs == 0 ? slope : std::max(worst, slope);
            ++segs;
        }
        if (segs == 0) return Result{false, "no bound segments inside the mid-BER band"};
        if (worst >= -4.0)
            return Result{false, fmt("mid-band slope %.2f decades/10dB, need < -4", worst)};

        // deep tail: rank-one asymptote, slope within 15% of -n_r
        std::size_t first = b1.snr_db.size();
        for (std::size_t i = 0; i < b1.snr_db.size(); ++i)
            if (b1.ber_bound[i] <= 1e-17) {
                first = i;
                break;
            }
        if (first + 10 > b1.snr_db.size())
            return Result{false, "grid too shallow to reach the deep tail"};
        const std::size_t last = b1.snr_db.size() - 1;
        const double tail = 10.0 *
                            (std::log10(b1.ber_bound[last]) - std::log10(b1.ber_bound[first])) /
                            (b1.snr_db[last] - b1.snr_db[first]);
        if (std::fabs(tail + 4.0) > 0.6)
            return Result{false, fmt("tail slope %.2f, need -4 +/- 15%%", tail)};

        const auto x1 = bound_crossover(b1);
        const auto x2 = bound_crossover(ctx.sweep2().bound);
        if (!x1 || !x2) return Result{false, "no rank-one crossover found on the grid"};
        if (x1->log10_ber < -14.0 || x1->log10_ber > -10.0)
            return Result{false, fmt("16-pattern crossover at 1e%.1f, expected 1e-12 +/- 2",
                                     x1->log10_ber)};
        if (x2->log10_ber < -17.0 || x2->log10_ber > -13.0)
            return Result{false, fmt("64-pattern crossover at 1e%.1f, expected 1e-15 +/- 2",
                                     x2->log10_ber)};
        return Result{true,
                      fmt("mid-band slope %.2f, tail slope %.2f, crossovers 1e%.1f / 1e%.1f",
                          worst, tail, x1->log10_ber, x2->log10_ber)};
    });

    h.run(8, "simulated gain at BER 1e-5, 2.25 vs 2 bpcu", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        std::uint64_t pl = 0, ph = 0, cl = 0, ch = 0;
        const auto sp = snr_at_ber(ctx.points_p8(), 1e-5, pl, ph);
        const auto sc = snr_at_ber(ctx.points_c8(), 1e-5, cl, ch);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!sp || !sc) return Result{false, "a curve never crosses BER 1e-5 on its grid"};
        const std::uint64_t emin = std::min(std::min(pl, ph), std::min(cl, ch));
        if (emin < 100)
            return Result{false, fmt("only %llu bit errors at a bracketing point",
                                     (unsigned long long)emin)};
        const double gain = *sc - *sp;
        if (gain < 6.0 || gain > 8.0)
            return Result{false, fmt("gain %.2f dB (proposed %.2f, conventional %.2f)", gain,
                                     *sp, *sc)};
        if (secs >= 1800.0) return Result{false, fmt("too slow: %.0f s", secs)};
        return Result{true, fmt("gain %.2f dB (proposed %.2f dB, conventional %.2f dB)", gain,
                                *sp, *sc)};
    });

    h.run(9, "simulated gain at BER 1e-4, 3.25 vs 3 bpcu", [&] {
        const auto grid_p = ctx.anchored_grid(ctx.sweep2().bound, 1e-4);
        const auto pts_p = ber_curve(ctx.set2, grid_p, sim(1, 4, 100, 400'000));
        const auto bound_c = union_bound(ctx.conv3, grid_from(0.0, 0.1, 301), 4);
        const auto grid_c = ctx.anchored_grid(bound_c, 1e-4);
        const auto pts_c = ber_curve(ctx.conv3, grid_c, sim(1, 4, 100, 20'000'000));
        std::uint64_t pl = 0, ph = 0, cl = 0, ch = 0;
        const auto sp = snr_at_ber(pts_p, 1e-4, pl, ph);
        const auto sc = snr_at_ber(pts_c, 1e-4, cl, ch);
        if (!sp || !sc) return Result{false, "a curve never crosses BER 1e-4 on its grid"};
        const double gain = *sc - *sp;
        if (gain < 5.0 || gain > 7.0)
            return Result{false, fmt("gain %.2f dB (proposed %.2f, conventional %.2f)", gain,
                                     *sp, *sc)};
        return Result{true, fmt("gain %.2f dB (proposed %.2f dB, conventional %.2f dB)", gain,
                                *sp, *sc)};
    });

    h.run(10, "receive antennas needed for BER 1e-4 at 2 dB", [&] {
        auto first_passing = [&](const MbmSignalSet& set, int lo, int hi,
                                 std::uint64_t max_blocks) {
            for (int n_r = lo; n_r <= hi; ++n_r) {
                const auto p = simulate_point(set, 2.0, sim(1, n_r, 100, max_blocks));
                if (p.ber <= 1e-4) return n_r;
            }
            return -1;
        };
        const int np = first_passing(ctx.set2, 3, 11, 400'000);
        const int nc = first_passing(ctx.conv3, 9, 19, 20'000'000);
        if (np < 0 || nc < 0) return Result{false, "no antenna count reached BER 1e-4"};
        if (np < 5 || np > 9 || nc < 13 || nc > 17)
            return Result{false, fmt("proposed needs %d (expect 7 +/- 2), conventional %d "
                                     "(expect 15 +/- 2)",
                                     np, nc)};
        return Result{true, fmt("proposed needs n_r = %d, conventional n_r = %d", np, nc)};
    });

    h.run(11, "union bound dominates and stays within 10x of simulation", [&] {
        double lo_ratio = 1e300, hi_ratio = 0.0;
        int used = 0;
        for (int which = 0; which < 2; ++which) {
            const auto& pts = which == 0 ? ctx.points_p8() : ctx.points_c8();
            const auto& set = which == 0 ? ctx.set1 : ctx.conv2;
            std::vector<double> snrs;
            for (const auto& p : pts)
                if (p.ber > 0.0 && p.ber <= 1e-3) snrs.push_back(p.snr_db);
            const auto bound = union_bound(set, snrs, 4);
            std::size_t j = 0;
            for (const auto& p : pts) {
                if (!(p.ber > 0.0 && p.ber <= 1e-3)) continue;
                const double ratio = bound.ber_bound[j++] / p.ber;
                lo_ratio = std::min(lo_ratio, ratio);
                hi_ratio = std::max(hi_ratio, ratio);
                ++used;
            }
        }
        if (used == 0) return Result{false, "no simulated points at BER <= 1e-3"};
        if (lo_ratio < 1.0 || hi_ratio > 10.0)
            return Result{false,
                          fmt("bound/sim ratio spans [%.2f, %.2f] over %d points, need [1, 10]",
                              lo_ratio, hi_ratio, used)};
        return Result{true, fmt("bound/sim ratio in [%.2f, %.2f] over %d points", lo_ratio,
                                hi_ratio, used)};
    });

    h.run(12, "oracle equivalences", [&] {
        for (int which = 0; which < 2; ++which) {
            const MbmSignalSet& set = which == 0
                ? ctx.set1
                : MbmSignalSet::conventional(2, qam_alphabet(4));
            std::vector<GaussVec> dense(set.size());
            for (std::uint64_t l = 0; l < set.size(); ++l) dense[l] = set.dense(l);
            DistanceSpectrum ref;
            for (std::uint64_t a = 0; a < set.size(); ++a)
                for (std::uint64_t b = a + 1; b < set.size(); ++b) {
                    ++ref.histogram[oracle::dense_sq_dist(dense[a], dense[b])];
                    ++ref.total_pairs;
                }
            const auto s = set.distance_spectrum();
            if (s.histogram != ref.histogram || s.total_pairs != ref.total_pairs)
                return Result{false, fmt("sparse/dense spectra differ on set %d", which + 1)};
        }
        for (int m = 1; m <= 4; ++m) {
            const Field f(m);
            for (int a = 0; a < f.order(); ++a)
                for (int b = 0; b < f.order(); ++b)
                    if (f.mul(std::uint8_t(a), std::uint8_t(b)) !=
                        oracle::polymul_mod(a, b, f.poly(), m))
                        return Result{false, fmt("GF(2^%d): %d * %d disagrees", m, a, b)};
        }
        const auto p = simulate_point(ctx.set1, 200.0, sim(9, 2, ~0ull, 10'000));
        if (p.blocks != 10'000 || p.bit_errors != 0)
            return Result{false, fmt("noiseless detection: %llu errors in %llu blocks",
                                     (unsigned long long)p.bit_errors,
                                     (unsigned long long)p.blocks)};
        return Result{true, "sparse ~ dense, field ~ polynomial oracle, noiseless ML error-free"};
    });

    std::printf("%s: %d of 12 criteria failed\n", h.failed ? "FAIL" : "OK", h.failed);
    return h.failed ? 1 : 0;
}
