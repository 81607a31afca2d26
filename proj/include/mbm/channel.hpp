#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "mbm/rng.hpp"
#include "mbm/signal_set.hpp"

namespace mbm {

struct SimStopping {
    std::uint64_t min_bit_errors = 100;
    std::uint64_t max_blocks = 10'000'000;
    /// Blocks between stop checks. Streams are per block, so this only
    /// affects how far past the error target a run can overshoot.
    std::uint64_t blocks_per_round = 8192;
};

struct SimConfig {
    std::uint64_t seed = 1;
    int n_r = 1;
    unsigned workers = 0;
    /// Scale transmit blocks to unit average energy per channel use.
    bool normalize_energy = true;
    SimStopping stop;
};

struct BerPoint {
    double snr_db = 0.0;
    double ber = 0.0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
    std::uint64_t blocks = 0;
    int n_r = 1;
};

/// Fill h (n_r x n_maps, antenna-major) with iid CN(0,1) entries.
void draw_channel(GaussianStream& g, std::complex<double>* h, int n_r, int n_maps);

/// Exhaustive ML detection: pick the label minimizing
///   sum_i || y_i - scale * v_i * h_{l_i} ||^2,
/// evaluated per use from a (map index, symbol value) lookup table so the
/// label scan is table reads only.
class MlDetector {
  public:
    explicit MlDetector(const MbmSignalSet& set);

    /// y is n_uses x n_r use-major, h is n_r x n_maps antenna-major. scratch
    /// is caller-owned workspace (one per thread); resized as needed.
    std::uint64_t detect(const std::complex<double>* y, const std::complex<double>* h,
                         int n_r, double scale, std::vector<double>& scratch) const;

  private:
    PackedPairSweep packed_;
    std::uint64_t size_;
    int n_maps_;
};

/// Monte-Carlo bit error rate of ML detection over the block-fading channel
/// y_i = H (c x_i) + n_i: H constant per block with iid CN(0,1) entries,
/// noise iid CN(0, 1/rho), rho = 10^(snr_db/10). Every block's randomness
/// comes from a stream keyed by (seed, snr, block index, n_r), so the result
/// is reproducible and independent of the worker count.
BerPoint simulate_point(const MbmSignalSet& set, double snr_db, const SimConfig& cfg);

std::vector<BerPoint> ber_curve(const MbmSignalSet& set, const std::vector<double>& snr_db_grid,
                                const SimConfig& cfg);

/// One point per receive-antenna count at a fixed SNR.
std::vector<BerPoint> ber_vs_nr(const MbmSignalSet& set, double snr_db,
                                const std::vector<int>& n_r_list, const SimConfig& cfg);

/// Energy-per-bit SNR: snr_db - 10 log10(bits per channel use).
double ebn0_from_snr(double snr_db, double rate);

} // namespace mbm
