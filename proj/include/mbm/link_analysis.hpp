#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "mbm/signal_set.hpp"

namespace mbm {

inline constexpr int MAX_BLOCK_USES = 8;
inline constexpr double DEFAULT_RANK_TOL = 1e-9;

/// Geometry of one block pair: eigenvalues of (cX_a - cX_b)^H (cX_a - cX_b)
/// in raw (unnormalized) set units, descending, padded to n_uses.
struct PairGeometry {
    std::vector<double> sigma2;
    int rank = 0;
    int bit_distance = 0;
};

struct RankProfile {
    std::map<int, std::uint64_t> histogram;
    int min_rank = 0;
    std::uint64_t rank_one_pairs = 0;
    std::uint64_t total_pairs = 0;
};

/// Pairwise-error-rate bound curve on an SNR grid, with the contribution of
/// rank-one pairs kept separate: the two partial curves cross where the
/// error-rate slope transitions to the rank-one asymptote.
struct BoundCurve {
    std::vector<double> snr_db;
    std::vector<double> ber_bound;
    std::vector<double> rank1_part;
    std::vector<double> rest_part;
};

/// All pairs sharing one exact integer Gram matrix; the unit the pair sweep
/// accumulates into.
struct GeometryClass {
    std::vector<double> sigma2;  // descending, length n_uses
    int rank = 0;                // at the sweep tolerance
    std::uint64_t pair_count = 0;
    std::uint64_t bit_distance_sum = 0;
};

struct LinkAnalysisOptions {
    double tol = DEFAULT_RANK_TOL;
    unsigned workers = 0;
    std::uint64_t set_cap = MbmSignalSet::DEFAULT_SET_CAP;
    /// Scale eigenvalues by 1/mean-energy-per-use so bound SNRs line up with
    /// the unit-energy channel.
    bool normalize_energy = true;
};

struct LinkSweep {
    std::vector<GeometryClass> classes;
    RankProfile ranks;
    BoundCurve bound;
};

/// Dense difference matrix of two blocks, column-major n_maps x n_uses flat.
GaussVec diff_dense(const MbmSignalSet& set, std::uint64_t a, std::uint64_t b);

/// Eigenvalues (descending) of the pair's Gram matrix plus rank at relative
/// tolerance tol * sigma2_max, and the label Hamming distance.
PairGeometry pair_geometry(const MbmSignalSet& set, std::uint64_t a, std::uint64_t b,
                           double tol = DEFAULT_RANK_TOL);

/// Pairwise error bound (1/2) * prod_r (1 + scale * sigma2_r * rho / 4)^(-n_r).
double pep_bound(const PairGeometry& g, double rho, int n_r, double energy_scale = 1.0);

/// Full unordered-pair sweep: geometry classes, rank profile, and (when the
/// grid is non-empty) the error-rate union bound
///   (2 / (|S| kappa)) * sum_{a<b} pep * bit_distance(a, b).
LinkSweep link_sweep(const MbmSignalSet& set, const std::vector<double>& snr_db_grid, int n_r,
                     const LinkAnalysisOptions& opts = {});

RankProfile rank_profile(const MbmSignalSet& set, const LinkAnalysisOptions& opts = {});
BoundCurve union_bound(const MbmSignalSet& set, const std::vector<double>& snr_db_grid,
                       int n_r, const LinkAnalysisOptions& opts = {});

/// Recompute the rank histogram of a finished sweep at another tolerance.
RankProfile ranks_at_tolerance(const LinkSweep& sweep, double tol);

/// Exact rank-one pair count by column-proportionality over Gaussian integers;
/// no floating point. Independent of the eigenvalue path and usable past the
/// sweep cap.
std::uint64_t rank_one_pairs_structural(const MbmSignalSet& set);

/// Eigenvalues of a Hermitian matrix (descending), cyclic Jacobi. `a` is
/// row-major n x n and is destroyed.
std::vector<double> hermitian_eigenvalues(std::complex<double>* a, int n);

} // namespace mbm
