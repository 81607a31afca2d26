#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mbm/map_code.hpp"
#include "mbm/squaring.hpp"
#include "mbm/types.hpp"

namespace mbm {

/// One transmit block: per channel use, a mirror-activation index and the
/// complex symbol sent through it. The dense form is an n_maps-row, n_uses-
/// column matrix with a single non-zero per column.
struct MbmBlock {
    std::vector<std::uint8_t> map_indices;
    GaussVec symbols;
};

struct DistanceSpectrum {
    std::map<long long, std::uint64_t> histogram;  // squared distance -> pairs
    long long min_distance = 0;
    std::uint64_t total_pairs = 0;
};

/// A finite set of transmit blocks with a natural-binary bit labeling: label
/// value == block index.
class MbmSignalSet {
  public:
    /// Index-modulation set: one channel use, every (activation index, symbol)
    /// combination. Bits: m_rf index bits then the symbol bits.
    static MbmSignalSet conventional(int m_rf, const GaussVec& alphabet);

    /// Coded set: every (codeword, symbol vector) combination. Block index =
    /// message_index * |A| + symbol_index (message bits lead the label).
    static MbmSignalSet coded(const MapIndexCodebook& code, const SymbolConstellation& symbols);

    std::uint64_t size() const { return blocks_.size(); }
    int n_uses() const { return n_uses_; }
    int n_maps() const { return n_maps_; }
    int bits_per_block() const { return bits_; }
    double rate() const { return double(bits_) / n_uses_; }

    const MbmBlock& block(std::uint64_t label) const { return blocks_[label]; }
    const std::vector<MbmBlock>& blocks() const { return blocks_; }

    /// Dense n_maps * n_uses vector, column-major: entry for channel use i and
    /// map index l sits at flat position i * n_maps + l.
    GaussVec dense(std::uint64_t label) const;

    /// Mean of ||block||^2 / n_uses over the set; the scale the channel layer
    /// divides by to get unit average energy per channel use.
    double mean_energy_per_use() const;

    /// Exact pairwise squared-distance histogram. Per channel use the
    /// contribution is |s|^2 + |s'|^2 when the activation indices differ and
    /// |s - s'|^2 when they match. Sweeps all unordered pairs; |S| above
    /// `set_cap` is refused.
    DistanceSpectrum distance_spectrum(unsigned workers = 0,
                                       std::uint64_t set_cap = DEFAULT_SET_CAP) const;

    std::string dump() const;

    static constexpr std::uint64_t DEFAULT_SET_CAP = 1u << 14;

  private:
    std::vector<MbmBlock> blocks_;
    int n_uses_ = 0;
    int n_maps_ = 0;
    int bits_ = 0;

    friend struct PackedPairSweep;
};

/// Blocks distilled to per-use (index, symbol id) bytes plus distance lookup
/// tables; the layout the pair sweeps iterate over.
struct PackedPairSweep {
    explicit PackedPairSweep(const MbmSignalSet& set);

    int n_uses;
    int n_values;                 // distinct symbol values
    GaussVec values;              // id -> symbol
    std::vector<std::uint8_t> idx;  // size * n_uses activation indices
    std::vector<std::uint8_t> val;  // size * n_uses symbol value ids
    std::vector<long long> d_same;  // n_values^2: |v - v'|^2
    std::vector<long long> d_diff;  // n_values^2: |v|^2 + |v'|^2

    long long pair_sq_dist(std::uint64_t a, std::uint64_t b) const {
        const std::uint8_t* ia = idx.data() + a * n_uses;
        const std::uint8_t* ib = idx.data() + b * n_uses;
        const std::uint8_t* va = val.data() + a * n_uses;
        const std::uint8_t* vb = val.data() + b * n_uses;
        long long d = 0;
        for (int t = 0; t < n_uses; ++t) {
            const auto* table = ia[t] == ib[t] ? d_same.data() : d_diff.data();
            d += table[va[t] * n_values + vb[t]];
        }
        return d;
    }
};

/// Decompose a flat unordered-pair index p in [0, n(n-1)/2) into (i, j), i < j.
void unrank_pair(std::uint64_t p, std::uint64_t n, std::uint64_t& i, std::uint64_t& j);

} // namespace mbm
