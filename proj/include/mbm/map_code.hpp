#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mbm/gf.hpp"

namespace mbm {

enum class MirrorState : std::uint8_t { On, Off };

/// ON/OFF pattern selected by a mirror-activation-pattern index in [0, 2^m).
/// Index 0 keeps every mirror ON; bit (m-1-i) of the index flips mirror i OFF.
std::vector<MirrorState> mirror_states(int index, int m);

/// Distances between codeword pairs, exact counts.
struct HammingSpectrum {
    std::map<int, std::uint64_t> histogram;  // distance -> unordered pair count
    int min_distance = 0;
    std::uint64_t total_pairs = 0;
};

/// Fully materialized (n, k) shortened Reed-Solomon codebook over GF(2^m).
///
/// The parent code has length 2^m - 1 and generator \prod_{i=1}^{n-k}(x - alpha^i).
/// Each k-symbol message is padded with leading zeros, systematically encoded,
/// the padding removed and trailing parity punctured down to length n. Symbols
/// double as mirror-activation-pattern indices via their bit patterns.
class MapIndexCodebook {
  public:
    MapIndexCodebook(const Field& field, int n, int k);

    int n() const { return n_; }
    int k() const { return k_; }
    int m() const { return field_.m(); }
    const Field& field() const { return field_; }
    std::uint64_t size() const { return size_; }
    /// n - k + 1; every pairwise distance meets this (maximum distance separable).
    int design_distance() const { return n_ - k_ + 1; }

    /// Systematic encoding of one message (message symbols lead the codeword).
    std::vector<std::uint8_t> encode(std::span<const std::uint8_t> message) const;

    /// Codeword for the message whose symbols are the base-2^m digits of
    /// `message_index`, most significant digit first.
    std::span<const std::uint8_t> codeword(std::uint64_t message_index) const;

    bool contains(std::span<const std::uint8_t> word) const;

    HammingSpectrum hamming_spectrum() const;

    std::string dump() const;

  private:
    Field field_;
    int n_;
    int k_;
    std::uint64_t size_;
    std::vector<std::uint8_t> generator_;  // g(x), degree n-k, low degree first
    std::vector<std::uint8_t> words_;      // size_ * n_, row-major
};

} // namespace mbm
