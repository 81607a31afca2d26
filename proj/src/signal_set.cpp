#include "mbm/signal_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "mbm/parallel.hpp"

namespace mbm {

namespace {

int exact_log2(std::uint64_t v) {
    int l = 0;
    while ((std::uint64_t{1} << l) < v) ++l;
    if ((std::uint64_t{1} << l) != v) throw std::logic_error("set size is not a power of two");
    return l;
}

} // namespace

MbmSignalSet MbmSignalSet::conventional(int m_rf, const GaussVec& alphabet) {
    if (m_rf < 0 || m_rf > 8) throw std::invalid_argument("mirror count must be in 0..8");
    if (alphabet.empty() || (alphabet.size() & (alphabet.size() - 1)) != 0)
        throw std::invalid_argument("alphabet size must be a power of two");
    MbmSignalSet s;
    s.n_uses_ = 1;
    s.n_maps_ = 1 << m_rf;
    s.blocks_.reserve(std::size_t(s.n_maps_) * alphabet.size());
    for (int k = 0; k < s.n_maps_; ++k)
        for (const auto& a : alphabet)
            s.blocks_.push_back({{static_cast<std::uint8_t>(k)}, {a}});
    s.bits_ = exact_log2(s.blocks_.size());
    return s;
}

MbmSignalSet MbmSignalSet::coded(const MapIndexCodebook& code,
                                 const SymbolConstellation& symbols) {
    if (symbols.complex_dim() != code.n())
        throw std::invalid_argument("symbol-vector length must equal the code length");
    MbmSignalSet s;
    s.n_uses_ = code.n();
    s.n_maps_ = code.field().order();
    s.blocks_.reserve(code.size() * symbols.size());
    for (std::uint64_t ci = 0; ci < code.size(); ++ci) {
        const auto cw = code.codeword(ci);
        for (const auto& sv : symbols.vectors()) {
            MbmBlock b;
            b.map_indices.assign(cw.begin(), cw.end());
            b.symbols = sv;
            s.blocks_.push_back(std::move(b));
        }
    }
    s.bits_ = exact_log2(s.blocks_.size());
    return s;
}

GaussVec MbmSignalSet::dense(std::uint64_t label) const {
    const MbmBlock& b = blocks_.at(label);
    GaussVec x(std::size_t(n_uses_) * n_maps_);
    for (int i = 0; i < n_uses_; ++i)
        x[std::size_t(i) * n_maps_ + b.map_indices[i]] = b.symbols[i];
    return x;
}

double MbmSignalSet::mean_energy_per_use() const {
    long long total = 0;
    for (const auto& b : blocks_)
        for (const auto& s : b.symbols) total += s.norm2();
    return double(total) / (double(blocks_.size()) * n_uses_);
}

PackedPairSweep::PackedPairSweep(const MbmSignalSet& set)
    : n_uses(set.n_uses()) {
    for (const auto& b : set.blocks())
        for (const auto& s : b.symbols)
            if (std::find(values.begin(), values.end(), s) == values.end())
                values.push_back(s);
    std::sort(values.begin(), values.end());
    n_values = static_cast<int>(values.size());
    if (n_values > 255) throw std::logic_error("too many distinct symbol values");

    idx.resize(set.size() * n_uses);
    val.resize(set.size() * n_uses);
    for (std::uint64_t b = 0; b < set.size(); ++b) {
        const auto& blk = set.block(b);
        for (int t = 0; t < n_uses; ++t) {
            idx[b * n_uses + t] = blk.map_indices[t];
            const auto it = std::lower_bound(values.begin(), values.end(), blk.symbols[t]);
            val[b * n_uses + t] = static_cast<std::uint8_t>(it - values.begin());
        }
    }
    d_same.resize(std::size_t(n_values) * n_values);
    d_diff.resize(std::size_t(n_values) * n_values);
    for (int a = 0; a < n_values; ++a)
        for (int b = 0; b < n_values; ++b) {
            d_same[std::size_t(a) * n_values + b] = sq_dist(values[a], values[b]);
            d_diff[std::size_t(a) * n_values + b] = values[a].norm2() + values[b].norm2();
        }
}

void unrank_pair(std::uint64_t p, std::uint64_t n, std::uint64_t& i, std::uint64_t& j) {
    // Pairs are laid out row-major: row i spans n-1-i entries.
    // Solve for the row by the triangular-number inverse, then fix up.
    const double total = 0.5 * double(n) * double(n - 1);
    double guess = double(n) - 0.5 - std::sqrt((total - double(p)) * 2.0 + 0.25);
    i = guess <= 0.0 ? 0 : std::min<std::uint64_t>(std::uint64_t(guess), n - 2);
    auto row_start = [n](std::uint64_t r) {
        return r * n - r * (r + 1) / 2;
    };
    while (i > 0 && row_start(i) > p) --i;
    while (i + 2 < n && row_start(i + 1) <= p) ++i;
    j = i + 1 + (p - row_start(i));
}

DistanceSpectrum MbmSignalSet::distance_spectrum(unsigned workers,
                                                 std::uint64_t set_cap) const {
    const std::uint64_t n = size();
    if (n > set_cap)
        throw std::length_error("signal set exceeds the pair-sweep size cap");
    DistanceSpectrum spec;
    if (n < 2) return spec;

    const PackedPairSweep packed(*this);
    const std::uint64_t total = n * (n - 1) / 2;
    const unsigned nw = resolve_workers(workers);
    std::vector<std::map<long long, std::uint64_t>> parts(nw);

    parallel_ranges(total, nw, [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
        auto& hist = parts[w];
        std::uint64_t i, j;
        unrank_pair(begin, n, i, j);
        for (std::uint64_t p = begin; p < end; ++p) {
            ++hist[packed.pair_sq_dist(i, j)];
            if (++j == n) {
                ++i;
                j = i + 1;
            }
        }
    });

    for (const auto& part : parts)
        for (const auto& [d, c] : part) spec.histogram[d] += c;
    spec.total_pairs = total;
    spec.min_distance = spec.histogram.empty() ? 0 : spec.histogram.begin()->first;
    return spec;
}

std::string MbmSignalSet::dump() const {
    std::string out;
    const int hex_digits = (bits_ + 3) / 4;
    char buf[32];
    for (std::uint64_t label = 0; label < size(); ++label) {
        std::snprintf(buf, sizeof buf, "%0*llx |", hex_digits,
                      static_cast<unsigned long long>(label));
        out += buf;
        const auto& b = blocks_[label];
        for (int i = 0; i < n_uses_; ++i) {
            std::snprintf(buf, sizeof buf, " %d", int(b.map_indices[i]));
            out += buf;
        }
        out += " |";
        for (int i = 0; i < n_uses_; ++i) {
            std::snprintf(buf, sizeof buf, " %d:%d", b.symbols[i].re, b.symbols[i].im);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

} // namespace mbm
