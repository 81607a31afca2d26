#include "mbm/map_code.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace mbm {

std::vector<MirrorState> mirror_states(int index, int m) {
    if (m < 1 || m > 8) throw std::invalid_argument("mirror count must be in 1..8");
    if (index < 0 || index >= (1 << m))
        throw std::out_of_range("activation-pattern index out of range");
    std::vector<MirrorState> states(m);
    for (int i = 0; i < m; ++i) {
        const bool off = (index >> (m - 1 - i)) & 1;
        states[i] = off ? MirrorState::Off : MirrorState::On;
    }
    return states;
}

MapIndexCodebook::MapIndexCodebook(const Field& field, int n, int k)
    : field_(field), n_(n), k_(k) {
    const int n_parent = field_.order() - 1;
    if (n < 2 || n > n_parent)
        throw std::invalid_argument("code length must be in 2..2^m-1");
    if (k < 1 || k >= n) throw std::invalid_argument("message length must be in 1..n-1");

    // g(x) = prod_{i=1}^{n-k} (x - alpha^i), built low degree first.
    const int parity = n - k;
    generator_.assign(1, 1);
    for (int i = 1; i <= parity; ++i) {
        const std::uint8_t root = field_.alpha_pow(i);
        std::vector<std::uint8_t> next(generator_.size() + 1, 0);
        for (std::size_t j = 0; j < generator_.size(); ++j) {
            next[j + 1] = field_.add(next[j + 1], generator_[j]);
            next[j] = field_.add(next[j], field_.mul(generator_[j], root));
        }
        generator_ = std::move(next);
    }

    size_ = 1;
    for (int i = 0; i < k; ++i) size_ *= field_.order();
    words_.resize(size_ * n_);
    std::vector<std::uint8_t> msg(k);
    for (std::uint64_t idx = 0; idx < size_; ++idx) {
        std::uint64_t v = idx;
        for (int i = k - 1; i >= 0; --i) {
            msg[i] = static_cast<std::uint8_t>(v % field_.order());
            v /= field_.order();
        }
        const auto cw = encode(msg);
        std::copy(cw.begin(), cw.end(), words_.begin() + idx * n_);
    }
}

std::vector<std::uint8_t> MapIndexCodebook::encode(std::span<const std::uint8_t> message) const {
    if (static_cast<int>(message.size()) != k_)
        throw std::invalid_argument("message length mismatch");
    const int n_parent = field_.order() - 1;
    const int k_parent = k_ + (n_parent - n_);
    const int parity = n_parent - k_parent;  // == n_ - k_

    // Pad with leading zeros to the parent message length. The first symbol is
    // the highest-degree coefficient of the message polynomial.
    std::vector<std::uint8_t> padded(k_parent, 0);
    std::copy(message.begin(), message.end(), padded.begin() + (k_parent - k_));

    // Remainder of u(x) * x^parity mod g(x) by synthetic division.
    std::vector<std::uint8_t> rem(parity, 0);  // high degree first
    for (int i = 0; i < k_parent; ++i) {
        const std::uint8_t feedback = field_.add(padded[i], rem.empty() ? 0 : rem[0]);
        for (int j = 0; j < parity - 1; ++j)
            rem[j] = field_.add(rem[j + 1],
                                field_.mul(feedback, generator_[parity - 1 - j]));
        if (parity > 0)
            rem[parity - 1] = field_.mul(feedback, generator_[0]);
    }

    std::vector<std::uint8_t> parent(n_parent);
    std::copy(padded.begin(), padded.end(), parent.begin());
    std::copy(rem.begin(), rem.end(), parent.begin() + k_parent);

    // Drop the padding, then puncture trailing parity down to length n.
    std::vector<std::uint8_t> word(parent.begin() + (k_parent - k_), parent.end());
    while (static_cast<int>(word.size()) > n_) word.pop_back();
    return word;
}

std::span<const std::uint8_t> MapIndexCodebook::codeword(std::uint64_t message_index) const {
    if (message_index >= size_) throw std::out_of_range("message index out of range");
    return {words_.data() + message_index * n_, static_cast<std::size_t>(n_)};
}

bool MapIndexCodebook::contains(std::span<const std::uint8_t> word) const {
    if (static_cast<int>(word.size()) != n_) return false;
    for (std::uint64_t i = 0; i < size_; ++i) {
        const auto cw = codeword(i);
        if (std::equal(cw.begin(), cw.end(), word.begin())) return true;
    }
    return false;
}

HammingSpectrum MapIndexCodebook::hamming_spectrum() const {
    HammingSpectrum spec;
    for (std::uint64_t i = 0; i < size_; ++i) {
        const std::uint8_t* a = words_.data() + i * n_;
        for (std::uint64_t j = i + 1; j < size_; ++j) {
            const std::uint8_t* b = words_.data() + j * n_;
            int d = 0;
            for (int t = 0; t < n_; ++t) d += (a[t] != b[t]);
            ++spec.histogram[d];
            ++spec.total_pairs;
        }
    }
    spec.min_distance = spec.histogram.empty() ? 0 : spec.histogram.begin()->first;
    return spec;
}

std::string MapIndexCodebook::dump() const {
    char head[96];
    std::snprintf(head, sizeof head, "# rs n=%d k=%d m=%d poly=0x%X\n", n_, k_, m(),
                  field_.poly());
    std::string out = head;
    for (std::uint64_t i = 0; i < size_; ++i) {
        const auto cw = codeword(i);
        for (int t = 0; t < n_; ++t) {
            out += std::to_string(int(cw[t]));
            out += t + 1 == n_ ? '\n' : ' ';
        }
    }
    return out;
}

} // namespace mbm
