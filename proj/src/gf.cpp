#include "mbm/gf.hpp"

#include <stdexcept>

namespace mbm {

std::uint32_t Field::default_poly(int m) {
    // Minimal-weight primitive polynomials, low bit = constant term.
    switch (m) {
        case 1: return 0x3;    // x + 1
        case 2: return 0x7;    // x^2 + x + 1
        case 3: return 0xB;    // x^3 + x + 1
        case 4: return 0x13;   // x^4 + x + 1
        case 5: return 0x25;   // x^5 + x^2 + 1
        case 6: return 0x43;   // x^6 + x + 1
        case 7: return 0x89;   // x^7 + x^3 + 1
        case 8: return 0x11D;  // x^8 + x^4 + x^3 + x^2 + 1
        default: throw std::invalid_argument("field degree must be in 1..8");
    }
}

Field::Field(int m, std::uint32_t poly) : m_(m) {
    if (m < 1 || m > 8) throw std::invalid_argument("field degree must be in 1..8");
    size_ = 1 << m;
    poly_ = poly == 0 ? default_poly(m) : poly;
    if ((poly_ >> m) != 1u)
        throw std::invalid_argument("polynomial degree does not match field degree");
    if ((poly_ & 1u) == 0)
        throw std::invalid_argument("polynomial must have a non-zero constant term");

    // Walk powers of x; a full cycle of length 2^m - 1 visiting every non-zero
    // element is exactly the primitivity condition.
    log_.assign(size_, -1);
    exp_.assign(2 * (size_ - 1), 0);
    std::uint32_t b = 1;
    for (int j = 0; j < size_ - 1; ++j) {
        if (log_[b] != -1)
            throw std::invalid_argument("polynomial is not primitive");
        log_[b] = j;
        exp_[j] = static_cast<std::uint8_t>(b);
        b <<= 1;
        if (b & size_) b ^= poly_;
    }
    if (b != 1)
        throw std::invalid_argument("polynomial is not primitive");
    for (int a = 1; a < size_; ++a)
        if (log_[a] == -1) throw std::invalid_argument("polynomial is not primitive");
    for (int j = 0; j < size_ - 1; ++j) exp_[j + size_ - 1] = exp_[j];
}

void Field::check_element(std::uint8_t a) const {
    if (a >= size_) throw std::out_of_range("value is not an element of this field");
}

std::uint8_t Field::mul(std::uint8_t a, std::uint8_t b) const {
    check_element(a);
    check_element(b);
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
}

std::uint8_t Field::inv(std::uint8_t a) const {
    check_element(a);
    if (a == 0) throw std::domain_error("zero has no multiplicative inverse");
    return exp_[(size_ - 1 - log_[a]) % (size_ - 1)];
}

std::uint8_t Field::pow(std::uint8_t a, long long k) const {
    check_element(a);
    if (a == 0) {
        if (k < 0) throw std::domain_error("zero has no multiplicative inverse");
        return k == 0 ? 1 : 0;
    }
    const int n = size_ - 1;
    long long e = (static_cast<long long>(log_[a]) * (k % n)) % n;
    if (e < 0) e += n;
    return exp_[e];
}

std::uint8_t Field::alpha_pow(long long k) const {
    const int n = size_ - 1;
    long long e = k % n;
    if (e < 0) e += n;
    return exp_[e];
}

int Field::log(std::uint8_t a) const {
    check_element(a);
    if (a == 0) throw std::domain_error("zero has no discrete logarithm");
    return log_[a];
}

void FieldElement::check_same(const FieldElement& b) const {
    if (!field_->same_field(*b.field_))
        throw std::invalid_argument("elements belong to different fields");
}

} // namespace mbm
