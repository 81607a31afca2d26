#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mbm {

/// GF(2^m) with log/antilog tables over a primitive polynomial.
///
/// Elements are polynomial-coefficient bit patterns in [0, 2^m): bit j is the
/// coefficient of x^j. Element 0 is the additive identity; the value 2 (= x)
/// generates the multiplicative group, which the constructor verifies.
class Field {
  public:
    /// poly = 0 picks the default primitive polynomial for this m.
    explicit Field(int m, std::uint32_t poly = 0);

    int m() const { return m_; }
    std::uint32_t poly() const { return poly_; }
    int order() const { return size_; }   // 2^m elements
    int units() const { return size_ - 1; }

    static std::uint32_t default_poly(int m);

    std::uint8_t add(std::uint8_t a, std::uint8_t b) const {
        check_element(a);
        check_element(b);
        return a ^ b;
    }
    std::uint8_t mul(std::uint8_t a, std::uint8_t b) const;
    std::uint8_t inv(std::uint8_t a) const;
    /// a^k with 0^0 = 1; k may be negative for a != 0.
    std::uint8_t pow(std::uint8_t a, long long k) const;

    /// alpha^k for the fixed generator alpha = x.
    std::uint8_t alpha_pow(long long k) const;
    /// Discrete log base alpha; a must be non-zero.
    int log(std::uint8_t a) const;

    bool same_field(const Field& other) const {
        return m_ == other.m_ && poly_ == other.poly_;
    }

  private:
    void check_element(std::uint8_t a) const;

    int m_;
    int size_;
    std::uint32_t poly_;
    std::vector<std::uint8_t> exp_;  // exp_[j] = alpha^j, j in [0, 2(2^m-1))
    std::vector<int> log_;           // log_[a] for a in [1, 2^m)
};

/// Value + field reference with operator sugar. Operations on elements of
/// different fields throw.
class FieldElement {
  public:
    FieldElement(const Field& f, std::uint8_t v) : field_(&f), v_(v) {}

    std::uint8_t value() const { return v_; }
    const Field& field() const { return *field_; }

    friend FieldElement operator+(FieldElement a, FieldElement b) {
        a.check_same(b);
        return {*a.field_, a.field_->add(a.v_, b.v_)};
    }
    friend FieldElement operator*(FieldElement a, FieldElement b) {
        a.check_same(b);
        return {*a.field_, a.field_->mul(a.v_, b.v_)};
    }
    FieldElement inv() const { return {*field_, field_->inv(v_)}; }
    FieldElement pow(long long k) const { return {*field_, field_->pow(v_, k)}; }

    friend bool operator==(FieldElement a, FieldElement b) {
        return a.field_->same_field(*b.field_) && a.v_ == b.v_;
    }

  private:
    void check_same(const FieldElement& b) const;

    const Field* field_;
    std::uint8_t v_;
};

} // namespace mbm
