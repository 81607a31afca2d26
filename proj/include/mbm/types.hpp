#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace mbm {

/// Gaussian integer. Constellation points and block symbols are kept in exact
/// integer form so that squared distances and spectra are exact.
struct GaussInt {
    int re = 0;
    int im = 0;

    friend GaussInt operator+(GaussInt a, GaussInt b) { return {a.re + b.re, a.im + b.im}; }
    friend GaussInt operator-(GaussInt a, GaussInt b) { return {a.re - b.re, a.im - b.im}; }
    friend GaussInt operator-(GaussInt a) { return {-a.re, -a.im}; }
    friend bool operator==(GaussInt a, GaussInt b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(GaussInt a, GaussInt b) { return !(a == b); }
    friend bool operator<(GaussInt a, GaussInt b) {
        return a.re != b.re ? a.re < b.re : a.im < b.im;
    }

    long long norm2() const {
        return static_cast<long long>(re) * re + static_cast<long long>(im) * im;
    }
    std::complex<double> to_complex() const { return {double(re), double(im)}; }
};

inline long long sq_dist(GaussInt a, GaussInt b) { return (a - b).norm2(); }

using IntVec = std::vector<int>;
using GaussVec = std::vector<GaussInt>;

} // namespace mbm
