#include "mbm/link_analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#include "mbm/parallel.hpp"

namespace mbm {

namespace {

using cd = std::complex<double>;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct SparseEntry {
    int row;
    GaussInt val;
};

/// Difference of two blocks as per-use sparse columns, at most two non-zeros
/// each, rows ascending.
struct SparseDiff {
    std::array<std::array<SparseEntry, 2>, MAX_BLOCK_USES> cols;
    std::array<int, MAX_BLOCK_USES> nnz;
    int n_uses = 0;

    void set_col(int t, int ia, int ib, GaussInt sa, GaussInt sb) {
        if (ia == ib) {
            const GaussInt d = sa - sb;
            if (d.re == 0 && d.im == 0) {
                nnz[t] = 0;
            } else {
                cols[t][0] = {ia, d};
                nnz[t] = 1;
            }
        } else if (ia < ib) {
            cols[t][0] = {ia, sa};
            cols[t][1] = {ib, -sb};
            nnz[t] = 2;
        } else {
            cols[t][0] = {ib, -sb};
            cols[t][1] = {ia, sa};
            nnz[t] = 2;
        }
    }

    void build(const PackedPairSweep& packed, std::uint64_t a, std::uint64_t b) {
        n_uses = packed.n_uses;
        const std::uint8_t* ia = packed.idx.data() + a * n_uses;
        const std::uint8_t* ib = packed.idx.data() + b * n_uses;
        const std::uint8_t* va = packed.val.data() + a * n_uses;
        const std::uint8_t* vb = packed.val.data() + b * n_uses;
        for (int t = 0; t < n_uses; ++t)
            set_col(t, ia[t], ib[t], packed.values[va[t]], packed.values[vb[t]]);
    }

    void build(const MbmBlock& a, const MbmBlock& b) {
        n_uses = static_cast<int>(a.map_indices.size());
        for (int t = 0; t < n_uses; ++t)
            set_col(t, a.map_indices[t], b.map_indices[t], a.symbols[t], b.symbols[t]);
    }
};

struct GaussLL {
    long long re = 0;
    long long im = 0;
};

/// conj(a) * b over the Gaussian integers.
GaussLL conj_mul(GaussInt a, GaussInt b) {
    return {static_cast<long long>(a.re) * b.re + static_cast<long long>(a.im) * b.im,
            static_cast<long long>(a.re) * b.im - static_cast<long long>(a.im) * b.re};
}

constexpr int KEY_LEN = MAX_BLOCK_USES * (MAX_BLOCK_USES + 1);  // re,im per entry

/// Exact integer Gram matrix of a sparse difference, upper triangle row-major.
/// Unused slots stay zero, so fixed-length compare and hash are safe.
struct GramKey {
    std::array<std::int16_t, KEY_LEN> v{};

    friend bool operator==(const GramKey& a, const GramKey& b) { return a.v == b.v; }
    friend bool operator<(const GramKey& a, const GramKey& b) { return a.v < b.v; }
};

static_assert(sizeof(GramKey) % 8 == 0);

struct GramKeyHash {
    std::size_t operator()(const GramKey& k) const {
        std::uint64_t h = 0x9E3779B97F4A7C15ull;
        const char* p = reinterpret_cast<const char*>(k.v.data());
        for (std::size_t i = 0; i < sizeof(k.v); i += 8) {
            std::uint64_t w;
            std::memcpy(&w, p + i, 8);
            h = mix64(h ^ w);
        }
        return static_cast<std::size_t>(h);
    }
};

GramKey gram_key(const SparseDiff& d) {
    GramKey key;
    int slot = 0;
    for (int u = 0; u < d.n_uses; ++u)
        for (int w = u; w < d.n_uses; ++w) {
            GaussLL g{};
            for (int x = 0; x < d.nnz[u]; ++x)
                for (int y = 0; y < d.nnz[w]; ++y)
                    if (d.cols[u][x].row == d.cols[w][y].row) {
                        const GaussLL p = conj_mul(d.cols[u][x].val, d.cols[w][y].val);
                        g.re += p.re;
                        g.im += p.im;
                    }
            key.v[slot++] = static_cast<std::int16_t>(g.re);
            key.v[slot++] = static_cast<std::int16_t>(g.im);
        }
    return key;
}

void gram_to_matrix(const GramKey& key, int n, cd* a) {
    int slot = 0;
    for (int u = 0; u < n; ++u)
        for (int w = u; w < n; ++w) {
            const cd g{double(key.v[slot]), double(key.v[slot + 1])};
            slot += 2;
            a[u * n + w] = g;
            a[w * n + u] = std::conj(g);
        }
}

int rank_of(const std::vector<double>& sigma2, double tol) {
    double top = 0.0;
    for (double s : sigma2) top = std::max(top, s);
    if (top <= 0.0) return 0;
    int r = 0;
    for (double s : sigma2) r += (s > tol * top);
    return r;
}

/// Gram entries are stored as int16; valid while 16 * cmax^2 fits, i.e. every
/// symbol coordinate magnitude is at most 45.
void check_gram_range(const PackedPairSweep& packed) {
    long long cmax = 0;
    for (const GaussInt& v : packed.values) {
        cmax = std::max(cmax, static_cast<long long>(std::abs(v.re)));
        cmax = std::max(cmax, static_cast<long long>(std::abs(v.im)));
    }
    if (16 * cmax * cmax > 32767)
        throw std::length_error("symbol coordinates too large for the packed Gram key");
}

/// Rank <= 1 iff every non-zero column shares the row support of the first one
/// and the 2x2 cross determinant vanishes (exact, over Gaussian integers).
bool sparse_rank_is_one(const SparseDiff& d) {
    int first = -1;
    for (int t = 0; t < d.n_uses; ++t) {
        if (d.nnz[t] == 0) continue;
        if (first < 0) {
            first = t;
            continue;
        }
        if (d.nnz[t] != d.nnz[first]) return false;
        for (int e = 0; e < d.nnz[t]; ++e)
            if (d.cols[t][e].row != d.cols[first][e].row) return false;
        if (d.nnz[t] == 2) {
            const GaussInt a0 = d.cols[first][0].val, a1 = d.cols[first][1].val;
            const GaussInt b0 = d.cols[t][0].val, b1 = d.cols[t][1].val;
            const long long re1 = static_cast<long long>(a0.re) * b1.re -
                                  static_cast<long long>(a0.im) * b1.im;
            const long long im1 = static_cast<long long>(a0.re) * b1.im +
                                  static_cast<long long>(a0.im) * b1.re;
            const long long re2 = static_cast<long long>(a1.re) * b0.re -
                                  static_cast<long long>(a1.im) * b0.im;
            const long long im2 = static_cast<long long>(a1.re) * b0.im +
                                  static_cast<long long>(a1.im) * b0.re;
            if (re1 != re2 || im1 != im2) return false;
        }
    }
    return first >= 0;
}

struct ClassAccum {
    std::uint64_t count = 0;
    std::uint64_t dbits = 0;
};

} // namespace

std::vector<double> hermitian_eigenvalues(cd* a, int n) {
    const double eps2 = 1e-26;
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = 0.0, diag = 0.0;
        for (int p = 0; p < n; ++p) {
            diag += a[p * n + p].real() * a[p * n + p].real();
            for (int q = p + 1; q < n; ++q) off += std::norm(a[p * n + q]);
        }
        if (off == 0.0 || off <= eps2 * (diag + off)) break;

        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                const cd apq = a[p * n + q];
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const double app = a[p * n + p].real();
                const double aqq = a[q * n + q].real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t =
                    (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cd f = apq / mag;
                const cd sf = s * std::conj(f);
                const cd cf = c * std::conj(f);

                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const cd akp = a[k * n + p];
                    const cd akq = a[k * n + q];
                    const cd nkp = c * akp - sf * akq;
                    const cd nkq = s * akp + cf * akq;
                    a[k * n + p] = nkp;
                    a[p * n + k] = std::conj(nkp);
                    a[k * n + q] = nkq;
                    a[q * n + k] = std::conj(nkq);
                }
                a[p * n + p] = app - t * mag;
                a[q * n + q] = aqq + t * mag;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
    }
    std::vector<double> ev(n);
    for (int p = 0; p < n; ++p) ev[p] = a[p * n + p].real();
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

GaussVec diff_dense(const MbmSignalSet& set, std::uint64_t a, std::uint64_t b) {
    GaussVec da = set.dense(a);
    const GaussVec db = set.dense(b);
    for (std::size_t i = 0; i < da.size(); ++i) da[i] = da[i] - db[i];
    return da;
}

PairGeometry pair_geometry(const MbmSignalSet& set, std::uint64_t a, std::uint64_t b,
                           double tol) {
    if (a >= set.size() || b >= set.size()) throw std::out_of_range("block label out of range");
    if (set.n_uses() > MAX_BLOCK_USES) throw std::length_error("block length unsupported");
    SparseDiff d;
    d.build(set.block(a), set.block(b));
    std::array<cd, MAX_BLOCK_USES * MAX_BLOCK_USES> m{};
    gram_to_matrix(gram_key(d), set.n_uses(), m.data());
    PairGeometry g;
    g.sigma2 = hermitian_eigenvalues(m.data(), set.n_uses());
    g.rank = rank_of(g.sigma2, tol);
    g.bit_distance = std::popcount(a ^ b);
    return g;
}

double pep_bound(const PairGeometry& g, double rho, int n_r, double energy_scale) {
    if (rho < 0.0 || n_r < 1 || energy_scale <= 0.0)
        throw std::invalid_argument("bad pairwise bound arguments");
    double logsum = 0.0;
    for (double s : g.sigma2) logsum += std::log1p(energy_scale * s * rho * 0.25);
    return 0.5 * std::exp(-double(n_r) * logsum);
}

LinkSweep link_sweep(const MbmSignalSet& set, const std::vector<double>& snr_db_grid, int n_r,
                     const LinkAnalysisOptions& opts) {
    if (n_r < 1) throw std::invalid_argument("need at least one receive antenna");
    const std::uint64_t n = set.size();
    if (n > opts.set_cap) throw std::length_error("signal set exceeds the pair-sweep size cap");
    if (set.n_uses() > MAX_BLOCK_USES) throw std::length_error("block length unsupported");

    LinkSweep out;
    const std::uint64_t total = n < 2 ? 0 : n * (n - 1) / 2;
    out.ranks.total_pairs = total;
    out.bound.snr_db = snr_db_grid;
    out.bound.ber_bound.assign(snr_db_grid.size(), 0.0);
    out.bound.rank1_part.assign(snr_db_grid.size(), 0.0);
    out.bound.rest_part.assign(snr_db_grid.size(), 0.0);
    if (total == 0) return out;

    const PackedPairSweep packed(set);
    check_gram_range(packed);
    const unsigned nw = resolve_workers(opts.workers);
    std::vector<std::unordered_map<GramKey, ClassAccum, GramKeyHash>> parts(nw);

    parallel_ranges(total, nw, [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
        auto& acc = parts[w];
        SparseDiff d;
        std::uint64_t i, j;
        unrank_pair(begin, n, i, j);
        for (std::uint64_t p = begin; p < end; ++p) {
            d.build(packed, i, j);
            ClassAccum& c = acc[gram_key(d)];
            ++c.count;
            c.dbits += std::popcount(i ^ j);
            if (++j == n) {
                ++i;
                j = i + 1;
            }
        }
    });

    // Class-ordered merge keeps every later reduction independent of the
    // worker count.
    std::map<GramKey, ClassAccum> merged;
    for (auto& part : parts) {
        for (const auto& [key, acc] : part) {
            ClassAccum& c = merged[key];
            c.count += acc.count;
            c.dbits += acc.dbits;
        }
        part.clear();
    }

    const double scale = opts.normalize_energy ? 1.0 / set.mean_energy_per_use() : 1.0;
    const int nu = set.n_uses();
    const std::size_t ng = snr_db_grid.size();
    std::vector<KahanSum> acc_all(ng), acc_r1(ng), acc_rest(ng);
    std::vector<double> rho(ng);
    for (std::size_t g = 0; g < ng; ++g) rho[g] = std::pow(10.0, snr_db_grid[g] / 10.0);

    out.classes.reserve(merged.size());
    for (const auto& [key, acc] : merged) {
        GeometryClass gc;
        std::array<cd, MAX_BLOCK_USES * MAX_BLOCK_USES> m{};
        gram_to_matrix(key, nu, m.data());
        gc.sigma2 = hermitian_eigenvalues(m.data(), nu);
        gc.rank = rank_of(gc.sigma2, opts.tol);
        gc.pair_count = acc.count;
        gc.bit_distance_sum = acc.dbits;

        out.ranks.histogram[gc.rank] += gc.pair_count;
        if (gc.rank == 1) out.ranks.rank_one_pairs += gc.pair_count;

        for (std::size_t g = 0; g < ng; ++g) {
            double logsum = 0.0;
            for (double s : gc.sigma2) logsum += std::log1p(scale * s * rho[g] * 0.25);
            const double term =
                0.5 * std::exp(-double(n_r) * logsum) * double(gc.bit_distance_sum);
            acc_all[g].add(term);
            (gc.rank == 1 ? acc_r1[g] : acc_rest[g]).add(term);
        }
        out.classes.push_back(std::move(gc));
    }

    out.ranks.min_rank = out.ranks.histogram.empty() ? 0 : out.ranks.histogram.begin()->first;

    const double norm = 2.0 / (double(n) * set.bits_per_block());
    for (std::size_t g = 0; g < ng; ++g) {
        out.bound.ber_bound[g] = norm * acc_all[g].value();
        out.bound.rank1_part[g] = norm * acc_r1[g].value();
        out.bound.rest_part[g] = norm * acc_rest[g].value();
    }
    return out;
}

RankProfile rank_profile(const MbmSignalSet& set, const LinkAnalysisOptions& opts) {
    return link_sweep(set, {}, 1, opts).ranks;
}

BoundCurve union_bound(const MbmSignalSet& set, const std::vector<double>& snr_db_grid,
                       int n_r, const LinkAnalysisOptions& opts) {
    return link_sweep(set, snr_db_grid, n_r, opts).bound;
}

RankProfile ranks_at_tolerance(const LinkSweep& sweep, double tol) {
    RankProfile out;
    out.total_pairs = sweep.ranks.total_pairs;
    for (const auto& gc : sweep.classes) {
        const int r = rank_of(gc.sigma2, tol);
        out.histogram[r] += gc.pair_count;
        if (r == 1) out.rank_one_pairs += gc.pair_count;
    }
    out.min_rank = out.histogram.empty() ? 0 : out.histogram.begin()->first;
    return out;
}

std::uint64_t rank_one_pairs_structural(const MbmSignalSet& set) {
    if (set.n_uses() > MAX_BLOCK_USES) throw std::length_error("block length unsupported");
    const PackedPairSweep packed(set);
    const std::uint64_t n = set.size();
    std::uint64_t count = 0;
    SparseDiff d;
    for (std::uint64_t i = 0; i < n; ++i)
        for (std::uint64_t j = i + 1; j < n; ++j) {
            d.build(packed, i, j);
            if (sparse_rank_is_one(d)) ++count;
        }
    return count;
}

} // namespace mbm
