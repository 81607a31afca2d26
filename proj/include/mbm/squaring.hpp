#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mbm/types.hpp"

namespace mbm {

/// Node of a binary set-partition tree over integer vectors.
///
/// Scalar nodes split by alternating elements in sorted order, which multiplies
/// the intra-subset minimum squared distance by four on amplitude grids.
/// A node formed as a product A x B splits into
///   (A0 x B0) u (A1 x B1)  and  (A0 x B1) u (A1 x B0),
/// which doubles the minimum squared distance per level. Nodes formed as a
/// union split back into their two parts. Singletons do not split.
class PartitionNode {
  public:
    static std::shared_ptr<PartitionNode> scalars(IntVec values);
    static std::shared_ptr<PartitionNode> product(std::shared_ptr<PartitionNode> a,
                                                  std::shared_ptr<PartitionNode> b);

    const std::vector<IntVec>& elements() const { return elems_; }
    int dimension() const { return dim_; }
    std::size_t size() const { return elems_.size(); }
    bool splittable() const;

    /// The two-way split described above; computed once and cached.
    std::pair<std::shared_ptr<PartitionNode>, std::shared_ptr<PartitionNode>> split();

    /// Minimum pairwise squared Euclidean distance, brute force. Empty for
    /// nodes with fewer than two elements.
    std::optional<long long> min_sq_dist() const;

  private:
    enum class Kind { Scalars, Product, Union };

    PartitionNode(Kind kind, int dim) : kind_(kind), dim_(dim) {}
    static std::shared_ptr<PartitionNode> union_of(std::shared_ptr<PartitionNode> a,
                                                   std::shared_ptr<PartitionNode> b);

    Kind kind_;
    int dim_;
    std::vector<IntVec> elems_;
    std::shared_ptr<PartitionNode> src_a_, src_b_;    // product factors
    std::shared_ptr<PartitionNode> part_a_, part_b_;  // cached split / union parts
    bool split_done_ = false;
};

/// One squaring step: U = T0^2 u T1^2 for disjoint subsets T0, T1 of a common
/// parent set. min d(U) = min(d over {T0,T1} intra, 2 * d(T0 u T1)).
std::vector<IntVec> square_union(const std::vector<IntVec>& t0, const std::vector<IntVec>& t1);

/// Amplitude levels {+/-1, +/-3, ..., +/-(M-1)}; M must be a power of two >= 2.
IntVec pam_levels(int M);

/// Multilevel squaring-construction symbol set.
///
/// Starting from the M-point amplitude grid, each of `levels` stages splits
/// every branch in two and squares each part, doubling the dimension. The
/// union of the leaf branches, with consecutive real coordinates paired into
/// complex numbers, is the symbol constellation.
class SymbolConstellation {
  public:
    static SymbolConstellation build(int M, int levels);

    int pam_order() const { return M_; }
    int levels() const { return levels_; }
    int complex_dim() const { return 1 << (levels_ - 1); }
    std::size_t size() const { return vectors_.size(); }
    const std::vector<GaussVec>& vectors() const { return vectors_; }

    /// Brute-force minimum squared distance over the whole set.
    long long min_sq_dist() const { return min_dist_; }
    /// Minimum over leaf branches of the intra-branch distance; empty when all
    /// leaves are singletons. The union minimum can be smaller.
    std::optional<long long> branch_min_sq_dist() const { return branch_min_dist_; }

    /// log2 of the predicted cardinality: 2^levels * M^(2^levels) / 4^(2^levels - 1)
    /// for M >= 4, and 2 for M = 2. The constructor checks the built set
    /// against this.
    static int log2_cardinality(int M, int levels);

    std::string dump() const;

  private:
    SymbolConstellation() = default;

    int M_ = 0;
    int levels_ = 0;
    std::vector<GaussVec> vectors_;
    long long min_dist_ = 0;
    std::optional<long long> branch_min_dist_;
};

} // namespace mbm
