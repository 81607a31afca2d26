#include "mbm/squaring.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>

namespace mbm {

namespace {

long long vec_sq_dist(const IntVec& a, const IntVec& b) {
    long long d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const long long t = a[i] - b[i];
        d += t * t;
    }
    return d;
}

std::optional<long long> set_min_sq_dist(const std::vector<IntVec>& v) {
    if (v.size() < 2) return std::nullopt;
    long long best = std::numeric_limits<long long>::max();
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            best = std::min(best, vec_sq_dist(v[i], v[j]));
    return best;
}

} // namespace

std::shared_ptr<PartitionNode> PartitionNode::scalars(IntVec values) {
    if (values.empty()) throw std::invalid_argument("scalar set must be non-empty");
    std::sort(values.begin(), values.end());
    if (std::adjacent_find(values.begin(), values.end()) != values.end())
        throw std::invalid_argument("scalar set has repeated elements");
    auto node = std::shared_ptr<PartitionNode>(new PartitionNode(Kind::Scalars, 1));
    node->elems_.reserve(values.size());
    for (int v : values) node->elems_.push_back({v});
    return node;
}

std::shared_ptr<PartitionNode> PartitionNode::product(std::shared_ptr<PartitionNode> a,
                                                      std::shared_ptr<PartitionNode> b) {
    if (!a || !b) throw std::invalid_argument("product of null nodes");
    if (a->dim_ != b->dim_) throw std::invalid_argument("product factors differ in dimension");
    auto node = std::shared_ptr<PartitionNode>(new PartitionNode(Kind::Product, 2 * a->dim_));
    node->src_a_ = a;
    node->src_b_ = b;
    node->elems_.reserve(a->elems_.size() * b->elems_.size());
    for (const auto& x : a->elems_)
        for (const auto& y : b->elems_) {
            IntVec xy;
            xy.reserve(x.size() + y.size());
            xy.insert(xy.end(), x.begin(), x.end());
            xy.insert(xy.end(), y.begin(), y.end());
            node->elems_.push_back(std::move(xy));
        }
    return node;
}

std::shared_ptr<PartitionNode> PartitionNode::union_of(std::shared_ptr<PartitionNode> a,
                                                       std::shared_ptr<PartitionNode> b) {
    auto node = std::shared_ptr<PartitionNode>(new PartitionNode(Kind::Union, a->dim_));
    node->part_a_ = a;
    node->part_b_ = b;
    node->elems_.reserve(a->elems_.size() + b->elems_.size());
    node->elems_.insert(node->elems_.end(), a->elems_.begin(), a->elems_.end());
    node->elems_.insert(node->elems_.end(), b->elems_.begin(), b->elems_.end());
    return node;
}

bool PartitionNode::splittable() const {
    if (elems_.size() < 2) return false;
    if (kind_ == Kind::Product) return src_a_->splittable() && src_b_->splittable();
    return true;
}

std::pair<std::shared_ptr<PartitionNode>, std::shared_ptr<PartitionNode>>
PartitionNode::split() {
    if (split_done_) return {part_a_, part_b_};
    if (!splittable()) throw std::logic_error("node has no two-way split");

    switch (kind_) {
        case Kind::Scalars: {
            // Elements are sorted; alternate ranks.
            IntVec even, odd;
            for (std::size_t i = 0; i < elems_.size(); ++i)
                (i % 2 == 0 ? even : odd).push_back(elems_[i][0]);
            part_a_ = scalars(std::move(even));
            part_b_ = scalars(std::move(odd));
            break;
        }
        case Kind::Product: {
            auto [a0, a1] = src_a_->split();
            auto [b0, b1] = src_b_->split();
            part_a_ = union_of(product(a0, b0), product(a1, b1));
            part_b_ = union_of(product(a0, b1), product(a1, b0));
            break;
        }
        case Kind::Union:
            break;  // parts already set
    }
    split_done_ = true;
    return {part_a_, part_b_};
}

std::optional<long long> PartitionNode::min_sq_dist() const { return set_min_sq_dist(elems_); }

std::vector<IntVec> square_union(const std::vector<IntVec>& t0, const std::vector<IntVec>& t1) {
    if (t0.empty() || t1.empty()) throw std::invalid_argument("subsets must be non-empty");
    const std::size_t dim = t0.front().size();
    std::set<IntVec> seen;
    for (const auto& v : t0) {
        if (v.size() != dim) throw std::invalid_argument("mixed dimensions");
        if (!seen.insert(v).second) throw std::invalid_argument("repeated element");
    }
    for (const auto& v : t1) {
        if (v.size() != dim) throw std::invalid_argument("mixed dimensions");
        if (!seen.insert(v).second) throw std::invalid_argument("subsets overlap");
    }
    std::vector<IntVec> u;
    u.reserve(t0.size() * t0.size() + t1.size() * t1.size());
    for (const auto* part : {&t0, &t1})
        for (const auto& x : *part)
            for (const auto& y : *part) {
                IntVec xy;
                xy.reserve(2 * dim);
                xy.insert(xy.end(), x.begin(), x.end());
                xy.insert(xy.end(), y.begin(), y.end());
                u.push_back(std::move(xy));
            }
    return u;
}

IntVec pam_levels(int M) {
    if (M < 2 || (M & (M - 1)) != 0)
        throw std::invalid_argument("amplitude count must be a power of two >= 2");
    IntVec v;
    for (int a = -(M - 1); a <= M - 1; a += 2) v.push_back(a);
    return v;
}

int SymbolConstellation::log2_cardinality(int M, int levels) {
    if (levels < 1 || levels > 6) throw std::invalid_argument("levels must be in 1..6");
    if (M < 2 || (M & (M - 1)) != 0)
        throw std::invalid_argument("amplitude count must be a power of two >= 2");
    if (M == 2) return 1;
    int p = 0;
    while ((1 << p) < M) ++p;  // M = 2^p, p >= 2
    const int log2_size = (1 << levels) * (p - 2) + levels + 2;
    if (log2_size > 24) throw std::invalid_argument("symbol set would be too large to build");
    return log2_size;
}

SymbolConstellation SymbolConstellation::build(int M, int levels) {
    const int expected_log2 = log2_cardinality(M, levels);  // validates args
    std::vector<std::shared_ptr<PartitionNode>> branches{PartitionNode::scalars(pam_levels(M))};

    for (int stage = 0; stage < levels; ++stage) {
        std::vector<std::shared_ptr<PartitionNode>> next;
        next.reserve(2 * branches.size());
        for (auto& b : branches) {
            if (b->splittable()) {
                auto [p0, p1] = b->split();
                next.push_back(PartitionNode::product(p0, p0));
                next.push_back(PartitionNode::product(p1, p1));
            } else {
                next.push_back(PartitionNode::product(b, b));
            }
        }
        branches = std::move(next);
    }

    SymbolConstellation c;
    c.M_ = M;
    c.levels_ = levels;

    std::vector<IntVec> real_vectors;
    std::optional<long long> branch_min;
    for (const auto& b : branches) {
        real_vectors.insert(real_vectors.end(), b->elements().begin(), b->elements().end());
        if (auto d = b->min_sq_dist())
            branch_min = branch_min ? std::min(*branch_min, *d) : *d;
    }
    c.branch_min_dist_ = branch_min;

    std::sort(real_vectors.begin(), real_vectors.end());
    if (std::adjacent_find(real_vectors.begin(), real_vectors.end()) != real_vectors.end())
        throw std::logic_error("constructed set has duplicate vectors");
    if (real_vectors.size() != (std::size_t{1} << expected_log2))
        throw std::logic_error("constructed set size does not match the cardinality formula");

    const auto union_min = set_min_sq_dist(real_vectors);
    c.min_dist_ = union_min.value_or(0);

    // Pair consecutive real coordinates into complex symbols.
    c.vectors_.reserve(real_vectors.size());
    for (const auto& rv : real_vectors) {
        GaussVec gv(rv.size() / 2);
        for (std::size_t i = 0; i < gv.size(); ++i) gv[i] = {rv[2 * i], rv[2 * i + 1]};
        c.vectors_.push_back(std::move(gv));
    }
    return c;
}

std::string SymbolConstellation::dump() const {
    char head[96];
    std::snprintf(head, sizeof head, "# squaring M=%d L=%d size=%zu dmin=%lld\n", M_, levels_,
                  vectors_.size(), min_dist_);
    std::string out = head;
    for (const auto& v : vectors_) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            out += std::to_string(v[i].re);
            out += ':';
            out += std::to_string(v[i].im);
            out += i + 1 == v.size() ? '\n' : ' ';
        }
    }
    return out;
}

} // namespace mbm
