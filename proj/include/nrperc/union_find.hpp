#ifndef NRPERC_UNION_FIND_HPP
#define NRPERC_UNION_FIND_HPP

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace nrperc {

/// Disjoint sets over 0..n-1 with path halving and union by size.
/// Equal sizes attach the larger root id below the smaller one, so the
/// resulting forest depends only on the order of unite() calls.
class UnionFind {
public:
    explicit UnionFind(std::size_t n = 0) { reset(n); }

    void reset(std::size_t n) {
        parent_.resize(n);
        std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
        size_.assign(n, 1);
        components_ = n;
    }

    std::size_t size() const { return parent_.size(); }
    std::size_t component_count() const { return components_; }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Returns true if x and y were in different sets.
    bool unite(std::uint32_t x, std::uint32_t y) {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        if (size_[x] < size_[y] || (size_[x] == size_[y] && y < x)) std::swap(x, y);
        parent_[y] = x;
        size_[x] += size_[y];
        --components_;
        return true;
    }

    std::uint32_t set_size(std::uint32_t x) { return size_[find(x)]; }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
    std::size_t components_ = 0;
};

}  // namespace nrperc

#endif  // NRPERC_UNION_FIND_HPP
