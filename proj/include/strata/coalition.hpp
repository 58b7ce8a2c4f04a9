#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace strata {

// A coalition is a sorted, duplicate-free set of point indices.
// Kept as a flat vector: coalitions are small and iterated far more often
// than they are mutated.
class Coalition {
public:
    Coalition() = default;

    explicit Coalition(std::vector<int> members) : members_(std::move(members)) {
        std::sort(members_.begin(), members_.end());
        for (std::size_t j = 1; j < members_.size(); ++j) {
            if (members_[j] == members_[j - 1])
                throw std::invalid_argument("Coalition: duplicate index " +
                                            std::to_string(members_[j]));
        }
        if (!members_.empty() && members_.front() < 0)
            throw std::invalid_argument("Coalition: negative index");
    }

    Coalition(std::initializer_list<int> members)
        : Coalition(std::vector<int>(members)) {}

    static Coalition empty() { return Coalition(); }

    // All indices [0, n) except `excluded`.
    static Coalition all_but(int n, int excluded) {
        std::vector<int> m;
        m.reserve(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
        for (int j = 0; j < n; ++j)
            if (j != excluded) m.push_back(j);
        Coalition c;
        c.members_ = std::move(m);  // already sorted and unique
        return c;
    }

    static Coalition full(int n) { return all_but(n, -1); }

    bool contains(int i) const {
        return std::binary_search(members_.begin(), members_.end(), i);
    }

    // Returns this coalition with `i` added.
    Coalition with(int i) const {
        Coalition out;
        out.members_.reserve(members_.size() + 1);
        auto pos = std::lower_bound(members_.begin(), members_.end(), i);
        if (pos != members_.end() && *pos == i)
            throw std::invalid_argument("Coalition::with: index already present");
        out.members_.assign(members_.begin(), pos);
        out.members_.push_back(i);
        out.members_.insert(out.members_.end(), pos, members_.end());
        return out;
    }

    int size() const { return static_cast<int>(members_.size()); }
    bool is_empty() const { return members_.empty(); }
    const std::vector<int>& members() const { return members_; }

    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    bool operator==(const Coalition& other) const = default;

private:
    std::vector<int> members_;
};

struct CoalitionHash {
    std::size_t operator()(const Coalition& c) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (int m : c.members()) {
            h ^= static_cast<std::uint64_t>(m) + 0x9e3779b9ULL;
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace strata
