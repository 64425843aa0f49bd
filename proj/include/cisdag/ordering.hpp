#pragma once

// A variable ordering is a bijection sigma: positions -> variable indices.
// perm()[p] is the variable placed at position p; both sides are 0-based in
// the library, 1-based only at the text interfaces.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "cisdag/errors.hpp"

namespace cisdag {

class Ordering {
public:
    Ordering() = default;

    explicit Ordering(std::vector<std::size_t> perm) : perm_(std::move(perm)) {
        std::vector<bool> seen(perm_.size(), false);
        for (std::size_t v : perm_) {
            if (v >= perm_.size() || seen[v])
                throw DimensionMismatch("ordering is not a permutation of 0.." +
                                        std::to_string(perm_.size() ? perm_.size() - 1 : 0));
            seen[v] = true;
        }
    }

    static Ordering identity(std::size_t m) {
        std::vector<std::size_t> p(m);
        std::iota(p.begin(), p.end(), std::size_t{0});
        return Ordering(std::move(p));
    }

    std::size_t size() const { return perm_.size(); }
    std::size_t operator[](std::size_t pos) const { return perm_[pos]; }
    const std::vector<std::size_t>& perm() const { return perm_; }

    // position_of(v): inverse map, the position variable v occupies.
    std::vector<std::size_t> positions() const {
        std::vector<std::size_t> pos(perm_.size());
        for (std::size_t p = 0; p < perm_.size(); ++p) pos[perm_[p]] = p;
        return pos;
    }

    Ordering inverse() const { return Ordering(positions()); }

    bool operator==(const Ordering& o) const { return perm_ == o.perm_; }
    bool operator<(const Ordering& o) const { return perm_ < o.perm_; }

private:
    std::vector<std::size_t> perm_;
};

} // namespace cisdag
