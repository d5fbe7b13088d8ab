#pragma once

#include <cstddef>
#include <string>

#include "cosym/errors.hpp"

namespace cosym {

/// Global Darboux chart on R x R^{2n}: coordinates ordered (t, q^1..q^n,
/// p_1..p_n). Index 0 is always time; q^i sits at index i, p_i at index n+i.
/// All modules share this one layout.
struct DarbouxChart {
    std::size_t n = 1;
    std::string name = "chart";

    std::size_t dim() const { return 2 * n + 1; }
    std::size_t q_index(std::size_t i) const { return 1 + i; }         // i in [0, n)
    std::size_t p_index(std::size_t i) const { return 1 + n + i; }     // i in [0, n)

    std::string label(std::size_t k) const {
        if (k == 0) return "t";
        if (k <= n) return "q" + std::to_string(k);
        return "p" + std::to_string(k - n);
    }

    void check_point(std::size_t size) const {
        if (size != dim())
            throw DimensionError("point has dimension " + std::to_string(size) +
                                 ", chart '" + name + "' needs " +
                                 std::to_string(dim()));
    }

    bool operator==(const DarbouxChart& o) const { return n == o.n; }
};

} // namespace cosym
