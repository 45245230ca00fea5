#pragma once

#include "rdafem/geometry.hpp"

#include <array>

namespace rdafem {

/// Six-point degree-4 rule on the triangle in barycentric coordinates;
/// weights sum to one, so integrals are area * sum(w_q f(x_q)).
struct TriQuadrature {
    static constexpr int npoints = 6;

    static constexpr std::array<std::array<double, 3>, npoints> bary = {{
        {0.44594849091596488, 0.44594849091596488, 0.10810301816807024},
        {0.44594849091596488, 0.10810301816807024, 0.44594849091596488},
        {0.10810301816807024, 0.44594849091596488, 0.44594849091596488},
        {0.09157621350977074, 0.09157621350977074, 0.81684757298045852},
        {0.09157621350977074, 0.81684757298045852, 0.09157621350977074},
        {0.81684757298045852, 0.09157621350977074, 0.09157621350977074},
    }};

    static constexpr std::array<double, npoints> weights = {
        0.22338158967801146, 0.22338158967801146, 0.22338158967801146,
        0.10995174365532187, 0.10995174365532187, 0.10995174365532187,
    };

    static Vec2 point(const std::array<Vec2, 3>& tri, int q) {
        const auto& l = bary[q];
        return l[0] * tri[0] + l[1] * tri[1] + l[2] * tri[2];
    }
};

}  // namespace rdafem
