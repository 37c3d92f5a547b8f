#include "mkdv/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mkdv {

PeriodicGrid::PeriodicGrid(double half_length, std::size_t node_count)
    : half_length_(half_length), dx_(0.0) {
    if (!(half_length > 0.0) || !std::isfinite(half_length)) {
        throw std::invalid_argument("grid half-length L must be positive and finite");
    }
    if (node_count < 4) {
        throw std::invalid_argument("grid node count N must be at least 4, got " +
                                    std::to_string(node_count));
    }
    if (node_count % 2 != 0) {
        throw std::invalid_argument("grid node count N must be even, got " +
                                    std::to_string(node_count));
    }
    dx_ = 2.0 * half_length / static_cast<double>(node_count);
    nodes_.resize(node_count);
    for (std::size_t n = 0; n < node_count; ++n) {
        nodes_[n] = -half_length + static_cast<double>(n) * dx_;
    }
}

double PeriodicGrid::wrap_position(double x) const noexcept {
    const double p = period();
    double y = std::fmod(x + half_length_, p);
    if (y < 0.0) y += p;
    if (y >= p) y -= p;
    return y - half_length_;
}

double PeriodicGrid::wrap_displacement(double d) const noexcept {
    return wrap_position(d);
}

PeriodicGrid make_grid(double half_length, std::size_t node_count) {
    return PeriodicGrid(half_length, node_count);
}

std::size_t wrap_index(std::ptrdiff_t n, std::size_t count) noexcept {
    const auto c = static_cast<std::ptrdiff_t>(count);
    std::ptrdiff_t r = n % c;
    if (r < 0) r += c;
    return static_cast<std::size_t>(r);
}

} // namespace mkdv
