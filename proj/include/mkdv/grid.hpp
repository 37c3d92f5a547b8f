#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mkdv {

/// Uniform periodic grid on [-L, L) with nodes x_n = -L + n*dx, n = 0..N-1.
///
/// Immutable after construction. The spectral solver additionally requires
/// N to be a power of two; that check lives there.
class PeriodicGrid {
public:
    PeriodicGrid(double half_length, std::size_t node_count);

    double half_length() const noexcept { return half_length_; }
    double period() const noexcept { return 2.0 * half_length_; }
    double dx() const noexcept { return dx_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    std::span<const double> nodes() const noexcept { return nodes_; }
    double node(std::size_t n) const { return nodes_[n]; }

    /// Maps an arbitrary coordinate into [-L, L).
    double wrap_position(double x) const noexcept;

    /// Minimal-image representative of a displacement, in [-L, L).
    double wrap_displacement(double d) const noexcept;

private:
    double half_length_;
    double dx_;
    std::vector<double> nodes_;
};

/// Validating factory; throws std::invalid_argument for L <= 0, odd N or N < 4.
PeriodicGrid make_grid(double half_length, std::size_t node_count);

/// n mod count in [0, count).
std::size_t wrap_index(std::ptrdiff_t n, std::size_t count) noexcept;

/// Real samples of u at the grid nodes, stamped with their time.
struct FieldState {
    double time = 0.0;
    std::vector<double> values;
};

} // namespace mkdv
