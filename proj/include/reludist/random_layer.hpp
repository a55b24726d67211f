#pragma once

#include "reludist/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace reludist {

inline constexpr std::size_t default_element_cap = std::size_t{ 1 } << 28;

/// Entry (i, j) of the layer generated from `seed` with `m` rows: a standard normal draw
/// keyed on (seed, i * 2^32 + j), scaled by 1/sqrt(m). Independent of the column count.
[[nodiscard]] double layer_entry(std::uint64_t seed, std::size_t row, std::size_t col, std::size_t m) noexcept;

/// An m x n matrix with i.i.d. N(0, 1/m) entries, stored row-major. Immutable once built.
class gaussian_layer {
  public:
    /// Materializes the layer for (n, m, seed). Throws size_overflow_error when m * n exceeds `element_cap`.
    [[nodiscard]] static gaussian_layer sample(std::size_t n, std::size_t m, std::uint64_t seed,
                                               std::size_t element_cap = default_element_cap);

    /// Wraps explicit entries (row-major), e.g. hand-written matrices in tests.
    [[nodiscard]] static gaussian_layer from_entries(std::size_t m, std::size_t n, std::vector<double> entries,
                                                     std::uint64_t seed = 0);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::span<const double> entries() const noexcept { return entries_; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept { return { entries_.data() + i * cols_, cols_ }; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * cols_ + j]; }

    friend bool operator==(const gaussian_layer &, const gaussian_layer &) = default;

  private:
    gaussian_layer(std::size_t m, std::size_t n, std::uint64_t seed, std::vector<double> entries) :
        rows_(m), cols_(n), seed_(seed), entries_(std::move(entries)) {}

    std::size_t rows_;
    std::size_t cols_;
    std::uint64_t seed_;
    std::vector<double> entries_;
};

[[nodiscard]] inline gaussian_layer sample_layer(std::size_t n, std::size_t m, std::uint64_t seed,
                                                 std::size_t element_cap = default_element_cap) {
    return gaussian_layer::sample(n, m, seed, element_cap);
}

[[nodiscard]] inline double relu(const double t) noexcept { return t > 0.0 ? t : 0.0; }

/// Pre-activation M x, summed over columns in ascending order.
[[nodiscard]] real_vector linear_forward(const gaussian_layer &layer, std::span<const double> x);

/// relu(M x) entrywise.
[[nodiscard]] real_vector relu_forward(const gaussian_layer &layer, std::span<const double> x);

/// ||relu(Mx) - relu(My)||^2 for one realization, summed over rows in ascending order.
[[nodiscard]] double sq_dist_realization(const gaussian_layer &layer, std::span<const double> x, std::span<const double> y);

/// Sum of squares in ascending index order.
[[nodiscard]] double squared_norm(std::span<const double> v) noexcept;

/// Squared distance between two output vectors in ascending index order.
[[nodiscard]] double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

/// Pre-activations M x and M y for the layer (seed, m) without materializing it. Only columns
/// where x or y is nonzero are generated; the result is bitwise identical to linear_forward
/// on gaussian_layer::sample(n, m, seed).
struct pair_projection {
    real_vector mx;
    real_vector my;
};

[[nodiscard]] pair_projection project_pair(std::uint64_t seed, std::size_t m, std::span<const double> x,
                                           std::span<const double> y);

/// Layers applied in order; layer k+1 consumes the output of layer k. An empty stack is the identity.
class layer_stack {
  public:
    layer_stack() = default;

    /// Appends a layer; throws dimension_mismatch_error if its column count breaks the chain.
    void push_back(gaussian_layer layer);

    [[nodiscard]] const std::vector<gaussian_layer> &layers() const noexcept { return layers_; }
    [[nodiscard]] std::size_t size() const noexcept { return layers_.size(); }
    [[nodiscard]] bool empty() const noexcept { return layers_.empty(); }

  private:
    std::vector<gaussian_layer> layers_;
};

/// relu(M_L ... relu(M_1 x)). Throws dimension_mismatch_error naming the first layer that does not fit.
[[nodiscard]] real_vector stack_forward(const layer_stack &stack, std::span<const double> x);

/// Binary dump: three little-endian uint64 (m, n, seed) then m*n little-endian float64, row-major.
void write_layer_binary(const gaussian_layer &layer, std::ostream &out);
[[nodiscard]] gaussian_layer read_layer_binary(std::istream &in);

/// CSV dump: first line "m,n,seed", then one line per row.
void write_layer_csv(const gaussian_layer &layer, std::ostream &out);

}  // namespace reludist
