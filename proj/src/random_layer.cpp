#include "reludist/random_layer.hpp"

#include "reludist/errors.hpp"
#include "reludist/rng.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace reludist {

namespace {

constexpr std::uint64_t entry_counter(const std::size_t row, const std::size_t col) noexcept {
    return (static_cast<std::uint64_t>(row) << 32) | static_cast<std::uint64_t>(col);
}

double row_scale(const std::size_t m) noexcept {
    return 1.0 / std::sqrt(static_cast<double>(m));
}

void require_dims(const std::size_t expected, const std::size_t actual, const char *what) {
    if (expected != actual) {
        throw dimension_mismatch_error(std::string(what) + ": expected dimension " + std::to_string(expected) + ", got "
                                       + std::to_string(actual));
    }
}

void put_u64(std::ostream &out, const std::uint64_t v) {
    std::array<char, 8> buf{};
    for (std::size_t k = 0; k < 8; ++k) {
        buf[k] = static_cast<char>((v >> (8 * k)) & 0xffU);
    }
    out.write(buf.data(), buf.size());
}

std::uint64_t get_u64(std::istream &in) {
    std::array<unsigned char, 8> buf{};
    if (!in.read(reinterpret_cast<char *>(buf.data()), buf.size())) {
        throw invalid_argument_error("truncated layer dump");
    }
    std::uint64_t v = 0;
    for (std::size_t k = 0; k < 8; ++k) {
        v |= static_cast<std::uint64_t>(buf[k]) << (8 * k);
    }
    return v;
}

}  // namespace

double layer_entry(const std::uint64_t seed, const std::size_t row, const std::size_t col, const std::size_t m) noexcept {
    return rng::normal(seed, entry_counter(row, col)) * row_scale(m);
}

gaussian_layer gaussian_layer::sample(const std::size_t n, const std::size_t m, const std::uint64_t seed,
                                      const std::size_t element_cap) {
    if (n == 0 || m == 0) {
        throw invalid_argument_error("layer dimensions must be >= 1");
    }
    if (m > element_cap / n) {
        throw size_overflow_error("layer of " + std::to_string(m) + " x " + std::to_string(n) + " exceeds the element cap of "
                                  + std::to_string(element_cap));
    }
    const std::uint64_t state = rng::mix64(seed);
    const double scale = row_scale(m);
    std::vector<double> entries(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            entries[i * n + j] = rng::inverse_normal_cdf(rng::to_open_unit(rng::bits_from_state(state, entry_counter(i, j)))) * scale;
        }
    }
    return { m, n, seed, std::move(entries) };
}

gaussian_layer gaussian_layer::from_entries(const std::size_t m, const std::size_t n, std::vector<double> entries,
                                            const std::uint64_t seed) {
    if (n == 0 || m == 0) {
        throw invalid_argument_error("layer dimensions must be >= 1");
    }
    require_dims(m * n, entries.size(), "layer entries");
    return { m, n, seed, std::move(entries) };
}

real_vector linear_forward(const gaussian_layer &layer, std::span<const double> x) {
    require_dims(layer.cols(), x.size(), "layer input");
    real_vector out(layer.rows());
    for (std::size_t i = 0; i < layer.rows(); ++i) {
        const auto r = layer.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < r.size(); ++j) {
            s += r[j] * x[j];
        }
        out[i] = s;
    }
    return out;
}

real_vector relu_forward(const gaussian_layer &layer, std::span<const double> x) {
    real_vector out = linear_forward(layer, x);
    for (double &v : out) {
        v = relu(v);
    }
    return out;
}

double squared_norm(std::span<const double> v) noexcept {
    double s = 0.0;
    for (const double a : v) {
        s += a * a;
    }
    return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double sq_dist_realization(const gaussian_layer &layer, std::span<const double> x, std::span<const double> y) {
    require_dims(layer.cols(), x.size(), "first input");
    require_dims(layer.cols(), y.size(), "second input");
    const real_vector fx = relu_forward(layer, x);
    const real_vector fy = relu_forward(layer, y);
    return squared_distance(fx, fy);
}

pair_projection project_pair(const std::uint64_t seed, const std::size_t m, std::span<const double> x,
                             std::span<const double> y) {
    require_dims(x.size(), y.size(), "pair projection");
    if (m == 0) {
        throw invalid_argument_error("layer width m must be >= 1");
    }
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] != 0.0 || y[j] != 0.0) {
            support.push_back(j);
        }
    }
    const std::uint64_t state = rng::mix64(seed);
    const double scale = row_scale(m);
    pair_projection p{ real_vector(m), real_vector(m) };
    for (std::size_t i = 0; i < m; ++i) {
        double sx = 0.0;
        double sy = 0.0;
        for (const std::size_t j : support) {
            const double e = rng::inverse_normal_cdf(rng::to_open_unit(rng::bits_from_state(state, entry_counter(i, j)))) * scale;
            sx += e * x[j];
            sy += e * y[j];
        }
        p.mx[i] = sx;
        p.my[i] = sy;
    }
    return p;
}

void layer_stack::push_back(gaussian_layer layer) {
    if (!layers_.empty() && layers_.back().rows() != layer.cols()) {
        throw dimension_mismatch_error("layer " + std::to_string(layers_.size()) + " expects " + std::to_string(layer.cols())
                                       + " inputs but the previous layer emits " + std::to_string(layers_.back().rows()));
    }
    layers_.push_back(std::move(layer));
}

real_vector stack_forward(const layer_stack &stack, std::span<const double> x) {
    real_vector current(x.begin(), x.end());
    for (std::size_t k = 0; k < stack.size(); ++k) {
        const auto &layer = stack.layers()[k];
        if (layer.cols() != current.size()) {
            throw dimension_mismatch_error("layer " + std::to_string(k) + " expects " + std::to_string(layer.cols())
                                           + " inputs, got " + std::to_string(current.size()));
        }
        current = relu_forward(layer, current);
    }
    return current;
}

void write_layer_binary(const gaussian_layer &layer, std::ostream &out) {
    put_u64(out, layer.rows());
    put_u64(out, layer.cols());
    put_u64(out, layer.seed());
    for (const double v : layer.entries()) {
        put_u64(out, std::bit_cast<std::uint64_t>(v));
    }
}

gaussian_layer read_layer_binary(std::istream &in) {
    const std::uint64_t m = get_u64(in);
    const std::uint64_t n = get_u64(in);
    const std::uint64_t seed = get_u64(in);
    if (m == 0 || n == 0 || m > default_element_cap / n) {
        throw invalid_argument_error("layer dump has an invalid shape");
    }
    std::vector<double> entries(m * n);
    for (double &v : entries) {
        v = std::bit_cast<double>(get_u64(in));
    }
    return gaussian_layer::from_entries(m, n, std::move(entries), seed);
}

void write_layer_csv(const gaussian_layer &layer, std::ostream &out) {
    out << layer.rows() << ',' << layer.cols() << ',' << layer.seed() << '\n';
    const auto old_precision = out.precision(17);
    for (std::size_t i = 0; i < layer.rows(); ++i) {
        const auto r = layer.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            out << (j == 0 ? "" : ",") << r[j];
        }
        out << '\n';
    }
    out.precision(old_precision);
}

}  // namespace reludist
