#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace fastrp {

/// Dense row-major matrix. float in the fast path, double in test oracles.
template <typename T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    T operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }

    std::vector<T>& values() noexcept { return data_; }
    const std::vector<T>& values() const noexcept { return data_; }

    bool all_finite() const noexcept {
        for (const T v : data_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using EmbeddingMatrix = DenseMatrix<float>;

/// Frobenius norm of the elementwise difference, in double.
template <typename A, typename B>
double frobenius_distance(const DenseMatrix<A>& a, const DenseMatrix<B>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) {
        const double d = static_cast<double>(a.values()[i]) - static_cast<double>(b.values()[i]);
        acc += d * d;
    }
    return std::sqrt(acc);
}

template <typename T>
double frobenius_norm(const DenseMatrix<T>& a) {
    double acc = 0.0;
    for (const T v : a.values()) acc += static_cast<double>(v) * static_cast<double>(v);
    return std::sqrt(acc);
}

}  // namespace fastrp
