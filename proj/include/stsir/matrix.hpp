#pragma once

#include <cstddef>
#include <vector>

namespace stsir {

/// Dense row-major grid, indexed (region i, day j), zero-based.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using MatrixD = Matrix<double>;
using MatrixI = Matrix<long long>;

template <typename T>
Matrix<double> to_double(const Matrix<T>& in) {
    Matrix<double> out(in.rows(), in.cols());
    for (std::size_t k = 0; k < in.data().size(); ++k)
        out.data()[k] = static_cast<double>(in.data()[k]);
    return out;
}

} // namespace stsir
