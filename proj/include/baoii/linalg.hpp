#pragma once

#include <vector>

namespace baoii {

// Small dense row-major matrix. Everything in this project is at most a
// handful of rows, so no attempt at anything beyond O(n^3) direct methods.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols),
          a_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

    double& operator()(int r, int c) {
        return a_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_)
                  + static_cast<std::size_t>(c)];
    }
    double operator()(int r, int c) const {
        return a_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_)
                  + static_cast<std::size_t>(c)];
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

// Solves a x = b by Gaussian elimination with partial pivoting.
// Throws numeric_error on a (numerically) singular system.
std::vector<double> solve_linear(Matrix a, std::vector<double> b);

// max_i |(a x - b)_i|
double residual_inf_norm(const Matrix& a, const std::vector<double>& x,
                         const std::vector<double>& b);

} // namespace baoii
