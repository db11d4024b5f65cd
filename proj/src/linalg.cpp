#include "baoii/linalg.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

#include "baoii/errors.hpp"

namespace baoii {

std::vector<double> solve_linear(Matrix a, std::vector<double> b) {
    const int n = a.rows();
    if (a.cols() != n || static_cast<int>(b.size()) != n) {
        throw numeric_error("solve_linear: shape mismatch");
    }

    for (int k = 0; k < n; ++k) {
        // pivot: largest magnitude in column k at or below the diagonal
        int piv = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double m = std::abs(a(i, k));
            if (m > best) {
                best = m;
                piv = i;
            }
        }
        if (best == 0.0 || !std::isfinite(best)) {
            throw numeric_error("solve_linear: singular system (pivot " +
                                std::to_string(k) + ")");
        }
        if (piv != k) {
            for (int j = k; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(piv)]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            if (f == 0.0) continue;
            a(i, k) = 0.0;
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            b[static_cast<std::size_t>(i)] -= f * b[static_cast<std::size_t>(k)];
        }
    }

    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s / a(i, i);
        if (!std::isfinite(x[static_cast<std::size_t>(i)])) {
            throw numeric_error("solve_linear: non-finite solution component");
        }
    }
    return x;
}

double residual_inf_norm(const Matrix& a, const std::vector<double>& x,
                         const std::vector<double>& b) {
    double worst = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        double s = -b[static_cast<std::size_t>(i)];
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[static_cast<std::size_t>(j)];
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

} // namespace baoii
