#include "marketstates/kernels.hpp"

#include <cmath>
#include <cstdlib>

namespace marketstates::kernels::serial {

Matrix gram_correlation(const Matrix& z) {
    const std::size_t k = z.rows();
    const std::size_t l = z.cols();
    Matrix c(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        c(i, i) = 1.0;
        for (std::size_t j = i + 1; j < k; ++j) {
            const double* zi = z.data() + i * l;
            const double* zj = z.data() + j * l;
            double dot = 0.0;
            for (std::size_t t = 0; t < l; ++t) dot += zi[t] * zj[t];
            if (dot > 1.0) dot = 1.0;
            if (dot < -1.0) dot = -1.0;
            c(i, j) = dot;
            c(j, i) = dot;
        }
    }
    return c;
}

double l1_mean(const Matrix& a, const Matrix& b) {
    double sum = 0.0;
    const double* pa = a.data();
    const double* pb = b.data();
    const std::size_t n = a.size();
    for (std::size_t e = 0; e < n; ++e) sum += std::abs(pa[e] - pb[e]);
    return sum / static_cast<double>(n);
}

Matrix pairwise_l1_mean(const MatrixRefs& mats) {
    const std::size_t w = mats.size();
    Matrix d(w, w, 0.0);
    for (std::size_t i = 0; i < w; ++i) {
        for (std::size_t j = i + 1; j < w; ++j) {
            const double v = l1_mean(*mats[i], *mats[j]);
            d(i, j) = v;
            d(j, i) = v;
        }
    }
    return d;
}

Matrix elementwise_mean(const MatrixRefs& mats) {
    Matrix m(mats.front()->rows(), mats.front()->cols());
    const std::size_t n = m.size();
    for (std::size_t e = 0; e < n; ++e) {
        double sum = 0.0;
        for (const Matrix* mat : mats) sum += mat->data()[e];
        m.data()[e] = sum / static_cast<double>(mats.size());
    }
    return m;
}

void assign_nearest(const MatrixRefs& mats, const Matrix& center0, const Matrix& center1,
                    std::vector<std::uint8_t>& labels) {
    for (std::size_t i = 0; i < mats.size(); ++i) {
        const double d0 = l1_mean(*mats[i], center0);
        const double d1 = l1_mean(*mats[i], center1);
        if (d0 < d1) {
            labels[i] = 0;
        } else if (d1 < d0) {
            labels[i] = 1;
        }
        // tie: keep incoming label
    }
}

}  // namespace marketstates::kernels::serial
