#include "vortexlab/banded.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "vortexlab/common.hpp"

namespace vortexlab {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
      ab_(static_cast<std::size_t>(ldab_) * n, 0.0), ipiv_(n, 0) {}

double& BandedMatrix::at(int i, int j) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_ || j - i > ku_ || i - j > kl_)
        throw std::out_of_range("BandedMatrix::at outside band");
    return band(i, j);
}

double BandedMatrix::at(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_ || j - i > ku_ || i - j > kl_) return 0.0;
    return band(i, j);
}

std::vector<double> BandedMatrix::apply(const std::vector<double>& x) const {
    std::vector<double> y(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
        const int ilo = std::max(0, j - ku_);
        const int ihi = std::min(n_ - 1, j + kl_);
        for (int i = ilo; i <= ihi; ++i) y[i] += band(i, j) * x[j];
    }
    return y;
}

void BandedMatrix::factor() {
    // gbtrf-style: partial pivoting within the kl rows below the diagonal.
    const int kv = kl_ + ku_;  // effective super-band after fill-in
    for (int j = 0; j < n_; ++j) {
        const int ihi = std::min(n_ - 1, j + kl_);
        int piv = j;
        double amax = std::abs(band(j, j));
        for (int i = j + 1; i <= ihi; ++i) {
            const double a = std::abs(band(i, j));
            if (a > amax) { amax = a; piv = i; }
        }
        ipiv_[j] = piv;
        if (amax == 0.0) throw SolveError("BandedMatrix::factor: singular pivot");
        if (piv != j) {
            const int jhi = std::min(n_ - 1, j + kv);
            for (int c = j; c <= jhi; ++c) {
                const int off1 = kl_ + ku_ + j - c, off2 = kl_ + ku_ + piv - c;
                std::swap(ab_[static_cast<std::size_t>(c) * ldab_ + off1],
                          ab_[static_cast<std::size_t>(c) * ldab_ + off2]);
            }
        }
        const double d = band(j, j);
        for (int i = j + 1; i <= ihi; ++i) {
            const double m = band(i, j) / d;
            band(i, j) = m;
            const int jhi = std::min(n_ - 1, j + kv);
            for (int c = j + 1; c <= jhi; ++c) band(i, c) -= m * band(j, c);
        }
    }
    factored_ = true;
}

std::vector<double> BandedMatrix::solve(const std::vector<double>& b) const {
    if (!factored_) throw SolveError("BandedMatrix::solve before factor");
    std::vector<double> x = b;
    for (int j = 0; j < n_; ++j) {
        if (ipiv_[j] != j) std::swap(x[j], x[ipiv_[j]]);
        const int ihi = std::min(n_ - 1, j + kl_);
        for (int i = j + 1; i <= ihi; ++i) x[i] -= band(i, j) * x[j];
    }
    const int kv = kl_ + ku_;
    for (int i = n_ - 1; i >= 0; --i) {
        const int jhi = std::min(n_ - 1, i + kv);
        for (int j = i + 1; j <= jhi; ++j) x[i] -= band(i, j) * x[j];
        x[i] /= band(i, i);
    }
    return x;
}

void tridiag_eigen(std::vector<double> d, std::vector<double> e,
                   std::vector<double>& eigenvalues, std::vector<double>& vectors) {
    const int n = static_cast<int>(d.size());
    e.resize(n, 0.0);  // e[0..n-2] subdiagonal, shifted below for the QL sweep
    // identity start for the eigenvector accumulation
    vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) vectors[static_cast<std::size_t>(i) * n + i] = 1.0;
    // shift e so e[i] couples rows i-1, i (imtql2 convention)
    for (int i = n - 1; i > 0; --i) e[i] = e[i - 1];
    e[0] = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        while (true) {
            int m = l;
            for (; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m + 1]) <= 1e-300 + 2.3e-16 * dd) break;
            }
            if (m == l) break;
            if (++iter > 50) throw SolveError("tridiag_eigen: QL did not converge");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l + 1]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l + 1] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
            double s = 1.0, c = 1.0, p = 0.0;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i + 1];
                const double b = c * e[i + 1];
                r = std::hypot(f, g);
                e[i + 2] = r;
                if (r == 0.0) { d[i + 1] -= p; e[m + 1] = 0.0; break; }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for (int k = 0; k < n; ++k) {
                    const std::size_t k1 = static_cast<std::size_t>(k) * n;
                    f = vectors[k1 + i + 1];
                    vectors[k1 + i + 1] = s * vectors[k1 + i] + c * f;
                    vectors[k1 + i] = c * vectors[k1 + i] - s * f;
                }
            }
            if (r == 0.0 && m - 1 >= l) continue;
            d[l] -= p;
            e[l + 1] = g;
            e[m + 1] = 0.0;
        }
    }
    // sort ascending, permuting the vector columns along
    for (int i = 0; i < n - 1; ++i) {
        int k = i;
        for (int j = i + 1; j < n; ++j)
            if (d[j] < d[k]) k = j;
        if (k != i) {
            std::swap(d[i], d[k]);
            for (int row = 0; row < n; ++row)
                std::swap(vectors[static_cast<std::size_t>(row) * n + i],
                          vectors[static_cast<std::size_t>(row) * n + k]);
        }
    }
    eigenvalues = std::move(d);
}

}  // namespace vortexlab
