#pragma once

#include <vector>

namespace vortexlab {

/// General banded matrix with kl sub- and ku super-diagonals, dense band storage.
/// Entry (i, j) is stored when |i - j| is inside the band; factorization uses
/// partial pivoting, which widens the upper band by kl (LAPACK gbtrf layout).
class BandedMatrix {
  public:
    BandedMatrix(int n, int kl, int ku);

    int size() const { return n_; }
    double& at(int i, int j);
    double at(int i, int j) const;
    void add(int i, int j, double v) { at(i, j) += v; }

    /// Matrix-vector product using the current (unfactored) band.
    std::vector<double> apply(const std::vector<double>& x) const;

    /// In-place LU factorization with partial pivoting.
    void factor();

    /// Solve A x = b using the factorization.
    std::vector<double> solve(const std::vector<double>& b) const;

    bool factored() const { return factored_; }

  private:
    int n_, kl_, ku_, ldab_;
    bool factored_ = false;
    std::vector<double> ab_;    // column-major band storage
    std::vector<int> ipiv_;

    double& band(int i, int j) { return ab_[static_cast<std::size_t>(j) * ldab_ + (ku_ + kl_ + i - j)]; }
    double band(int i, int j) const { return ab_[static_cast<std::size_t>(j) * ldab_ + (ku_ + kl_ + i - j)]; }
};

/// Eigenvalues (ascending) and eigenvectors of a symmetric tridiagonal matrix,
/// implicit-shift QL. diag has size n, offdiag size n-1. Vectors are returned
/// as columns of an n x n row-major matrix.
void tridiag_eigen(std::vector<double> diag, std::vector<double> offdiag,
                   std::vector<double>& eigenvalues, std::vector<double>& vectors);

}  // namespace vortexlab
