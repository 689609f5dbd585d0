// numerics.hpp
// Dense complex linear algebra: Hermitian eigendecomposition, spectral
// propagators, and determinants. Everything else in the library is
// built on top of these.

#pragma once

#include <complex>
#include <vector>

namespace turnplate {

using Complex = std::complex<double>;
using Vec = std::vector<Complex>;

// Square complex matrix, row-major storage.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}

    static ComplexMatrix identity(int dim);

    int dim() const { return dim_; }

    Complex& operator()(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
    const Complex& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }

    const std::vector<Complex>& data() const { return a_; }
    std::vector<Complex>& data() { return a_; }

  private:
    int dim_ = 0;
    std::vector<Complex> a_;
};

// Eigenvalues ascending, eigenvectors as columns of a unitary matrix.
struct HermitianEigen {
    std::vector<double> values;
    ComplexMatrix vectors;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& a);
Vec matvec(const ComplexMatrix& a, const Vec& x);

double max_abs(const ComplexMatrix& a);
// max entrywise |a - b|
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double norm(const Vec& x);
Complex inner(const Vec& x, const Vec& y); // conj(x) . y

// Cyclic Jacobi diagonalization of a Hermitian matrix. Throws NotHermitian if
// max |M - M†| exceeds 1e-12, NoConvergence after 100 sweeps.
HermitianEigen hermitian_eig(const ComplexMatrix& m);

// exp(-i m t) for Hermitian m, via the spectral decomposition.
ComplexMatrix propagator(const ComplexMatrix& m, double t);
ComplexMatrix propagator(const HermitianEigen& eigen, double t);

// Determinant by partially pivoted elimination.
Complex determinant(const ComplexMatrix& m);

} // namespace turnplate
