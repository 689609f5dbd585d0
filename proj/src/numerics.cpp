#include "turnplate/numerics.hpp"
#include "turnplate/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace turnplate {

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int n = a.dim();
    ComplexMatrix c(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    const int n = a.dim();
    ComplexMatrix c(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = std::conj(a(j, i));
    return c;
}

Vec matvec(const ComplexMatrix& a, const Vec& x) {
    const int n = a.dim();
    Vec y(n);
    for (int i = 0; i < n; ++i) {
        Complex s = 0.0;
        for (int j = 0; j < n; ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (const auto& v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

double norm(const Vec& x) {
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v);
    return std::sqrt(s);
}

Complex inner(const Vec& x, const Vec& y) {
    Complex s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

namespace {

double offdiag_frobenius_sq(const ComplexMatrix& a) {
    double s = 0.0;
    const int n = a.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) s += std::norm(a(i, j));
    return s;
}

double frobenius(const ComplexMatrix& a) {
    double s = 0.0;
    for (const auto& v : a.data()) s += std::norm(v);
    return std::sqrt(s);
}

} // namespace

HermitianEigen hermitian_eig(const ComplexMatrix& m) {
    const int n = m.dim();
    if (n < 1) throw NotHermitian("hermitian_eig: empty matrix");
    if (max_abs_diff(m, adjoint(m)) > 1e-12)
        throw NotHermitian("hermitian_eig: matrix is not Hermitian within 1e-12");

    ComplexMatrix a = m;
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double scale = frobenius(a);
    const double thresh = 1e-14 * scale;

    constexpr int max_sweeps = 100;
    int sweep = 0;
    while (scale > 0.0 && std::sqrt(offdiag_frobenius_sq(a)) > thresh) {
        if (++sweep > max_sweeps)
            throw NoConvergence("hermitian_eig: Jacobi sweeps exhausted");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex beta = a(p, q);
                const double b = std::abs(beta);
                if (b == 0.0) continue;
                // Phase out the pivot, then a real Jacobi rotation on
                // [[alpha, b], [b, gamma]].
                const Complex phase = beta / b;
                const double alpha = a(p, p).real();
                const double gamma = a(q, q).real();
                const double tau = (gamma - alpha) / (2.0 * b);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // G restricted to (p,q): [[c*phase, s*phase], [-s, c]]
                const Complex gpp = c * phase, gpq = s * phase;
                const double gqp = -s, gqq = c;
                // columns: A <- A G, V <- V G
                for (int i = 0; i < n; ++i) {
                    const Complex aip = a(i, p), aiq = a(i, q);
                    a(i, p) = aip * gpp + aiq * gqp;
                    a(i, q) = aip * gpq + aiq * gqq;
                    const Complex vip = v(i, p), viq = v(i, q);
                    v(i, p) = vip * gpp + viq * gqp;
                    v(i, q) = vip * gpq + viq * gqq;
                }
                // rows: A <- G† A
                for (int j = 0; j < n; ++j) {
                    const Complex apj = a(p, j), aqj = a(q, j);
                    a(p, j) = std::conj(gpp) * apj + gqp * aqj;
                    a(q, j) = std::conj(gpq) * apj + gqq * aqj;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = Complex(a(p, p).real(), 0.0);
                a(q, q) = Complex(a(q, q).real(), 0.0);
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    HermitianEigen out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n);
    for (int k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

ComplexMatrix propagator(const HermitianEigen& eigen, double t) {
    const int n = static_cast<int>(eigen.values.size());
    // V diag(e^{-i E t}) V†
    ComplexMatrix u(n);
    std::vector<Complex> ph(n);
    for (int k = 0; k < n; ++k)
        ph[k] = std::exp(Complex(0.0, -eigen.values[k] * t));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Complex s = 0.0;
            for (int k = 0; k < n; ++k)
                s += eigen.vectors(i, k) * ph[k] * std::conj(eigen.vectors(j, k));
            u(i, j) = s;
        }
    return u;
}

ComplexMatrix propagator(const ComplexMatrix& m, double t) {
    return propagator(hermitian_eig(m), t);
}

Complex determinant(const ComplexMatrix& m) {
    const int n = m.dim();
    ComplexMatrix a = m;
    Complex det = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(a(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double cand = std::abs(a(r, col));
            if (cand > best) {
                best = cand;
                pivot = r;
            }
        }
        if (best == 0.0) return 0.0;
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
            det = -det;
        }
        det *= a(col, col);
        for (int r = col + 1; r < n; ++r) {
            const Complex f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
        }
    }
    return det;
}

} // namespace turnplate
