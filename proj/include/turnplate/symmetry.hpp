// symmetry.hpp
// Cyclic (c_n) symmetry of ring specs: shift operators, projectors,
// eigenvector labeling, and block reduction into n rings of length p = N/n.

#pragma once

#include "turnplate/numerics.hpp"
#include "turnplate/ring.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace turnplate {

struct CyclicSymmetry {
    int n; // symmetry order (odd)
    int p; // N / n
};

// Permutation T with T|i> = |i+p mod N>, i.e. matrix entry (i+p, i) = 1.
struct ShiftOperator {
    int n_sites;
    int step; // p
    ComplexMatrix matrix;
};

// Integer labels l in {-(n-1)/2, ..., (n-1)/2} per eigenvector, together with
// refined vectors that diagonalize H and T simultaneously. The label
// convention follows the block structure: a refined vector with label l obeys
// T v = omega_n^{-l} v, omega_n = e^{i 2 pi / n}.
struct SymmetryLabels {
    std::vector<int> labels;
    ComplexMatrix refined_vectors;
    std::vector<double> values; // eigenvalues, same order as labels
};

// One block of the reduced ring: a p-site ring spec, or a bare scalar
// eigenvalue 2|J|cos(phi_l) when p = 1.
struct BlockRing {
    int label;          // l
    double total_phase; // phi_l = phi/n + 2 pi l / n (unreduced)
    std::optional<RingSpec> spec;
    std::optional<double> scalar;

    std::vector<double> spectrum() const;
};

// Largest odd n dividing N whose gauge-normalized magnitude sequence is
// p-periodic (relative tolerance 1e-12); n = 1 when no nontrivial symmetry.
CyclicSymmetry detect_symmetry(const RingSpec& spec);

ShiftOperator shift_operator(int n_sites, int step);

// Projector P_l onto span{ |l,i> = n^{-1/2} sum_k omega^{k l} |i + k p> }.
ComplexMatrix symmetry_projector(int n_sites, int step, int order, int label);

// Refine eigenvectors inside degenerate clusters (threshold cluster_tol,
// absolute) so each is a T eigenvector, and map the T eigenvalues to integer
// labels.
SymmetryLabels symmetry_labels(const HermitianEigen& eigen, const ShiftOperator& t, int order,
                               double cluster_tol = 1e-9);

// n ring specs of length p with the parent magnitudes and total phase phi_l,
// in label order l = -(n-1)/2 .. (n-1)/2.
std::vector<BlockRing> block_reduce(const RingSpec& spec, const CyclicSymmetry& sym);

// (det H, 2 prod|J_l| cos(total phase)): the lambda = 0 specialization of the
// characteristic identity; the two must agree.
std::pair<Complex, double> char_poly_check(const RingSpec& spec);

} // namespace turnplate
