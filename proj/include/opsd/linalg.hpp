#pragma once

// Dense complex linear algebra helpers shared by every module: inner
// products, projectors, orthonormal complements, numerical rank, PSD
// checks, and the solver for spaces of Hermitian matrices subject to
// bilinear constraints <u|E|w> = 0.
//
// Conventions: inner products are conjugate-linear in the FIRST argument,
// kets are column vectors, and all tolerance checks are absolute against
// unit-scale quantities unless noted.

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <utility>
#include <vector>

namespace opsd {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr double kDefaultTol = 1e-9;

// |index> in a `dim`-dimensional space.
CVec basis_ket(int index, int dim);

// Ket from an amplitude list, e.g. ket({1.0, 0.0, -1.0}).
CVec ket(std::initializer_list<cplx> amps);

// v / ||v||; throws std::invalid_argument on a (near-)zero vector.
CVec normalized(const CVec& v, double tol = kDefaultTol);

// <u|v>, conjugate-linear in u. Dimensions must agree.
cplx inner(const CVec& u, const CVec& v);

// Rank-1 projector |v><v|. Normalizes defensively; throws on a zero vector.
CMat projector(const CVec& v, double tol = kDefaultTol);

// Orthogonal projector onto span{vs} inside C^dim (zero matrix for an
// empty span).
CMat span_projector(const std::vector<CVec>& vs, int dim,
                    double tol = kDefaultTol);

// Orthonormal basis of the orthogonal complement of span{vs} in C^dim.
// Always returns exactly dim - rank(vs) vectors.
std::vector<CVec> orthonormal_complement(const std::vector<CVec>& vs, int dim,
                                         double tol = kDefaultTol);

// Orthonormal basis of span{vs} itself.
std::vector<CVec> orthonormal_span(const std::vector<CVec>& vs, int dim,
                                   double tol = kDefaultTol);

// Real-linear solution space of {E Hermitian : <u|E|w> = 0 for each
// constraint pair (u, w)}, returned as a Frobenius-normalized basis.
// Hermitian matrices are coordinatized by dim^2 reals (diagonal, then
// re/im of the upper triangle); the constraint system is solved by a
// rank-revealing SVD. Empty constraints yield the canonical basis of the
// full space (real dimension dim^2).
std::vector<CMat> hermitian_solution_space(
    const std::vector<std::pair<CVec, CVec>>& constraints, int dim,
    double tol = kDefaultTol);

// Numerical rank of the Gram matrix of vs: eigenvalues > tol * largest.
int rank_of(const std::vector<CVec>& vs, double tol = kDefaultTol);

// max(0, -lambda_min(e)). Throws std::invalid_argument if e is not
// Hermitian within tol. Zero (within tol) means e is PSD.
double psd_residual(const CMat& e, double tol = kDefaultTol);

// PSD square root E^(1/2) via eigendecomposition; eigenvalues in
// [-tol, 0) are clamped to zero, anything more negative throws.
CMat psd_sqrt(const CMat& e, double tol = kDefaultTol);

// Largest singular value.
double operator_norm(const CMat& m);

// Haar-ish random unit vector with complex amplitudes; deterministic for a
// given generator state.
CVec random_unit_vector(std::mt19937_64& rng, int dim);

}  // namespace opsd
