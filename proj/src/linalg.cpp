#include "opsd/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace opsd {

namespace {

// Columns of vs stacked into a dim x k matrix.
CMat stack_columns(const std::vector<CVec>& vs, int dim) {
  CMat a(dim, static_cast<Eigen::Index>(vs.size()));
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (vs[static_cast<size_t>(j)].size() != dim) {
      throw std::invalid_argument("stacked vectors must share the dimension");
    }
    a.col(j) = vs[static_cast<size_t>(j)];
  }
  return a;
}

int svd_rank(const Eigen::JacobiSVD<CMat>& svd, double tol) {
  if (svd.singularValues().size() == 0) return 0;
  const double largest = svd.singularValues()(0);
  if (largest <= tol) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > tol * largest) ++r;
  }
  return r;
}

}  // namespace

CVec basis_ket(int index, int dim) {
  if (dim <= 0 || index < 0 || index >= dim) {
    throw std::invalid_argument("basis_ket: index out of range");
  }
  CVec v = CVec::Zero(dim);
  v(index) = 1.0;
  return v;
}

CVec ket(std::initializer_list<cplx> amps) {
  CVec v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (const cplx& a : amps) v(i++) = a;
  return v;
}

CVec normalized(const CVec& v, double tol) {
  const double n = v.norm();
  if (n <= tol) throw std::invalid_argument("normalized: zero vector");
  return v / n;
}

cplx inner(const CVec& u, const CVec& v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("inner: dimension mismatch");
  }
  return u.dot(v);  // Eigen's dot conjugates the first argument
}

CMat projector(const CVec& v, double tol) {
  const CVec u = normalized(v, tol);
  return u * u.adjoint();
}

std::vector<CVec> orthonormal_span(const std::vector<CVec>& vs, int dim,
                                   double tol) {
  if (dim <= 0) throw std::invalid_argument("orthonormal_span: dim <= 0");
  if (vs.empty()) return {};
  const CMat a = stack_columns(vs, dim);
  Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeFullU);
  const int r = svd_rank(svd, tol);
  std::vector<CVec> basis;
  basis.reserve(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) basis.push_back(svd.matrixU().col(i));
  return basis;
}

CMat span_projector(const std::vector<CVec>& vs, int dim, double tol) {
  CMat p = CMat::Zero(dim, dim);
  for (const CVec& b : orthonormal_span(vs, dim, tol)) p += b * b.adjoint();
  return p;
}

std::vector<CVec> orthonormal_complement(const std::vector<CVec>& vs, int dim,
                                         double tol) {
  if (dim <= 0) {
    throw std::invalid_argument("orthonormal_complement: dim <= 0");
  }
  if (vs.empty()) {
    std::vector<CVec> full;
    full.reserve(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) full.push_back(basis_ket(i, dim));
    return full;
  }
  const CMat a = stack_columns(vs, dim);
  Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeFullU);
  const int r = svd_rank(svd, tol);
  std::vector<CVec> basis;
  basis.reserve(static_cast<size_t>(dim - r));
  // Left singular vectors beyond the rank span the orthogonal complement.
  for (int i = r; i < dim; ++i) basis.push_back(svd.matrixU().col(i));
  return basis;
}

namespace {

// Coordinate layout for Hermitian E in C^{dim x dim}: x[0..dim) are the
// (real) diagonal entries; then for each k < l in row-major order two
// slots hold Re E_kl and Im E_kl.
struct HermitianCoords {
  int dim;

  int size() const { return dim * dim; }

  int diag(int k) const { return k; }

  int upper(int k, int l, bool imag) const {
    // Offset of pair (k, l), k < l, in row-major enumeration.
    const int before = k * dim - k * (k + 1) / 2 + (l - k - 1);
    return dim + 2 * before + (imag ? 1 : 0);
  }

  CMat to_matrix(const Eigen::VectorXd& x) const {
    CMat e = CMat::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) e(k, k) = x(diag(k));
    for (int k = 0; k < dim; ++k) {
      for (int l = k + 1; l < dim; ++l) {
        const cplx v(x(upper(k, l, false)), x(upper(k, l, true)));
        e(k, l) = v;
        e(l, k) = std::conj(v);
      }
    }
    return e;
  }
};

}  // namespace

std::vector<CMat> hermitian_solution_space(
    const std::vector<std::pair<CVec, CVec>>& constraints, int dim,
    double tol) {
  if (dim <= 0) {
    throw std::invalid_argument("hermitian_solution_space: dim <= 0");
  }
  const HermitianCoords coords{dim};
  const int nx = coords.size();

  if (constraints.empty()) {
    // Canonical basis: unit diagonals, then normalized symmetric and
    // antisymmetric-imaginary pairs, all Frobenius norm 1.
    std::vector<CMat> basis;
    basis.reserve(static_cast<size_t>(nx));
    for (int k = 0; k < dim; ++k) {
      CMat e = CMat::Zero(dim, dim);
      e(k, k) = 1.0;
      basis.push_back(e);
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int k = 0; k < dim; ++k) {
      for (int l = k + 1; l < dim; ++l) {
        CMat sym = CMat::Zero(dim, dim);
        sym(k, l) = inv_sqrt2;
        sym(l, k) = inv_sqrt2;
        basis.push_back(sym);
        CMat asym = CMat::Zero(dim, dim);
        asym(k, l) = cplx(0.0, inv_sqrt2);
        asym(l, k) = cplx(0.0, -inv_sqrt2);
        basis.push_back(asym);
      }
    }
    return basis;
  }

  // Each complex constraint <u|E|w> = 0 is linear in the coordinates:
  //   coeff(diag k)      = conj(u_k) w_k
  //   coeff(Re E_kl)     = conj(u_k) w_l + conj(u_l) w_k
  //   coeff(Im E_kl)     = i (conj(u_k) w_l - conj(u_l) w_k)
  // and contributes two real rows (real and imaginary part).
  Eigen::MatrixXd a(2 * static_cast<Eigen::Index>(constraints.size()), nx);
  Eigen::Index row = 0;
  for (const auto& [u, w] : constraints) {
    if (u.size() != dim || w.size() != dim) {
      throw std::invalid_argument(
          "hermitian_solution_space: constraint vector dimension mismatch");
    }
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(nx);
    for (int k = 0; k < dim; ++k) {
      c(coords.diag(k)) = std::conj(u(k)) * w(k);
    }
    for (int k = 0; k < dim; ++k) {
      for (int l = k + 1; l < dim; ++l) {
        const cplx fwd = std::conj(u(k)) * w(l);
        const cplx bwd = std::conj(u(l)) * w(k);
        c(coords.upper(k, l, false)) = fwd + bwd;
        c(coords.upper(k, l, true)) = cplx(0.0, 1.0) * (fwd - bwd);
      }
    }
    a.row(row++) = c.real().transpose();
    a.row(row++) = c.imag().transpose();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const double largest =
      svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (largest > tol && svd.singularValues()(i) > tol * largest) ++rank;
  }

  std::vector<CMat> basis;
  basis.reserve(static_cast<size_t>(nx - rank));
  for (int i = rank; i < nx; ++i) {
    CMat e = coords.to_matrix(svd.matrixV().col(i));
    basis.push_back(e / e.norm());  // null vectors are unit, but be explicit
  }
  return basis;
}

int rank_of(const std::vector<CVec>& vs, double tol) {
  if (vs.empty()) return 0;
  const int dim = static_cast<int>(vs[0].size());
  const CMat a = stack_columns(vs, dim);
  const CMat gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<CMat> es(gram);
  const double largest = es.eigenvalues().maxCoeff();
  if (largest <= tol) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > tol * largest) ++r;
  }
  return r;
}

double psd_residual(const CMat& e, double tol) {
  if (e.rows() != e.cols()) {
    throw std::invalid_argument("psd_residual: matrix not square");
  }
  const double scale = std::max(1.0, e.norm());
  if ((e - e.adjoint()).norm() > tol * scale) {
    throw std::invalid_argument("psd_residual: matrix not Hermitian");
  }
  if (e.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(e, Eigen::EigenvaluesOnly);
  return std::max(0.0, -es.eigenvalues().minCoeff());
}

CMat psd_sqrt(const CMat& e, double tol) {
  const double residual = psd_residual(e, tol);
  if (residual > tol) {
    throw std::invalid_argument("psd_sqrt: matrix not PSD, residual " +
                                std::to_string(residual));
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(e);
  Eigen::VectorXd lambda = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lambda.cwiseSqrt().asDiagonal() *
         es.eigenvectors().adjoint();
}

double operator_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

CVec random_unit_vector(std::mt19937_64& rng, int dim) {
  if (dim <= 0) throw std::invalid_argument("random_unit_vector: dim <= 0");
  // Box-Muller on uniform draws keeps the output identical for a given
  // seed regardless of library internals of normal_distribution.
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  CVec v(dim);
  for (int i = 0; i < dim; ++i) {
    double u1 = 0.0;
    do {
      u1 = unif(rng);
    } while (u1 <= 1e-300);
    const double u2 = unif(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    v(i) = cplx(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2));
  }
  return normalized(v);
}

}  // namespace opsd
