#include "opsd/measurement.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace opsd {

namespace {

// Shared shape/party validation for the queries below.
void check_applicable(const StateSet& set, const Measurement& m, int outcome) {
  if (m.party < 0 || m.party >= set.parties) {
    throw std::invalid_argument("measurement party " + std::to_string(m.party + 1) +
                                " outside the set's " + std::to_string(set.parties) +
                                " parties");
  }
  if (outcome < 0 || outcome >= m.outcomes()) {
    throw std::invalid_argument("outcome index " + std::to_string(outcome) +
                                " outside 0.." + std::to_string(m.outcomes() - 1));
  }
  if (m.dim() != set.dims[static_cast<size_t>(m.party)]) {
    throw std::invalid_argument(
        "measurement dimension " + std::to_string(m.dim()) + " does not match party " +
        std::to_string(m.party + 1) + " dimension " +
        std::to_string(set.dims[static_cast<size_t>(m.party)]));
  }
}

}  // namespace

void validate_measurement(const Measurement& m, double tol) {
  if (m.kraus.empty()) throw std::invalid_argument("measurement has no outcomes");
  if (m.labels.size() != m.kraus.size()) {
    throw std::invalid_argument("measurement labels do not match outcome count");
  }
  if (m.party < 0) throw std::invalid_argument("measurement party is negative");
  const int dim = m.dim();
  for (const CMat& k : m.kraus) {
    if (k.rows() != dim || k.cols() != dim) {
      throw std::invalid_argument("measurement operators are not one square shape");
    }
    // Constructors emit PSD Kraus operators, so E = M^dag M is PSD by
    // construction; still check M^dag M's Hermiticity defensively.
    (void)psd_residual(k.adjoint() * k, tol);
  }
  const double residual = completeness_residual(m);
  if (residual > tol) {
    throw std::invalid_argument("measurement is incomplete: ||sum E - I|| = " +
                                std::to_string(residual));
  }
}

double completeness_residual(const Measurement& m) {
  if (m.kraus.empty()) return 0.0;
  const int dim = m.dim();
  CMat sum = CMat::Zero(dim, dim);
  for (const CMat& k : m.kraus) sum += k.adjoint() * k;
  return (sum - CMat::Identity(dim, dim)).norm();
}

Measurement projective_split(int party, const CVec& alpha, double tol) {
  const double norm = alpha.norm();
  if (std::abs(norm - 1.0) > 1e3 * tol) {
    throw std::invalid_argument("projective_split: alpha is not normalized (||alpha|| = " +
                                std::to_string(norm) + ")");
  }
  const int dim = static_cast<int>(alpha.size());
  const CMat p = alpha * alpha.adjoint();
  Measurement m;
  m.party = party;
  m.kraus = {p, CMat::Identity(dim, dim) - p};
  m.labels = {"onto", "away"};
  return m;
}

Measurement pair_split(int party, const CVec& alpha, const CVec& beta, double tol) {
  if (alpha.size() != beta.size()) {
    throw std::invalid_argument("pair_split: alpha and beta dimensions differ");
  }
  for (const CVec* v : {&alpha, &beta}) {
    if (std::abs(v->norm() - 1.0) > 1e3 * tol) {
      throw std::invalid_argument("pair_split: vectors must be normalized");
    }
  }
  const double overlap = std::abs(inner(alpha, beta));
  if (overlap > tol) {
    throw std::invalid_argument("pair_split: |<alpha|beta>| = " + std::to_string(overlap) +
                                " exceeds tolerance; the vectors must be orthogonal");
  }
  const int dim = static_cast<int>(alpha.size());
  const CMat pa = alpha * alpha.adjoint();
  const CMat pb = beta * beta.adjoint();
  // The residual element is a projector up to rounding; psd_sqrt clamps the
  // stray negative eigenvalues the subtraction can introduce.
  const CMat rest = psd_sqrt(CMat::Identity(dim, dim) - pa - pb, 1e3 * tol);
  Measurement m;
  m.party = party;
  m.kraus = {pa, pb, rest};
  m.labels = {"first", "second", "rest"};
  return m;
}

Measurement span_split(int party, const std::vector<CVec>& vs, double tol) {
  if (vs.empty()) throw std::invalid_argument("span_split: empty vector list");
  const int dim = static_cast<int>(vs[0].size());
  const CMat p = span_projector(vs, dim, tol);
  Measurement m;
  m.party = party;
  m.kraus = {p, CMat::Identity(dim, dim) - p};
  m.labels = {"span", "complement"};
  return m;
}

Measurement complete_local_discrimination(const StateSet& set, int party) {
  if (party < 0 || party >= set.parties) {
    throw std::invalid_argument("complete_local_discrimination: bad party index");
  }
  const int n = set.size();
  const int dim = set.dims[static_cast<size_t>(party)];
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const double overlap = std::abs(inner(set.local(j, party), set.local(k, party)));
      if (overlap > set.tol) {
        throw std::invalid_argument(
            "complete_local_discrimination: states " + std::to_string(j + 1) + " and " +
            std::to_string(k + 1) + " are not orthogonal on party " +
            std::to_string(party + 1));
      }
    }
  }
  // Sequential orthonormalization keeps outcome i aligned with state i+1
  // while making the projector sum exactly idempotent-friendly.
  std::vector<CVec> basis;
  Measurement m;
  m.party = party;
  CMat sum = CMat::Zero(dim, dim);
  for (int j = 0; j < n; ++j) {
    CVec v = set.local(j, party);
    for (const CVec& u : basis) v -= u * inner(u, v);
    v = normalized(v, set.tol);
    basis.push_back(v);
    m.kraus.push_back(v * v.adjoint());
    m.labels.push_back("state-" + std::to_string(j + 1));
    sum += m.kraus.back();
  }
  const CMat remainder = CMat::Identity(dim, dim) - sum;
  if (remainder.norm() > set.tol) {
    m.kraus.push_back(psd_sqrt(remainder, 1e3 * set.tol));
    m.labels.push_back("rest");
  }
  return m;
}

Measurement quad_sign_split(int party) {
  Measurement m;
  m.party = party;
  const double s = std::sqrt(3.0) / 6.0;
  for (const auto& [s1, s2] : {std::pair{1.0, 1.0}, {-1.0, 1.0}, {1.0, -1.0}, {-1.0, -1.0}}) {
    const CVec x = ket({1.0, s1, s2});
    m.kraus.push_back(s * (x * x.adjoint()));
    m.labels.push_back(std::string(s1 > 0 ? "+" : "-") + (s2 > 0 ? "+" : "-"));
  }
  return m;
}

Measurement identity_measurement(int party, int dim) {
  if (dim < 1) throw std::invalid_argument("identity_measurement: dim must be positive");
  Measurement m;
  m.party = party;
  m.kraus = {CMat::Identity(dim, dim)};
  m.labels = {"noop"};
  return m;
}

Measurement cycle_probe(const FamilyParams& p, int variant, double tol) {
  const bool has_d = std::abs(p.d) > tol;
  const bool has_g = std::abs(p.g) > tol;
  const bool has_h = std::abs(p.h) > tol;
  if (has_h) {
    throw std::invalid_argument("cycle_probe: the h coefficient must vanish");
  }
  CVec v;
  switch (variant) {
    case 1:
      if (!has_d || has_g) {
        throw std::invalid_argument("cycle_probe variant 1 needs d != 0 and g = 0");
      }
      v = basis_ket(3, 4);
      break;
    case 2:
      if (!has_g || has_d) {
        throw std::invalid_argument("cycle_probe variant 2 needs g != 0 and d = 0");
      }
      v = basis_ket(3, 4);
      break;
    case 3: {
      if (!has_d || !has_g) {
        throw std::invalid_argument("cycle_probe variant 3 needs d != 0 and g != 0");
      }
      // v is orthogonal to every first-party local except the last two:
      // <v|phi4_1> = d - g b picks out state 4, <v|phi5_1> = conj(d) state 5.
      v = CVec::Zero(4);
      v(1) = std::conj(p.d);
      v(3) = -std::conj(p.b);
      v /= v.norm();
      break;
    }
    default:
      throw std::invalid_argument("cycle_probe: variant must be 1, 2, or 3");
  }
  Measurement m = projective_split(0, v, tol);
  m.labels = {"probe", "rest"};
  return m;
}

OutcomeUpdate apply(const StateSet& set, const Measurement& m, int outcome) {
  check_applicable(set, m, outcome);
  const CMat& k = m.kraus[static_cast<size_t>(outcome)];
  OutcomeUpdate up;
  up.post.parties = set.parties;
  up.post.dims = set.dims;
  up.post.tol = set.tol;
  for (int j = 0; j < set.size(); ++j) {
    const CVec image = k * set.local(j, m.party);
    // Born probability <a|E|a> = ||M a||^2 for normalized product states.
    const double prob = image.squaredNorm();
    up.probabilities.push_back(prob);
    if (prob > set.tol) {
      ProductState post = set.states[static_cast<size_t>(j)];
      post.locals[static_cast<size_t>(m.party)] = image / image.norm();
      up.post.states.push_back(std::move(post));
      up.kept.push_back(j);
    } else {
      up.dropped.push_back(j);
    }
  }
  return up;
}

bool preserves_orthogonality(const StateSet& set, const Measurement& m, int outcome,
                             std::vector<std::pair<int, int>>* offending) {
  const OutcomeUpdate up = apply(set, m, outcome);
  bool ok = true;
  for (size_t j = 0; j < up.kept.size(); ++j) {
    for (size_t k = j + 1; k < up.kept.size(); ++k) {
      // Same per-party criterion as validate(): orthogonal on >= 1 party.
      bool orthogonal = false;
      for (int party = 0; party < set.parties && !orthogonal; ++party) {
        orthogonal = std::abs(inner(up.post.states[j].locals[static_cast<size_t>(party)],
                                    up.post.states[k].locals[static_cast<size_t>(party)])) <=
                     set.tol;
      }
      if (!orthogonal) {
        ok = false;
        if (offending == nullptr) return false;
        offending->emplace_back(up.kept[j], up.kept[k]);
      }
    }
  }
  return ok;
}

}  // namespace opsd
