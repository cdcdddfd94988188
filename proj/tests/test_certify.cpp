#include "opsd/certify.hpp"

#include "opsd/generate.hpp"
#include "opsd/states.hpp"

#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

using namespace opsd;

TEST_SUITE_BEGIN("certify");

namespace {

// All ten pairs on party 1 except (0,1), which sits alone on party 2.
OrthoGraph nine_one_graph() {
  OrthoGraph g;
  g.n = 5;
  g.m = 2;
  for (int j = 0; j < 5; ++j) {
    for (int k = j + 1; k < 5; ++k) {
      g.labels[{j, k}] = (j == 0 && k == 1) ? std::vector<int>{1}
                                            : std::vector<int>{0};
    }
  }
  return g;
}

}  // namespace

TEST_CASE("constraint pairs are the single-party orthogonalities") {
  const StateSet cycles = cycle_family_basic(1, 1, 1, 1);
  const std::vector<std::pair<int, int>> first{
      {0, 3}, {0, 4}, {1, 2}, {1, 4}, {2, 3}};
  CHECK(constraint_pairs(cycles, 0) == first);

  const StateSet easy = tripartite_distinguishable_set();
  CHECK(constraint_pairs(easy, 2) ==
        std::vector<std::pair<int, int>>{{1, 3}, {2, 4}});

  SUBCASE("pairs orthogonal on several parties constrain no party") {
    // (e0,e0), (e1,e1), (+,e2): the pair (1,2) is orthogonal on both
    // parties, so neither party's measurement can break it.
    const double r2 = 1.0 / std::sqrt(2.0);
    StateSet set;
    set.parties = 2;
    set.dims = {2, 3};
    ProductState s0, s1, s2;
    s0.locals = {basis_ket(0, 2), basis_ket(0, 3)};
    s1.locals = {basis_ket(1, 2), basis_ket(1, 3)};
    s2.locals = {ket({r2, r2}), basis_ket(2, 3)};
    set.states = {s0, s1, s2};

    CHECK(constraint_pairs(set, 0).empty());
    CHECK(constraint_pairs(set, 1) ==
          std::vector<std::pair<int, int>>{{0, 2}, {1, 2}});
  }
}

TEST_CASE("solution spaces collapse to the identity on constrained parties") {
  const StateSet cycles = cycle_family_basic(1, 1, 1, 1);
  const OpmSolutionSpace space = opm_space(cycles, 0);

  // Ten real constraints on the five cycle pairs have rank eight, leaving
  // only multiples of the identity among 3x3 Hermitian solutions.
  REQUIRE(space.basis.size() == 1);
  CHECK(space.party == 0);
  CHECK(space.pairs == constraint_pairs(cycles, 0));
  CHECK((space.span_proj - CMat::Identity(3, 3)).norm() <= 1e-9);
  const CMat& b = space.basis[0];
  const cplx lambda = b.trace() / 3.0;
  CHECK((b - lambda * CMat::Identity(3, 3)).norm() <= 1e-9);

  SUBCASE("an embedding into a larger space stays trivial on the span") {
    // Zero-padding the first party to dimension 4 frees eight solution
    // directions (the border row, column, and corner), but compressing
    // any of them to the spanned block still yields a multiple of it.
    StateSet wide = cycles;
    wide.dims[0] = 4;
    for (auto& s : wide.states) {
      CVec padded = CVec::Zero(4);
      padded.head(3) = s.locals[0];
      s.locals[0] = padded;
    }
    const OpmSolutionSpace wspace = opm_space(wide, 0);
    CHECK(wspace.basis.size() == 8);
    CMat proj = CMat::Zero(4, 4);
    proj(0, 0) = proj(1, 1) = proj(2, 2) = 1;
    CHECK((wspace.span_proj - proj).norm() <= 1e-9);

    const TrivialityVerdict verdict = classify_triviality(wspace, wide);
    CHECK(verdict.kind == Triviality::ProportionalIdentityOnSpan);
    CHECK(verdict.max_residual <= 1e-9);
  }
}

TEST_CASE("the indistinguishable tripartite set certifies on every party") {
  const StateSet hard = tripartite_indistinguishable_set();
  const auto cert = certify_indistinguishable(hard);
  REQUIRE(cert.has_value());
  REQUIRE(cert->parties.size() == 3);

  // Frozen solution-space sizes: the five-cycle party pins everything to
  // the identity; three and two constraint pairs leave 6-dimensional
  // spaces that still compress trivially.
  CHECK(cert->parties[0].space.basis.size() == 1);
  CHECK(cert->parties[1].space.basis.size() == 6);
  CHECK(cert->parties[2].space.basis.size() == 6);
  for (const PartyCertificate& pc : cert->parties) {
    CHECK(pc.verdict.kind == Triviality::ProportionalIdentityOnSpan);
    CHECK(pc.verdict.max_residual <= 1e-9);
  }
  CHECK(certificate_residual(*cert, hard) <= 1e-9);

  SUBCASE("tampering with a basis element shows up in the residual") {
    Certificate broken = *cert;
    const CVec& a = hard.local(0, 0);
    const CVec& b = hard.local(3, 0);
    // a x b + b x a violates the (1,4) constraint with overlap 1.
    broken.parties[0].space.basis[0] =
        a * b.adjoint() + b * a.adjoint();
    CHECK(certificate_residual(broken, hard) >= 0.9);
  }
}

TEST_CASE("the distinguishable companion fails on the third party") {
  const StateSet easy = tripartite_distinguishable_set();
  CHECK_FALSE(certify_indistinguishable(easy).has_value());

  // The first two parties carry the same local encodings as the
  // indistinguishable set and stay trivial on their own.
  CHECK(classify_triviality(opm_space(easy, 0), easy).kind ==
        Triviality::ProportionalIdentityOnSpan);
  CHECK(classify_triviality(opm_space(easy, 1), easy).kind ==
        Triviality::ProportionalIdentityOnSpan);

  const OpmSolutionSpace space = opm_space(easy, 2);
  CHECK(space.basis.size() == 5);
  const TrivialityVerdict verdict = classify_triviality(space, easy);
  REQUIRE(verdict.kind == Triviality::Informative);
  CHECK(verdict.distinguished == std::pair<int, int>{1, 3});
  CHECK(verdict.max_residual == doctest::Approx(1.0));

  SUBCASE("the witness is a strictly interior POVM element") {
    const CMat& e = verdict.witness;
    REQUIRE(e.rows() == 3);
    CHECK((e - e.adjoint()).norm() <= 1e-12);
    CHECK(psd_residual(e, 1e-9) <= 1e-9);
    CHECK(psd_residual(CMat::Identity(3, 3) - e, 1e-9) <= 1e-9);

    // Born probabilities <a|E|a> on the third party separate states 2
    // and 4 by a definite gap.
    const double q1 = inner(easy.local(1, 2), e * easy.local(1, 2)).real();
    const double q3 = inner(easy.local(3, 2), e * easy.local(3, 2)).real();
    CHECK(q3 - q1 >= 0.1);
  }
}

TEST_CASE("an isolating-state structure is informative on both parties") {
  GenerateOptions opts;
  opts.dims = {5, 2};
  const StateSet set = generate_from_graph(nine_one_graph(), 42, opts);

  CHECK_FALSE(certify_indistinguishable(set).has_value());
  // Party 1: |l><l| for an isolated state's local is a legal solution
  // with profile (0,...,0,1). Party 2: |l1><l1| respects the only
  // constraint and separates the first two states.
  CHECK(classify_triviality(opm_space(set, 0), set).kind ==
        Triviality::Informative);
  CHECK(classify_triviality(opm_space(set, 1), set).kind ==
        Triviality::Informative);
}

TEST_CASE("rank-two matchings on three qubits certify") {
  OrthoGraph match;
  match.n = 4;
  match.m = 3;
  match.labels[{0, 1}] = {0};
  match.labels[{2, 3}] = {0};
  match.labels[{0, 2}] = {1};
  match.labels[{1, 3}] = {1};
  match.labels[{0, 3}] = {2};
  match.labels[{1, 2}] = {2};

  GenerateOptions opts;
  opts.dims = {2, 2, 2};
  const StateSet set = generate_from_graph(match, 7, opts);
  const auto cert = certify_indistinguishable(set);
  REQUIRE(cert.has_value());

  // Two generically unrelated orthogonal pairs per qubit force every
  // solution to be diagonal in two bases at once.
  for (const PartyCertificate& pc : cert->parties) {
    CHECK(pc.space.basis.size() == 1);
    CHECK(pc.verdict.kind == Triviality::ProportionalIdentityOnSpan);
  }
  CHECK(certificate_residual(*cert, set) <= 1e-9);
}

TEST_CASE("solution spaces that only equalize probabilities are detected") {
  // Synthetic space on one qubit: span{I, sigma_y} satisfies no
  // orthogonality constraint set from a product family here; what matters
  // is the classification: sigma_y is far from proportional to the
  // identity, yet every real local ket sees <v|sigma_y|v> = 0, so all
  // outcome profiles coincide.
  const double r2 = 1.0 / std::sqrt(2.0);
  StateSet set;
  set.parties = 2;
  set.dims = {2, 3};
  ProductState s0, s1, s2;
  s0.locals = {basis_ket(0, 2), basis_ket(0, 3)};
  s1.locals = {basis_ket(1, 2), basis_ket(1, 3)};
  s2.locals = {ket({r2, r2}), basis_ket(2, 3)};
  set.states = {s0, s1, s2};

  OpmSolutionSpace space;
  space.party = 0;
  space.span_proj = CMat::Identity(2, 2);
  CMat sigma_y = CMat::Zero(2, 2);
  sigma_y(0, 1) = cplx(0, -1);
  sigma_y(1, 0) = cplx(0, 1);
  space.basis = {r2 * CMat::Identity(2, 2), r2 * sigma_y};

  const TrivialityVerdict verdict = classify_triviality(space, set);
  CHECK(verdict.kind == Triviality::EqualProbabilitiesOnly);
  CHECK(verdict.max_residual <= 1e-12);
  CHECK(triviality_name(verdict.kind) == "EqualProbabilitiesOnly");
}

TEST_CASE("party indices outside the set are rejected") {
  const StateSet easy = tripartite_distinguishable_set();
  CHECK_THROWS_AS(constraint_pairs(easy, 3), std::invalid_argument);
  CHECK_THROWS_AS(opm_space(easy, -1), std::invalid_argument);
}

TEST_SUITE_END();
