#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sniht/core.hpp"
#include "sniht/rng.hpp"

#include <cmath>
#include <vector>

using namespace sniht;

namespace {

ComplexMatrix random_matrix(Index rows, Index cols, RngStream& rng) {
  ComplexMatrix a(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) a(i, j) = rng.circular_normal();
  }
  return a;
}

// All K-subsets of [0,n), lexicographic.
std::vector<SupportSet> all_subsets(Index n, Index k) {
  std::vector<SupportSet> out;
  SupportSet cur;
  const std::function<void(Index)> rec = [&](Index start) {
    if (static_cast<Index>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (Index i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

}  // namespace

TEST_CASE("mixed_norm worked examples") {
  ComplexMatrix s(2, 2);
  s << 3.0, 4.0, 0.0, 0.0;
  CHECK(mixed_norm(s, 2, 1) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(mixed_norm(s, 1, 1) == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(mixed_norm(ComplexMatrix::Identity(2, 2), 2, 2) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("mixed_norm agrees with entrywise norms when p = q") {
  RngStream rng(7, 1);
  for (int rep = 0; rep < 20; ++rep) {
    const ComplexMatrix s = random_matrix(5, 3, rng);
    double l1 = 0.0;
    double l2sq = 0.0;
    for (Index i = 0; i < s.rows(); ++i) {
      for (Index j = 0; j < s.cols(); ++j) {
        l1 += std::abs(s(i, j));
        l2sq += std::norm(s(i, j));
      }
    }
    CHECK(mixed_norm(s, 1, 1) == doctest::Approx(l1).epsilon(1e-12));
    CHECK(mixed_norm(s, 2, 2) == doctest::Approx(std::sqrt(l2sq)).epsilon(1e-12));
  }
}

TEST_CASE("mixed_norm absolute homogeneity") {
  RngStream rng(7, 2);
  const Complex c(-1.25, 2.5);
  for (int rep = 0; rep < 20; ++rep) {
    const ComplexMatrix s = random_matrix(4, 4, rng);
    for (int p : {1, 2}) {
      for (int q : {1, 2}) {
        CHECK(mixed_norm(c * s, p, q) ==
              doctest::Approx(std::abs(c) * mixed_norm(s, p, q)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("mixed_norm rejects unsupported exponents") {
  const ComplexMatrix s = ComplexMatrix::Ones(2, 2);
  CHECK_THROWS_AS(mixed_norm(s, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(mixed_norm(s, 1, 0), std::invalid_argument);
}

TEST_CASE("row_support examples") {
  ComplexMatrix s = ComplexMatrix::Zero(3, 2);
  s(1, 0) = 1.0;
  s(2, 1) = Complex(0.0, 2.0);
  CHECK(row_support(s) == SupportSet{1, 2});
  CHECK(row_support(ComplexMatrix::Zero(3, 3)).empty());
  CHECK(row_support(ComplexMatrix::Ones(2, 2)) == SupportSet{0, 1});
}

TEST_CASE("hard_threshold keeps largest rows, ties to smaller index") {
  ComplexMatrix s(2, 2);
  s << 3.0, 0.0, 1.0, 1.0;
  const RowSparseSignal r = hard_threshold(s, 1);
  CHECK(r.support == SupportSet{0});
  CHECK(r.matrix(0, 0) == Complex(3.0, 0.0));
  CHECK(r.matrix.row(1).isZero(0.0));

  ComplexMatrix tie(3, 1);
  tie << 2.0, 2.0, 1.0;
  CHECK(hard_threshold(tie, 1).support == SupportSet{0});
}

TEST_CASE("hard_threshold with K = p is the identity") {
  RngStream rng(7, 3);
  const ComplexMatrix s = random_matrix(5, 2, rng);
  const RowSparseSignal r = hard_threshold(s, 5);
  CHECK(r.matrix == s);
  CHECK(r.support == row_support(s));
}

TEST_CASE("hard_threshold rejects K > p") {
  CHECK_THROWS_AS(hard_threshold(ComplexMatrix::Ones(2, 2), 3), std::invalid_argument);
}

TEST_CASE("hard_threshold is idempotent and K-rowsparse") {
  RngStream rng(7, 4);
  for (int rep = 0; rep < 30; ++rep) {
    const Index p = 1 + static_cast<Index>(rng.bounded(8));
    const Index k = static_cast<Index>(rng.bounded(static_cast<std::uint64_t>(p) + 1));
    const ComplexMatrix s = random_matrix(p, 3, rng);
    const RowSparseSignal once = hard_threshold(s, k);
    CHECK(static_cast<Index>(once.support.size()) <= k);
    CHECK(once.support == row_support(once.matrix));
    const RowSparseSignal twice = hard_threshold(once.matrix, k);
    CHECK(twice.matrix == once.matrix);
    CHECK(twice.support == once.support);
  }
}

TEST_CASE("hard_threshold minimizes distance over K-rowsparse matrices") {
  RngStream rng(7, 5);
  for (int rep = 0; rep < 10; ++rep) {
    const Index p = 5 + static_cast<Index>(rng.bounded(4));  // p in [5,8]
    const Index k = 1 + static_cast<Index>(rng.bounded(3));  // k in [1,3]
    const ComplexMatrix s = random_matrix(p, 2, rng);
    const RowSparseSignal ht = hard_threshold(s, k);
    const double achieved = (s - ht.matrix).squaredNorm();
    // Brute force: the best K-rowsparse approximation restricted to support
    // G is S|_G, so scanning all supports gives the global optimum.
    double best = std::numeric_limits<double>::infinity();
    for (const auto& subset : all_subsets(p, k)) {
      best = std::min(best, (s - sparsify_rows(s, subset)).squaredNorm());
    }
    CHECK(achieved <= best + 1e-12 * std::max(1.0, best));
  }
}

TEST_CASE("restriction operators") {
  ComplexMatrix s(2, 2);
  s << 1.0, 1.0, 2.0, 2.0;
  CHECK(sparsify_rows(s, {}) == ComplexMatrix::Zero(2, 2));
  CHECK(sparsify_rows(s, {0, 1}) == s);
  const ComplexMatrix only_second = sparsify_rows(s, {1});
  CHECK(only_second.row(0).isZero(0.0));
  CHECK(only_second.row(1) == s.row(1));

  const ComplexMatrix cols = select_columns(s, {1});
  CHECK(cols.rows() == 2);
  CHECK(cols.cols() == 1);
  CHECK(cols(0, 0) == s(0, 1));

  const ComplexMatrix rows = select_rows(s, {1});
  CHECK(rows.rows() == 1);
  CHECK(rows.row(0) == s.row(1));

  CHECK_THROWS_AS(sparsify_rows(s, {2}), std::out_of_range);
  CHECK_THROWS_AS(select_columns(s, {5}), std::out_of_range);
}

TEST_CASE("finiteness validation") {
  ComplexMatrix s = ComplexMatrix::Ones(2, 2);
  CHECK(all_finite(s));
  s(1, 1) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_FALSE(all_finite(s));
  CHECK_THROWS_AS(require_finite(s, "S"), std::invalid_argument);
}

TEST_CASE("MixedNormIndex validation and labels") {
  CHECK(MixedNormIndex(2, 1).label() == "2,1");
  CHECK(MixedNormIndex::l11() == MixedNormIndex(1, 1));
  CHECK_THROWS_AS(MixedNormIndex(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(MixedNormIndex(3, 1), std::invalid_argument);
}
