#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "raf/littlewood.hpp"
#include "raf/raster.hpp"
#include "raf/sampler.hpp"

using raf::Alphabet;
using raf::cplx;

namespace {

const raf::RootAtlas& z13() {
  static const raf::RootAtlas atlas = raf::enumerate_roots(13, Alphabet::PlusMinusOne);
  return atlas;
}

double directed_hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double h = 0.0;
  for (const auto& x : a) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& y : b) m = std::min(m, std::abs(x - y));
    h = std::max(h, m);
  }
  return h;
}

std::vector<cplx> roots_within(std::span<const cplx> coeffs, double r) {
  std::vector<cplx> out;
  for (const auto& z : raf::aberth_root_list(raf::Polynomial(std::vector<cplx>(coeffs.begin(), coeffs.end()))))
    if (std::abs(z) <= r) out.push_back(z);
  return out;
}

}  // namespace

TEST(Alphabet, AtomsAndNames) {
  EXPECT_EQ(raf::alphabet_atoms(Alphabet::PlusMinusOne).size(), 2u);
  const auto q = raf::alphabet_atoms(Alphabet::Quaternary);
  ASSERT_EQ(q.size(), 4u);
  for (const auto& a : q) EXPECT_DOUBLE_EQ(std::norm(a), 2.0);
  EXPECT_EQ(raf::parse_alphabet(raf::alphabet_name(Alphabet::Quaternary)), Alphabet::Quaternary);
  EXPECT_EQ(raf::parse_alphabet("pm1"), Alphabet::PlusMinusOne);
  EXPECT_THROW(raf::parse_alphabet("binary"), raf::DomainError);
}

TEST(Alphabet, SequenceCount) {
  EXPECT_EQ(raf::sequence_count(13, Alphabet::PlusMinusOne), 16384u);
  EXPECT_EQ(raf::sequence_count(8, Alphabet::Quaternary), 262144u);
  EXPECT_EQ(raf::sequence_count(100, Alphabet::Quaternary), std::numeric_limits<std::uint64_t>::max());
}

TEST(Alphabet, SequenceIndexIsLittleEndian) {
  const auto atoms = raf::alphabet_atoms(Alphabet::PlusMinusOne);
  // 6 = 0b110: X_0 = atoms[0], X_1 = X_2 = atoms[1].
  const auto p = raf::sequence_polynomial(6, 2, atoms);
  EXPECT_EQ(p[0], cplx(1.0));
  EXPECT_EQ(p[1], cplx(-1.0));
  EXPECT_EQ(p[2], cplx(-1.0));
}

TEST(Enumerate, DegreeOneByHand) {
  const auto atlas = raf::enumerate_roots(1, Alphabet::PlusMinusOne);
  // +-1 +- z: roots -1, 1, 1, -1.
  ASSERT_EQ(atlas.roots.size(), 4u);
  EXPECT_EQ(atlas.roots[0], cplx(-1.0));
  EXPECT_EQ(atlas.roots[1], cplx(-1.0));
  EXPECT_EQ(atlas.roots[2], cplx(1.0));
  EXPECT_EQ(atlas.roots[3], cplx(1.0));
  EXPECT_EQ(raf::hole_radius(atlas, 0.0), 1.0);
}

TEST(Enumerate, ExactCardinality) {
  for (std::size_t n = 1; n <= 10; ++n)
    EXPECT_EQ(raf::enumerate_roots(n, Alphabet::PlusMinusOne).roots.size(), n << (n + 1));
  for (std::size_t n = 1; n <= 5; ++n)
    EXPECT_EQ(raf::enumerate_roots(n, Alphabet::Quaternary).roots.size(), n * raf::sequence_count(n, Alphabet::Quaternary));
}

TEST(Enumerate, DegreeThirteen) {
  const auto& atlas = z13();
  EXPECT_EQ(atlas.roots.size(), 212992u);
  EXPECT_TRUE(std::is_sorted(atlas.roots.begin(), atlas.roots.end(), raf::detail::lex_less));
  for (const auto& z : atlas.roots) {
    ASSERT_GT(std::abs(z), 0.5);
    ASSERT_LT(std::abs(z), 2.0);
  }
}

TEST(Enumerate, DegreeThirteenSymmetries) {
  const auto& r = z13().roots;
  EXPECT_TRUE(raf::closed_under(r, [](cplx z) { return std::conj(z); }));
  EXPECT_TRUE(raf::closed_under(r, [](cplx z) { return -z; }));
  EXPECT_TRUE(raf::closed_under(r, [](cplx z) { return 1.0 / z; }));
  // Not closed under rotation by i: the alphabet is real.
  EXPECT_FALSE(raf::closed_under(r, [](cplx z) { return cplx(0.0, 1.0) * z; }));
}

TEST(Enumerate, QuaternarySymmetriesAndAnnulus) {
  const auto atlas = raf::enumerate_roots(5, Alphabet::Quaternary);
  const auto& r = atlas.roots;
  EXPECT_TRUE(raf::closed_under(r, [](cplx z) { return cplx(0.0, 1.0) * z; }));
  EXPECT_TRUE(raf::closed_under(r, [](cplx z) { return std::conj(z); }));
  EXPECT_TRUE(raf::closed_under(r, [](cplx z) { return 1.0 / z; }));
  for (const auto& z : r) {
    EXPECT_GT(std::abs(z), 0.5);
    EXPECT_LT(std::abs(z), 2.0);
  }
}

TEST(Enumerate, QuotientEqualsFullEnumeration) {
  for (const auto a : {Alphabet::PlusMinusOne, Alphabet::Quaternary}) {
    const std::size_t n = a == Alphabet::PlusMinusOne ? 11 : 5;
    const auto full = raf::enumerate_roots(n, a);
    raf::EnumerateOptions opt;
    opt.quotient = true;
    EXPECT_EQ(raf::enumerate_roots(n, a, opt).roots, full.roots) << raf::alphabet_name(a);
  }
}

TEST(Enumerate, DeterministicAcrossWorkers) {
  raf::EnumerateOptions opt;
  opt.workers = 3;
  EXPECT_EQ(raf::enumerate_roots(10, Alphabet::PlusMinusOne, opt).roots,
            raf::enumerate_roots(10, Alphabet::PlusMinusOne).roots);
}

TEST(Enumerate, BudgetAndDomain) {
  EXPECT_THROW(raf::enumerate_roots(0, Alphabet::PlusMinusOne), raf::DomainError);
  raf::EnumerateOptions opt;
  opt.budget = 1000;
  EXPECT_THROW(raf::enumerate_roots(10, Alphabet::PlusMinusOne, opt), raf::BudgetExceeded);
  EXPECT_THROW(raf::enumerate_roots(10, Alphabet::Quaternary), raf::BudgetExceeded);
  EXPECT_THROW(raf::enumerate_roots(60, Alphabet::PlusMinusOne), raf::BudgetExceeded);
}

TEST(Holes, CloseUpAtOne) {
  const auto z7 = raf::enumerate_roots(7, Alphabet::PlusMinusOne);
  const double h7 = raf::hole_radius(z7, 1.0);
  const double h13 = raf::hole_radius(z13(), 1.0);
  EXPECT_LT(h13, h7);
  EXPECT_GT(h13, 0.0);
  // The same at -1, by negation symmetry.
  EXPECT_NEAR(raf::hole_radius(z13(), -1.0), h13, 1e-9);
}

TEST(Holes, ExcludedCenterAndSentinel) {
  const std::vector<cplx> roots{1.0, 1.0 + 1e-9, 0.5};
  EXPECT_EQ(raf::hole_radius(roots, 1.0), 0.5);
  EXPECT_TRUE(std::isinf(raf::hole_radius(std::vector<cplx>{1.0}, 1.0)));
  EXPECT_TRUE(std::isinf(raf::hole_radius(std::vector<cplx>{}, 1.0)));
}

TEST(Holes, QuaternaryRotationInvariance) {
  const auto atlas = raf::enumerate_roots(6, Alphabet::Quaternary);
  EXPECT_NEAR(raf::hole_radius(atlas, 1.0), raf::hole_radius(atlas, cplx(0.0, 1.0)), 1e-9);
}

TEST(MultisetMatch, Basics) {
  const std::vector<cplx> a{1.0, 2.0, 2.0}, b{2.0, 1.0, 2.0 + 1e-12}, c{1.0, 1.0, 2.0};
  EXPECT_TRUE(raf::multiset_match(a, b, 1e-9));
  EXPECT_FALSE(raf::multiset_match(a, c, 1e-9));
  EXPECT_FALSE(raf::multiset_match(a, std::vector<cplx>{1.0, 2.0}, 1e-9));
  // Matches across a cell boundary.
  EXPECT_TRUE(raf::multiset_match(std::vector<cplx>{0.9999999999}, std::vector<cplx>{1.0000000001}, 1e-9));
}

TEST(Raster, DegreeThirteenIsConjugationSymmetric) {
  // Odd height: the real axis runs through the middle of a pixel row.
  const auto grid = raf::raster_accumulate(z13().roots, raf::Window{-2.2, 2.2, -2.2, 2.2}, 511, 511);
  EXPECT_EQ(grid.total(), 212992.0);
  EXPECT_TRUE(grid.flipped_vertically() == grid);
}

TEST(Raster, AnnulusCoverage) {
  std::size_t in = 0;
  for (const auto& z : z13().roots) in += std::abs(z) > 0.4 && std::abs(z) < 2.5;
  EXPECT_GT(static_cast<double>(in), 0.99 * 212992.0);
}

TEST(Convergence, PrefixPolynomialsApproachTheSeries) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto x = raf::sample_coefficients(raf::Ensemble::rademacher(), 61, seed);
    const std::span<const cplx> p40(x.data(), 41), p60(x.data(), 61);
    // Compare against slightly larger disks so roots near the edge are not lost.
    for (const auto& [r, tol] : {std::pair{0.7, 1e-6}, std::pair{0.8, 1e-4}}) {
      EXPECT_LT(directed_hausdorff(roots_within(p40, r), roots_within(p60, r + 0.02)), tol) << seed;
      EXPECT_LT(directed_hausdorff(roots_within(p60, r), roots_within(p40, r + 0.02)), tol) << seed;
    }
  }
}
