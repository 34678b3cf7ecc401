#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hypstab/circle.hpp"
#include "hypstab/errors.hpp"

using namespace hypstab;

namespace {

const CircleSpec& fuchsian() {
  static const CircleSpec s = CircleSpec::fuchsian_genus2();
  return s;
}

const CircleSpec& schottky() {
  static const CircleSpec s = CircleSpec::schottky();
  return s;
}

}  // namespace

TEST(CircleGeometry, WrapAndGap) {
  EXPECT_DOUBLE_EQ(wrap_unit(1.25), 0.25);
  EXPECT_DOUBLE_EQ(wrap_unit(-0.25), 0.75);
  EXPECT_NEAR(signed_gap(0.9, 0.1), 0.2, 1e-15);
  EXPECT_NEAR(circle_distance(0.95, 0.05), 0.1, 1e-15);
  const Arc a{0.9, 0.2};
  EXPECT_TRUE(a.contains(0.05));
  EXPECT_FALSE(a.contains(0.5));
  EXPECT_TRUE(a.strictly_contains({0.95, 0.1}));
  EXPECT_FALSE(a.strictly_contains({0.9, 0.1}));
}

TEST(Mobius, RotationAndFixedPoints) {
  EXPECT_NEAR(MobiusGenerator::rotation(0.25).apply(0.1), 0.35, 1e-14);
  // Diagonal map fixes 0 (attracting) and 1/2; rotate the picture to 1/4.
  const MobiusGenerator diag{2.0, 0.0, 0.0, 0.5};
  EXPECT_NEAR(circle_distance(diag.attracting_fixed_point(), 0.0), 0, 1e-14);
  EXPECT_NEAR(diag.repelling_fixed_point(), 0.5, 1e-14);
  const auto m = MobiusGenerator::rotation(0.25) * diag * MobiusGenerator::rotation(-0.25);
  EXPECT_NEAR(m.attracting_fixed_point(), 0.25, 1e-14);
  EXPECT_THROW(MobiusGenerator::rotation(0.1).attracting_fixed_point(), DomainError);
  EXPECT_THROW((MobiusGenerator{2, 0, 0, 2}.validate()), InvalidInput);
}

TEST(CircleSpec, FuchsianRelatorHolds) {
  EXPECT_NO_THROW(fuchsian().validate());
  const auto rho = CircleAction::standard(fuchsian());
  for (const Word& rel : fuchsian().model.relators()) {
    for (double x : {0.0, 0.13, 0.5, 0.77}) EXPECT_NEAR(circle_distance(rho.apply_word(rel, x), x), 0, 1e-10);
  }
}

TEST(CircleSpec, SchottkyPingPong) {
  const auto rho = CircleAction::standard(schottky());
  EXPECT_TRUE(rho.ping_pong());
  // The image of the complement of pad(A) is the arc of half-width 0.08 around 0.
  const Arc img = rho.image(1, {schottky().pads[1].hi(), 1 - schottky().pads[1].length});
  EXPECT_NEAR(img.length, 0.16, 1e-12);
  EXPECT_NEAR(circle_distance(img.lo, 0.92), 0, 1e-12);
  EXPECT_THROW(CircleSpec::schottky(0.1, 0.12), InvalidInput);
}

TEST(CircleAction, IdentityWordAndInverses) {
  const auto rho = CircleAction::standard(schottky()).with_noise(0.005, 3);
  for (double x : {0.0, 0.3, 0.61}) {
    EXPECT_DOUBLE_EQ(rho.apply_word(Word{}, x), x);
    EXPECT_NEAR(circle_distance(rho.apply_word(Word{1, -1, 2, -2}, x), x), 0, 1e-12);
  }
}

TEST(CircleAction, ZeroNoiseIsIdentical) {
  const auto rho = CircleAction::standard(schottky());
  const auto same = rho.with_noise(0.0, 9);
  EXPECT_FALSE(same.letterwise());
  EXPECT_EQ(rho.generator_distance(same, 512), 0.0);
  EXPECT_THROW(CircleAction::standard(fuchsian()).with_noise(0.001, 1), InvalidInput);
  EXPECT_THROW(CircleAction::standard(CircleSpec::schottky(0.1, 0.099)).with_noise(0.03, 1), HypothesisError);
}

TEST(CircleHomeo, SampleLiftInverse) {
  const auto phi = FourierHomeo::sine(0.01);
  const auto h = CircleHomeo::sample([&](double x) { return phi(x); }, 4096);
  EXPECT_TRUE(h.strictly_monotone());
  EXPECT_NEAR(h.lift(1.3) - h.lift(0.3), 1.0, 1e-12);
  const auto inv = h.inverse();
  for (double x : {0.0, 0.2, 0.7}) EXPECT_NEAR(circle_distance(inv(h(x)), x), 0, 1e-5);
  EXPECT_THROW(CircleHomeo::sample([](double x) { return -x; }, 64), InvalidInput);
}

TEST(FourierHomeo, InverseAndSize) {
  const auto phi = FourierHomeo::random(0.004, 5);
  EXPECT_LE(phi.sup_distance(), 0.004 + 1e-12);
  for (double x : {0.0, 0.25, 0.9}) EXPECT_NEAR(circle_distance(phi(phi.inverse(x)), x), 0, 1e-14);
  EXPECT_THROW((FourierHomeo{{0.2}, {0.0}}.validate()), InvalidInput);
}

TEST(FixedPoint, SampledHomeoMatchesEigenvector) {
  const auto m = MobiusGenerator::rotation(0.25) * MobiusGenerator{1.5, 0, 0, 1 / 1.5} *
                 MobiusGenerator::rotation(-0.25);
  const auto h = CircleHomeo::sample([&](double x) { return m.apply(x); });
  const auto fx = attracting_fixed_point(h);
  EXPECT_NEAR(fx.x, 0.25, 1.0 / h.resolution());
  EXPECT_LT(fx.slope_right, 1);
  EXPECT_NEAR(fx.slope_left, 1 / (1.5 * 1.5), 1e-3);
}

TEST(FixedPoint, IdentityAndRotationThrow) {
  EXPECT_THROW(attracting_fixed_point(CircleHomeo::identity(1024)), DomainError);
  EXPECT_THROW(attracting_fixed_point([](double x) { return wrap_unit(x + 0.3); }), DomainError);
}

TEST(FixedPoint, ConjugationMovesFixedPoint) {
  const auto rho0 = CircleAction::standard(fuchsian());
  const auto phi = FourierHomeo::sine(0.01);
  const auto rho = rho0.conjugated(phi);
  for (const Word& w : {Word{1}, Word{2, 3}, Word{-4, 1, 1}}) {
    const double x0 = attracting_fixed_point([&](double p) { return rho0.apply_word(w, p); }).x;
    const double x = attracting_fixed_point([&](double p) { return rho.apply_word(w, p); }).x;
    EXPECT_NEAR(circle_distance(x, phi(x0)), 0, 1e-9);
  }
}

TEST(ReducedWords, Counts) {
  EXPECT_EQ(reduced_words(2, 3).size(), 4u + 12u + 36u);
  // Length 3 loses the 8 words x y x^-1.
  EXPECT_EQ(reduced_words(2, 3, true).size(), 4u + 12u + 28u);
  EXPECT_EQ(reduced_words(2, 1), (std::vector<Word>{Word{1}, Word{-1}, Word{2}, Word{-2}}));
}

TEST(SemiConjugacy, RejectsBadTables) {
  EXPECT_THROW(SemiConjugacy({0.1}, {0.1}), InvalidInput);
  EXPECT_THROW(SemiConjugacy({0.1, 0.5}, {0.5, 0.2}), InvalidInput);
  EXPECT_THROW(SemiConjugacy({0.5, 0.1}, {0.1, 0.5}), InvalidInput);
  const SemiConjugacy flat({0.1, 0.4, 0.6}, {0.2, 0.2, 0.7});
  EXPECT_TRUE(flat.monotone());
  EXPECT_DOUBLE_EQ(flat(0.25), 0.2);
}

TEST(SemiConjugacy, SameActionIsIdentity) {
  const auto rho0 = CircleAction::standard(fuchsian());
  const auto h = build_semiconjugacy(rho0, rho0, {3, 0.9, 16});
  for (std::size_t i = 0; i < h.xs().size(); ++i) EXPECT_NEAR(h.ys()[i], h.xs()[i], 1e-15);
  EXPECT_EQ(h.discarded, 0u);
  std::vector<double> pts(h.xs().begin(), h.xs().end());
  const auto rep = verify_semiconjugacy(h, rho0, rho0, reduced_words(4, 2), pts);
  EXPECT_LT(rep.defect, 1e-12);
  EXPECT_TRUE(rep.monotone && rep.degree_one);
}

TEST(SemiConjugacy, ConjugationGroundTruth) {
  const auto rho0 = CircleAction::standard(fuchsian());
  const auto phi = FourierHomeo::sine(0.01);
  const auto rho = rho0.conjugated(phi);
  const auto h = build_semiconjugacy(rho0, rho, {4, 0.9, 16});
  for (std::size_t i = 0; i < h.xs().size(); ++i) {
    EXPECT_NEAR(circle_distance(h.xs()[i], phi(h.ys()[i])), 0, 1e-12);
  }
  const auto gens = verify_semiconjugacy(h, rho0, rho, reduced_words(4, 1), 1024);
  const auto longer = verify_semiconjugacy(h, rho0, rho, reduced_words(4, 2), 1024);
  EXPECT_LT(gens.defect, 1e-3);
  EXPECT_GE(longer.defect, gens.defect);
  EXPECT_NEAR(gens.distance_to_identity, 0.01, 1e-3);
}

TEST(SemiConjugacy, InsufficientData) {
  const auto rho0 = CircleAction::standard(fuchsian());
  try {
    build_semiconjugacy(rho0, rho0, {1, 0.9, 1000});
    FAIL() << "expected insufficient data";
  } catch (const HypothesisError& e) {
    EXPECT_EQ(e.step(), "insufficient-data");
  }
}

TEST(MinimalSet, PadsThenNested) {
  const auto rho = CircleAction::standard(schottky()).with_noise(0.005, 11);
  const auto cover = minimal_set(rho, 5);
  ASSERT_EQ(cover.depth.size(), 5u);
  ASSERT_EQ(cover.depth[0].size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(cover.depth[0][i].lo, schottky().pads[i].lo);
  EXPECT_EQ(cover.depth[4].size(), 4u * 81u);
  for (std::size_t n = 1; n < cover.total_length.size(); ++n) {
    EXPECT_LT(cover.total_length[n], 0.5 * cover.total_length[n - 1]);
  }
  for (double x : minimal_set_sample(rho, 5)) {
    const auto& arcs = cover.depth[4];
    EXPECT_TRUE(std::any_of(arcs.begin(), arcs.end(), [&](const Arc& a) { return a.contains(x); }));
  }
  EXPECT_THROW(minimal_set(CircleAction::standard(fuchsian()), 2), InvalidInput);
}
