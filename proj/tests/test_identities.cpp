#include <gtest/gtest.h>

#include "tfetd/identities.hpp"

using namespace tfetd;

TEST(FourierSymbol, ModerateTempering) {
  EXPECT_LE(check_fourier_symbol(TemperedParams::make(1.6, 1.0), 0.04), 1e-6);
  EXPECT_LE(check_fourier_symbol(TemperedParams::make(1.2, 0.5), 0.04), 1e-6);
}

TEST(FourierSymbol, StrongTemperingNarrowGaussian) {
  EXPECT_LE(check_fourier_symbol(TemperedParams::make(1.6, 25.0), 0.02), 1e-5);
}

TEST(FourierSymbol, Preconditions) {
  EXPECT_THROW(check_fourier_symbol(TemperedParams::make(1.6, 0.0), 0.04), DomainError);
  EXPECT_THROW(check_fourier_symbol(TemperedParams::make(1.6, 1.0), 0.2), DomainError);
}

TEST(SemigroupAdjoint, EqualOrdersTempered) {
  const IdentityDeviations d = check_semigroup_adjoint(0.6, 0.6, 1.0);
  EXPECT_LE(d.semigroup_dev, 1e-7);
  EXPECT_LE(d.adjoint_dev, 1e-7);
  EXPECT_LE(d.inverse_dev, 1e-9);
}

TEST(SemigroupAdjoint, ClassicalRiemannLiouville) {
  const IdentityDeviations d = check_semigroup_adjoint(0.3, 0.9, 0.0);
  EXPECT_LE(d.semigroup_dev, 1e-8);
  EXPECT_LE(d.adjoint_dev, 1e-7);
}

TEST(SemigroupAdjoint, FromParamsUsesHalfOrder) {
  const IdentityDeviations d = check_semigroup_adjoint(TemperedParams::make(1.8, 2.0));
  EXPECT_LE(d.semigroup_dev, 1e-7);
  EXPECT_LE(d.adjoint_dev, 1e-7);
  EXPECT_LE(d.inverse_dev, 1e-9);
}

TEST(SemigroupAdjoint, Preconditions) {
  EXPECT_THROW(check_semigroup_adjoint(1.5, 0.5, 1.0), DomainError);
  EXPECT_THROW(check_semigroup_adjoint(0.5, 0.0, 1.0), DomainError);
}
