#include <gtest/gtest.h>

#include "causat/polynomial.hpp"

using namespace causat;

namespace {

Polynomial q(int i) { return Polynomial::variable(2, i); }
Polynomial k(const Rational& c) { return Polynomial::constant(2, c); }

}  // namespace

TEST(Polynomial, ArithmeticAndDegree) {
  Polynomial p = q(0) * q(1) - k(ratio(1, 4));
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(Polynomial(2).degree(), -1);
  EXPECT_EQ(k(3).degree(), 0);
  EXPECT_TRUE((q(0) - q(0)).isZero());
  std::vector<Rational> pt = {ratio(1, 2), ratio(1, 2)};
  EXPECT_EQ(p.evaluate(pt), 0);
  EXPECT_EQ(p.toString({"q1", "q2"}), "q1*q2 - 1/4");
}

TEST(Polynomial, SubstituteAndUnivariate) {
  Polynomial p = q(0) * q(0) + q(1);
  Polynomial s = p.substitute(1, k(1) - q(0));
  EXPECT_FALSE(s.mentions(1));
  std::vector<Rational> pt = {0, 0};
  EXPECT_EQ(s.univariate(0, pt), (std::vector<Rational>{1, -1, 1}));
  EXPECT_EQ((q(0) * ratio(3, 2) + q(1)).linearCoefficient(0), ratio(3, 2));
}

TEST(Polynomial, RingLaws) {
  Polynomial a = q(0) * q(1) + k(2);
  Polynomial b = q(1) - q(0) * ratio(1, 3);
  Polynomial c = q(0) * q(0);
  EXPECT_EQ(a * (b + c), a * b + a * c);
  EXPECT_EQ(a * b, b * a);
  EXPECT_EQ(-(-a), a);
}

TEST(Polynomial, Holds) {
  EXPECT_TRUE(holds(0, RelOp::Le));
  EXPECT_FALSE(holds(0, RelOp::Lt));
  EXPECT_TRUE(holds(1, RelOp::Ne));
  EXPECT_TRUE(holds(-1, RelOp::Lt));
  EXPECT_FALSE(holds(-1, RelOp::Ge));
}
