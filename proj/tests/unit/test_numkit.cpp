#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

#include "shgcn/error.hpp"
#include "shgcn/numkit/gradcheck.hpp"
#include "shgcn/numkit/matrix.hpp"
#include "shgcn/numkit/ops.hpp"
#include "shgcn/numkit/precision.hpp"
#include "shgcn/numkit/random.hpp"
#include "shgcn/numkit/tape.hpp"

using namespace shgcn;
using namespace shgcn::numkit;

namespace {

// Decodes an IEEE-754 binary16 bit pattern straight from the field layout.
double decode_half(std::uint16_t bits) {
  const int sign = bits >> 15;
  const int exponent = (bits >> 10) & 0x1f;
  const int mantissa = bits & 0x3ff;
  double value;
  if (exponent == 0) {
    value = std::ldexp(mantissa, -24);
  } else if (exponent == 31) {
    value = mantissa ? NAN : INFINITY;
  } else {
    value = std::ldexp(1024 + mantissa, exponent - 25);
  }
  return sign ? -value : value;
}

// Oracle built by enumerating every finite non-negative binary16 value and
// picking the nearest, ties to the even bit pattern.
class HalfOracle {
 public:
  HalfOracle() {
    for (std::uint32_t b = 0; b < 0x7c00; ++b) values_.push_back(decode_half(static_cast<std::uint16_t>(b)));
  }

  double round(double x) const {
    const double a = std::abs(x);
    // Halfway between the largest finite value and the next binade step.
    if (a >= 65520.0) return std::copysign(INFINITY, x);
    const auto it = std::lower_bound(values_.begin(), values_.end(), a);
    const std::size_t hi = static_cast<std::size_t>(it - values_.begin());
    if (hi == values_.size()) return std::copysign(values_.back(), x);
    if (values_[hi] == a) return std::copysign(a, x);
    const std::size_t lo = hi - 1;
    const double dlo = a - values_[lo], dhi = values_[hi] - a;
    std::size_t pick = dlo < dhi ? lo : hi;
    if (dlo == dhi) pick = (lo % 2 == 0) ? lo : hi;
    return std::copysign(values_[pick], x);
  }

 private:
  std::vector<double> values_;
};

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double lo = -2.0, double hi = 2.0) {
  std::vector<double> d(r * c);
  for (double& x : d) x = rng.uniform(lo, hi);
  return Matrix(r, c, std::move(d));
}

// Builds f(x) on a fresh tape and returns (value, analytic gradient).
template <typename Build>
std::pair<double, Matrix> eval_with_grad(const Matrix& x, Build build) {
  Tape tape;
  const Var v = tape.parameter(x);
  const Var root = build(v);
  tape.backward(root);
  return {root.value().item(), tape.grad(v)};
}

template <typename Build>
double gradcheck(const Matrix& x, Build build) {
  const auto [value, analytic] = eval_with_grad(x, build);
  (void)value;
  const Matrix numeric = finite_diff_grad(
      [&](const Matrix& m) {
        Tape tape;
        return build(tape.constant(m)).value().item();
      },
      x);
  return max_relative_error(analytic, numeric);
}

}  // namespace

TEST(Precision, MachineEpsilon) {
  EXPECT_EQ(machine_epsilon(PrecisionMode::Half), std::ldexp(1.0, -10));
  EXPECT_EQ(machine_epsilon(PrecisionMode::Single), std::ldexp(1.0, -23));
  EXPECT_EQ(machine_epsilon(PrecisionMode::Double), std::ldexp(1.0, -52));
}

TEST(Precision, WorkedHalfExamples) {
  EXPECT_EQ(round_to_precision(1.0, PrecisionMode::Half), 1.0);
  EXPECT_EQ(round_to_precision(1.0 + 4.0e-4, PrecisionMode::Half), 1.0);
  EXPECT_EQ(round_to_precision(1.0 + 9.765625e-4, PrecisionMode::Half), 1.0009765625);
}

TEST(Precision, HalfMatchesEnumerationOracle) {
  const HalfOracle oracle;
  Rng rng(11);
  for (int i = 0; i < 200000; ++i) {
    // Log-uniform magnitudes spanning subnormals through overflow.
    const double mag = std::exp2(rng.uniform(-26.0, 17.0));
    const double x = rng.uniform() < 0.5 ? -mag : mag;
    ASSERT_EQ(round_to_precision(x, PrecisionMode::Half), oracle.round(x)) << "x = " << x;
  }
  // Exact ties between neighbours go to the even pattern.
  for (std::uint16_t b = 0x3c00; b < 0x3c40; ++b) {
    const double mid = 0.5 * (decode_half(b) + decode_half(static_cast<std::uint16_t>(b + 1)));
    EXPECT_EQ(round_to_precision(mid, PrecisionMode::Half), oracle.round(mid));
    EXPECT_EQ(round_to_precision(mid, PrecisionMode::Half), decode_half(b % 2 == 0 ? b : b + 1));
  }
}

TEST(Precision, SingleMatchesHardwareCast) {
  Rng rng(12);
  for (int i = 0; i < 100000; ++i) {
    const double x = rng.uniform(-1.0, 1.0) * std::exp2(rng.uniform(-140.0, 120.0));
    ASSERT_EQ(round_to_precision(x, PrecisionMode::Single), static_cast<double>(static_cast<float>(x)));
  }
}

TEST(Precision, OverflowSaturatesAndFlags) {
  clear_overflow_flag();
  EXPECT_EQ(round_to_precision(65504.0, PrecisionMode::Half), 65504.0);
  EXPECT_FALSE(overflow_flag());
  EXPECT_EQ(round_to_precision(70000.0, PrecisionMode::Half), INFINITY);
  EXPECT_TRUE(overflow_flag());
  clear_overflow_flag();
  EXPECT_EQ(round_to_precision(-1e39, PrecisionMode::Single), -INFINITY);
  EXPECT_TRUE(overflow_flag());
  clear_overflow_flag();
  EXPECT_TRUE(std::isnan(round_to_precision(NAN, PrecisionMode::Half)));
}

TEST(Precision, RoundingIsIdempotentAndEpsilonIsSharp) {
  Rng rng(13);
  for (auto mode : {PrecisionMode::Half, PrecisionMode::Single, PrecisionMode::Double}) {
    for (int i = 0; i < 10000; ++i) {
      const double x = rng.uniform(-1e4, 1e4);
      const double r = round_to_precision(x, mode);
      ASSERT_EQ(round_to_precision(r, mode), r);
    }
    const double eps = machine_epsilon(mode);
    EXPECT_GT(round_to_precision(1.0 + eps, mode), 1.0);
    EXPECT_EQ(round_to_precision(1.0 + eps / 2 * (1 - std::ldexp(1.0, -20)), mode), 1.0);
  }
}

TEST(Precision, ParseNames) {
  EXPECT_EQ(parse_precision("half"), PrecisionMode::Half);
  EXPECT_EQ(parse_precision("single"), PrecisionMode::Single);
  EXPECT_EQ(parse_precision("double"), PrecisionMode::Double);
  EXPECT_THROW(parse_precision("quad"), ContractError);
}

TEST(Matrix, ConstructionRoundsToMode) {
  const Matrix m(1, 2, {1.0 + 4.0e-4, 3.14159}, PrecisionMode::Half);
  EXPECT_EQ(m(0, 0), 1.0);
  EXPECT_EQ(m.with_mode(PrecisionMode::Half), m);
  EXPECT_THROW(Matrix(2, 2, std::vector<double>{1.0}), ShapeError);
}

TEST(Matrix, MatmulExamples) {
  const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
  EXPECT_EQ(matmul(Matrix::identity(2), a), a);
  EXPECT_EQ(matmul(a, Matrix::from_rows({{1}, {1}})), Matrix::from_rows({{3}, {7}}));
  EXPECT_THROW(matmul(a, Matrix(3, 1)), ShapeError);
  EXPECT_THROW(matmul(a, Matrix::identity(2, PrecisionMode::Half)), ShapeError);

  const Matrix ones_row = Matrix::full(1, 2048, 1.0, PrecisionMode::Half);
  const Matrix ones_col = Matrix::full(2048, 1, 1.0, PrecisionMode::Half);
  const double s = matmul(ones_row, ones_col).item();
  EXPECT_TRUE(std::isfinite(s));
  EXPECT_EQ(s, HalfOracle().round(2048.0));
}

TEST(Matrix, IntegerMatmulIsAssociative) {
  Rng rng(14);
  auto ints = [&](std::size_t r, std::size_t c) {
    std::vector<double> d(r * c);
    for (double& x : d) x = static_cast<double>(static_cast<int>(rng.index(11)) - 5);
    return Matrix(r, c, std::move(d));
  };
  for (int t = 0; t < 50; ++t) {
    const Matrix a = ints(3, 4), b = ints(4, 5), c = ints(5, 2);
    EXPECT_EQ(matmul(matmul(a, b), c), matmul(a, matmul(b, c)));
  }
}

TEST(Tape, BackwardExamples) {
  const Matrix x = Matrix::from_rows({{1, -2, 3}, {0.5, 4, -1}});
  auto [v1, g1] = eval_with_grad(x, [](Var v) { return ops::sum(v); });
  EXPECT_EQ(g1, Matrix::full(2, 3, 1.0));

  const Matrix w = Matrix::from_rows({{0.3, -0.7, 1.1}});
  Tape tape;
  const Var wv = tape.parameter(w);
  const Var xv = tape.constant(Matrix::from_rows({{2, 5, -1}}));
  tape.backward(ops::sum(ops::mul(wv, xv)));
  EXPECT_EQ(tape.grad(wv), Matrix::from_rows({{2, 5, -1}}));

  auto [v3, g3] = eval_with_grad(Matrix::scalar(0.5), [](Var v) { return ops::tanh(v); });
  EXPECT_NEAR(g3.item(), 0.78645, 1e-5);
  EXPECT_NEAR(g3.item(), 1 - std::tanh(0.5) * std::tanh(0.5), 1e-15);
}

TEST(Tape, NonScalarRootAndUnreachableNodes) {
  Tape tape;
  const Var a = tape.parameter(Matrix::full(2, 2, 1.0));
  const Var b = tape.parameter(Matrix::full(2, 2, 3.0));
  EXPECT_THROW(tape.backward(a), ContractError);
  tape.backward(ops::sum(a));
  EXPECT_EQ(tape.grad(b), Matrix(2, 2));
}

TEST(Tape, GradientsAreDoubleUnderHalfForward) {
  Tape tape(PrecisionMode::Half);
  const Var x = tape.parameter(Matrix::scalar(0.1));
  tape.backward(ops::scale(x, 1.0 / 3.0));
  EXPECT_EQ(tape.grad(x).mode(), PrecisionMode::Double);
  EXPECT_EQ(tape.grad(x).item(), 1.0 / 3.0);
}

TEST(GradCheck, Examples) {
  const Matrix x = Matrix::from_rows({{1, 2}});
  const Matrix g = finite_diff_grad([](const Matrix& m) { return m(0, 0) * m(0, 0) + m(0, 1) * m(0, 1); }, x);
  EXPECT_NEAR(g(0, 0), 2.0, 1e-6);
  EXPECT_NEAR(g(0, 1), 4.0, 1e-6);
  const Matrix s = finite_diff_grad(
      [](const Matrix& m) {
        double t = 0;
        for (double v : m.data()) t += v;
        return t;
      },
      Matrix::full(3, 2, 0.7));
  for (double v : s.data()) EXPECT_NEAR(v, 1.0, 1e-9);
  EXPECT_THROW(finite_diff_grad([](const Matrix&) { return 0.0; }, x, 0.0), ContractError);
}

// Every differentiable primitive against central differences on inputs in (-2, 2).
TEST(GradCheck, EveryPrimitive) {
  Rng rng(15);
  const Matrix other = random_matrix(3, 4, rng);
  const Matrix row = random_matrix(1, 4, rng);
  const Matrix square = random_matrix(4, 2, rng);
  const Matrix col = random_matrix(3, 1, rng);
  const std::vector<std::size_t> rows{2, 0, 2, 1};
  const std::vector<int> labels{1, 3, 0};

  using Build = std::function<Var(Var)>;
  auto c = [](Var v, const Matrix& m) { return v.tape().constant(m); };
  const std::vector<std::pair<const char*, Build>> cases = {
      {"matmul", [&](Var v) { return ops::sum(ops::tanh(ops::matmul(v, c(v, square)))); }},
      {"matmul_rhs", [&](Var v) { return ops::sum(ops::tanh(ops::matmul(c(v, square).tape().constant(other), ops::transpose(v)))); }},
      {"add", [&](Var v) { return ops::sum(ops::square(ops::add(v, c(v, other)))); }},
      {"add_row", [&](Var v) { return ops::sum(ops::square(ops::add(c(v, other), ops::gather_rows(v, std::vector<std::size_t>{0})))); }},
      {"sub", [&](Var v) { return ops::sum(ops::square(ops::sub(c(v, other), v))); }},
      {"mul", [&](Var v) { return ops::sum(ops::mul(v, ops::tanh(v))); }},
      {"mul_col", [&](Var v) { return ops::sum(ops::square(ops::mul_col(v, c(v, col)))); }},
      {"mul_scalar", [&](Var v) { return ops::sum(ops::mul_scalar(c(v, other), ops::sum(v))); }},
      {"scale", [&](Var v) { return ops::sum(ops::square(ops::scale(v, -1.7))); }},
      {"add_scalar", [&](Var v) { return ops::sum(ops::square(ops::add_scalar(v, 0.3))); }},
      {"neg", [&](Var v) { return ops::sum(ops::tanh(ops::neg(v))); }},
      {"relu", [&](Var v) { return ops::sum(ops::square(ops::relu(v))); }},
      {"softplus", [&](Var v) { return ops::sum(ops::softplus(v)); }},
      {"sigmoid", [&](Var v) { return ops::sum(ops::sigmoid(v)); }},
      {"exp", [&](Var v) { return ops::sum(ops::exp(v)); }},
      {"log", [&](Var v) { return ops::sum(ops::log(ops::add_scalar(ops::square(v), 0.5))); }},
      {"abs", [&](Var v) { return ops::sum(ops::abs(v)); }},
      {"clamp", [&](Var v) { return ops::sum(ops::square(ops::clamp(v, -1.0, 1.0))); }},
      {"row_sq_norm", [&](Var v) { return ops::sum(ops::tanh(ops::row_sq_norm(v))); }},
      {"row_norm", [&](Var v) { return ops::sum(ops::row_norm(v)); }},
      {"row_dot", [&](Var v) { return ops::sum(ops::tanh(ops::row_dot(v, c(v, other)))); }},
      {"mean", [&](Var v) { return ops::mean(ops::square(v)); }},
      {"gather_rows", [&](Var v) { return ops::sum(ops::square(ops::gather_rows(v, rows))); }},
      {"softmax_ce", [&](Var v) { return ops::softmax_cross_entropy(v, labels); }},
  };
  for (int seed = 0; seed < 5; ++seed) {
    Rng local(100 + seed);
    const Matrix x = random_matrix(3, 4, local);
    for (const auto& [name, build] : cases) {
      if (std::string_view(name) == "matmul_rhs") {
        const Matrix w = random_matrix(2, 4, local);
        EXPECT_LT(gradcheck(w, build), 1e-5) << name;
        continue;
      }
      EXPECT_LT(gradcheck(x, build), 1e-5) << name << " seed " << seed;
    }
  }
}

TEST(Ops, ShapeAndLabelErrors) {
  Tape tape;
  const Var a = tape.constant(Matrix(2, 3));
  EXPECT_THROW(ops::matmul(a, a), ShapeError);
  EXPECT_THROW(ops::add(a, tape.constant(Matrix(3, 3))), ShapeError);
  const std::vector<int> bad{0, 3};
  EXPECT_THROW(ops::softmax_cross_entropy(a, bad), ContractError);
  Tape other;
  EXPECT_THROW(ops::add(a, other.constant(Matrix(2, 3))), ContractError);
}

TEST(Ops, SoftmaxCrossEntropyValues) {
  Tape tape;
  const std::vector<int> labels{0, 1};
  EXPECT_NEAR(ops::softmax_cross_entropy(tape.constant(Matrix(2, 3)), labels).value().item(), std::log(3.0), 1e-12);
  const Var peaked = tape.constant(Matrix::from_rows({{50, 0}, {0, 50}}));
  EXPECT_LT(ops::softmax_cross_entropy(peaked, labels).value().item(), 1e-20);
}

TEST(Random, DeterministicStreams) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next(), b.next());
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
  EXPECT_NE(mix_seed(0, 1), mix_seed(1, 0));
  Rng r(3);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(r.index(7), 7u);
  }
}
