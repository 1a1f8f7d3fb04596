// Copyright 2026 The ffinfra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "ffinfra/boxes.hpp"
#include "ffinfra/curve_file.hpp"

namespace ffinfra {
namespace {

std::string Fixture(const std::string& name) {
  std::ifstream in(std::string(FFINFRA_FIXTURE_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(CurveFileTest, MinimalHyperelliptic) {
  CurveFile cf = ParseCurve("p = 5\ncurve = y^2 - (x^6 + x + 1)\n");
  EXPECT_EQ(cf.base.p, 5u);
  EXPECT_EQ(cf.base.e, 1u);
  Fq F(cf.base);
  PolyRing R(F);
  ASSERT_EQ(cf.equation.size(), 3u);
  EXPECT_EQ(cf.equation[0], R.Neg(R.FromInts({1, 1, 0, 0, 0, 0, 1})));
  EXPECT_TRUE(cf.equation[1].IsZero());
  EXPECT_TRUE(cf.equation[2].IsOne());
  EXPECT_EQ(SourceOf(cf), BasisSource::kKummer);
  auto K = BuildField(cf);
  EXPECT_EQ(K->genus(), 2);
}

TEST(CurveFileTest, ExtensionFieldHeader) {
  CurveFile cf = ParseCurve("p = 31\nmodulus = a^2 + 29*a + 3\ncurve = y^2 - (x^5 + a*x + 1)\n");
  EXPECT_EQ(cf.base.e, 2u);
  EXPECT_EQ(cf.base.modulus, (std::vector<std::uint32_t>{3, 29, 1}));
  Fq F(cf.base);
  EXPECT_EQ(cf.equation[0].Coeff(1), F.Neg(F.Gen()));
}

TEST(CurveFileTest, CommentsWhitespaceAndOrderDoNotMatter) {
  CurveFile a = ParseCurve("p = 7\ncurve = y^3 - x^4 - 1\n");
  CurveFile b = ParseCurve("# cubic\n  curve=  -(1 + x^4) + y*y*y   # trailing\n\np=7\n");
  EXPECT_EQ(a.equation, b.equation);
}

TEST(CurveFileTest, ConstantLeadingCoefficientIsDividedOut) {
  CurveFile cf = ParseCurve("p = 5\ncurve = 2*y^2 - 2*x^5 - 4\n");
  Fq F(cf.base);
  PolyRing R(F);
  EXPECT_EQ(cf.equation[0], R.FromInts({-2, 0, 0, 0, 0, -1}));
  EXPECT_TRUE(cf.y_scale.IsOne());
}

TEST(CurveFileTest, PolynomialLeadingCoefficientRescalesY) {
  CurveFile cf = ParseCurve("p = 7\ncurve = x*y^2 + y + x^3 + 1\n");
  Fq F(cf.base);
  PolyRing R(F);
  // Y = x y satisfies Y^2 + Y + x (x^3 + 1) = 0.
  EXPECT_EQ(cf.y_scale, R.X());
  ASSERT_EQ(cf.equation.size(), 3u);
  EXPECT_EQ(cf.equation[1], R.One());
  EXPECT_EQ(cf.equation[0], R.FromInts({0, 1, 0, 0, 1}));
  EXPECT_EQ(SourceOf(cf), BasisSource::kRound2);
  EXPECT_EQ(BuildField(cf)->degree(), 2);
}

TEST(CurveFileTest, SuppliedCubicBasisValidates) {
  CurveFile cf = ParseCurve(Fixture("curve1.curve"));
  ASSERT_TRUE(cf.finite.has_value());
  EXPECT_EQ(cf.finite->num.rows, 3);
  EXPECT_EQ(SourceOf(cf), BasisSource::kSupplied);
  auto K = BuildField(cf);
  EXPECT_EQ(K->genus(), 3);
  IdealOps I(*K);
  EXPECT_EQ(Boxes(I).GenusByRiemannRoch(), 3);
}

TEST(CurveFileTest, SuppliedBasisThatIsNotClosedIsRejected) {
  std::string text = Fixture("curve1.curve");
  text.replace(text.find("omega = y^2"), 11, "omega = x*y^2");
  CurveFile cf = ParseCurve(text);
  EXPECT_THROW(BuildField(cf), CurveError);
}

TEST(CurveFileTest, GenusHintMismatchIsSemantic) {
  CurveFile cf = ParseCurve("p = 5\ncurve = y^2 - x^6 - x - 1\ngenus_hint = 3\n");
  EXPECT_THROW(BuildField(cf), CurveSemanticError);
}

TEST(CurveFileTest, OptionsAreRead) {
  CurveFile cf =
      ParseCurve("name = demo\np = 5\ncurve = y^2 - x^6 - x - 1\nseed = 9\nthreads = 3\nmem_cap = 4096\ndistinguished = 1\n");
  EXPECT_EQ(cf.name, "demo");
  EXPECT_EQ(cf.seed, 9u);
  EXPECT_EQ(cf.threads, 3);
  EXPECT_EQ(cf.mem_cap, 4096u);
  EXPECT_EQ(cf.distinguished, 1);
}

void ExpectSyntax(const std::string& text, int line, int col) {
  try {
    ParseCurve(text);
    FAIL() << "accepted: " << text;
  } catch (const CurveSyntaxError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_EQ(e.col(), col) << e.what();
  }
}

TEST(CurveFileTest, SyntaxDiagnosticsCarryPositions) {
  ExpectSyntax("p = 5\ncurve = y^2 - x^^6\n", 2, 17);
  ExpectSyntax("p = 5\ncurve = y^2 - (x + 1\n", 2, 21);
  ExpectSyntax("p = 5\ncurve = y^2 - z\n", 2, 15);
  ExpectSyntax("p = 5\n\nno equals sign\n", 3, 1);
  ExpectSyntax("p = 5\ncolour = red\n", 2, 1);
  ExpectSyntax("p = 5\np = 7\n", 2, 1);
  ExpectSyntax("p = five\n", 1, 5);
}

TEST(CurveFileTest, SemanticErrorsAreDistinct) {
  EXPECT_THROW(ParseCurve("p = 9\ncurve = y^2 - x^5 - 1\n"), CurveSemanticError);
  EXPECT_THROW(ParseCurve("p = 5\nmodulus = a^2 + 4\ncurve = y^2 - x^5 - 1\n"), CurveSemanticError);
  EXPECT_THROW(ParseCurve("curve = y^2 - x^5 - 1\n"), CurveSemanticError);
  EXPECT_THROW(ParseCurve("p = 5\n"), CurveSemanticError);
  EXPECT_THROW(ParseCurve("p = 5\ncurve = x^3 + 1\n"), CurveSemanticError);
  EXPECT_THROW(ParseCurve("p = 5\ncurve = y^2 - x^5 - 1\nomega = 1\nomega = y\n"), CurveSemanticError);
}

TEST(CurveFileTest, FormattedEquationReparses) {
  const std::string src = "p = 31\nmodulus = a^2 + 29*a + 3\ncurve = y^3 + (2*a + 1)*x^2*y - a*x^4 + 7\n";
  CurveFile cf = ParseCurve(src);
  Fq F(cf.base);
  CurveFile again = ParseCurve("p = 31\nmodulus = a^2 + 29*a + 3\ncurve = " + FormatBiPoly(F, cf.equation) + "\n");
  EXPECT_EQ(again.equation, cf.equation);
}

}  // namespace
}  // namespace ffinfra
