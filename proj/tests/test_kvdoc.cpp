#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "gen.hpp"
#include "gradnorm/errors.hpp"
#include "gradnorm/kvdoc.hpp"

namespace gradnorm {
namespace {

TEST(KvDoc, ParsesCommentsAndWhitespace) {
  const KvDoc d = KvDoc::parse("# header\n  a = 1 \n\nb=two words\n");
  EXPECT_EQ(d.get("a"), "1");
  EXPECT_EQ(d.get("b"), "two words");
  EXPECT_EQ(d.keys(), (std::vector<std::string>{"a", "b"}));
}

TEST(KvDoc, RejectsMalformedLines) {
  EXPECT_THROW(KvDoc::parse("novalue\n"), ParseError);
  EXPECT_THROW(KvDoc::parse(" = 3\n"), ParseError);
  EXPECT_THROW(KvDoc::parse("a = 1\na = 2\n"), ParseError);
}

TEST(KvDoc, TypedGetters) {
  const KvDoc d = KvDoc::parse("x = 2.5\nn = 7\nf = off\nv = 1 2 3\nm = 2 2 1 2 3 4\n");
  EXPECT_EQ(d.get_double("x"), 2.5);
  EXPECT_EQ(d.get_int("n"), 7);
  EXPECT_FALSE(d.get_bool("f"));
  EXPECT_EQ(d.get_vector("v"), Eigen::Vector3d(1, 2, 3));
  Eigen::Matrix2d m;
  m << 1, 2, 3, 4;
  EXPECT_EQ(d.get_matrix("m"), m);
  EXPECT_THROW(d.get_int("x"), ParseError);
  EXPECT_THROW(d.get_bool("n"), ParseError);
  EXPECT_THROW(d.get("missing"), ParseError);
  EXPECT_THROW(KvDoc::parse("m = 2 2 1 2 3\n").get_matrix("m"), ParseError);
  EXPECT_THROW(KvDoc::parse("v = 1 x\n").get_vector("v"), ParseError);
}

TEST(KvDoc, RequireKnownAdmitsPrefixes) {
  const KvDoc d = KvDoc::parse("a = 1\nproblem.kind = q\n");
  EXPECT_NO_THROW(d.require_known({"a", "problem."}));
  EXPECT_THROW(d.require_known({"a"}), ParseError);
  const KvDoc sub = d.sub("problem.");
  EXPECT_EQ(sub.keys(), (std::vector<std::string>{"kind"}));
}

TEST(KvDoc, MergeReplacesExistingKeys) {
  KvDoc d = KvDoc::parse("a = 1\nb = 2\n");
  d.merge(KvDoc::parse("b = 3\nc = 4\n"), "");
  EXPECT_EQ(d.serialize(), "a = 1\nb = 3\nc = 4\n");
}

TEST(FormatDouble, SpecialValues) {
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_double(0.5), "0.5");
}

// Property: 17 significant digits round-trip every finite double.
TEST(FormatDouble, RoundTripsRandomDoubles) {
  testing::Gen g(42);
  for (int i = 0; i < 20000; ++i) {
    const double v = g.normal() * std::pow(10.0, g.integer(-300, 300));
    KvDoc d;
    d.set_double("v", v);
    EXPECT_EQ(KvDoc::parse(d.serialize()).get_double("v"), v);
  }
}

TEST(KvDoc, VectorAndMatrixRoundTrip) {
  testing::Gen g(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int r = g.integer(1, 6), c = g.integer(1, 6);
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = g.normal();
    const Eigen::VectorXd v = g.vec(g.integer(1, 10));
    KvDoc d;
    d.set_matrix("m", m);
    d.set_vector("v", v);
    const KvDoc back = KvDoc::parse(d.serialize());
    EXPECT_EQ(back.get_matrix("m"), m);
    EXPECT_EQ(back.get_vector("v"), v);
  }
}

}  // namespace
}  // namespace gradnorm
