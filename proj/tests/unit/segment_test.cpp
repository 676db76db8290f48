#include <gtest/gtest.h>

#include "test_util.hpp"
#include "unirec/core/error.hpp"
#include "unirec/sdt/segment.hpp"

namespace unirec::sdt {
namespace {

std::vector<Segment> seg(std::string_view s) { return segment_label(s).segments; }

std::size_t error_offset(std::string_view s) {
  try {
    segment_label(s);
  } catch (const ParseError& e) {
    return e.offset();
  }
  ADD_FAILURE() << "no error for '" << s << "'";
  return std::string_view::npos;
}

TEST(SegmentLabel, InlineFormulaBetweenText) {
  const std::vector<Segment> expected{
      {"energy ", SpanKind::Text}, {"$E=mc^2$", SpanKind::Formula}, {" here", SpanKind::Text}};
  EXPECT_EQ(seg("energy $E=mc^2$ here"), expected);
}

TEST(SegmentLabel, PlainTextAndWholeFormula) {
  EXPECT_EQ(seg("plain text"), (std::vector<Segment>{{"plain text", SpanKind::Text}}));
  EXPECT_EQ(seg("$x$"), (std::vector<Segment>{{"$x$", SpanKind::Formula}}));
  EXPECT_TRUE(seg("").empty());
}

TEST(SegmentLabel, AllDelimiterForms) {
  const std::vector<Segment> expected{{"a", SpanKind::Text},
                                      {"\\(x\\)", SpanKind::Formula},
                                      {"\\[y\\]", SpanKind::Formula},
                                      {"$$z$$", SpanKind::Formula},
                                      {"\\begin{equation}w\\end{equation}", SpanKind::Formula},
                                      {"b", SpanKind::Text}};
  EXPECT_EQ(seg("a\\(x\\)\\[y\\]$$z$$\\begin{equation}w\\end{equation}b"), expected);
}

TEST(SegmentLabel, EscapesStayInText) {
  EXPECT_EQ(seg("costs \\$5 and \\\\"), (std::vector<Segment>{{"costs \\$5 and \\\\", SpanKind::Text}}));
  EXPECT_EQ(seg("$a\\$b$"), (std::vector<Segment>{{"$a\\$b$", SpanKind::Formula}}));
  EXPECT_EQ(seg("\\frac x"), (std::vector<Segment>{{"\\frac x", SpanKind::Text}}));
}

TEST(SegmentLabel, HierarchicalTokensStayInPlace) {
  const std::vector<Segment> expected{{"A<|ln|>", SpanKind::Text}, {"$x$", SpanKind::Formula}, {"<|pn|>", SpanKind::Text}};
  EXPECT_EQ(seg("A<|ln|>$x$<|pn|>"), expected);
}

TEST(SegmentLabel, ErrorsCarryByteOffsets) {
  EXPECT_EQ(error_offset("ab $x"), 3u);
  EXPECT_EQ(error_offset("ab \\(x"), 3u);
  EXPECT_EQ(error_offset("x \\] y"), 2u);
  EXPECT_EQ(error_offset("\\end{equation}"), 0u);
  EXPECT_EQ(error_offset("$$x$"), 0u);
  EXPECT_EQ(error_offset("hi <BOS>"), 3u);
  EXPECT_EQ(error_offset("<EOS>"), 0u);
  EXPECT_EQ(error_offset("a<PAD>"), 1u);
}

TEST(SegmentLabel, ErrorMessageNamesDelimiter) {
  try {
    segment_label("ab $x");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_STREQ(e.what(), "unbalanced delimiter '$' at byte 3");
  }
}

TEST(SegmentLabel, JoinReproducesLabel) {
  Rng rng(31);
  static const char* kFormulas[] = {"$x$", "$$\\sum_i$$", "\\(a+b\\)", "\\[\\frac{1}{2}\\]",
                                    "\\begin{equation}E\\end{equation}", "$\\$$"};
  for (int i = 0; i < 500; ++i) {
    std::string label;
    const auto parts = rng.below(6);
    for (std::uint64_t p = 0; p < parts; ++p) {
      label += rng.below(2) == 0 ? testing::random_mixed(rng, 6) : std::string(rng.pick(kFormulas));
    }
    const SegmentedLabel s = segment_label(label);
    ASSERT_EQ(s.join(), label);
    for (const Segment& part : s.segments) ASSERT_FALSE(part.content.empty());
  }
}

}  // namespace
}  // namespace unirec::sdt
