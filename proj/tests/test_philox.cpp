#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "buffon/philox.hpp"

using namespace buffon;

// Known-answer vectors published with Random123.
TEST(Philox4x32, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (Philox4x32Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          {0xffffffffu, 0xffffffffu}),
            (Philox4x32Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u}),
            (Philox4x32Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(PhiloxStream, DeterministicAndDistinctStreams) {
  PhiloxStream a(42, 7);
  PhiloxStream b(42, 7);
  PhiloxStream c(42, 8);
  PhiloxStream d(43, 7);
  for (int i = 0; i < 16; ++i) {
    const double x = a.next_uniform();
    EXPECT_EQ(x, b.next_uniform());
    EXPECT_NE(x, c.next_uniform());
    EXPECT_NE(x, d.next_uniform());
  }
}

// Smoke test for uniformity: chi-square over 64 bins for the first three
// draws of many streams, which is exactly how the simulator consumes them.
TEST(PhiloxStream, ChiSquareUniformity) {
  constexpr int bins = 64;
  constexpr int streams = 200'000;
  for (int draw = 0; draw < 3; ++draw) {
    std::vector<int> hist(bins, 0);
    for (int s = 0; s < streams; ++s) {
      PhiloxStream st(1234, static_cast<std::uint64_t>(s));
      double u = 0.0;
      for (int j = 0; j <= draw; ++j)
        u = st.next_uniform();
      ASSERT_GE(u, 0.0);
      ASSERT_LT(u, 1.0);
      ++hist[static_cast<std::size_t>(u * bins)];
    }
    const double expected = static_cast<double>(streams) / bins;
    double chi2 = 0.0;
    for (int h : hist)
      chi2 += (h - expected) * (h - expected) / expected;
    // 63 degrees of freedom; 99.9th percentile is about 103.4.
    EXPECT_LT(chi2, 103.4) << "draw " << draw;
  }
}
