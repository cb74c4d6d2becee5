#include <set>

#include "doctest.h"

#include "chaoslab/rng.hpp"

using namespace chaoslab;
using Block = Philox4x32::Block;

TEST_CASE("Philox4x32-10 known answers") {
  CHECK(Philox4x32::encrypt({0, 0, 0, 0}, {0, 0}) ==
        Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::encrypt({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                            {0xffffffff, 0xffffffff}) ==
        Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::encrypt({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                            {0xa4093822, 0x299f31d0}) ==
        Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are deterministic and distinct") {
  Philox4x32 a(42, 7, 3), b(42, 7, 3), c(42, 7, 4), d(43, 7, 3), e(42, 8, 3);
  std::set<std::uint32_t> firsts;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    if (i == 0) {
      firsts = {x, c(), d(), e()};
      CHECK(firsts.size() == 4);
    }
  }
}

TEST_CASE("uniform range and mean") {
  Philox4x32 eng(1, 2, 3);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = eng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("stream tags and descriptions") {
  CHECK(stream_tag("") == 0x811c9dc5u);
  CHECK(stream_tag("a") == 0xe40c292cu);
  CHECK(stream_tag("mc-gamma:N=8") != stream_tag("mc-gamma:N=32"));
  CHECK(describe_stream(5, 0x10, 0, 100) == "philox4x32-10 seed=5 tag=0x00000010 draws=[0,100)");
}
