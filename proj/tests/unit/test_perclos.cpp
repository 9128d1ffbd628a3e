#include <cmath>
#include <sstream>

#include "doctest.h"
#include "svdlab/perclos.hpp"
#include "testing.hpp"

using namespace svdlab;
using testing::error_of;

TEST_CASE("perclos from counts") {
  CHECK(perclos(60, 54) == 10.0);
  CHECK(perclos(60, 60) == 0.0);
  CHECK(perclos(60, 0) == 100.0);
  CHECK(perclos(3, 2) == 100.0 / 3.0);
  CHECK(error_of([] { perclos(0, 0); }) == Errc::EmptyWindow);
  CHECK(error_of([] { perclos(5, 6); }) == Errc::InvalidInput);
}

TEST_CASE("frame label parsing") {
  std::istringstream ok("timestamp_s,label\n0.0,open\n\n0.5,closed\n1e0,open\n");
  const auto f = read_frame_labels(ok);
  REQUIRE(f.size() == 3);
  CHECK(f[1].closed);
  CHECK(f[2].timestamp_s == 1.0);

  std::istringstream no_header("0,closed\n1,closed\n");
  CHECK(read_frame_labels(no_header).size() == 2);

  std::istringstream bad_label("0,blink\n");
  CHECK(error_of([&] { read_frame_labels(bad_label); }) == Errc::ParseError);
  std::istringstream bad_time("abc,open\n1,open\n");
  CHECK(error_of([&] { read_frame_labels(bad_time); }) == Errc::ParseError);
  std::istringstream backwards("2,open\n1,open\n");
  CHECK(error_of([&] { read_frame_labels(backwards); }) == Errc::InvalidInput);
}

TEST_CASE("tumbling windows") {
  SUBCASE("ten minutes at 10 Hz gives four windows") {
    std::vector<Frame> frames;
    for (int i = 0; i < 6000; ++i) frames.push_back({i * 0.1, i % 10 == 0});
    const auto w = perclos_windows(frames, 180.0);
    REQUIRE(w.size() == 4);
    CHECK(w[0].start == 0.0);
    CHECK(w[0].end == 180.0);
    CHECK(w[0].frames == 1800);
    CHECK(w[0].percent == 10.0);
    CHECK(w[3].frames == 600);
    std::size_t total = 0;
    for (const auto& x : w) total += x.frames;
    CHECK(total == 6000);
  }
  SUBCASE("anchored at the first timestamp; empty windows are skipped") {
    const std::vector<Frame> frames{{100, true}, {101, false}, {500, true}};
    const auto w = perclos_windows(frames, 180.0);
    REQUIRE(w.size() == 2);
    CHECK(w[0].start == 100.0);
    CHECK(w[0].percent == 50.0);
    CHECK(w[1].start == 460.0);
    CHECK(w[1].percent == 100.0);
  }
  SUBCASE("a frame on a boundary opens the next window") {
    const std::vector<Frame> frames{{0, true}, {180, false}};
    const auto w = perclos_windows(frames, 180.0);
    REQUIRE(w.size() == 2);
    CHECK(w[1].frames == 1);
  }
  SUBCASE("no frames, no windows; bad window length") {
    CHECK(perclos_windows({}, 180.0).empty());
    CHECK(error_of([] { perclos_windows({{0, true}}, 0.0); }) == Errc::InvalidInput);
  }
}
