#pragma once

// PERCLOS: percentage of frames with the eyes closed, over tumbling windows.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace svdlab {

/// (total - open) / total * 100 from integer counts with a single division.
/// Throws EmptyWindow for total == 0 and InvalidInput for open > total.
double perclos(std::size_t total, std::size_t open);

struct Frame {
  double timestamp_s;
  bool closed;
};

/// CSV with columns timestamp_s,label and label in {open, closed}. A header
/// line is optional; blank lines are skipped. Timestamps must be finite and
/// non-decreasing. Throws ParseError or InvalidInput with the line number.
std::vector<Frame> read_frame_labels(std::istream& in);
std::vector<Frame> read_frame_labels(const std::filesystem::path& path);

struct PerclosWindow {
  double start;
  double end;
  std::size_t frames;
  std::size_t closed;
  double percent;
};

/// Tumbling windows [t0 + i w, t0 + (i + 1) w) anchored at the first
/// timestamp. Windows without frames are skipped.
std::vector<PerclosWindow> perclos_windows(const std::vector<Frame>& frames, double window_s = 180.0);

}  // namespace svdlab
