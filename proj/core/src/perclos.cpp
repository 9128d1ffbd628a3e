#include "svdlab/perclos.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "svdlab/errors.hpp"

namespace svdlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

double perclos(std::size_t total, std::size_t open) {
  if (total == 0) throw Error(Errc::EmptyWindow, "window holds no frames");
  if (open > total) throw Error(Errc::InvalidInput, "more open frames than frames");
  return static_cast<double>((total - open) * 100) / static_cast<double>(total);
}

std::vector<Frame> read_frame_labels(std::istream& in) {
  std::vector<Frame> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto comma = t.find(',');
    if (comma == std::string::npos) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected timestamp_s,label");
    }
    const std::string ts = trim(t.substr(0, comma)), label = trim(t.substr(comma + 1));
    if (out.empty() && ts == "timestamp_s") continue;
    double time;
    std::size_t pos = 0;
    try {
      time = std::stod(ts, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != ts.size() || !std::isfinite(time)) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": bad timestamp '" + ts + "'");
    }
    bool closed;
    if (label == "closed") {
      closed = true;
    } else if (label == "open") {
      closed = false;
    } else {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": label must be open or closed, got '" +
                                        label + "'");
    }
    if (!out.empty() && time < out.back().timestamp_s) {
      throw Error(Errc::InvalidInput, "line " + std::to_string(lineno) + ": timestamps must be non-decreasing");
    }
    out.push_back({time, closed});
  }
  return out;
}

std::vector<Frame> read_frame_labels(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::IoError, "cannot read " + path.string());
  return read_frame_labels(f);
}

std::vector<PerclosWindow> perclos_windows(const std::vector<Frame>& frames, double window_s) {
  if (!(window_s > 0.0) || !std::isfinite(window_s)) throw Error(Errc::InvalidInput, "window must be positive");
  std::vector<PerclosWindow> out;
  if (frames.empty()) return out;
  const double t0 = frames.front().timestamp_s;
  std::size_t i = 0;
  while (i < frames.size()) {
    auto idx = static_cast<std::size_t>(std::floor((frames[i].timestamp_s - t0) / window_s));
    // rounding in the division can land one window short
    while (frames[i].timestamp_s >= t0 + static_cast<double>(idx + 1) * window_s) ++idx;
    const double start = t0 + static_cast<double>(idx) * window_s;
    const double end = t0 + static_cast<double>(idx + 1) * window_s;
    std::size_t total = 0, closed = 0;
    for (; i < frames.size() && frames[i].timestamp_s < end; ++i) {
      ++total;
      closed += frames[i].closed;
    }
    out.push_back({start, end, total, closed, perclos(total, total - closed)});
  }
  return out;
}

}  // namespace svdlab
