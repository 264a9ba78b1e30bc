// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "thermwatch/frame_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "thermwatch/errors.hpp"

namespace thermwatch {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

int parse_dim(std::string_view tok, std::size_t line_no) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || value < 1) {
    throw ParseError("invalid dimension '" + std::string(tok) + "'", line_no);
  }
  return value;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    return true;
  }
  std::string require(const char* what) {
    std::string line;
    if (!next(line)) throw ParseError(std::string("unexpected end of input, expected ") + what, line_no_ + 1);
    return line;
  }
  void expect_end() {
    std::string line;
    while (next(line)) {
      if (!split_ws(line).empty()) throw ParseError("unexpected trailing content", line_no_);
    }
  }
  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StorageError("cannot open '" + path.string() + "' for writing");
  fn(out);
  out.flush();
  if (!out) throw StorageError("failed writing '" + path.string() + "'");
}

std::ifstream open_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

ThermalFrame read_frame(std::istream& in) {
  LineReader reader(in);
  const std::string header = reader.require("TFRAME header");
  const auto tok = split_ws(header);
  if (tok.size() != 6 || tok[0] != "TFRAME" || tok[1] != "v1") {
    throw ParseError("expected 'TFRAME v1 <camera_id> <timestamp> <rows> <cols>'", 1);
  }
  std::string camera_id(tok[2]);
  Instant timestamp;
  try {
    timestamp = parse_iso8601(tok[3]);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), 1);
  }
  const int rows = parse_dim(tok[4], 1);
  const int cols = parse_dim(tok[5], 1);

  std::vector<double> pixels;
  pixels.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  for (int r = 0; r < rows; ++r) {
    const std::string line = reader.require("pixel row");
    const auto values = split_ws(line);
    if (values.size() != static_cast<std::size_t>(cols)) {
      throw ParseError("expected " + std::to_string(cols) + " values, found " +
                           std::to_string(values.size()),
                       reader.line_no());
    }
    for (auto v : values) {
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
      if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ParseError("invalid temperature '" + std::string(v) + "'", reader.line_no());
      }
      pixels.push_back(x);
    }
  }
  reader.expect_end();
  try {
    return ThermalFrame(std::move(camera_id), timestamp, rows, cols, std::move(pixels));
  } catch (const InvalidInput& e) {
    throw ParseError(e.what());
  }
}

ThermalFrame read_frame_file(const std::filesystem::path& path) {
  auto in = open_read(path);
  return read_frame(in);
}

void write_frame(std::ostream& out, const ThermalFrame& frame) {
  out << "TFRAME v1 " << frame.camera_id() << ' ' << format_iso8601(frame.timestamp()) << ' '
      << frame.rows() << ' ' << frame.cols() << '\n';
  std::string line;
  for (int r = 0; r < frame.rows(); ++r) {
    line.clear();
    for (int c = 0; c < frame.cols(); ++c) {
      if (c) line += ' ';
      line += format_double(frame.at(r, c));
    }
    line += '\n';
    out << line;
  }
}

void write_frame_file(const std::filesystem::path& path, const ThermalFrame& frame) {
  write_file(path, [&](std::ostream& out) { write_frame(out, frame); });
}

RoiMaskSet read_mask(std::istream& in) {
  LineReader reader(in);
  const std::string header = reader.require("TMASK header");
  const auto tok = split_ws(header);
  if (tok.size() != 5 || tok[0] != "TMASK" || tok[1] != "v1") {
    throw ParseError("expected 'TMASK v1 <camera_id> <rows> <cols>'", 1);
  }
  std::string camera_id(tok[2]);
  const int rows = parse_dim(tok[3], 1);
  const int cols = parse_dim(tok[4], 1);

  std::vector<std::uint8_t> labels;
  labels.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  for (int r = 0; r < rows; ++r) {
    const std::string line = reader.require("label row");
    const auto values = split_ws(line);
    if (values.size() != static_cast<std::size_t>(cols)) {
      throw ParseError("expected " + std::to_string(cols) + " labels, found " +
                           std::to_string(values.size()),
                       reader.line_no());
    }
    for (auto v : values) {
      int label = -1;
      auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), label);
      if (ec != std::errc{} || ptr != v.data() + v.size() || label < 0 || label > kRoiCount) {
        throw ParseError("invalid label '" + std::string(v) + "'", reader.line_no());
      }
      labels.push_back(static_cast<std::uint8_t>(label));
    }
  }

  std::array<std::string, kRoiCount> names;
  std::array<bool, kRoiCount> seen{};
  for (int i = 0; i < kRoiCount; ++i) {
    const std::string line = reader.require("ROI name line");
    const std::size_t start = line.find_first_not_of(" \t");
    const std::size_t space = start == std::string::npos ? start : line.find_first_of(" \t", start);
    int id = 0;
    if (space != std::string::npos) {
      auto [ptr, ec] = std::from_chars(line.data() + start, line.data() + space, id);
      if (ec != std::errc{} || ptr != line.data() + space) id = 0;
    }
    if (!valid_roi(id)) throw ParseError("expected '<roi_id> <name>'", reader.line_no());
    if (seen[static_cast<std::size_t>(id - 1)]) {
      throw ParseError("duplicate name for ROI " + std::to_string(id), reader.line_no());
    }
    std::string name = line.substr(space);
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t\r") + 1);
    if (name.empty()) throw ParseError("empty ROI name", reader.line_no());
    seen[static_cast<std::size_t>(id - 1)] = true;
    names[static_cast<std::size_t>(id - 1)] = std::move(name);
  }
  reader.expect_end();
  try {
    return RoiMaskSet(std::move(camera_id), rows, cols, std::move(labels), std::move(names));
  } catch (const InvalidInput& e) {
    throw ParseError(e.what());
  }
}

RoiMaskSet read_mask_file(const std::filesystem::path& path) {
  auto in = open_read(path);
  return read_mask(in);
}

void write_mask(std::ostream& out, const RoiMaskSet& mask) {
  out << "TMASK v1 " << mask.camera_id() << ' ' << mask.rows() << ' ' << mask.cols() << '\n';
  const auto labels = mask.labels();
  std::string line;
  for (int r = 0; r < mask.rows(); ++r) {
    line.clear();
    for (int c = 0; c < mask.cols(); ++c) {
      if (c) line += ' ';
      line += static_cast<char>('0' + labels[static_cast<std::size_t>(r) * mask.cols() + c]);
    }
    line += '\n';
    out << line;
  }
  for (RoiId id = 1; id <= kRoiCount; ++id) out << id << ' ' << mask.name(id) << '\n';
}

void write_mask_file(const std::filesystem::path& path, const RoiMaskSet& mask) {
  write_file(path, [&](std::ostream& out) { write_mask(out, mask); });
}

}  // namespace thermwatch
