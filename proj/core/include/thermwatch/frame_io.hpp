// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>

#include "thermwatch/frame.hpp"

namespace thermwatch {

// Text frame format:
//   TFRAME v1 <camera_id> <ISO-8601 UTC> <rows> <cols>
//   <rows> lines of <cols> space-separated decimal degrees C
//
// Text mask format:
//   TMASK v1 <camera_id> <rows> <cols>
//   <rows> lines of <cols> space-separated integers 0..9
//   9 lines `<roi_id> <name>`
//
// Readers throw ParseError (with a line number) on any shape or syntax mismatch.

ThermalFrame read_frame(std::istream& in);
ThermalFrame read_frame_file(const std::filesystem::path& path);
void write_frame(std::ostream& out, const ThermalFrame& frame);
void write_frame_file(const std::filesystem::path& path, const ThermalFrame& frame);

RoiMaskSet read_mask(std::istream& in);
RoiMaskSet read_mask_file(const std::filesystem::path& path);
void write_mask(std::ostream& out, const RoiMaskSet& mask);
void write_mask_file(const std::filesystem::path& path, const RoiMaskSet& mask);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

}  // namespace thermwatch
