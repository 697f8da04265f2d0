// Copyright 2026 The gcnseg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gcnseg/scene.hpp"

namespace gcnseg {

// On-disk containers, all little-endian:
//
//   scene  "SCS1"  magic(4) flags(u8, bit0 = validity present)
//                  T,B,H,W (u32 each), f32 reflectance [t][b][y][x],
//                  then u8 validity [t][y][x] when flagged
//   label  "MSK1"  magic(4) H,W (u32 each), u8 payload in {0,1,255}
//   tensor "TNS1"  magic(4) rank(u32) dims[rank](u32) f32 payload
//
// Readers validate strictly and report the byte offset of the first
// problem; writers go through a temp file and rename, so a failed write
// never leaves a partial file behind.

/// A standalone ground-truth / prediction raster.
struct LabelRaster {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::uint8_t> data;

    void validate() const;
};

SceneSeries read_scene(const std::filesystem::path& path);
void write_scene(const SceneSeries& scene, const std::filesystem::path& path);

LabelRaster read_label(const std::filesystem::path& path);
void write_label(const LabelRaster& raster, const std::filesystem::path& path);

void write_tensor(const std::filesystem::path& path, std::span<const std::size_t> dims,
                  std::span<const double> values);

/// Serialized sizes implied by the formats above.
std::size_t scene_file_size(std::size_t frames, std::size_t bands, std::size_t height,
                            std::size_t width, bool with_validity);
std::size_t label_file_size(std::size_t height, std::size_t width);

/// Little-endian byte-buffer builder with atomic save.
class ByteWriter {
public:
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u32(std::uint32_t v);
    void f32(float v);
    void raw(std::span<const std::uint8_t> data);
    void magic(const char tag[5]);

    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

    /// Writes to a temp file in the destination directory, then renames.
    void save(const std::filesystem::path& path) const;

private:
    std::vector<std::uint8_t> bytes_;
};

/// Little-endian reader over a whole file with offset-tracked errors.
class ByteReader {
public:
    explicit ByteReader(const std::filesystem::path& path);

    std::uint8_t u8();
    std::uint32_t u32();
    float f32();
    std::span<const std::uint8_t> raw(std::size_t count);
    void expect_magic(const char tag[5]);
    void expect_end() const;

    std::size_t offset() const { return offset_; }

private:
    void require(std::size_t count) const;

    std::vector<std::uint8_t> bytes_;
    std::size_t offset_ = 0;
    std::string name_;
};

}  // namespace gcnseg
