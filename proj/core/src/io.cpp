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

#include "gcnseg/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "gcnseg/errors.hpp"

namespace gcnseg {

namespace fs = std::filesystem;

void LabelRaster::validate() const {
    if (height == 0 || width == 0) throw InputError("label raster: empty dimensions");
    if (data.size() != height * width)
        throw InputError("label raster: payload size does not match dimensions");
    for (std::uint8_t v : data)
        if (v != kBackground && v != kCultivated && v != kExcluded)
            throw InputError("label raster: value outside {0, 1, 255}");
}

void ByteWriter::u32(std::uint32_t v) {
    bytes_.push_back(static_cast<std::uint8_t>(v));
    bytes_.push_back(static_cast<std::uint8_t>(v >> 8));
    bytes_.push_back(static_cast<std::uint8_t>(v >> 16));
    bytes_.push_back(static_cast<std::uint8_t>(v >> 24));
}

void ByteWriter::f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

void ByteWriter::raw(std::span<const std::uint8_t> data) {
    bytes_.insert(bytes_.end(), data.begin(), data.end());
}

void ByteWriter::magic(const char tag[5]) {
    bytes_.insert(bytes_.end(), tag, tag + 4);
}

void ByteWriter::save(const fs::path& path) const {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot open '" + tmp.string() + "' for writing");
        out.write(reinterpret_cast<const char*>(bytes_.data()),
                  static_cast<std::streamsize>(bytes_.size()));
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw InputError("failed writing '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, path);
}

ByteReader::ByteReader(const fs::path& path) : name_(path.string()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + name_ + "' for reading");
    in.seekg(0, std::ios::end);
    const std::streamsize size = in.tellg();
    in.seekg(0, std::ios::beg);
    bytes_.resize(static_cast<std::size_t>(size));
    in.read(reinterpret_cast<char*>(bytes_.data()), size);
    if (!in) throw InputError("failed reading '" + name_ + "'");
}

void ByteReader::require(std::size_t count) const {
    if (offset_ + count > bytes_.size())
        throw FormatError("'" + name_ + "' truncated: needed " + std::to_string(count) +
                              " more byte(s)",
                          bytes_.size());
}

std::uint8_t ByteReader::u8() {
    require(1);
    return bytes_[offset_++];
}

std::uint32_t ByteReader::u32() {
    require(4);
    std::uint32_t v = static_cast<std::uint32_t>(bytes_[offset_]) |
                      static_cast<std::uint32_t>(bytes_[offset_ + 1]) << 8 |
                      static_cast<std::uint32_t>(bytes_[offset_ + 2]) << 16 |
                      static_cast<std::uint32_t>(bytes_[offset_ + 3]) << 24;
    offset_ += 4;
    return v;
}

float ByteReader::f32() { return std::bit_cast<float>(u32()); }

std::span<const std::uint8_t> ByteReader::raw(std::size_t count) {
    require(count);
    std::span<const std::uint8_t> view{bytes_.data() + offset_, count};
    offset_ += count;
    return view;
}

void ByteReader::expect_magic(const char tag[5]) {
    require(4);
    if (std::memcmp(bytes_.data() + offset_, tag, 4) != 0)
        throw FormatError("'" + name_ + "' has wrong magic (expected " + std::string(tag, 4) + ")",
                          offset_);
    offset_ += 4;
}

void ByteReader::expect_end() const {
    if (offset_ != bytes_.size())
        throw FormatError("'" + name_ + "' has trailing bytes", offset_);
}

std::size_t scene_file_size(std::size_t frames, std::size_t bands, std::size_t height,
                            std::size_t width, bool with_validity) {
    std::size_t size = 4 + 1 + 4 * 4 + 4 * frames * bands * height * width;
    if (with_validity) size += frames * height * width;
    return size;
}

std::size_t label_file_size(std::size_t height, std::size_t width) {
    return 4 + 2 * 4 + height * width;
}

SceneSeries read_scene(const fs::path& path) {
    ByteReader in(path);
    in.expect_magic("SCS1");
    const std::uint8_t flags = in.u8();
    if (flags > 1) throw FormatError("'" + path.string() + "' has unknown flag bits", 4);
    SceneSeries scene;
    scene.frames = in.u32();
    scene.bands = in.u32();
    scene.height = in.u32();
    scene.width = in.u32();
    if (scene.frames == 0 || scene.bands == 0 || scene.height == 0 || scene.width == 0)
        throw FormatError("'" + path.string() + "' has a zero dimension", 5);
    const std::size_t count = scene.frames * scene.bands * scene.height * scene.width;
    scene.reflectance.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t at = in.offset();
        const float v = in.f32();
        if (!std::isfinite(v))
            throw FormatError("'" + path.string() + "' has a non-finite reflectance value", at);
        scene.reflectance[i] = static_cast<double>(v);
    }
    if (flags & 1) {
        const auto raw = in.raw(scene.frames * scene.height * scene.width);
        scene.validity.assign(raw.begin(), raw.end());
    }
    in.expect_end();
    return scene;
}

void write_scene(const SceneSeries& scene, const fs::path& path) {
    scene.validate();
    ByteWriter out;
    out.magic("SCS1");
    out.u8(scene.has_validity() ? 1 : 0);
    out.u32(static_cast<std::uint32_t>(scene.frames));
    out.u32(static_cast<std::uint32_t>(scene.bands));
    out.u32(static_cast<std::uint32_t>(scene.height));
    out.u32(static_cast<std::uint32_t>(scene.width));
    for (double v : scene.reflectance) out.f32(static_cast<float>(v));
    if (scene.has_validity()) out.raw(scene.validity);
    out.save(path);
}

LabelRaster read_label(const fs::path& path) {
    ByteReader in(path);
    in.expect_magic("MSK1");
    LabelRaster raster;
    raster.height = in.u32();
    raster.width = in.u32();
    if (raster.height == 0 || raster.width == 0)
        throw FormatError("'" + path.string() + "' has a zero dimension", 4);
    const auto raw = in.raw(raster.height * raster.width);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const std::uint8_t v = raw[i];
        if (v != kBackground && v != kCultivated && v != kExcluded)
            throw FormatError("'" + path.string() + "' has label byte " + std::to_string(v) +
                                  " outside {0, 1, 255}",
                              12 + i);
    }
    raster.data.assign(raw.begin(), raw.end());
    in.expect_end();
    return raster;
}

void write_label(const LabelRaster& raster, const fs::path& path) {
    raster.validate();
    ByteWriter out;
    out.magic("MSK1");
    out.u32(static_cast<std::uint32_t>(raster.height));
    out.u32(static_cast<std::uint32_t>(raster.width));
    out.raw(raster.data);
    out.save(path);
}

void write_tensor(const fs::path& path, std::span<const std::size_t> dims,
                  std::span<const double> values) {
    std::size_t expected = 1;
    for (std::size_t d : dims) expected *= d;
    if (dims.empty() || expected != values.size())
        throw InputError("write_tensor: dims do not match the value count");
    ByteWriter out;
    out.magic("TNS1");
    out.u32(static_cast<std::uint32_t>(dims.size()));
    for (std::size_t d : dims) out.u32(static_cast<std::uint32_t>(d));
    for (double v : values) out.f32(static_cast<float>(v));
    out.save(path);
}

}  // namespace gcnseg
