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

#include "gcnseg/scene.hpp"

#include <cmath>

#include "gcnseg/errors.hpp"

namespace gcnseg {

void SceneSeries::validate() const {
    if (frames == 0 || bands == 0 || height == 0 || width == 0)
        throw InputError("scene: all dimensions must be positive");
    if (reflectance.size() != frames * bands * height * width)
        throw InputError("scene: reflectance buffer size does not match dimensions");
    if (!validity.empty() && validity.size() != frames * height * width)
        throw InputError("scene: validity buffer size does not match dimensions");
    if (!label.empty() && label.size() != label_height() * label_width())
        throw InputError("scene: label raster must be exactly 4x the image dimensions");
    for (double v : reflectance)
        if (!std::isfinite(v)) throw InputError("scene: non-finite reflectance value");
    for (std::uint8_t v : label)
        if (v != kBackground && v != kCultivated && v != kExcluded)
            throw InputError("scene: label value outside {0, 1, 255}");
}

}  // namespace gcnseg
