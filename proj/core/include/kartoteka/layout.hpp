// Copyright 2026 The kartoteka authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KARTOTEKA_LAYOUT_HPP_
#define KARTOTEKA_LAYOUT_HPP_

#include <optional>
#include <vector>

namespace kartoteka {

// Axis-aligned word box in pixel coordinates, y growing downward.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double area() const { return w * h; }

  bool operator==(const BBox&) const = default;
};

// Intersection over union. Throws ValidationError on degenerate boxes
// (non-positive width/height or negative origin).
double iou(const BBox& a, const BBox& b);

// Picks the box holding the card's head word: among boxes whose top edge
// lies within the top strip (y < strip_height), group into rows by top
// edge (a row spans row_tolerance pixels), take the topmost row, return
// its leftmost box. nullopt when no box reaches the strip. The choice is
// invariant under permutations of the input.
std::optional<BBox> select_index_box(const std::vector<BBox>& boxes,
                                     double strip_height = 300.0,
                                     double row_tolerance = 20.0);

// Mean IoU of position-aligned box pairs. Sizes must match and be > 0.
double mean_iou(const std::vector<BBox>& predicted,
                const std::vector<BBox>& reference);

}  // namespace kartoteka

#endif  // KARTOTEKA_LAYOUT_HPP_
