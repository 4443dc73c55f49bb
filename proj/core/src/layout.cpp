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

#include "kartoteka/layout.hpp"

#include <algorithm>
#include <string>
#include <tuple>
#include <utility>

#include "kartoteka/errors.hpp"

namespace kartoteka {

namespace {

void require_valid(const BBox& b, const char* what) {
  if (!(b.w > 0.0) || !(b.h > 0.0) || b.x < 0.0 || b.y < 0.0) {
    throw ValidationError(std::string(what) + ": degenerate box (x=" +
                          std::to_string(b.x) + ", y=" + std::to_string(b.y) +
                          ", w=" + std::to_string(b.w) + ", h=" +
                          std::to_string(b.h) + ")");
  }
}

}  // namespace

double iou(const BBox& a, const BBox& b) {
  require_valid(a, "iou");
  require_valid(b, "iou");
  const double ix = std::max(0.0, std::min(a.right(), b.right()) -
                                      std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.bottom(), b.bottom()) -
                                      std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return inter / uni;
}

std::optional<BBox> select_index_box(const std::vector<BBox>& boxes,
                                     double strip_height,
                                     double row_tolerance) {
  if (!(strip_height > 0.0) || row_tolerance < 0.0) {
    throw ValidationError("select_index_box: strip_height must be > 0 and "
                          "row_tolerance >= 0");
  }
  const BBox* best = nullptr;
  double row_top = 0.0;
  for (const auto& b : boxes) require_valid(b, "select_index_box");
  // Topmost row first: find the minimal top edge within the strip, then
  // the leftmost box whose top edge sits within tolerance of it. Ties on
  // x resolve by smaller y, then smaller area, to stay order-independent.
  for (const auto& b : boxes) {
    if (b.y >= strip_height) continue;
    if (best == nullptr || b.y < row_top) {
      row_top = b.y;
      best = &b;
    }
  }
  if (best == nullptr) return std::nullopt;
  const auto leftmost = [](const BBox& a, const BBox& b) {
    return std::tie(a.x, a.y) < std::tie(b.x, b.y) ||
           (a.x == b.x && a.y == b.y &&
            std::make_pair(a.area(), a.w) < std::make_pair(b.area(), b.w));
  };
  const BBox* pick = nullptr;
  for (const auto& b : boxes) {
    if (b.y >= strip_height || b.y > row_top + row_tolerance) continue;
    if (pick == nullptr || leftmost(b, *pick)) pick = &b;
  }
  return *pick;
}

double mean_iou(const std::vector<BBox>& predicted,
                const std::vector<BBox>& reference) {
  if (predicted.empty() || predicted.size() != reference.size()) {
    throw ValidationError("mean_iou: need equal, non-zero box counts (got " +
                          std::to_string(predicted.size()) + " and " +
                          std::to_string(reference.size()) + ")");
  }
  double total = 0.0;
  for (size_t i = 0; i < predicted.size(); ++i) {
    total += iou(predicted[i], reference[i]);
  }
  return total / double(predicted.size());
}

}  // namespace kartoteka
