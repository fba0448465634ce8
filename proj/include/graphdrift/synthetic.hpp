#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "graphdrift/graph.hpp"

namespace graphdrift {

// Desk-scale generator of letter-like classes: each class is a fixed small
// template of 2-D vertex coordinates plus topology, and every instance
// perturbs the coordinates with gaussian noise. Class templates sit
// class_separation apart, so separation >> noise makes classes far in edit
// distance while noise controls within-class spread.
struct SyntheticLetterSpec {
  int num_classes = 2;
  std::pair<int, int> vertices_range{4, 6};
  double coordinate_noise = 0.05;
  double class_separation = 1.0;

  void validate() const;
};

// Class labels are "C0", "C1", ... Instances are deterministic per
// (spec, seed); the templates depend only on the class index, so different
// seeds redraw the noise around identical shapes.
std::map<std::string, std::vector<AttributedGraph>> generate_synthetic(
    const SyntheticLetterSpec& spec, int per_class, std::uint64_t seed);

}  // namespace graphdrift
