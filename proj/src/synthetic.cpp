#include "graphdrift/synthetic.hpp"

#include <stdexcept>

#include "graphdrift/errors.hpp"
#include "graphdrift/rng.hpp"

namespace graphdrift {

namespace {

struct ClassTemplate {
  std::size_t vertices = 0;
  std::vector<std::vector<double>> coordinates;  // one [x, y] per vertex
  std::vector<Edge> edges;
};

// Templates are frozen functions of the class index alone: a fixed-root
// stream draws the shape, and the class centre moves along x by
// class_separation per class.
ClassTemplate make_template(const SyntheticLetterSpec& spec, int class_index) {
  constexpr std::uint64_t kTemplateRoot = 0x73686170u;  // arbitrary fixed root
  SplitMix64 rng(derive_seed(kTemplateRoot, seed_tag::kSynthetic,
                             static_cast<std::uint64_t>(class_index)));
  ClassTemplate out;
  const int span = spec.vertices_range.second - spec.vertices_range.first + 1;
  out.vertices = static_cast<std::size_t>(spec.vertices_range.first +
                                          class_index % span);
  double centre_x = spec.class_separation * static_cast<double>(class_index);
  out.coordinates.reserve(out.vertices);
  for (std::size_t i = 0; i < out.vertices; ++i)
    out.coordinates.push_back({centre_x + rng.next_unit_co() - 0.5,
                               rng.next_unit_co() - 0.5});
  // A spanning path keeps every instance connected; extra chords differ per
  // class so the topologies are not all alike.
  for (std::uint32_t i = 0; i + 1 < out.vertices; ++i)
    out.edges.push_back(Edge{i, i + 1});
  for (std::uint32_t i = 0; i + 2 < out.vertices; ++i)
    if (rng.next_unit_co() < 0.35) out.edges.push_back(Edge{i, i + 2});
  return out;
}

}  // namespace

void SyntheticLetterSpec::validate() const {
  if (num_classes < 1)
    throw InvalidConfigError("synthetic spec: need at least one class");
  if (vertices_range.first < 1 || vertices_range.second < vertices_range.first)
    throw InvalidConfigError("synthetic spec: bad vertex range");
  if (coordinate_noise < 0.0)
    throw InvalidConfigError("synthetic spec: noise must be non-negative");
  if (class_separation <= 0.0)
    throw InvalidConfigError("synthetic spec: separation must be positive");
}

std::map<std::string, std::vector<AttributedGraph>> generate_synthetic(
    const SyntheticLetterSpec& spec, int per_class, std::uint64_t seed) {
  spec.validate();
  if (per_class < 1)
    throw InvalidConfigError("generate_synthetic: per_class must be positive");

  std::map<std::string, std::vector<AttributedGraph>> out;
  for (int c = 0; c < spec.num_classes; ++c) {
    ClassTemplate shape = make_template(spec, c);
    std::string label = "C" + std::to_string(c);
    std::vector<AttributedGraph>& graphs = out[label];
    graphs.reserve(static_cast<std::size_t>(per_class));
    for (int k = 0; k < per_class; ++k) {
      SplitMix64 rng(derive_seed(seed, seed_tag::kSynthetic,
                                 (static_cast<std::uint64_t>(c) << 32) |
                                     static_cast<std::uint64_t>(k)));
      std::vector<std::string> ids(shape.vertices);
      std::vector<AttributeValue> attrs(shape.vertices);
      for (std::size_t i = 0; i < shape.vertices; ++i) {
        ids[i] = std::to_string(i);
        attrs[i] = std::vector<double>{
            shape.coordinates[i][0] + spec.coordinate_noise * rng.next_normal(),
            shape.coordinates[i][1] + spec.coordinate_noise * rng.next_normal()};
      }
      graphs.emplace_back(std::move(ids), std::move(attrs), shape.edges,
                          std::vector<AttributeValue>(shape.edges.size()), false);
    }
  }
  return out;
}

}  // namespace graphdrift
