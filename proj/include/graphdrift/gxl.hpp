#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "graphdrift/graph.hpp"

namespace graphdrift {

// Attribute layout of one GXL dataset. Numeric kinds list one key per
// coordinate (order matters); categorical kinds list exactly one key.
struct DatasetSchema {
  AttrKind vertex_kind = AttrKind::none;
  std::vector<std::string> vertex_keys;
  AttrKind edge_kind = AttrKind::none;
  std::vector<std::string> edge_keys;

  void validate() const;
};

DatasetSchema schema_from_json_file(const std::filesystem::path& path);
DatasetSchema schema_from_json_text(const std::string& text);

// Parse one GXL graph file under the given schema.
AttributedGraph load_gxl_graph(const std::filesystem::path& path,
                               const DatasetSchema& schema);

// Load a CXL class index and every graph it references. Graph files are
// resolved relative to the index's directory.
std::map<std::string, std::vector<AttributedGraph>> load_gxl_collection(
    const std::filesystem::path& cxl_index, const DatasetSchema& schema);

}  // namespace graphdrift
