#include "graphdrift/gxl.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <json.hpp>

#include "graphdrift/errors.hpp"

namespace graphdrift {

namespace {

namespace pt = boost::property_tree;

AttrKind kind_from_string(const std::string& name, const std::string& where) {
  if (name == "none") return AttrKind::none;
  if (name == "numeric") return AttrKind::numeric;
  if (name == "categorical") return AttrKind::categorical;
  throw ParseError("unknown attribute kind '" + name + "' in " + where);
}

// <attr name="x"><float>1.5</float></attr> and friends: the payload is the
// text of whichever typed child is present.
std::map<std::string, std::string> collect_attrs(const pt::ptree& element,
                                                 const std::string& file) {
  std::map<std::string, std::string> attrs;
  for (const auto& child : element) {
    if (child.first != "attr") continue;
    auto name = child.second.get_optional<std::string>("<xmlattr>.name");
    if (!name) throw ParseError("attr without a name in " + file);
    std::string value;
    bool found = false;
    for (const auto& payload : child.second) {
      if (payload.first == "<xmlattr>") continue;
      value = payload.second.get_value<std::string>();
      found = true;
      break;
    }
    if (!found) value = child.second.get_value<std::string>();
    attrs[*name] = value;
  }
  return attrs;
}

AttributeValue attrs_to_value(const std::map<std::string, std::string>& attrs,
                              AttrKind kind, const std::vector<std::string>& keys,
                              const std::string& file) {
  switch (kind) {
    case AttrKind::none:
      return AttributeValue{};
    case AttrKind::numeric: {
      std::vector<double> coords;
      coords.reserve(keys.size());
      for (const std::string& key : keys) {
        auto it = attrs.find(key);
        if (it == attrs.end())
          throw SchemaError("missing numeric attribute '" + key + "' in " + file);
        try {
          coords.push_back(std::stod(it->second));
        } catch (const std::exception&) {
          throw SchemaError("attribute '" + key + "' in " + file +
                            " is not a number: " + it->second);
        }
      }
      return AttributeValue{std::move(coords)};
    }
    case AttrKind::categorical: {
      auto it = attrs.find(keys.front());
      if (it == attrs.end())
        throw SchemaError("missing categorical attribute '" + keys.front() + "' in " +
                          file);
      return AttributeValue{it->second};
    }
  }
  throw SchemaError("unhandled attribute kind in " + file);
}

pt::ptree read_xml_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  pt::ptree tree;
  try {
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError("malformed XML in " + path.string() + ": " + e.what());
  }
  return tree;
}

}  // namespace

void DatasetSchema::validate() const {
  if (vertex_kind == AttrKind::numeric && vertex_keys.empty())
    throw SchemaError("numeric vertex schema needs at least one key");
  if (vertex_kind == AttrKind::categorical && vertex_keys.size() != 1)
    throw SchemaError("categorical vertex schema needs exactly one key");
  if (edge_kind == AttrKind::numeric && edge_keys.empty())
    throw SchemaError("numeric edge schema needs at least one key");
  if (edge_kind == AttrKind::categorical && edge_keys.size() != 1)
    throw SchemaError("categorical edge schema needs exactly one key");
}

DatasetSchema schema_from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid schema JSON: ") + e.what());
  }
  DatasetSchema schema;
  try {
    schema.vertex_kind =
        kind_from_string(doc.value("vertex_kind", std::string("none")), "schema");
    schema.vertex_keys =
        doc.value("vertex_keys", std::vector<std::string>{});
    schema.edge_kind =
        kind_from_string(doc.value("edge_kind", std::string("none")), "schema");
    schema.edge_keys = doc.value("edge_keys", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid schema JSON: ") + e.what());
  }
  schema.validate();
  return schema;
}

DatasetSchema schema_from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open schema file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return schema_from_json_text(text.str());
}

AttributedGraph load_gxl_graph(const std::filesystem::path& path,
                               const DatasetSchema& schema) {
  schema.validate();
  const std::string file = path.filename().string();
  pt::ptree tree = read_xml_file(path);

  auto graph = tree.get_child_optional("gxl.graph");
  if (!graph) throw ParseError("no <graph> element in " + file);
  bool directed = graph->get<std::string>("<xmlattr>.edgemode", "undirected") ==
                  "directed";

  std::vector<std::string> ids;
  std::vector<AttributeValue> vertex_attrs;
  std::vector<Edge> edges;
  std::vector<AttributeValue> edge_attrs;
  std::map<std::string, std::uint32_t> index_of;

  for (const auto& child : *graph) {
    if (child.first == "node") {
      auto id = child.second.get_optional<std::string>("<xmlattr>.id");
      if (!id) throw ParseError("node without id in " + file);
      if (index_of.count(*id)) throw ParseError("duplicate node id in " + file);
      index_of[*id] = static_cast<std::uint32_t>(ids.size());
      ids.push_back(*id);
      vertex_attrs.push_back(attrs_to_value(collect_attrs(child.second, file),
                                            schema.vertex_kind, schema.vertex_keys,
                                            file));
    }
  }
  for (const auto& child : *graph) {
    if (child.first == "edge") {
      auto from = child.second.get_optional<std::string>("<xmlattr>.from");
      auto to = child.second.get_optional<std::string>("<xmlattr>.to");
      if (!from || !to) throw ParseError("edge without endpoints in " + file);
      auto u = index_of.find(*from);
      auto v = index_of.find(*to);
      if (u == index_of.end() || v == index_of.end())
        throw ParseError("edge references unknown node in " + file);
      edges.push_back(Edge{u->second, v->second});
      edge_attrs.push_back(attrs_to_value(collect_attrs(child.second, file),
                                          schema.edge_kind, schema.edge_keys, file));
    }
  }

  try {
    return AttributedGraph(std::move(ids), std::move(vertex_attrs), std::move(edges),
                           std::move(edge_attrs), directed);
  } catch (const std::exception& e) {
    throw ParseError("inconsistent graph in " + file + ": " + e.what());
  }
}

std::map<std::string, std::vector<AttributedGraph>> load_gxl_collection(
    const std::filesystem::path& cxl_index, const DatasetSchema& schema) {
  schema.validate();
  pt::ptree tree = read_xml_file(cxl_index);
  const std::filesystem::path base = cxl_index.parent_path();

  std::map<std::string, std::vector<AttributedGraph>> collection;
  // The index nests <print file=... class=...> entries one level below the
  // root; scan the whole tree so layout variants keep working.
  std::vector<const pt::ptree*> stack{&tree};
  bool any = false;
  while (!stack.empty()) {
    const pt::ptree* node = stack.back();
    stack.pop_back();
    for (const auto& child : *node) {
      if (child.first == "print") {
        auto file = child.second.get_optional<std::string>("<xmlattr>.file");
        auto label = child.second.get_optional<std::string>("<xmlattr>.class");
        if (!file || !label)
          throw ParseError("index entry without file/class in " + cxl_index.string());
        collection[*label].push_back(load_gxl_graph(base / *file, schema));
        any = true;
      } else if (child.first != "<xmlattr>") {
        stack.push_back(&child.second);
      }
    }
  }
  if (!any) throw ParseError("no graph entries in index " + cxl_index.string());
  return collection;
}

}  // namespace graphdrift
