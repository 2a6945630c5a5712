#include "netcover/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace netcover {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InstanceFormatError(where + ": missing field \"" + key + "\"");
  }
  return obj.at(key);
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) throw InstanceFormatError(where + "." + key + ": expected a number");
  return v.get<double>();
}

int integer(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_integer()) throw InstanceFormatError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

const json& array(const json& obj, const char* key) {
  const json& v = require(obj, key, "instance");
  if (!v.is_array()) throw InstanceFormatError(std::string(key) + ": expected an array");
  return v;
}

std::string item(const char* list, std::size_t k) {
  return std::string(list) + "[" + std::to_string(k) + "]";
}

}  // namespace

ProblemInstance parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InstanceFormatError(std::string("invalid document: ") + e.what());
  }
  if (!doc.is_object()) throw InstanceFormatError("instance: expected an object");

  ProblemInstance inst;
  inst.alpha = number(doc, "alpha", "instance");

  std::vector<Vertex> vertices;
  const json& jv = array(doc, "vertices");
  for (std::size_t k = 0; k < jv.size(); ++k) {
    auto where = item("vertices", k);
    vertices.push_back({integer(jv[k], "id", where), Point2(number(jv[k], "x", where), number(jv[k], "y", where))});
  }

  std::vector<Edge> edges;
  const json& je = array(doc, "edges");
  for (std::size_t k = 0; k < je.size(); ++k) {
    auto where = item("edges", k);
    Edge e{integer(je[k], "u", where), integer(je[k], "w", where), 0.0};
    if (je[k].contains("length") && !je[k].at("length").is_null()) {
      e.length = number(je[k], "length", where);
    } else {
      const Vertex* a = nullptr;
      const Vertex* b = nullptr;
      for (const auto& v : vertices) {
        if (v.id == e.u) a = &v;
        if (v.id == e.w) b = &v;
      }
      if (a == nullptr || b == nullptr) {
        throw InstanceFormatError(where + ": cannot default length, unknown endpoint");
      }
      e.length = (a->position - b->position).norm();
    }
    edges.push_back(e);
  }
  inst.network = Network(std::move(vertices), std::move(edges));

  const json& jf = array(doc, "facilities");
  for (std::size_t k = 0; k < jf.size(); ++k) {
    auto where = item("facilities", k);
    inst.facilities.push_back(
        {integer(jf[k], "id", where), Point2(number(jf[k], "x", where), number(jf[k], "y", where))});
  }

  const json& jp = array(doc, "pairs");
  for (std::size_t k = 0; k < jp.size(); ++k) {
    auto where = item("pairs", k);
    inst.pairs.push_back({integer(jp[k], "i", where), integer(jp[k], "j", where), number(jp[k], "t", where),
                          number(jp[k], "d", where)});
  }
  return inst;
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open instance file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string serialize_instance(const ProblemInstance& inst) {
  json doc;
  doc["alpha"] = inst.alpha;
  doc["vertices"] = json::array();
  for (const auto& v : inst.network.vertices()) {
    doc["vertices"].push_back({{"id", v.id}, {"x", v.position.x()}, {"y", v.position.y()}});
  }
  doc["edges"] = json::array();
  for (const auto& e : inst.network.edges()) {
    doc["edges"].push_back({{"u", e.u}, {"w", e.w}, {"length", e.length}});
  }
  doc["facilities"] = json::array();
  for (const auto& f : inst.facilities) {
    doc["facilities"].push_back({{"id", f.id}, {"x", f.position.x()}, {"y", f.position.y()}});
  }
  doc["pairs"] = json::array();
  for (const auto& p : inst.pairs) {
    doc["pairs"].push_back({{"i", p.origin}, {"j", p.dest}, {"t", p.weight}, {"d", p.acceptance}});
  }
  return doc.dump(2);
}

}  // namespace netcover
