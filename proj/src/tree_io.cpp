#include "prototree/tree_io.hpp"

#include <json.hpp>

#include "prototree/digest.hpp"
#include "prototree/error.hpp"
#include "prototree/matrix_io.hpp"

namespace prototree {

using nlohmann::json;

namespace {

json tree_body(const Dendrogram& dend) {
  json merges = json::array();
  for (const Merge& m : dend.merges()) {
    merges.push_back({{"left", m.left}, {"right", m.right}, {"height", m.height}});
  }
  // nlohmann::json objects keep keys sorted, which makes the dump canonical.
  return json{{"format_version", kTreeFormatVersion},
              {"n", dend.leaf_count()},
              {"labels", dend.labels()},
              {"merges", std::move(merges)},
              {"prototypes", dend.prototypes()},
              {"order", dend.order()},
              {"linkage", to_string(dend.linkage())}};
}

template <typename T>
T field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ValidationError(std::string("tree file missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("tree file field '") + key + "': " + e.what());
  }
}

}  // namespace

std::string canonical_tree_bytes(const Dendrogram& dend) { return tree_body(dend).dump(); }

std::string tree_digest(const Dendrogram& dend) { return sha256_hex(canonical_tree_bytes(dend)); }

std::string tree_to_json(const Dendrogram& dend) {
  json doc = tree_body(dend);
  doc["digest"] = sha256_hex(doc.dump());
  return doc.dump() + "\n";
}

Dendrogram tree_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("tree file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("tree file must be a JSON object");
  const int version = field<int>(doc, "format_version");
  if (version != kTreeFormatVersion) {
    throw ValidationError("unsupported tree format_version " + std::to_string(version));
  }
  const auto n = field<std::size_t>(doc, "n");
  auto labels = field<std::vector<std::string>>(doc, "labels");
  if (labels.size() != n) throw ValidationError("tree file: n does not match label count");
  std::vector<Merge> merges;
  for (const json& m : field<json>(doc, "merges")) {
    merges.push_back({field<NodeId>(m, "left"), field<NodeId>(m, "right"), field<double>(m, "height")});
  }
  Dendrogram dend(std::move(labels), std::move(merges),
                  field<std::vector<LeafId>>(doc, "prototypes"),
                  parse_linkage(field<std::string>(doc, "linkage")));
  if (field<std::vector<LeafId>>(doc, "order") != dend.order()) {
    throw ValidationError("tree file: order does not match merge structure");
  }
  const auto stored = field<std::string>(doc, "digest");
  if (stored != tree_digest(dend)) {
    throw ValidationError("tree file digest mismatch (stored " + stored + ")");
  }
  return dend;
}

void save_tree(const Dendrogram& dend, const std::filesystem::path& path) {
  write_file(path, tree_to_json(dend));
}

Dendrogram load_tree(const std::filesystem::path& path) { return tree_from_json(read_file(path)); }

std::string hclust_table_csv(const Dendrogram& dend) {
  const std::size_t n = dend.leaf_count();
  const auto encode = [n](NodeId id) {
    return id < n ? -static_cast<long long>(id) - 1 : static_cast<long long>(id - n) + 1;
  };
  std::string out = "merge1,merge2,height,prototype\n";
  for (std::size_t k = 0; k < dend.merges().size(); ++k) {
    const Merge& m = dend.merges()[k];
    // hclust lists a singleton before a cluster, and the smaller index first.
    long long a = encode(m.left);
    long long b = encode(m.right);
    if ((a > 0) == (b > 0) ? std::abs(a) > std::abs(b) : a > 0) std::swap(a, b);
    out += std::to_string(a) + "," + std::to_string(b) + "," + format_double(m.height) + "," +
           csv_escape(dend.labels()[dend.prototypes()[k]]) + "\n";
  }
  return out;
}

}  // namespace prototree
