#include "qdf/state_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

namespace qdf {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void append_real_rows(std::ostream& os, const Mat& m, bool imag_part) {
  os << "[";
  for (long r = 0; r < m.rows(); ++r) {
    os << (r ? ",\n      " : "");
    os << "[";
    for (long c = 0; c < m.cols(); ++c) {
      if (c) os << ", ";
      os << fmt17(imag_part ? m(r, c).imag() : m(r, c).real());
    }
    os << "]";
  }
  os << "]";
}

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ArgumentError("malformed JSON in '" + path + "': " + e.what());
  }
}

const json& field(const json& j, const char* name, const std::string& path) {
  auto it = j.find(name);
  if (it == j.end())
    throw ArgumentError("missing field '" + std::string(name) + "' in '" + path + "'");
  return *it;
}

std::string node_stem(const std::vector<int>& path) {
  std::string s = "node";
  for (int x : path) s += "_" + std::to_string(x);
  return s;
}

void collect_nodes(const TreeNode& node, std::vector<int>& path, int parties,
                   const std::string& dir, json& nodes) {
  json entry;
  entry["path"] = path;
  json files = json::array();
  const std::string stem = node_stem(path);
  for (int x = 0; x < node.povm.outcomes(); ++x) {
    const std::string fname = stem + "_e" + std::to_string(x) + ".json";
    write_matrix((fs::path(dir) / fname).string(), node.povm.dims, node.povm.effects[x]);
    files.push_back(fname);
  }
  entry["effects"] = files;
  nodes.push_back(std::move(entry));
  const int depth = static_cast<int>(path.size());
  if (depth + 1 < parties) {
    for (int x = 0; x < static_cast<int>(node.children.size()); ++x) {
      path.push_back(x);
      collect_nodes(node.children[x], path, parties, dir, nodes);
      path.pop_back();
    }
  }
}

}  // namespace

void write_matrix(const std::string& path, const std::vector<int>& dims, const Mat& m) {
  if (product_dim(dims) != m.rows() || m.rows() != m.cols())
    throw ArgumentError("matrix side does not match the dimension list");
  std::ostringstream os;
  os << "{\n  \"dims\": [";
  for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? ", " : "") << dims[i];
  os << "],\n  \"matrix\": {\n    \"re\": ";
  append_real_rows(os, m, false);
  os << ",\n    \"im\": ";
  append_real_rows(os, m, true);
  os << "\n  }\n}\n";
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write file '" + path + "'");
  out << os.str();
  if (!out) throw ArgumentError("write failed for '" + path + "'");
}

std::pair<std::vector<int>, Mat> read_matrix(const std::string& path) {
  const json j = parse_file(path);
  const json& jd = field(j, "dims", path);
  if (!jd.is_array() || jd.empty())
    throw ArgumentError("field 'dims' in '" + path + "' must be a non-empty array");
  std::vector<int> dims;
  for (const auto& v : jd) {
    if (!v.is_number_integer() || v.get<long>() < 1)
      throw ArgumentError("field 'dims' in '" + path + "' must hold positive integers");
    dims.push_back(v.get<int>());
  }
  const long side = product_dim(dims);
  const json& jm = field(j, "matrix", path);
  const json& re = field(jm, "re", path);
  const json& im = field(jm, "im", path);
  auto check_shape = [&](const json& part, const char* name) {
    if (!part.is_array() || static_cast<long>(part.size()) != side)
      throw ArgumentError("field 'matrix." + std::string(name) + "' in '" + path + "' must be " +
                          std::to_string(side) + " rows");
    for (const auto& row : part)
      if (!row.is_array() || static_cast<long>(row.size()) != side)
        throw ArgumentError("field 'matrix." + std::string(name) + "' in '" + path +
                            "' must have " + std::to_string(side) + " columns per row");
  };
  check_shape(re, "re");
  check_shape(im, "im");
  Mat m(side, side);
  for (long r = 0; r < side; ++r)
    for (long c = 0; c < side; ++c) {
      const json& jre = re[r][c];
      const json& jim = im[r][c];
      if (!jre.is_number() || !jim.is_number())
        throw ArgumentError("non-numeric matrix entry at row " + std::to_string(r) + ", column " +
                            std::to_string(c) + " in '" + path + "'");
      m(r, c) = Cplx(jre.get<double>(), jim.get<double>());
    }
  return {std::move(dims), std::move(m)};
}

void write_state(const std::string& path, const DensityOperator& rho) {
  write_matrix(path, rho.dims(), rho.matrix());
}

DensityOperator read_state(const std::string& path, OnInvalid policy) {
  auto [dims, m] = read_matrix(path);
  try {
    return DensityOperator(dims, std::move(m), policy);
  } catch (const ArgumentError& e) {
    throw ArgumentError("state file '" + path + "' rejected: " + e.what());
  }
}

void write_tree(const std::string& dir, const AdaptiveMeasurementTree& tree) {
  tree.validate();
  fs::create_directories(dir);
  json manifest;
  manifest["party_dims"] = tree.party_dims;
  json nodes = json::array();
  std::vector<int> path;
  collect_nodes(tree.root, path, tree.parties(), dir, nodes);
  manifest["nodes"] = std::move(nodes);
  std::ofstream out(fs::path(dir) / "manifest.json");
  if (!out) throw ArgumentError("cannot write manifest in '" + dir + "'");
  out << manifest.dump(2) << "\n";
}

AdaptiveMeasurementTree read_tree(const std::string& dir) {
  const std::string manifest_path = (fs::path(dir) / "manifest.json").string();
  const json manifest = parse_file(manifest_path);
  AdaptiveMeasurementTree tree;
  const json& jd = field(manifest, "party_dims", manifest_path);
  for (const auto& v : jd) {
    if (!v.is_number_integer() || v.get<long>() < 1)
      throw ArgumentError("field 'party_dims' in '" + manifest_path +
                          "' must hold positive integers");
    tree.party_dims.push_back(v.get<int>());
  }
  if (tree.party_dims.empty())
    throw ArgumentError("field 'party_dims' in '" + manifest_path + "' must be non-empty");

  std::map<std::vector<int>, Povm> povms;
  for (const auto& entry : field(manifest, "nodes", manifest_path)) {
    std::vector<int> path;
    for (const auto& v : field(entry, "path", manifest_path)) path.push_back(v.get<int>());
    Povm povm;
    bool first = true;
    for (const auto& fname : field(entry, "effects", manifest_path)) {
      auto [dims, m] = read_matrix((fs::path(dir) / fname.get<std::string>()).string());
      if (first) {
        povm.dims = dims;
        first = false;
      } else if (povm.dims != dims) {
        throw ArgumentError("effects of node '" + node_stem(path) +
                            "' in '" + dir + "' disagree on dimensions");
      }
      povm.effects.push_back(std::move(m));
    }
    if (povm.effects.empty())
      throw ArgumentError("node '" + node_stem(path) + "' in '" + dir + "' has no effects");
    povms.emplace(std::move(path), std::move(povm));
  }

  const int parties = tree.parties();
  std::function<void(TreeNode&, std::vector<int>&)> fill = [&](TreeNode& node,
                                                               std::vector<int>& path) {
    auto it = povms.find(path);
    if (it == povms.end())
      throw ArgumentError("tree in '" + dir + "' is missing node '" + node_stem(path) + "'");
    node.povm = it->second;
    if (static_cast<int>(path.size()) + 1 < parties) {
      node.children.resize(node.povm.outcomes());
      for (int x = 0; x < node.povm.outcomes(); ++x) {
        path.push_back(x);
        fill(node.children[x], path);
        path.pop_back();
      }
    }
  };
  std::vector<int> path;
  fill(tree.root, path);
  tree.validate();
  return tree;
}

}  // namespace qdf
