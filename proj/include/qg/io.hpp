#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qg/errors.hpp"
#include "qg/graph.hpp"
#include "qg/group.hpp"
#include "qg/quotient.hpp"
#include "qg/representation.hpp"

namespace qg {

using Json = nlohmann::json;

/// A fully assembled problem: graph, symmetry group with its edge action,
/// irreps, and the scan window. The group is shared-owned so that the
/// representations and action can point into it safely.
struct Problem {
  MetricGraph graph;
  std::shared_ptr<FiniteGroup> group;
  SymmetryAction action;
  std::vector<Representation> irreps;
  double k_min = 0.0;
  double k_max = 0.0;
  double step = 0.0;  // 0: automatic
};

namespace io_detail {

inline Complex parse_complex(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(where + ": complex numbers must be [re, im] arrays");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Matrix parse_matrix(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw ParseError(where + ": expected a non-empty nested array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw ParseError(where + ": ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = parse_complex(row[static_cast<std::size_t>(c)], where);
  }
  return m;
}

inline Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Permutation parse_permutation(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": permutations must be index arrays");
  Permutation p(j.get<std::vector<int>>());
  if (!p.is_valid()) throw ParseError(where + ": not a bijection");
  return p;
}

/// Assembles the global (A, B) from per-vertex blocks: block rows are placed
/// in vertex order (sorted by smallest incident endpoint index), block
/// columns at the global interleaved endpoint positions.
inline CouplingPair assemble_vertex_coupling(const Json& vertices, int edge_count,
                                             const std::string& where) {
  struct Block {
    std::vector<Eigen::Index> endpoints;  // global trace indices
    Matrix a, b;
  };
  std::vector<Block> blocks;
  std::vector<bool> used(static_cast<std::size_t>(2 * edge_count), false);
  for (const Json& v : vertices) {
    Block blk;
    for (const Json& ee : v.at("edge_ends")) {
      const int edge = ee.at(0).get<int>();
      const std::string end = ee.at(1).get<std::string>();
      if (edge < 0 || edge >= edge_count)
        throw ParseError(where + ": edge index out of range");
      if (end != "start" && end != "finish")
        throw ParseError(where + ": edge end must be 'start' or 'finish'");
      const Eigen::Index idx = 2 * edge + (end == "finish" ? 1 : 0);
      if (used[static_cast<std::size_t>(idx)])
        throw ParseError(where + ": endpoint listed in more than one vertex");
      used[static_cast<std::size_t>(idx)] = true;
      blk.endpoints.push_back(idx);
    }
    blk.a = parse_matrix(v.at("A"), where + ".A");
    blk.b = parse_matrix(v.at("B"), where + ".B");
    const auto deg = static_cast<Eigen::Index>(blk.endpoints.size());
    if (blk.a.rows() != deg || blk.a.cols() != deg || blk.b.rows() != deg ||
        blk.b.cols() != deg)
      throw ParseError(where + ": vertex blocks must be degree x degree");
    blocks.push_back(std::move(blk));
  }
  for (bool u : used)
    if (!u) throw ParseError(where + ": not every edge endpoint belongs to a vertex");
  std::sort(blocks.begin(), blocks.end(), [](const Block& x, const Block& y) {
    return *std::min_element(x.endpoints.begin(), x.endpoints.end()) <
           *std::min_element(y.endpoints.begin(), y.endpoints.end());
  });
  Matrix a = Matrix::Zero(2 * edge_count, 2 * edge_count);
  Matrix b = Matrix::Zero(2 * edge_count, 2 * edge_count);
  Eigen::Index row = 0;
  for (const Block& blk : blocks) {
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(blk.endpoints.size()); ++r) {
      for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(blk.endpoints.size()); ++c) {
        a(row, blk.endpoints[static_cast<std::size_t>(c)]) = blk.a(r, c);
        b(row, blk.endpoints[static_cast<std::size_t>(c)]) = blk.b(r, c);
      }
      ++row;
    }
  }
  return {std::move(a), std::move(b)};
}

}  // namespace io_detail

inline Problem parse_problem(const Json& doc) {
  Problem p;
  if (!doc.is_object()) throw ParseError("document root must be an object");

  // Edges.
  if (!doc.contains("edges") || !doc["edges"].is_array() || doc["edges"].empty())
    throw ParseError("edges: expected a non-empty array");
  for (const Json& e : doc["edges"]) {
    const double l = e.at("length").get<double>();
    if (!(l > 0.0)) throw ParseError("edges: lengths must be positive");
    p.graph.edge_lengths.push_back(l);
  }
  const int e_count = p.graph.edge_count();

  // Coupling.
  const Json& coup = doc.at("coupling");
  if (coup.contains("global")) {
    p.graph.coupling.A = io_detail::parse_matrix(coup["global"].at("A"), "coupling.A");
    p.graph.coupling.B = io_detail::parse_matrix(coup["global"].at("B"), "coupling.B");
    if (p.graph.coupling.A.rows() != 2 * e_count || p.graph.coupling.B.rows() != 2 * e_count)
      throw ParseError("coupling: global matrices must be 2E x 2E");
  } else if (coup.contains("vertices")) {
    p.graph.coupling =
        io_detail::assemble_vertex_coupling(coup["vertices"], e_count, "coupling.vertices");
  } else {
    throw ParseError("coupling: expected 'global' or 'vertices'");
  }

  // Group and edge action.
  const Json& grp = doc.at("group");
  std::string builtin;
  if (grp.contains("builtin")) {
    builtin = grp["builtin"].get<std::string>();
    if (builtin == "S3") {
      p.group = std::make_shared<FiniteGroup>(s3_group());
    } else if (builtin == "C3") {
      p.group = std::make_shared<FiniteGroup>(cyclic_group(3));
    } else if (builtin.rfind("Cn:", 0) == 0) {
      const int n = std::atoi(builtin.c_str() + 3);
      if (n < 1) throw ParseError("group.builtin: bad cyclic order in '" + builtin + "'");
      p.group = std::make_shared<FiniteGroup>(cyclic_group(n));
    } else {
      throw ParseError("group.builtin: unknown group '" + builtin + "'");
    }
  } else if (grp.contains("generators")) {
    std::vector<Permutation> gens;
    for (const Json& g : grp["generators"])
      gens.push_back(io_detail::parse_permutation(g, "group.generators"));
    p.group = std::make_shared<FiniteGroup>(group_from_generators(gens, e_count));
  } else {
    throw ParseError("group: expected 'builtin' or 'generators'");
  }
  if (p.group->degree() != e_count)
    throw ParseError("group: permutations must act on the edge count");
  p.action = natural_action(*p.group);

  // Irreps.
  const Json& irr = doc.at("irreps");
  if (irr.is_string() && irr.get<std::string>() == "builtin") {
    if (builtin == "S3")
      p.irreps = s3_irreps(*p.group);
    else if (!builtin.empty())
      p.irreps = cyclic_irreps(*p.group);
    else
      throw ParseError("irreps: 'builtin' requires a builtin group");
  } else if (irr.is_array()) {
    for (const Json& one : irr) {
      Representation rep;
      rep.group = p.group.get();
      rep.label = one.value("label", "irrep" + std::to_string(p.irreps.size() + 1));
      rep.dim = one.at("dim").get<int>();
      const Json& mats = one.at("matrices");
      if (static_cast<int>(mats.size()) != p.group->order())
        throw ParseError("irreps: need one matrix per group element");
      for (const Json& m : mats)
        rep.matrices.push_back(io_detail::parse_matrix(m, "irreps.matrices"));
      if (!rep.is_valid())
        throw ParseError("irreps: '" + rep.label + "' is not a homomorphism");
      p.irreps.push_back(std::move(rep));
    }
  } else {
    throw ParseError("irreps: expected \"builtin\" or an array");
  }

  // Scan window.
  const Json& scan = doc.at("scan");
  p.k_min = scan.at("k_min").get<double>();
  p.k_max = scan.at("k_max").get<double>();
  p.step = scan.value("step", 0.0);
  if (p.k_min < 0.0 || p.k_min >= p.k_max)
    throw ParseError("scan: need 0 <= k_min < k_max");
  if (p.step < 0.0) throw ParseError("scan: step must be nonnegative");
  return p;
}

inline Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& ex) {
    throw ParseError(std::string("JSON parse error: ") + ex.what());
  }
  return parse_problem(doc);
}

/// Serializes a problem back to the file schema (global coupling form).
inline Json problem_to_json(const Problem& p) {
  Json doc;
  doc["edges"] = Json::array();
  for (double l : p.graph.edge_lengths) doc["edges"].push_back({{"length", l}});
  doc["coupling"]["global"]["A"] = io_detail::matrix_to_json(p.graph.coupling.A);
  doc["coupling"]["global"]["B"] = io_detail::matrix_to_json(p.graph.coupling.B);
  Json gens = Json::array();
  for (const auto& perm : p.group->elements) gens.push_back(perm.images);
  doc["group"]["generators"] = std::move(gens);
  Json irreps = Json::array();
  for (const auto& rep : p.irreps) {
    Json one;
    one["label"] = rep.label;
    one["dim"] = rep.dim;
    Json mats = Json::array();
    for (const auto& m : rep.matrices) mats.push_back(io_detail::matrix_to_json(m));
    one["matrices"] = std::move(mats);
    irreps.push_back(std::move(one));
  }
  doc["irreps"] = std::move(irreps);
  doc["scan"] = {{"k_min", p.k_min}, {"k_max", p.k_max}, {"step", p.step}};
  return doc;
}

/// Bundled example inputs: the three equilateral stars with unit edges.
inline Json example_problem(const std::string& name, double alpha = 1.0) {
  MetricGraph g;
  std::string group;
  if (name == "standard") {
    g = star_graph_standard(1.0);
    group = "S3";
  } else if (name == "delta") {
    g = star_graph_delta(1.0, alpha);
    group = "S3";
  } else if (name == "preferred") {
    g = star_graph_preferred_orientation(1.0);
    group = "C3";
  } else {
    throw UnknownExample("unknown example '" + name +
                         "' (expected standard, delta, or preferred)");
  }
  Json doc;
  doc["edges"] = Json::array({{{"length", 1.0}}, {{"length", 1.0}}, {{"length", 1.0}}});
  doc["coupling"]["global"]["A"] = io_detail::matrix_to_json(g.coupling.A);
  doc["coupling"]["global"]["B"] = io_detail::matrix_to_json(g.coupling.B);
  doc["group"]["builtin"] = group;
  doc["irreps"] = "builtin";
  doc["scan"] = {{"k_min", 0.0}, {"k_max", 20.0}, {"step", 0.0}};
  return doc;
}

/// FNV-1a over the raw input bytes; recorded in result documents so outputs
/// can be traced to their inputs.
inline std::string content_digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace qg
