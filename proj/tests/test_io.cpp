#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qg/io.hpp"
#include "qg/spectral.hpp"

using namespace qg;

TEST_CASE("bundled examples parse and validate") {
  for (const char* name : {"standard", "delta", "preferred"}) {
    const Problem p = parse_problem(example_problem(name));
    CHECK(p.graph.edge_count() == 3);
    CHECK(validate_coupling(p.graph.coupling).pass());
    CHECK(check_pi_symmetric(p.graph, p.action).pass());
    CHECK(!p.irreps.empty());
  }
  CHECK_THROWS_AS(example_problem("nonsense"), UnknownExample);
}

TEST_CASE("round trip keeps the problem semantically identical") {
  const Problem p = parse_problem(example_problem("delta"));
  const Problem q = parse_problem(problem_to_json(p));
  CHECK(q.graph.edge_lengths == p.graph.edge_lengths);
  CHECK((q.graph.coupling.A - p.graph.coupling.A).cwiseAbs().maxCoeff() == 0.0);
  CHECK((q.graph.coupling.B - p.graph.coupling.B).cwiseAbs().maxCoeff() == 0.0);
  CHECK(q.group->order() == p.group->order());
  REQUIRE(q.irreps.size() == p.irreps.size());
  for (std::size_t i = 0; i < p.irreps.size(); ++i) {
    CHECK(q.irreps[i].dim == p.irreps[i].dim);
    for (int g = 0; g < p.group->order(); ++g)
      CHECK((q.irreps[i].matrices[g] - p.irreps[i].matrices[g]).cwiseAbs().maxCoeff() ==
            0.0);
  }
  CHECK(q.k_max == p.k_max);
}

TEST_CASE("per-vertex coupling assembles to the same constraint set") {
  Json doc = example_problem("standard");
  doc["coupling"].erase("global");
  Json center;
  center["edge_ends"] = {{0, "finish"}, {1, "finish"}, {2, "finish"}};
  center["A"] = {{{1, 0}, {-1, 0}, {0, 0}},
                 {{1, 0}, {0, 0}, {-1, 0}},
                 {{0, 0}, {0, 0}, {0, 0}}};
  center["B"] = {{{0, 0}, {0, 0}, {0, 0}},
                 {{0, 0}, {0, 0}, {0, 0}},
                 {{1, 0}, {1, 0}, {1, 0}}};
  Json vertices = Json::array({center});
  for (int j = 0; j < 3; ++j) {
    Json loose;
    loose["edge_ends"] = {{j, "start"}};
    loose["A"] = {{{0, 0}}};
    loose["B"] = {{{1, 0}}};
    vertices.push_back(std::move(loose));
  }
  doc["coupling"]["vertices"] = std::move(vertices);
  const Problem p = parse_problem(doc);
  CHECK(validate_coupling(p.graph.coupling).pass());
  CHECK(conditions_equivalent(p.graph.coupling, star_graph_standard(1.0).coupling));
}

TEST_CASE("malformed documents raise ParseError") {
  CHECK_THROWS_AS(parse_problem(Json::array()), ParseError);

  Json no_edges = example_problem("standard");
  no_edges.erase("edges");
  CHECK_THROWS_AS(parse_problem(no_edges), ParseError);

  Json string_complex = example_problem("standard");
  string_complex["coupling"]["global"]["A"][0][0] = "1+2i";
  CHECK_THROWS_AS(parse_problem(string_complex), ParseError);

  Json bad_perm = example_problem("standard");
  bad_perm["group"] = {{"generators", Json::array({Json::array({0, 0, 1})})}};
  bad_perm["irreps"] = Json::array();
  CHECK_THROWS_AS(parse_problem(bad_perm), ParseError);

  Json bad_scan = example_problem("standard");
  bad_scan["scan"]["k_max"] = 0.0;
  CHECK_THROWS_AS(parse_problem(bad_scan), ParseError);

  Json wrong_degree = example_problem("standard");
  wrong_degree["group"] = {{"builtin", "Cn:4"}};
  CHECK_THROWS_AS(parse_problem(wrong_degree), ParseError);
}

TEST_CASE("explicit irreps are accepted and validated") {
  Json doc = example_problem("preferred");
  const FiniteGroup c3 = cyclic_group(3);
  const auto irreps = cyclic_irreps(c3);
  Json arr = Json::array();
  for (const auto& rep : irreps) {
    Json one;
    one["label"] = rep.label;
    one["dim"] = rep.dim;
    Json mats = Json::array();
    for (const auto& m : rep.matrices) mats.push_back(io_detail::matrix_to_json(m));
    one["matrices"] = std::move(mats);
    arr.push_back(std::move(one));
  }
  doc["irreps"] = arr;
  const Problem p = parse_problem(doc);
  CHECK(p.irreps.size() == 3);
  for (const auto& rep : p.irreps) CHECK(is_irreducible(rep));

  // A non-homomorphism must be rejected.
  doc["irreps"][1]["matrices"][1][0][0] = {0.3, 0.0};
  CHECK_THROWS_AS(parse_problem(doc), ParseError);
}

TEST_CASE("content digest is stable and content-sensitive") {
  CHECK(content_digest("abc") == content_digest("abc"));
  CHECK(content_digest("abc") != content_digest("abd"));
}
