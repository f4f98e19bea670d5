#include "sdpr/errors.hpp"
#include "sdpr/io.hpp"

#include <doctest.h>

#include <sstream>

using namespace sdpr;

TEST_CASE("edge list with comments and default weights") {
  std::istringstream in("# a triangle\n1 2 1.5\n2 3\n\n1 3 2 # trailing\n");
  const io::Graph g = io::read_edge_list(in);
  CHECK(g.n == 3);
  REQUIRE(g.edges.size() == 3);
  CHECK(g.edges[0].i == 0);
  CHECK(g.edges[0].j == 1);
  CHECK(g.edges[0].w == 1.5);
  CHECK(g.edges[1].w == 1.0);
  CHECK(g.edges[2].w == 2.0);
}

TEST_CASE("edge list vertex count header") {
  std::istringstream in("# n=10\n1 2 1\n");
  CHECK(io::read_edge_list(in).n == 10);
}

TEST_CASE("edge list errors") {
  std::istringstream bad("1 x 2\n");
  CHECK_THROWS_AS(io::read_edge_list(bad), InputError);
  std::istringstream zero("0 1 1\n");
  CHECK_THROWS_AS(io::read_edge_list(zero), InputError);
}

TEST_CASE("Matrix Market symmetric coordinate") {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "% comment\n"
      "3 3 3\n"
      "2 1 4.0\n"
      "3 3 9.0\n"
      "3 2 1.0\n");
  const io::Graph g = io::read_matrix_market(in);
  CHECK(g.n == 3);
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[0].i == 1);
  CHECK(g.edges[0].j == 0);
  CHECK(g.edges[0].w == 4.0);
}

TEST_CASE("Matrix Market general entries are halved") {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate pattern general\n"
      "2 2 2\n"
      "1 2\n"
      "2 1\n");
  const io::Graph g = io::read_matrix_market(in);
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[0].w + g.edges[1].w == 1.0);
}

TEST_CASE("Matrix Market errors") {
  std::istringstream count("%%MatrixMarket matrix coordinate real symmetric\n2 2 3\n1 2 1\n");
  CHECK_THROWS_AS(io::read_matrix_market(count), InputError);
  std::istringstream array("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
  CHECK_THROWS_AS(io::read_matrix_market(array), InputError);
  CHECK_THROWS_AS(io::read_graph_file("/nonexistent/graph.txt"), InputError);
}

TEST_CASE("observations CSV") {
  std::istringstream in("# n1=3 n2=2\ni,j,value\n1,1,0.5\n3,2,-1\n");
  const io::ObservationSet o = io::read_observations(in);
  CHECK(o.n1 == 3);
  CHECK(o.n2 == 2);
  REQUIRE(o.observations.size() == 2);
  CHECK(o.observations[1].i == 2);
  CHECK(o.observations[1].j == 1);
  CHECK(o.observations[1].value == -1.0);
}

TEST_CASE("observations CSV errors") {
  std::istringstream no_dims("i,j,value\n1,1,1\n");
  CHECK_THROWS_AS(io::read_observations(no_dims), InputError);
  std::istringstream range("# n1=1 n2=1\ni,j,value\n2,1,1\n");
  CHECK_THROWS_AS(io::read_observations(range), InputError);
}

TEST_CASE("dense matrix round trip") {
  Matrix a(2, 3);
  a << 1.0, -2.5, 1e-300, 3.0, 0.1, 7.0;
  std::stringstream buf;
  io::write_dense(buf, a);
  const Matrix b = io::read_dense(buf);
  CHECK(a == b);
}
