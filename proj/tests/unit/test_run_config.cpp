#include <doctest.h>

#include <stdexcept>

#include "mnt/run_config.hpp"

using namespace mnt;

TEST_CASE("config serialization round-trips") {
  RunConfig c;
  c.problem = "plane_source";
  c.model = "mN";
  c.moment_order = 7;
  c.recon_order = 4;
  c.n_cells = 4000;
  c.limiter = "mp";
  c.limiter_c = 10.0;
  c.tau = 1e-11;
  c.r_sequence = {1e-7, 1e-3};
  c.grids = {10, 20, 40};
  c.t_final = 0.5;
  c.out_path = "/tmp/out.csv";
  const RunConfig d = parse_config(serialize_config(c));
  CHECK(d.problem == c.problem);
  CHECK(d.moment_order == c.moment_order);
  CHECK(d.recon_order == c.recon_order);
  CHECK(d.n_cells == c.n_cells);
  CHECK(d.limiter == c.limiter);
  CHECK(d.limiter_c == c.limiter_c);
  CHECK(d.tau == c.tau);
  CHECK(d.r_sequence == c.r_sequence);
  CHECK(d.grids == c.grids);
  CHECK(d.t_final == c.t_final);
  CHECK(d.out_path == c.out_path);
  const RunConfig e = parse_config(serialize_config(d));
  CHECK(serialize_config(d) == serialize_config(e));
}

TEST_CASE("defaults match the documented table") {
  const RunConfig c;
  CHECK(c.tau == 1e-9);
  CHECK(c.eps == 0.01);
  CHECK(c.r_sequence == std::vector<double>{1e-8, 1e-6, 1e-4});
  CHECK(c.iters_per_level == 50);
  CHECK(c.n_angular == 40);
  CHECK(c.limiter_c == 1.0);
  CHECK(c.limiter == "mp");
}

TEST_CASE("q_init defaults depend on the reconstruction order") {
  RunConfig c;
  c.recon_order = 5;
  CHECK(c.resolved_q_init() == 2);
  c.recon_order = 6;
  CHECK(c.resolved_q_init() == 3);
  c.recon_order = 7;
  CHECK(c.resolved_q_init() == 3);
  c.q_init = 4;
  CHECK(c.resolved_q_init() == 4);
}

TEST_CASE("validation flags bad input") {
  RunConfig c;
  c.problem = "acoustics";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RunConfig{};
  c.recon_order = 9;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RunConfig{};
  c.n_angular = 13;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RunConfig{};
  c.limiter = "minmod";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
