#include "mnt/run_config.hpp"

#include <stdexcept>

#include <json.hpp>

namespace mnt {

int RunConfig::resolved_q_init() const {
  if (q_init > 0) return q_init;
  if (recon_order >= 6) return 3;
  return 2;
}

void RunConfig::validate() const {
  if (problem != "manufactured" && problem != "plane_source" &&
      problem != "source_beam")
    throw std::invalid_argument("unknown problem '" + problem + "'");
  if (model != "mN" && model != "pN")
    throw std::invalid_argument("unknown model '" + model + "'");
  if (moment_order < 1) throw std::invalid_argument("N must be >= 1");
  if (recon_order < 1 || recon_order > 7)
    throw std::invalid_argument("k must lie in 1..7");
  if (n_cells < 2 * recon_order)
    throw std::invalid_argument("J too small for the reconstruction stencil");
  if (limiter != "off" && limiter != "pp" && limiter != "mp")
    throw std::invalid_argument("limiter must be off, pp or mp");
  if (!(limiter_c > 0.0)) throw std::invalid_argument("c must be > 0");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("eps must lie in (0,1)");
  if (n_angular < 4 || n_angular % 2 != 0)
    throw std::invalid_argument("nq must be even and >= 4");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
}

std::string serialize_config(const RunConfig& c) {
  nlohmann::json j;
  j["problem"] = c.problem;
  j["model"] = c.model;
  j["N"] = c.moment_order;
  j["k"] = c.recon_order;
  j["J"] = c.n_cells;
  j["integrator"] = c.integrator;
  j["limiter"] = c.limiter;
  j["c"] = c.limiter_c;
  j["tau"] = c.tau;
  j["eps"] = c.eps;
  j["r_sequence"] = c.r_sequence;
  j["k_r"] = c.iters_per_level;
  j["nq"] = c.n_angular;
  j["q_init"] = c.q_init;
  j["t_final"] = c.t_final;
  j["threads"] = c.threads;
  j["out"] = c.out_path;
  j["tableau_dir"] = c.tableau_dir;
  j["grids"] = c.grids;
  j["K"] = c.manufactured_peak;
  return j.dump(1);
}

RunConfig parse_config(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  RunConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("problem", c.problem);
  get("model", c.model);
  get("N", c.moment_order);
  get("k", c.recon_order);
  get("J", c.n_cells);
  get("integrator", c.integrator);
  get("limiter", c.limiter);
  get("c", c.limiter_c);
  get("tau", c.tau);
  get("eps", c.eps);
  get("r_sequence", c.r_sequence);
  get("k_r", c.iters_per_level);
  get("nq", c.n_angular);
  get("q_init", c.q_init);
  get("t_final", c.t_final);
  get("threads", c.threads);
  get("out", c.out_path);
  get("tableau_dir", c.tableau_dir);
  get("grids", c.grids);
  get("K", c.manufactured_peak);
  return c;
}

} // namespace mnt
