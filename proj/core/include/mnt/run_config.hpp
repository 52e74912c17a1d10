#pragma once

#include <string>
#include <vector>

namespace mnt {

/// One flat configuration record shared by the CLI flags and the JSON
/// config file; file values are overridden by explicit flags.
struct RunConfig {
  std::string problem = "manufactured"; // manufactured | plane_source | source_beam
  std::string model = "mN";             // mN | pN
  int moment_order = 3;                 // N
  int recon_order = 3;                  // k
  int n_cells = 40;                     // J
  std::string integrator;               // empty: chosen from k
  std::string limiter = "mp";           // off | pp | mp
  double limiter_c = 1.0;
  double tau = 1e-9;
  double eps = 0.01;
  std::vector<double> r_sequence = {1e-8, 1e-6, 1e-4};
  int iters_per_level = 50;
  int n_angular = 40;
  int q_init = 0; // 0: 2 for k = 5, 3 for k in {6, 7}
  double t_final = -1.0; // < 0: problem default
  int threads = 1;
  std::string out_path;
  std::string tableau_dir;
  std::vector<int> grids; // converge subcommand
  double manufactured_peak = 4.0;

  int resolved_q_init() const;
  void validate() const;
};

std::string serialize_config(const RunConfig& cfg);
RunConfig parse_config(const std::string& json_text);

} // namespace mnt
