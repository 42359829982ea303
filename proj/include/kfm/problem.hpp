#ifndef KFM_PROBLEM_HPP
#define KFM_PROBLEM_HPP

#include <cstdint>
#include <string>

namespace kfm {

/** Shared options of the command-line front end. Commands parse a JSON
 *  problem spec, run the pipeline, and write CSV/JSON artifacts under the
 *  output directory. Exit codes: 0 ok, 1 numeric-acceptance failure,
 *  2 validation error. */
struct CommandOptions {
  std::string spec_path;
  std::string out_dir = ".";
  int threads = 1;
  std::uint64_t seed = 0;
};

int cmd_eig(const CommandOptions& opt);
int cmd_solve(const CommandOptions& opt);
int cmd_dim(const CommandOptions& opt);
int cmd_verify(const CommandOptions& opt);
int cmd_bilip(const CommandOptions& opt);
int cmd_gifs_check(const CommandOptions& opt);
int cmd_oracle_compare(const CommandOptions& opt);

}  // namespace kfm

#endif
