// Copyright 2026 The glyphsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef GLYPHSIM_TESTS_SUPPORT_CLI_RUNNER_HPP_
#define GLYPHSIM_TESTS_SUPPORT_CLI_RUNNER_HPP_

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "support/synthetic_corpus.hpp"
#include "support/temp_dir.hpp"

namespace glyphsim::testing {

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out.push_back(c);
  }
  return out + "'";
}

/// Runs `program args...` through the shell and captures its output.
inline CommandResult run_command(const std::string& program, const std::vector<std::string>& args) {
  std::string cmd = shell_quote(program);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " 2>&1";
  CommandResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

/// Synthetic Omniglot-style corpus with a manifest and a levels table:
/// nine scripts in three families. Member 0 of each family is supervised,
/// member 1 unsupervised and member 2 held out for evaluation (8 characters
/// each, so 20-way episodes fit).
struct CliFixture {
  std::filesystem::path data_root, manifest, levels;
};

inline CliFixture write_cli_fixture(const std::filesystem::path& dir) {
  SyntheticSpec spec;
  spec.families = 3;
  spec.scripts_per_family = 3;
  spec.characters_per_script = 8;
  spec.instances = 4;
  spec.seed = 2;
  CliFixture f{dir / "omniglot", dir / "manifest.tsv", dir / "levels.tsv"};
  write_omniglot_tree(f.data_root, spec);
  write_file(f.manifest,
             "# fixture\n"
             "Script_A0\tsupervised_invented\n"
             "Script_B0\tsupervised_invented\n"
             "Script_C0\tsupervised_invented\n"
             "Script_A1\tunsupervised_historical\n"
             "Script_B1\tunsupervised_historical\n"
             "Script_C1\tunsupervised_historical\n"
             "Script_A2\tevaluation\n"
             "Script_B2\tevaluation\n"
             "Script_C2\tevaluation\n");
  write_file(f.levels, "Script_A2\tScript_B2\t2\nScript_A2\tScript_C2\t3\n");
  return f;
}

}  // namespace glyphsim::testing

#endif  // GLYPHSIM_TESTS_SUPPORT_CLI_RUNNER_HPP_
