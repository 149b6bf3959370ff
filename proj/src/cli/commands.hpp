// Copyright 2026 The dressim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "dressim/cli.hpp"

namespace dressim::cli::detail {

struct CsvTable {
  std::string file;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct CommandOutput {
  std::vector<CsvTable> tables;
  bool converged = true;
  std::vector<std::string> warnings;
};

struct RunOptions {
  unsigned threads = 1;
};

using CommandFn = CommandOutput (*)(const Config&, const RunOptions&);

struct Command {
  CommandFn fn;
  std::string description;
};

/** Subcommands by name. */
const std::map<std::string, Command>& commands();

/** 12 significant digits, '.' radix. */
std::string num(double v);

}  // namespace dressim::cli::detail
