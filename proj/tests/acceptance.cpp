// Copyright 2026 The ctcsim Authors
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

// Reproduction checklist: one line per criterion, nonzero exit if any fails.

#include <iostream>
#include <sstream>

#include "ctc/acceptance.hpp"
#include "ctc/cli.hpp"

int main() {
  std::ostringstream sink;
  const ctc::acceptance::CliRunner cli = [&sink](const std::vector<std::string>& args) {
    return ctc::cli::run(args, sink, sink);
  };
  const auto checks = ctc::acceptance::checklist(cli);
  int failed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto o = ctc::acceptance::run_one(checks[i], static_cast<int>(i) + 1);
    if (!o.passed) ++failed;
    std::cout << ctc::acceptance::format(o) << std::endl;
  }
  std::cout << (checks.size() - failed) << "/" << checks.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
