// Copyright 2026 The ProxyForge Authors.
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

// Writes the synthetic fixture corpus used by the tests and the README walkthrough.

#include <iostream>

#include <CLI11.hpp>

#include "fixture.hpp"

int main(int argc, char** argv) {
  CLI::App app{"make_fixture: synthetic corpus for proxyforge"};
  std::string out = "fixture";
  proxyforge::fixture::FixtureOptions opt;
  app.add_option("--out", out, "target directory");
  app.add_option("--images", opt.images);
  app.add_option("--quota", opt.quota, "per-task quota written into fixture.toml");
  CLI11_PARSE(app, argc, argv);
  const auto paths = proxyforge::fixture::write_fixture(out, opt);
  std::cout << paths.config.string() << "\n";
  return 0;
}
