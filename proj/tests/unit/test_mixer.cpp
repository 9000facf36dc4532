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

#include <doctest.h>

#include <fstream>
#include <numeric>
#include <set>

#include "fixture.hpp"
#include "proxyforge/error.hpp"
#include "proxyforge/mixer/mixer.hpp"
#include "proxyforge/raster/rng.hpp"

using namespace proxyforge;
using namespace proxyforge::mixer;

namespace {

using Counts = std::vector<std::uint64_t>;

// Hamilton apportionment by exact rational comparison on small inputs.
Counts hamilton(std::uint64_t total, const Counts& w) {
  const std::uint64_t sum = std::accumulate(w.begin(), w.end(), std::uint64_t{0});
  Counts seats(w.size());
  std::uint64_t given = 0;
  for (std::size_t i = 0; i < w.size(); ++i) given += seats[i] = total * w[i] / sum;
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  // remainder_i = total * w_i mod sum; larger first, lower index on ties.
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return total * w[a] % sum > total * w[b] % sum; });
  for (std::size_t k = 0; given < total; ++k, ++given) ++seats[order[k]];
  return seats;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("largest remainder against the rational oracle") {
  raster::Rng64 rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    Counts w;
    const auto n = 1 + rng.below(5);
    for (std::uint64_t i = 0; i < n; ++i) w.push_back(rng.below(10));
    if (std::accumulate(w.begin(), w.end(), std::uint64_t{0}) == 0) w[0] = 1;
    const auto total = rng.below(200);
    REQUIRE(largest_remainder(total, w) == hamilton(total, w));
  }
  CHECK(largest_remainder(1, Counts{1, 1}) == Counts{1, 0});
}

TEST_CASE("batch counts at 2:1 of 60 and a small odd one") {
  const Counts w{2, 1};
  for (std::uint64_t b = 0; b < 50; ++b) CHECK(batch_counts(b, 60, w) == Counts{40, 20});
  const Counts w52{5, 2};
  for (std::uint64_t b = 0; b < 20; ++b) CHECK(batch_counts(b, 7, w52) == Counts{5, 2});
}

TEST_CASE("uneven batches still hit the ratio over each period") {
  const Counts w{2, 1};
  Counts total{0, 0};
  for (std::uint64_t b = 0; b < 30; ++b) {
    const auto c = batch_counts(b, 10, w);
    CHECK(c[0] + c[1] == 10);
    CHECK((c[0] == 6 || c[0] == 7));
    total[0] += c[0];
    total[1] += c[1];
    if (b % 3 == 2) CHECK(total[0] == 2 * total[1]);
  }
}

TEST_CASE("planner: every item once per epoch, boundaries recorded") {
  BatchPlanner planner({{"sgt", 7, 2}, {"vqa", 5, 1}}, 6, 42);
  std::vector<std::multiset<std::uint64_t>> per_epoch(2);
  for (int b = 0; b < 7; ++b) {
    const auto plan = planner.next();
    CHECK(plan.counts == Counts{4, 2});
    for (const auto& e : plan.entries)
      if (e.stream == 0 && e.epoch < 2) per_epoch[e.epoch].insert(e.item);
    // stream-major
    for (std::size_t k = 1; k < plan.entries.size(); ++k)
      CHECK(plan.entries[k - 1].stream <= plan.entries[k].stream);
  }
  for (const auto& s : per_epoch) {
    CHECK(s.size() == 7);
    CHECK(std::set<std::uint64_t>(s.begin(), s.end()).size() == 7);
  }
  bool saw = false;
  for (const auto& bnd : planner.boundaries())
    if (bnd.stream == 0 && bnd.epoch == 1) {
      saw = true;
      CHECK(bnd.batch_index == 1);  // 4 drawn in batch 0, 3 more then wrap
      CHECK(bnd.pos == 3);
    }
  CHECK(saw);
}

TEST_CASE("planner rejects empty streams and zero batches") {
  CHECK_THROWS_AS(BatchPlanner({{"sgt", 0, 2}, {"vqa", 5, 1}}, 6, 1), Error);
  CHECK_THROWS_AS(BatchPlanner({{"sgt", 3, 2}}, 0, 1), Error);
}

TEST_CASE("planning is deterministic in the seed") {
  CHECK(plan_batches(100, 50, 2, 1, 60, 7, 5) == plan_batches(100, 50, 2, 1, 60, 7, 5));
  CHECK(plan_batches(100, 50, 2, 1, 60, 7, 5) != plan_batches(100, 50, 2, 1, 60, 8, 5));
}

TEST_CASE("batches to cover") {
  const Counts w{2, 1};
  CHECK(batches_to_cover(w, 60, 0, 40) == 1);
  CHECK(batches_to_cover(w, 60, 0, 41) == 2);
  CHECK(batches_to_cover(w, 60, 0, 1220) == 31);
  CHECK(batches_to_cover(w, 60, 1, 20) == 1);
}

TEST_CASE("scaling slices are nested prefixes") {
  const Counts sizes{10, 100, 1000};
  const auto s = slice_scaling(1000, sizes, 3);
  REQUIRE(s.size() == 3);
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    CHECK(std::equal(s[i].begin(), s[i].end(), s[i + 1].begin()));
  CHECK(std::set<std::uint64_t>(s[2].begin(), s[2].end()).size() == 1000);
  const Counts too_big{1001};
  CHECK_THROWS_AS(slice_scaling(1000, too_big, 3), Error);
}

TEST_CASE("manifest bytes are stable") {
  using proxytasks::TaskKind;
  std::vector<proxytasks::TrainingSample> sgt;
  for (int i = 0; i < 8; ++i) {
    const std::string id = "edge:" + std::to_string(i);
    sgt.push_back({id, TaskKind::kEdge, "Detect the edges.", std::nullopt, "edge/targets/" + std::to_string(i) + ".png",
                   static_cast<std::uint64_t>(i), proxytasks::EdgeParams{}});
  }
  std::vector<VqaRef> vqa{{"q0", "vqa/0.json", "General"}, {"q1", "vqa/1.json", "Language"}};
  const auto plans = plan_batches(sgt.size(), vqa.size(), 2, 1, 6, 42, 2);
  const auto rows = rows_from_plan(plans, sgt, vqa);
  REQUIRE(rows.size() == 12);
  const ManifestHeader header{42, {2, 1}, 6, {{"edge", 8}}};
  const auto dir = fixture::scratch_dir("golden");
  write_manifest(dir / "m.jsonl", header, rows);
  const std::string text = read_file(dir / "m.jsonl");
  write_manifest(dir / "m2.jsonl", header, rows);
  CHECK(read_file(dir / "m2.jsonl") == text);

  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  CHECK(line == R"({"schema_version":1,"global_seed":42,"ratio":[2,1],"batch_size":6,"task_quotas":{"edge":8}})");
  int sgt_rows = 0, vqa_rows = 0;
  while (std::getline(lines, line)) {
    if (line.find(R"("stream":"sgt")") != std::string::npos) ++sgt_rows;
    if (line.find(R"("task":"vqa")") != std::string::npos) ++vqa_rows;
  }
  CHECK(sgt_rows == 8);
  CHECK(vqa_rows == 4);
  CHECK(render_row(rows[0]).find(R"("batch":0,"pos":0)") != std::string::npos);
}

TEST_CASE("manifest writer checks referenced files") {
  const auto dir = fixture::scratch_dir("missing");
  proxytasks::TrainingSample s{"edge:1", proxytasks::TaskKind::kEdge, "x", std::nullopt, "edge/targets/1.png", 1,
                               proxytasks::EdgeParams{}};
  const std::vector<ManifestRow> rows{{s, "", 0, 0}};
  try {
    write_manifest(dir / "m.jsonl", ManifestHeader{}, rows, dir);
    FAIL("expected MissingFile");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingFile);
  }
  CHECK_FALSE(std::filesystem::exists(dir / "m.jsonl"));
}

TEST_CASE("data card layout and short counts") {
  CHECK(short_count(999) == "999");
  CHECK(short_count(190000) == "190k");
  CHECK(short_count(1220) == "1.2k");
  const std::vector<std::pair<std::string, std::uint64_t>> quotas{{"edge", 20000}, {"isr", 20000}};
  const auto card = planned_data_card(quotas, {{"General", 180000}, {"Language", 72000}});
  REQUIRE(card.sources.size() == 6);
  CHECK(card.sources[0] == std::pair<std::string, std::uint64_t>{"SGT", 40000});
  const std::string text = render_data_card(card);
  CHECK(text.rfind("Data Source | SGT", 0) == 0);
  CHECK(text.find("| 40k") != std::string::npos);
  CHECK(text.find("180k") != std::string::npos);
  CHECK_THROWS_AS(planned_data_card(quotas, {{"Sports", 3}}), Error);
  CHECK(empty_data_card().sources.size() == 6);
}

TEST_CASE("a zero share gives single-stream batches") {
  const Counts w{1, 0};
  for (std::uint64_t b = 0; b < 10; ++b) CHECK(batch_counts(b, 60, w) == Counts{60, 0});
  for (const auto& p : plan_batches(50, 0, 1, 0, 60, 3, 4))
    for (const auto& e : p.entries) CHECK(e.stream == 0);
}

TEST_CASE("2k and 100k sweep endpoints slice exactly") {
  const Counts sizes{2000, 100000};
  const auto s = slice_scaling(100000, sizes, 42);
  CHECK(s[0].size() == 2000);
  CHECK(s[1].size() == 100000);
  CHECK(std::equal(s[0].begin(), s[0].end(), s[1].begin()));
}

TEST_CASE("an empty plan writes a header-only manifest") {
  const auto dir = fixture::scratch_dir("empty_plan");
  write_manifest(dir / "m.jsonl", ManifestHeader{1, {2, 1}, 60, {}}, {});
  const std::string text = read_file(dir / "m.jsonl");
  CHECK(std::count(text.begin(), text.end(), '\n') == 1);
  CHECK(text.find(R"("schema_version":1)") != std::string::npos);
}
