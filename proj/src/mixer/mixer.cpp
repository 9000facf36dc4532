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

#include "proxyforge/mixer/mixer.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <numeric>
#include <set>

#include <json.hpp>

#include "proxyforge/error.hpp"
#include "proxyforge/raster/rng.hpp"

namespace proxyforge::mixer {
namespace {

using Json = nlohmann::ordered_json;
using u128 = unsigned __int128;

std::uint64_t weight_sum(std::span<const std::uint64_t> weights) {
  std::uint64_t w = 0;
  for (auto x : weights) w += x;
  if (w == 0) fail(ErrorCode::kDegenerateParam, "mixing ratio has no positive share");
  return w;
}

[[noreturn]] void io_fail(const std::string& what, const std::filesystem::path& p) {
  fail(ErrorCode::kIoFailure, what + " " + p.string() + ": " + std::strerror(errno));
}

void write_all(int fd, const std::string& data, const std::filesystem::path& p) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      io_fail("write failed for", p);
    }
    off += static_cast<std::size_t>(n);
  }
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) fail(ErrorCode::kMissingFile, "no such file: " + path.string());
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoFailure, "cannot read " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) lines.push_back(line);
  return lines;
}

Json parse_line(const std::string& line, const std::filesystem::path& path) {
  Json j = Json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) fail(ErrorCode::kInvalidConfig, "malformed JSON line in " + path.string());
  return j;
}

}  // namespace

std::vector<std::uint64_t> largest_remainder(std::uint64_t total, std::span<const std::uint64_t> weights) {
  const std::uint64_t w = weight_sum(weights);
  std::vector<std::uint64_t> seats(weights.size());
  std::vector<std::uint64_t> rem(weights.size());
  std::uint64_t given = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const u128 num = static_cast<u128>(total) * weights[i];
    seats[i] = static_cast<std::uint64_t>(num / w);
    rem[i] = static_cast<std::uint64_t>(num % w);
    given += seats[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t k = 0; given < total; ++k, ++given) ++seats[order[k]];
  return seats;
}

std::vector<std::uint64_t> batch_counts(std::uint64_t batch_index, std::uint64_t batch_size,
                                        std::span<const std::uint64_t> weights) {
  const auto hi = largest_remainder((batch_index + 1) * batch_size, weights);
  const auto lo = largest_remainder(batch_index * batch_size, weights);
  std::vector<std::uint64_t> out(weights.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = hi[i] - lo[i];
  return out;
}

BatchPlanner::BatchPlanner(std::vector<StreamSpec> streams, std::uint64_t batch_size, std::uint64_t seed)
    : streams_(std::move(streams)), batch_size_(batch_size), seed_(seed) {
  if (batch_size_ == 0) fail(ErrorCode::kDegenerateParam, "batch size must be >= 1");
  for (const auto& s : streams_) weights_.push_back(s.weight);
  weight_sum(weights_);
  cursors_.resize(streams_.size());
  for (std::size_t s = 0; s < streams_.size(); ++s) {
    if (streams_[s].weight > 0 && streams_[s].size == 0) {
      fail(ErrorCode::kEmptyStream, "stream '" + streams_[s].name + "' has a positive share but no samples");
    }
    if (streams_[s].weight > 0) reshuffle(s);
  }
}

void BatchPlanner::reshuffle(std::size_t s) {
  Cursor& c = cursors_[s];
  if (!c.order.empty()) ++c.epoch;
  c.order.resize(streams_[s].size);
  std::iota(c.order.begin(), c.order.end(), std::uint64_t{0});
  raster::Rng64 rng(raster::splitmix64(seed_ ^ raster::fnv1a64(streams_[s].name) ^ raster::splitmix64(c.epoch)));
  for (std::size_t i = c.order.size(); i > 1; --i) std::swap(c.order[i - 1], c.order[rng.below(i)]);
  c.pos = 0;
}

BatchPlan BatchPlanner::next() {
  BatchPlan plan;
  plan.batch_index = next_batch_++;
  plan.counts = batch_counts(plan.batch_index, batch_size_, weights_);
  plan.entries.reserve(batch_size_);
  for (std::size_t s = 0; s < streams_.size(); ++s) {
    Cursor& c = cursors_[s];
    for (std::uint64_t k = 0; k < plan.counts[s]; ++k) {
      if (c.pos == c.order.size()) {
        reshuffle(s);
        boundaries_.push_back({s, c.epoch, plan.batch_index, plan.entries.size()});
      }
      plan.entries.push_back({s, c.order[c.pos++], c.epoch});
    }
  }
  return plan;
}

std::vector<BatchPlan> plan_batches(std::uint64_t sgt_count, std::uint64_t vqa_count, std::uint64_t p,
                                    std::uint64_t q, std::uint64_t batch_size, std::uint64_t seed,
                                    std::uint64_t batch_count) {
  BatchPlanner planner({{"sgt", sgt_count, p}, {"vqa", vqa_count, q}}, batch_size, seed);
  std::vector<BatchPlan> plans;
  plans.reserve(batch_count);
  for (std::uint64_t i = 0; i < batch_count; ++i) plans.push_back(planner.next());
  return plans;
}

std::uint64_t batches_to_cover(std::span<const std::uint64_t> weights, std::uint64_t batch_size, std::size_t s,
                               std::uint64_t items) {
  const std::uint64_t w = weight_sum(weights);
  if (items == 0) return 0;
  if (weights[s] == 0) fail(ErrorCode::kDegenerateParam, "stream has no share and can never be covered");
  std::uint64_t lo = 0;
  std::uint64_t hi = (static_cast<std::uint64_t>((static_cast<u128>(items) * w) / (weights[s] * batch_size))) + 2;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (largest_remainder(mid * batch_size, weights)[s] >= items) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

std::vector<std::vector<std::uint64_t>> slice_scaling(std::uint64_t n, std::span<const std::uint64_t> sizes,
                                                      std::uint64_t seed) {
  std::vector<std::uint64_t> order(n);
  std::iota(order.begin(), order.end(), std::uint64_t{0});
  raster::Rng64 rng(raster::splitmix64(seed ^ raster::fnv1a64("scaling")));
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<std::vector<std::uint64_t>> out;
  for (auto size : sizes) {
    if (size > n) {
      fail(ErrorCode::kDegenerateParam,
           "slice of " + std::to_string(size) + " requested from " + std::to_string(n) + " samples");
    }
    out.emplace_back(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(size));
  }
  return out;
}

std::string render_header(const ManifestHeader& header) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["global_seed"] = header.global_seed;
  j["ratio"] = header.ratio;
  j["batch_size"] = header.batch_size;
  Json quotas = Json::object();
  for (const auto& [task, quota] : header.task_quotas) quotas[task] = quota;
  j["task_quotas"] = quotas;
  return j.dump();
}

std::string render_row(const ManifestRow& row) {
  Json j;
  if (const auto* s = std::get_if<proxytasks::TrainingSample>(&row.item)) {
    j = proxytasks::sample_to_json(*s);
  } else {
    const auto& v = std::get<VqaRef>(row.item);
    j["sample_id"] = v.sample_id;
    j["task"] = "vqa";
    j["source"] = v.source;
    j["input"] = v.path;
  }
  j["stream"] = row.stream;
  j["batch"] = row.batch;
  j["pos"] = row.pos;
  return j.dump();
}

std::filesystem::path write_manifest(const std::filesystem::path& path, const ManifestHeader& header,
                                     std::span<const ManifestRow> rows, const std::filesystem::path& data_root) {
  std::string text = render_header(header);
  text += '\n';
  for (const auto& row : rows) {
    if (!data_root.empty()) {
      if (const auto* s = std::get_if<proxytasks::TrainingSample>(&row.item)) {
        auto need = [&](const std::string& rel) {
          if (!std::filesystem::exists(data_root / rel)) {
            fail(ErrorCode::kMissingFile, "manifest row " + s->sample_id + " references missing " + rel);
          }
        };
        need(s->target_path);
        if (s->input_path) need(*s->input_path);
      }
    }
    text += render_row(row);
    text += '\n';
  }

  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  const std::filesystem::path tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) io_fail("cannot create", tmp);
  try {
    write_all(fd, text, tmp);
  } catch (...) {
    ::close(fd);
    throw;
  }
  if (::fsync(fd) != 0) {
    ::close(fd);
    io_fail("fsync failed for", tmp);
  }
  if (::close(fd) != 0) io_fail("close failed for", tmp);
  if (::rename(tmp.c_str(), path.c_str()) != 0) io_fail("rename failed for", path);
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const int dfd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (dfd >= 0) {
    ::fsync(dfd);
    ::close(dfd);
  }
  return path;
}

std::vector<ManifestRow> rows_from_plan(std::span<const BatchPlan> plans,
                                        std::span<const proxytasks::TrainingSample> sgt,
                                        std::span<const VqaRef> vqa) {
  std::vector<ManifestRow> rows;
  for (const auto& plan : plans) {
    for (std::size_t pos = 0; pos < plan.entries.size(); ++pos) {
      const BatchEntry& e = plan.entries[pos];
      ManifestRow row;
      row.batch = plan.batch_index;
      row.pos = pos;
      if (e.stream == 0) {
        row.item = sgt[e.item];
        row.stream = "sgt";
      } else {
        row.item = vqa[e.item];
        row.stream = "vqa";
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<proxytasks::TrainingSample> read_task_manifest(const std::filesystem::path& path) {
  std::vector<proxytasks::TrainingSample> out;
  for (const auto& line : read_lines(path)) {
    const Json j = parse_line(line, path);
    if (j.contains("schema_version")) {
      if (j["schema_version"] != kSchemaVersion) fail(ErrorCode::kInvalidConfig, "unsupported manifest schema");
      continue;
    }
    if (j.value("task", "") == "vqa") continue;
    out.push_back(proxytasks::sample_from_json(j));
  }
  return out;
}

std::vector<VqaRef> read_vqa_list(const std::filesystem::path& path) {
  std::vector<VqaRef> out;
  for (const auto& line : read_lines(path)) {
    const Json j = parse_line(line, path);
    try {
      VqaRef v{j.at("id").get<std::string>(), j.at("path").get<std::string>(), j.value("source", "General")};
      if (std::find(kVqaSources.begin(), kVqaSources.end(), v.source) == kVqaSources.end()) {
        fail(ErrorCode::kInvalidConfig, "unknown VQA source '" + v.source + "' in " + path.string());
      }
      out.push_back(std::move(v));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kInvalidConfig, "bad VQA list entry in " + path.string() + ": " + e.what());
    }
  }
  return out;
}

DataCard empty_data_card() {
  DataCard card;
  card.sources.emplace_back("SGT", 0);
  for (auto s : kVqaSources) card.sources.emplace_back(std::string(s), 0);
  return card;
}

DataCard data_card(std::span<const std::filesystem::path> manifests) {
  DataCard card = empty_data_card();
  auto bump = [&](const std::string& source) {
    for (auto& [name, n] : card.sources)
      if (name == source) return void(++n);
    fail(ErrorCode::kInvalidConfig, "unknown data source '" + source + "'");
  };
  // A mixed manifest repeats items once a stream wraps into a new epoch.
  std::set<std::string> seen;
  for (const auto& path : manifests) {
    for (const auto& line : read_lines(path)) {
      const Json j = parse_line(line, path);
      if (j.contains("schema_version")) continue;
      if (!seen.insert(j.value("sample_id", "")).second) continue;
      const std::string task = j.value("task", "");
      if (task == "vqa") {
        bump(j.value("source", "General"));
      } else {
        bump("SGT");
        ++card.per_task[task];
      }
    }
  }
  return card;
}

DataCard planned_data_card(std::span<const std::pair<std::string, std::uint64_t>> task_quotas,
                           const std::map<std::string, std::uint64_t>& vqa_counts) {
  DataCard card = empty_data_card();
  for (const auto& [task, quota] : task_quotas) {
    card.sources[0].second += quota;
    card.per_task[task] = quota;
  }
  for (const auto& [source, n] : vqa_counts) {
    auto it = std::find_if(card.sources.begin(), card.sources.end(), [&](const auto& p) { return p.first == source; });
    if (it == card.sources.end() || it == card.sources.begin()) {
      fail(ErrorCode::kInvalidConfig, "unknown VQA source '" + source + "'");
    }
    it->second = n;
  }
  return card;
}

std::string short_count(std::uint64_t n) {
  if (n < 1000) return std::to_string(n);
  if (n % 1000 == 0) return std::to_string(n / 1000) + "k";
  const std::uint64_t tenths = (n + 50) / 100;
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10) + "k";
}

std::string render_data_card(const DataCard& card) {
  std::string head = "Data Source";
  std::string nums = "Number     ";
  for (const auto& [name, n] : card.sources) {
    const std::string v = short_count(n);
    const std::size_t width = std::max(name.size(), v.size());
    head += " | " + name + std::string(width - name.size(), ' ');
    nums += " | " + v + std::string(width - v.size(), ' ');
  }
  auto rstrip = [](std::string s) { return s.erase(s.find_last_not_of(' ') + 1); };
  return rstrip(head) + "\n" + rstrip(nums) + "\n";
}

std::string data_card_csv(const DataCard& card) {
  std::string out = "source,count\n";
  for (const auto& [name, n] : card.sources) out += name + "," + std::to_string(n) + "\n";
  for (const auto& [task, n] : card.per_task) out += "task:" + task + "," + std::to_string(n) + "\n";
  return out;
}

}  // namespace proxyforge::mixer
