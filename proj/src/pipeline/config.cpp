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

#include "proxyforge/pipeline/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/format.h>
#include <toml.hpp>

#include "proxyforge/error.hpp"
#include "proxyforge/mixer/mixer.hpp"

namespace proxyforge::pipeline {
namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  fail(ErrorCode::kInvalidConfig, "config key '" + key + "': " + why);
}

std::uint64_t as_u64(const toml::node& n, const std::string& key) {
  const auto v = n.value_exact<std::int64_t>();
  if (!v) bad(key, "expected an integer");
  if (*v < 0) bad(key, "must be >= 0");
  return static_cast<std::uint64_t>(*v);
}

int as_int(const toml::node& n, const std::string& key) {
  const auto v = n.value_exact<std::int64_t>();
  if (!v) bad(key, "expected an integer");
  if (*v < INT32_MIN || *v > INT32_MAX) bad(key, "out of range");
  return static_cast<int>(*v);
}

double as_double(const toml::node& n, const std::string& key) {
  if (auto v = n.value_exact<double>()) return *v;
  if (auto v = n.value_exact<std::int64_t>()) return static_cast<double>(*v);
  bad(key, "expected a number");
}

std::string as_string(const toml::node& n, const std::string& key) {
  const auto v = n.value_exact<std::string>();
  if (!v) bad(key, "expected a string");
  return *v;
}

template <typename T, typename F>
std::vector<T> as_array(const toml::node& n, const std::string& key, F elem) {
  const toml::array* arr = n.as_array();
  if (!arr) bad(key, "expected an array");
  std::vector<T> out;
  for (const auto& e : *arr) out.push_back(elem(e, key));
  return out;
}

const toml::table& as_table(const toml::node& n, const std::string& key) {
  const toml::table* t = n.as_table();
  if (!t) bad(key, "expected a table");
  return *t;
}

using Handler = std::function<void(const toml::node&, const std::string&)>;

void apply(const toml::table& t, const std::string& prefix, const std::map<std::string, Handler>& handlers) {
  for (const auto& [k, node] : t) {
    const std::string key(k.str());
    const std::string full = prefix.empty() ? key : prefix + "." + key;
    auto it = handlers.find(key);
    if (it == handlers.end()) bad(full, "unknown key");
    it->second(node, full);
  }
}

Handler set_u64(std::uint64_t& dst) {
  return [&dst](const toml::node& n, const std::string& k) { dst = as_u64(n, k); };
}
Handler set_int(int& dst) {
  return [&dst](const toml::node& n, const std::string& k) { dst = as_int(n, k); };
}
Handler set_double(double& dst) {
  return [&dst](const toml::node& n, const std::string& k) { dst = as_double(n, k); };
}
Handler set_string(std::string& dst) {
  return [&dst](const toml::node& n, const std::string& k) { dst = as_string(n, k); };
}

std::map<std::string, Handler> knob_handlers(TaskKind kind, proxytasks::SynthConfig& s) {
  switch (kind) {
    case TaskKind::kDetection:
      return {{"box_thickness", set_int(s.box_thickness)}};
    case TaskKind::kInpainting: {
      auto& c = s.inpaint;
      return {{"p_lines", set_double(c.p_lines)},         {"strokes_min", set_int(c.strokes_min)},
              {"strokes_max", set_int(c.strokes_max)},    {"thickness_min", set_double(c.thickness_min)},
              {"thickness_max", set_double(c.thickness_max)}, {"blocks_min", set_int(c.blocks_min)},
              {"blocks_max", set_int(c.blocks_max)},      {"block_min", set_double(c.block_min)},
              {"block_max", set_double(c.block_max)},     {"p_white", set_double(c.p_white)}};
    }
    case TaskKind::kEdge:
      return {{"low", set_double(s.edge.low)}, {"high", set_double(s.edge.high)}};
    case TaskKind::kIsr:
      return {{"factors", [&s](const toml::node& n, const std::string& k) {
                 s.isr.factors = as_array<int>(n, k, [](const toml::node& e, const std::string& kk) { return as_int(e, kk); });
               }}};
    case TaskKind::kDeblur:
      return {{"lengths", [&s](const toml::node& n, const std::string& k) {
                 s.deblur.lengths = as_array<int>(n, k, [](const toml::node& e, const std::string& kk) { return as_int(e, kk); });
               }}};
    case TaskKind::kLowLight: {
      auto& c = s.lowlight;
      return {{"scale_min", set_double(c.scale_min)}, {"scale_max", set_double(c.scale_max)},
              {"intensity_min", set_double(c.intensity_min)}, {"intensity_max", set_double(c.intensity_max)}};
    }
    case TaskKind::kDenoise: {
      auto& c = s.denoise;
      return {{"p_apply", set_double(c.p_apply)},     {"sigma_min", set_double(c.sigma_min)},
              {"sigma_max", set_double(c.sigma_max)}, {"quality_min", set_int(c.quality_min)},
              {"quality_max", set_int(c.quality_max)}, {"amount_min", set_double(c.amount_min)},
              {"amount_max", set_double(c.amount_max)}};
    }
    default:
      return {};
  }
}

std::string fmt_double(double v) {
  std::string s = fmt::format("{}", v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quoted(const std::string& s) {
  std::ostringstream os;
  os << toml::value<std::string>(s);
  return os.str();
}

std::string key_text(const std::string& k) {
  const bool bare = !k.empty() && std::all_of(k.begin(), k.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-';
  });
  return bare ? k : quoted(k);
}

template <typename T>
std::string int_list(const std::vector<T>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "]";
}

void check(bool ok, const std::string& key, const std::string& why) {
  if (!ok) bad(key, why);
}

void check_prob(double p, const std::string& key) { check(p >= 0.0 && p <= 1.0, key, "must lie in [0, 1]"); }

}  // namespace

std::uint64_t PipelineConfig::quota(TaskKind kind) const noexcept {
  for (const auto& t : tasks)
    if (t.kind == kind) return t.quota;
  return 0;
}

void PipelineConfig::set_quota(TaskKind kind, std::uint64_t q) {
  for (auto& t : tasks)
    if (t.kind == kind) return void(t.quota = q);
  tasks.push_back({kind, q});
}

std::filesystem::path PipelineConfig::resolve(const std::string& p) const {
  if (p.empty()) return {};
  const std::filesystem::path path(p);
  return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
}

bool PipelineConfig::same_settings(const PipelineConfig& o) const {
  return global_seed == o.global_seed && workers == o.workers && tasks == o.tasks && ratio == o.ratio &&
         batch_size == o.batch_size && error_rate_cap == o.error_rate_cap && depth_threshold == o.depth_threshold &&
         overlap_min == o.overlap_min && mix_batches == o.mix_batches && scaling_sizes == o.scaling_sizes &&
         vqa_counts == o.vqa_counts && io == o.io && synth == o.synth;
}

PipelineConfig default_config() {
  PipelineConfig cfg;
  for (TaskKind t : proxytasks::all_tasks()) cfg.tasks.push_back({t, kDefaultQuota});
  cfg.scaling_sizes = {2000, 100000};
  return cfg;
}

PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    fail(ErrorCode::kInvalidConfig, std::string("config is not valid TOML: ") + std::string(e.description()) +
                                        " at line " + std::to_string(e.source().begin.line));
  }
  PipelineConfig cfg = default_config();
  cfg.base_dir = base_dir;

  std::map<std::string, Handler> top = {
      {"global_seed", set_u64(cfg.global_seed)},
      {"workers", [&](const toml::node& n, const std::string& k) {
         const int w = as_int(n, k);
         check(w >= 1, k, "must be >= 1");
         cfg.workers = static_cast<unsigned>(w);
       }},
      {"ratio", [&](const toml::node& n, const std::string& k) {
         cfg.ratio = as_array<std::uint64_t>(n, k, [](const toml::node& e, const std::string& kk) { return as_u64(e, kk); });
       }},
      {"batch_size", set_u64(cfg.batch_size)},
      {"error_rate_cap", set_double(cfg.error_rate_cap)},
      {"io", [&](const toml::node& n, const std::string& k) {
         apply(as_table(n, k), k,
               {{"images", set_string(cfg.io.images)},
                {"annotations", set_string(cfg.io.annotations)},
                {"depth_primary", set_string(cfg.io.depth_primary)},
                {"depth_secondary", set_string(cfg.io.depth_secondary)},
                {"restoration_pairs", set_string(cfg.io.restoration_pairs)},
                {"vqa", set_string(cfg.io.vqa)},
                {"out", set_string(cfg.io.out)}});
       }},
      {"depth", [&](const toml::node& n, const std::string& k) {
         apply(as_table(n, k), k,
               {{"threshold", set_double(cfg.depth_threshold)}, {"overlap_min", set_double(cfg.overlap_min)}});
       }},
      {"mix", [&](const toml::node& n, const std::string& k) {
         apply(as_table(n, k), k,
               {{"batches", set_u64(cfg.mix_batches)},
                {"scaling_sizes", [&](const toml::node& nn, const std::string& kk) {
                   cfg.scaling_sizes = as_array<std::uint64_t>(
                       nn, kk, [](const toml::node& e, const std::string& k3) { return as_u64(e, k3); });
                 }}});
       }},
      {"vqa_counts", [&](const toml::node& n, const std::string& k) {
         cfg.vqa_counts.clear();
         for (const auto& [name, v] : as_table(n, k)) {
           const std::string source(name.str());
           if (std::find(mixer::kVqaSources.begin(), mixer::kVqaSources.end(), source) == mixer::kVqaSources.end()) {
             bad(k + "." + source, "unknown VQA source");
           }
           cfg.vqa_counts[source] = as_u64(v, k + "." + source);
         }
       }},
      {"tasks", [&](const toml::node& n, const std::string& k) {
         for (const auto& [name, sub] : as_table(n, k)) {
           const std::string tname(name.str());
           const auto kind = proxytasks::task_from_name(tname);
           if (!kind) bad(k + "." + tname, "unknown task");
           auto handlers = knob_handlers(*kind, cfg.synth);
           handlers["quota"] = [&cfg, kind](const toml::node& q, const std::string& kk) { cfg.set_quota(*kind, as_u64(q, kk)); };
           apply(as_table(sub, k + "." + tname), k + "." + tname, handlers);
         }
       }},
  };
  apply(root, "", top);
  validate_config(cfg);
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) fail(ErrorCode::kMissingFile, "no such config: " + path.string());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  if (!in) fail(ErrorCode::kIoFailure, "cannot read " + path.string());
  return parse_config(ss.str(), path.parent_path());
}

void validate_config(const PipelineConfig& cfg) {
  check(cfg.workers >= 1, "workers", "must be >= 1");
  check(cfg.ratio.size() == 2, "ratio", "expected [sgt, vqa]");
  check(cfg.ratio[0] + cfg.ratio[1] > 0, "ratio", "needs a positive share");
  check(cfg.batch_size >= 1, "batch_size", "must be >= 1");
  check(cfg.error_rate_cap >= 0.0 && cfg.error_rate_cap <= 1.0, "error_rate_cap", "must lie in [0, 1]");
  check(cfg.depth_threshold >= 0.0, "depth.threshold", "must be >= 0");
  check(cfg.overlap_min >= 0.0 && cfg.overlap_min <= 1.0, "depth.overlap_min", "must lie in [0, 1]");
  check(cfg.global_seed <= static_cast<std::uint64_t>(INT64_MAX), "global_seed", "must fit a TOML integer");

  const auto& s = cfg.synth;
  const auto& ip = s.inpaint;
  check_prob(ip.p_lines, "tasks.inpainting.p_lines");
  check_prob(ip.p_white, "tasks.inpainting.p_white");
  check(ip.strokes_min >= 1 && ip.strokes_min <= ip.strokes_max, "tasks.inpainting.strokes_min", "need 1 <= min <= max");
  check(ip.blocks_min >= 1 && ip.blocks_min <= ip.blocks_max, "tasks.inpainting.blocks_min", "need 1 <= min <= max");
  check(ip.thickness_min > 0 && ip.thickness_min <= ip.thickness_max, "tasks.inpainting.thickness_min", "need 0 < min <= max");
  check(ip.block_min > 0 && ip.block_min <= ip.block_max && ip.block_max <= 1, "tasks.inpainting.block_min",
        "need 0 < min <= max <= 1");
  check(!s.isr.factors.empty(), "tasks.isr.factors", "must not be empty");
  for (int f : s.isr.factors) check(f >= 1, "tasks.isr.factors", "factors must be >= 1");
  check(!s.deblur.lengths.empty(), "tasks.deblur.lengths", "must not be empty");
  for (int l : s.deblur.lengths) check(l >= 1, "tasks.deblur.lengths", "lengths must be >= 1");
  check(s.lowlight.scale_min >= 0 && s.lowlight.scale_min <= s.lowlight.scale_max, "tasks.lowlight.scale_min",
        "need 0 <= min <= max");
  check(s.lowlight.intensity_min >= 0 && s.lowlight.intensity_min <= s.lowlight.intensity_max,
        "tasks.lowlight.intensity_min", "need 0 <= min <= max");
  const auto& dn = s.denoise;
  check(dn.p_apply > 0 && dn.p_apply <= 1, "tasks.denoise.p_apply", "must lie in (0, 1]");
  check(dn.sigma_min >= 0 && dn.sigma_min <= dn.sigma_max, "tasks.denoise.sigma_min", "need 0 <= min <= max");
  check(dn.quality_min >= 1 && dn.quality_min <= dn.quality_max && dn.quality_max <= 100, "tasks.denoise.quality_min",
        "need 1 <= min <= max <= 100");
  check(dn.amount_min >= 0 && dn.amount_min <= dn.amount_max && dn.amount_max <= 1, "tasks.denoise.amount_min",
        "need 0 <= min <= max <= 1");
  check(s.edge.low >= 0 && s.edge.low < s.edge.high, "tasks.edge.low", "need 0 <= low < high");
  check(s.box_thickness >= 1, "tasks.detection.box_thickness", "must be >= 1");
}

std::string config_to_toml(const PipelineConfig& cfg) {
  std::string out;
  auto line = [&](const std::string& k, const std::string& v) { out += key_text(k) + " = " + v + "\n"; };
  line("global_seed", std::to_string(cfg.global_seed));
  line("workers", std::to_string(cfg.workers));
  line("ratio", int_list(cfg.ratio));
  line("batch_size", std::to_string(cfg.batch_size));
  line("error_rate_cap", fmt_double(cfg.error_rate_cap));

  out += "\n[io]\n";
  line("images", quoted(cfg.io.images));
  line("annotations", quoted(cfg.io.annotations));
  line("depth_primary", quoted(cfg.io.depth_primary));
  line("depth_secondary", quoted(cfg.io.depth_secondary));
  line("restoration_pairs", quoted(cfg.io.restoration_pairs));
  line("vqa", quoted(cfg.io.vqa));
  line("out", quoted(cfg.io.out));

  out += "\n[depth]\n";
  line("threshold", fmt_double(cfg.depth_threshold));
  line("overlap_min", fmt_double(cfg.overlap_min));

  out += "\n[mix]\n";
  line("batches", std::to_string(cfg.mix_batches));
  line("scaling_sizes", int_list(cfg.scaling_sizes));

  out += "\n[vqa_counts]\n";
  for (const auto& [k, v] : cfg.vqa_counts) line(k, std::to_string(v));

  const auto& s = cfg.synth;
  for (const auto& t : cfg.tasks) {
    out += "\n[tasks." + std::string(proxytasks::task_name(t.kind)) + "]\n";
    line("quota", std::to_string(t.quota));
    switch (t.kind) {
      case TaskKind::kDetection: line("box_thickness", std::to_string(s.box_thickness)); break;
      case TaskKind::kInpainting: {
        const auto& c = s.inpaint;
        line("p_lines", fmt_double(c.p_lines));
        line("strokes_min", std::to_string(c.strokes_min));
        line("strokes_max", std::to_string(c.strokes_max));
        line("thickness_min", fmt_double(c.thickness_min));
        line("thickness_max", fmt_double(c.thickness_max));
        line("blocks_min", std::to_string(c.blocks_min));
        line("blocks_max", std::to_string(c.blocks_max));
        line("block_min", fmt_double(c.block_min));
        line("block_max", fmt_double(c.block_max));
        line("p_white", fmt_double(c.p_white));
        break;
      }
      case TaskKind::kEdge:
        line("low", fmt_double(s.edge.low));
        line("high", fmt_double(s.edge.high));
        break;
      case TaskKind::kIsr: line("factors", int_list(s.isr.factors)); break;
      case TaskKind::kDeblur: line("lengths", int_list(s.deblur.lengths)); break;
      case TaskKind::kLowLight:
        line("scale_min", fmt_double(s.lowlight.scale_min));
        line("scale_max", fmt_double(s.lowlight.scale_max));
        line("intensity_min", fmt_double(s.lowlight.intensity_min));
        line("intensity_max", fmt_double(s.lowlight.intensity_max));
        break;
      case TaskKind::kDenoise: {
        const auto& c = s.denoise;
        line("p_apply", fmt_double(c.p_apply));
        line("sigma_min", fmt_double(c.sigma_min));
        line("sigma_max", fmt_double(c.sigma_max));
        line("quality_min", std::to_string(c.quality_min));
        line("quality_max", std::to_string(c.quality_max));
        line("amount_min", fmt_double(c.amount_min));
        line("amount_max", fmt_double(c.amount_max));
        break;
      }
      default: break;
    }
  }
  return out;
}

}  // namespace proxyforge::pipeline
