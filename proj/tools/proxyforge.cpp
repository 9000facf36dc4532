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

// proxyforge command line: forge, filter-depth, mix, stats, analyze.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "proxyforge/analysis/attention.hpp"
#include "proxyforge/analysis/pca.hpp"
#include "proxyforge/analysis/plots.hpp"
#include "proxyforge/analysis/tsne.hpp"
#include "proxyforge/error.hpp"
#include "proxyforge/pipeline/config.hpp"
#include "proxyforge/pipeline/forge.hpp"

namespace fs = std::filesystem;
using namespace proxyforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::vector<std::string> tasks;
  std::optional<std::uint64_t> quota;
  std::string ratio;
  std::string out;
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("proxyforge");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
  const char* env = std::getenv("PROXYFORGE_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::info);
}

pipeline::PipelineConfig build_config(const GlobalOptions& g) {
  pipeline::PipelineConfig cfg;
  if (g.config.empty()) {
    cfg = pipeline::default_config();
    cfg.base_dir = fs::current_path();
  } else {
    cfg = pipeline::load_config(g.config);
  }
  if (g.seed) cfg.global_seed = *g.seed;
  if (g.workers) cfg.workers = *g.workers;
  if (!g.out.empty()) cfg.io.out = fs::absolute(g.out).string();
  if (!g.tasks.empty()) {
    std::vector<proxytasks::TaskKind> keep;
    for (const auto& name : g.tasks) {
      const auto kind = proxytasks::task_from_name(name);
      if (!kind) fail(ErrorCode::kInvalidConfig, "unknown task '" + name + "'");
      keep.push_back(*kind);
    }
    for (auto& t : cfg.tasks)
      if (std::find(keep.begin(), keep.end(), t.kind) == keep.end()) t.quota = 0;
  }
  if (g.quota) {
    for (auto& t : cfg.tasks)
      if (g.tasks.empty() || t.quota > 0) t.quota = *g.quota;
  }
  if (!g.ratio.empty()) {
    const auto colon = g.ratio.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument("no colon");
      cfg.ratio = {std::stoull(g.ratio.substr(0, colon)), std::stoull(g.ratio.substr(colon + 1))};
    } catch (const std::exception&) {
      fail(ErrorCode::kInvalidConfig, "--ratio expects p:q, got '" + g.ratio + "'");
    }
  }
  pipeline::validate_config(cfg);
  return cfg;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) fail(ErrorCode::kIoFailure, "cannot write " + p.string());
}

std::vector<std::string> read_labels(const std::string& path) {
  std::vector<std::string> labels;
  if (path.empty()) return labels;
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kMissingFile, "cannot read labels " + path);
  for (std::string line; std::getline(in, line);) labels.push_back(line);
  return labels;
}

// "3,5,8-11" -> {3, 5, 8, 9, 10, 11}
std::vector<std::size_t> parse_index_list(const std::string& spec) {
  std::vector<std::size_t> out;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ',');) {
    if (part.empty()) continue;
    try {
      const auto dash = part.find('-');
      if (dash == std::string::npos) {
        out.push_back(std::stoull(part));
      } else {
        const auto a = std::stoull(part.substr(0, dash));
        const auto b = std::stoull(part.substr(dash + 1));
        for (auto i = a; i <= b; ++i) out.push_back(i);
      }
    } catch (const std::exception&) {
      fail(ErrorCode::kInvalidConfig, "bad index list '" + spec + "'");
    }
  }
  return out;
}

analysis::Tensor layer_slice(const analysis::Tensor& t, std::size_t l) {
  const std::size_t stride = t.data.size() / t.dims[0];
  analysis::Tensor out;
  out.dims.assign(t.dims.begin() + 1, t.dims.end());
  out.data.assign(t.data.begin() + l * stride, t.data.begin() + (l + 1) * stride);
  return out;
}

// Q/K dumps are [q_len, heads, d] or [layers, q_len, heads, d]; layered dumps
// need an explicit layer selection.
analysis::Tensor timestep_attention(const fs::path& qp, const fs::path& kp, const std::vector<std::size_t>& layers) {
  const auto q = analysis::read_tensor_dump(qp);
  const auto k = analysis::read_tensor_dump(kp);
  if (q.rank() == 3 && k.rank() == 3) return analysis::attention_from_qk(q, k);
  if (q.rank() != 4 || k.rank() != 4 || q.dims[0] != k.dims[0]) {
    fail(ErrorCode::kMalformedTensor, "Q/K dumps must both be rank 3, or rank 4 with equal layer counts");
  }
  if (layers.empty()) fail(ErrorCode::kInvalidConfig, "layered dumps need --layers");
  std::vector<analysis::Tensor> per_layer;
  for (std::size_t l : layers) {
    if (l >= q.dims[0]) fail(ErrorCode::kInvalidConfig, "layer " + std::to_string(l) + " out of range");
    per_layer.push_back(analysis::attention_from_qk(layer_slice(q, l), layer_slice(k, l)));
  }
  analysis::Tensor stacked;
  stacked.dims = per_layer.front().dims;
  stacked.dims.insert(stacked.dims.begin(), per_layer.size());
  for (const auto& a : per_layer) stacked.data.insert(stacked.data.end(), a.data.begin(), a.data.end());
  std::vector<std::size_t> all(per_layer.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return analysis::select_layers_mean(stacked, all);
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"proxyforge: deterministic proxy-task dataset forging and analysis"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config, "TOML config file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "global seed override");
  app.add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--tasks", g.tasks, "restrict to these tasks")->delimiter(',');
  app.add_option("--quota", g.quota, "per-task quota override");
  app.add_option("--ratio", g.ratio, "SGT:VQA ratio, e.g. 2:1");
  app.add_option("--out", g.out, "output directory override");

  auto* forge = app.add_subcommand("forge", "synthesize every task at its quota");
  std::string replay_id;
  forge->add_option("--replay", replay_id, "regenerate one sample and compare with the forged files");

  auto* filter = app.add_subcommand("filter-depth", "run the dual-estimate depth consistency filter");
  auto* mix = app.add_subcommand("mix", "compose SGT and VQA streams into batches");

  auto* stats = app.add_subcommand("stats", "data card for the output directory");
  bool planned = false;
  bool csv = false;
  stats->add_flag("--planned", planned, "count from the config instead of files");
  stats->add_flag("--csv", csv, "CSV instead of the table");

  auto* analyze = app.add_subcommand("analyze", "offline analysis of dumped tensors");
  analyze->require_subcommand(1);
  std::string in_path, out_dir = "analysis_out", labels_path, categories;
  std::size_t pca_k = analysis::kDefaultPcaDims;
  double perplexity = 30.0;
  std::vector<std::string> q_paths, k_paths;
  std::string latent = "0", layers;

  auto* pca = analyze->add_subcommand("pca", "PCA projection of an [N, ...] dump");
  pca->add_option("--input", in_path)->required()->check(CLI::ExistingFile);
  pca->add_option("--k", pca_k, "target dimension");
  pca->add_option("--out", out_dir);

  auto* tsne = analyze->add_subcommand("tsne", "PCA then exact t-SNE to 2D");
  tsne->add_option("--input", in_path)->required()->check(CLI::ExistingFile);
  tsne->add_option("--pca", pca_k, "PCA dimension before t-SNE (0 = none)");
  tsne->add_option("--perplexity", perplexity);
  tsne->add_option("--labels", labels_path, "one label per row")->check(CLI::ExistingFile);
  tsne->add_option("--out", out_dir);

  auto* attn = analyze->add_subcommand("attn", "keyword attention shares from Q/K dumps");
  attn->add_option("--q", q_paths, "Q dump per timestep")->required();
  attn->add_option("--k", k_paths, "K dump per timestep")->required();
  attn->add_option("--categories", categories, "token category map JSON")->required()->check(CLI::ExistingFile);
  attn->add_option("--latent", latent, "latent query rows, e.g. 0-15");
  attn->add_option("--layers", layers, "layers to average for layered dumps");
  attn->add_option("--out", out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (analyze->parsed()) {
      const std::uint64_t seed = g.seed.value_or(0);
      fs::create_directories(out_dir);
      if (pca->parsed()) {
        const auto x = analysis::matrix_from_tensor(analysis::read_tensor_dump(in_path));
        const auto r = analysis::pca_reduce(x, pca_k);
        analysis::write_tensor_dump(fs::path(out_dir) / "projected.sgtd", analysis::tensor_from_matrix(r.projected));
        write_file(fs::path(out_dir) / "projected.csv", analysis::matrix_csv(r.projected));
        write_file(fs::path(out_dir) / "components.csv", analysis::matrix_csv(r.components));
        analysis::Matrix ev(r.eigenvalues.size(), 1);
        ev.data = r.eigenvalues;
        write_file(fs::path(out_dir) / "eigenvalues.csv", analysis::matrix_csv(ev));
        spdlog::info("pca: {}x{} -> {} components", x.rows, x.cols, pca_k);
      } else if (tsne->parsed()) {
        auto x = analysis::matrix_from_tensor(analysis::read_tensor_dump(in_path));
        if (pca_k > 0 && pca_k < x.cols) x = analysis::pca_reduce(x, std::min(pca_k, x.rows - 1)).projected;
        analysis::TsneConfig tc;
        tc.perplexity = perplexity;
        const auto run = analysis::tsne_embed(x, seed, tc);
        const auto labels = read_labels(labels_path);
        write_file(fs::path(out_dir) / "points.csv", analysis::points_csv(run.points, labels));
        write_file(fs::path(out_dir) / "embedding.svg", analysis::scatter_svg(run.points, labels));
        write_file(fs::path(out_dir) / "kl_trace.csv", analysis::kl_trace_csv(run.kl_trace));
        nlohmann::ordered_json meta{{"perplexity", tc.perplexity},       {"iterations", tc.iterations},
                                    {"learning_rate", tc.learning_rate}, {"momentum", tc.momentum},
                                    {"final_momentum", tc.final_momentum}, {"momentum_switch_iter", tc.momentum_switch_iter},
                                    {"exaggeration", tc.exaggeration},   {"exaggeration_iters", tc.exaggeration_iters},
                                    {"seed", seed},                      {"initial_kl", run.kl_trace.front()},
                                    {"final_kl", run.kl_trace.back()}};
        write_file(fs::path(out_dir) / "run.json", meta.dump(2) + "\n");
        spdlog::info("tsne: {} points, KL {:.4f} -> {:.4f}", x.rows, run.kl_trace.front(), run.kl_trace.back());
      } else {
        if (q_paths.size() != k_paths.size()) fail(ErrorCode::kInvalidConfig, "need one --k per --q");
        const auto layer_list = parse_index_list(layers);
        std::vector<analysis::Tensor> steps;
        for (std::size_t i = 0; i < q_paths.size(); ++i) steps.push_back(timestep_attention(q_paths[i], k_paths[i], layer_list));
        const auto map = analysis::load_category_map(categories);
        const auto shares = analysis::keyword_attention(steps, parse_index_list(latent), map);
        const std::string report = analysis::format_keyword_report(shares, map);
        write_file(fs::path(out_dir) / "report.txt", report);
        std::string rows = "category,percent\n";
        for (std::size_t c = 0; c < analysis::kTokenCategories.size(); ++c)
          rows += std::string(analysis::category_name(analysis::kTokenCategories[c])) + "," +
                  std::to_string(shares.percent[c]) + "\n";
        write_file(fs::path(out_dir) / "shares.csv", rows);
        std::cout << report;
      }
      return kExitOk;
    }

    const auto cfg = build_config(g);
    if (forge->parsed()) {
      if (!replay_id.empty()) {
        const auto r = pipeline::replay_sample(cfg, replay_id);
        std::cout << r.sample_id << ": params " << (r.from_params ? "match" : "MISMATCH") << ", seed "
                  << (r.from_seed ? "match" : "MISMATCH") << "\n"
                  << r.detail;
        return r.ok() ? kExitOk : kExitValidation;
      }
      const auto r = pipeline::forge(cfg);
      std::size_t total = 0;
      for (const auto& t : r.tasks) total += t.samples.size();
      std::cout << "forged " << total << " samples across " << r.tasks.size() << " tasks; " << r.errors.size()
                << " errors; " << r.depth_replacements << " depth replacements\n";
      if (r.failed) return r.io_failure ? kExitIo : kExitValidation;
    } else if (filter->parsed()) {
      const auto r = pipeline::filter_depth(cfg);
      std::cout << "kept " << r.kept << ", rejected " << r.rejected << ", replacements " << r.replacements << "\n";
    } else if (mix->parsed()) {
      const auto r = pipeline::mix(cfg);
      std::cout << r.batches << " batches (" << r.sgt_rows << " sgt, " << r.vqa_rows << " vqa) -> "
                << r.manifest.string() << "\n";
    } else if (stats->parsed()) {
      const auto card = pipeline::stats(cfg, planned);
      std::cout << (csv ? mixer::data_card_csv(card) : mixer::render_data_card(card));
    }
    return kExitOk;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return is_io_error(e.code()) ? kExitIo : kExitValidation;
  } catch (const fs::filesystem_error& e) {
    spdlog::error("IoFailure: {}", e.what());
    return kExitIo;
  }
}
