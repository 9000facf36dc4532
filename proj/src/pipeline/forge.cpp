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

#include "proxyforge/pipeline/forge.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "proxyforge/pipeline/parallel.hpp"
#include "proxyforge/proxytasks/synth.hpp"
#include "proxyforge/raster/image_io.hpp"

namespace proxyforge::pipeline {
namespace {

namespace fs = std::filesystem;
using proxytasks::Synthesized;
using proxytasks::TrainingSample;
using raster::ImageBuf;
using Json = nlohmann::ordered_json;

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct Job {
  TaskKind task = TaskKind::kReconstruction;
  std::size_t image = kNone;  // corpus index
  std::size_t pair = kNone;   // restoration pair index
  std::string sample_id;
};

std::string task_dir(TaskKind t) { return std::string(proxytasks::task_name(t)); }
std::string rel_input(TaskKind t, const std::string& id) { return task_dir(t) + "/inputs/" + file_stem(id) + ".png"; }
std::string rel_target(TaskKind t, const std::string& id) { return task_dir(t) + "/targets/" + file_stem(id) + ".png"; }
std::string rel_source(const std::string& id) { return "images/" + file_stem(id) + ".png"; }

const std::string& job_source_id(const Corpus& corpus, const Job& job) {
  return job.pair != kNone ? corpus.restoration[job.pair].id : corpus.images[job.image].id;
}

Synthesized run_synth(const PipelineConfig& cfg, const Corpus& corpus, const Job& job, raster::Rng64& rng,
                      const proxytasks::DegradationParams* recorded) {
  if (job.task == TaskKind::kDerainDehaze) {
    const RestorationPair& p = corpus.restoration[job.pair];
    return proxytasks::ingest_paired_restoration(p.clean, p.degraded, p.kind);
  }
  const CorpusImage& img = corpus.images[job.image];
  const ImageBuf image = raster::to_rgb(raster::read_image(img.path));
  std::optional<annotations::AnnotationSet> ann;
  if (proxytasks::needs_annotations(job.task)) {
    if (!corpus.coco) fail(ErrorCode::kInvalidConfig, "task needs annotations but io.annotations is unset");
    ann = corpus.coco->annotations_for(img.id);
  }
  std::optional<raster::FloatMap> depth;
  if (job.task == TaskKind::kDepth) {
    const fs::path p = depth_path(corpus.depth_primary, img);
    if (p.empty()) fail(ErrorCode::kMissingFile, "no primary depth map for " + img.id);
    depth = depthfilter::read_depth_map(p);
  }
  const proxytasks::SynthInputs in{&image, ann ? &*ann : nullptr, depth ? &*depth : nullptr};
  if (recorded) return proxytasks::replay_from_params(job.task, in, *recorded, cfg.synth);
  return proxytasks::synthesize(job.task, in, rng, cfg.synth);
}

TrainingSample describe(const PipelineConfig& cfg, const Corpus& corpus, const Job& job, const Synthesized& syn) {
  const std::string& id = job_source_id(corpus, job);
  TrainingSample s;
  s.sample_id = job.sample_id;
  s.task = job.task;
  s.instruction = std::string(proxytasks::instruction_for(job.task));
  s.input_path = syn.condition ? rel_input(job.task, id) : rel_source(id);
  s.target_path = rel_target(job.task, id);
  s.seed = raster::derive_seed(cfg.global_seed, job.sample_id, proxytasks::task_code(job.task));
  s.params = syn.params;
  return s;
}

std::vector<Job> plan_restoration(const PipelineConfig& cfg, const Corpus& corpus, std::uint64_t quota) {
  const auto code = proxytasks::task_code(TaskKind::kDerainDehaze);
  std::array<std::vector<std::size_t>, 2> pools;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < corpus.restoration.size(); ++i) {
    if (!seen.insert(corpus.restoration[i].id).second) {
      fail(ErrorCode::kInvalidConfig, "duplicate restoration pair id " + corpus.restoration[i].id);
    }
    pools[static_cast<std::size_t>(corpus.restoration[i].kind)].push_back(i);
  }
  if (quota > corpus.restoration.size()) {
    fail(ErrorCode::kInvalidConfig, "derain_dehaze quota " + std::to_string(quota) + " exceeds the " +
                                        std::to_string(corpus.restoration.size()) + " configured pairs");
  }
  std::array<std::size_t, 2> cursor{0, 0};
  std::vector<Job> jobs;
  for (std::uint64_t i = 0; i < quota; ++i) {
    raster::Rng64 rng(raster::derive_seed(cfg.global_seed, "derain_dehaze#" + std::to_string(i), code));
    std::size_t k = static_cast<std::size_t>(proxytasks::draw_restoration_kind(rng));
    if (cursor[k] == pools[k].size()) k = 1 - k;  // one source ran dry
    const std::size_t pair = pools[k][cursor[k]++];
    jobs.push_back({TaskKind::kDerainDehaze, kNone, pair,
                    proxytasks::make_sample_id(TaskKind::kDerainDehaze, corpus.restoration[pair].id)});
  }
  return jobs;
}

std::vector<Job> plan_jobs(const PipelineConfig& cfg, const Corpus& corpus, const std::vector<std::size_t>& order,
                           std::optional<DepthSelection>& depth_sel) {
  std::vector<Job> jobs;
  for (const auto& t : cfg.tasks) {
    if (t.quota == 0) continue;
    if (t.kind == TaskKind::kDerainDehaze) {
      auto r = plan_restoration(cfg, corpus, t.quota);
      jobs.insert(jobs.end(), r.begin(), r.end());
      continue;
    }
    if (proxytasks::needs_annotations(t.kind) && !corpus.coco) {
      fail(ErrorCode::kInvalidConfig,
           std::string(proxytasks::task_name(t.kind)) + " needs annotations but io.annotations is unset");
    }
    if (t.quota > order.size()) {
      fail(ErrorCode::kInvalidConfig, std::string(proxytasks::task_name(t.kind)) + " quota " +
                                          std::to_string(t.quota) + " exceeds the corpus of " +
                                          std::to_string(order.size()) + " images");
    }
    std::vector<std::size_t> picked;
    if (t.kind == TaskKind::kDepth) {
      depth_sel = select_depth_images(cfg, corpus, order);
      picked = depth_sel->images;
    } else {
      picked.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(t.quota));
    }
    for (std::size_t idx : picked)
      jobs.push_back({t.kind, idx, kNone, proxytasks::make_sample_id(t.kind, corpus.images[idx].id)});
  }
  return jobs;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) fail(ErrorCode::kIoFailure, "cannot write " + path.string());
}

Json overlap_json(const depthfilter::OverlapReport& rep) {
  Json j;
  j["min_overlap"] = rep.min_overlap;
  j["tasks"] = rep.names;
  j["jaccard"] = rep.jaccard;
  Json flagged = Json::array();
  for (const auto& [a, b] : rep.flagged) flagged.push_back({rep.names[a], rep.names[b]});
  j["flagged"] = flagged;
  return j;
}

std::size_t find_image(const Corpus& corpus, const std::string& id) {
  auto it = std::lower_bound(corpus.images.begin(), corpus.images.end(), id,
                             [](const CorpusImage& c, const std::string& v) { return c.id < v; });
  if (it == corpus.images.end() || it->id != id) fail(ErrorCode::kUnknownImage, "image " + id + " is not in the corpus");
  return static_cast<std::size_t>(it - corpus.images.begin());
}

bool same_pixels(const ImageBuf& a, const fs::path& file, std::string& detail) {
  const ImageBuf b = raster::read_image(file);
  if (a == b) return true;
  detail += "mismatch: " + file.string() + "\n";
  return false;
}

}  // namespace

mixer::ManifestHeader manifest_header(const PipelineConfig& cfg) {
  mixer::ManifestHeader h;
  h.global_seed = cfg.global_seed;
  h.ratio = cfg.ratio;
  h.batch_size = cfg.batch_size;
  for (const auto& t : cfg.tasks) h.task_quotas.emplace_back(std::string(proxytasks::task_name(t.kind)), t.quota);
  return h;
}

std::vector<TaskKind> corpus_tasks(const PipelineConfig& cfg) {
  std::vector<TaskKind> out;
  for (const auto& t : cfg.tasks)
    if (t.quota > 0 && t.kind != TaskKind::kDerainDehaze) out.push_back(t.kind);
  return out;
}

DepthSelection select_depth_images(const PipelineConfig& cfg, const Corpus& corpus,
                                   const std::vector<std::size_t>& order) {
  const std::uint64_t quota = cfg.quota(TaskKind::kDepth);
  if (quota > order.size()) fail(ErrorCode::kInvalidConfig, "depth quota exceeds the corpus");
  const std::size_t reserve_count = order.size() - quota;
  auto score = [&](bool from_reserve, std::size_t i) {
    const CorpusImage& img = corpus.images[order[from_reserve ? quota + i : i]];
    const fs::path p1 = depth_path(corpus.depth_primary, img);
    const fs::path p2 = depth_path(corpus.depth_secondary, img);
    if (p1.empty() || p2.empty()) fail(ErrorCode::kMissingFile, "missing depth estimate for " + img.id);
    depthfilter::FilterRecord rec;
    rec.image_id = img.id;
    rec.align = depthfilter::least_squares_align(depthfilter::read_depth_map(p1), depthfilter::read_depth_map(p2));
    return rec;
  };
  raster::Rng64 rng(raster::derive_seed(cfg.global_seed, "depth_refill", proxytasks::task_code(TaskKind::kDepth)));
  DepthSelection sel;
  sel.outcome = depthfilter::filter_and_refill(quota, reserve_count, score, cfg.depth_threshold, quota, rng);
  for (const auto& r : sel.outcome.kept) sel.images.push_back(order[r.from_reserve ? quota + r.index : r.index]);
  return sel;
}

ForgeResult forge(const PipelineConfig& cfg) {
  validate_config(cfg);
  const fs::path out = cfg.out_dir();
  const Corpus corpus = load_corpus(cfg);
  const auto order = corpus_order(corpus, cfg.global_seed);
  std::optional<DepthSelection> depth_sel;
  const std::vector<Job> jobs = plan_jobs(cfg, corpus, order, depth_sel);
  spdlog::info("forge: {} images in corpus, {} samples planned", corpus.images.size(), jobs.size());

  std::error_code ec;
  for (const auto& t : cfg.tasks) {
    const fs::path dir = out / task_dir(t.kind);
    fs::remove_all(dir, ec);
    fs::create_directories(dir);
    if (t.quota == 0) continue;
    fs::create_directories(dir / "inputs");
    fs::create_directories(dir / "targets");
  }
  fs::create_directories(out / "images");

  ForgeResult result;
  result.jobs = jobs.size();

  // Source images once each, in id order.
  std::set<std::size_t> used;
  for (const auto& j : jobs)
    if (j.image != kNone) used.insert(j.image);
  const std::vector<std::size_t> sources(used.begin(), used.end());
  std::vector<std::optional<SampleError>> source_errors(sources.size());
  parallel_for(sources.size(), cfg.workers, [&](std::size_t i) {
    const CorpusImage& img = corpus.images[sources[i]];
    try {
      raster::write_png(out / rel_source(img.id), raster::to_rgb(raster::read_image(img.path)));
    } catch (const Error& e) {
      source_errors[i] = SampleError{"source:" + img.id, e.code(), e.what()};
    }
  });

  std::vector<std::optional<TrainingSample>> samples(jobs.size());
  std::vector<std::optional<SampleError>> errors(jobs.size());
  parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
    const Job& job = jobs[i];
    try {
      raster::Rng64 rng(raster::derive_seed(cfg.global_seed, job.sample_id, proxytasks::task_code(job.task)));
      const Synthesized syn = run_synth(cfg, corpus, job, rng, nullptr);
      TrainingSample s = describe(cfg, corpus, job, syn);
      if (syn.condition) raster::write_png(out / *s.input_path, *syn.condition);
      raster::write_png(out / s.target_path, syn.target);
      samples[i] = std::move(s);
    } catch (const Error& e) {
      errors[i] = SampleError{job.sample_id, e.code(), e.what()};
    } catch (const std::exception& e) {
      errors[i] = SampleError{job.sample_id, ErrorCode::kIoFailure, e.what()};
    }
  });

  for (auto& e : source_errors)
    if (e) result.errors.push_back(std::move(*e));
  for (auto& e : errors)
    if (e) result.errors.push_back(std::move(*e));

  std::map<TaskKind, std::vector<TrainingSample>> by_task;
  for (auto& s : samples)
    if (s) by_task[s->task].push_back(std::move(*s));

  const mixer::ManifestHeader header = manifest_header(cfg);
  std::vector<std::pair<std::string, std::set<std::string>>> datasets;
  for (const auto& t : cfg.tasks) {
    if (t.quota == 0) {
      // Skipped task: header-only manifest.
      mixer::write_manifest(out / task_dir(t.kind) / "manifest.jsonl", header, {});
      continue;
    }
    TaskRun run{t.kind, std::move(by_task[t.kind])};
    std::sort(run.samples.begin(), run.samples.end(),
              [](const TrainingSample& a, const TrainingSample& b) { return a.sample_id < b.sample_id; });
    std::vector<mixer::ManifestRow> rows;
    for (std::size_t i = 0; i < run.samples.size(); ++i) rows.push_back({run.samples[i], "sgt", 0, i});
    mixer::write_manifest(out / task_dir(t.kind) / "manifest.jsonl", header, rows, out);
    if (t.kind != TaskKind::kDerainDehaze) {
      std::set<std::string> ids;
      for (const auto& s : run.samples) ids.insert(proxytasks::source_id_of(s.sample_id));
      datasets.emplace_back(task_dir(t.kind), std::move(ids));
    }
    spdlog::info("forge: {} -> {} samples", task_dir(t.kind), run.samples.size());
    result.tasks.push_back(std::move(run));
  }

  if (depth_sel) {
    depthfilter::write_rejection_log(out / "depth" / "rejections.jsonl", depth_sel->outcome, cfg.depth_threshold);
    result.depth_replacements = depth_sel->outcome.replacements;
  }
  result.overlap = depthfilter::overlap_report(datasets, cfg.overlap_min);
  write_text(out / "overlap.json", overlap_json(result.overlap).dump(2) + "\n");

  std::string err_text;
  for (const auto& e : result.errors) {
    Json j;
    j["sample_id"] = e.sample_id;
    j["code"] = error_code_name(e.code);
    j["message"] = e.message;
    err_text += j.dump() + "\n";
    result.io_failure = result.io_failure || is_io_error(e.code);
  }
  write_text(out / "errors.jsonl", err_text);

  const double denom = static_cast<double>(std::max<std::size_t>(1, result.jobs + sources.size()));
  result.failed = static_cast<double>(result.errors.size()) / denom > cfg.error_rate_cap;
  if (!result.errors.empty()) {
    spdlog::warn("forge: {} sample errors (cap {}), see errors.jsonl", result.errors.size(), cfg.error_rate_cap);
  }
  for (const auto& [a, b] : result.overlap.flagged) {
    spdlog::warn("forge: overlap {} vs {} = {:.4f} below {}", result.overlap.names[a], result.overlap.names[b],
                 result.overlap.jaccard[a][b], cfg.overlap_min);
  }
  return result;
}

ReplayResult replay_sample(const PipelineConfig& cfg, const std::string& sample_id) {
  const TaskKind task = proxytasks::task_of(sample_id);
  const fs::path out = cfg.out_dir();
  const auto rows = mixer::read_task_manifest(out / task_dir(task) / "manifest.jsonl");
  auto row = std::find_if(rows.begin(), rows.end(), [&](const TrainingSample& s) { return s.sample_id == sample_id; });
  if (row == rows.end()) fail(ErrorCode::kInvalidConfig, "sample " + sample_id + " is not in the " + task_dir(task) + " manifest");

  const Corpus corpus = load_corpus(cfg);
  Job job{task, kNone, kNone, sample_id};
  const std::string source = proxytasks::source_id_of(sample_id);
  if (task == TaskKind::kDerainDehaze) {
    for (std::size_t i = 0; i < corpus.restoration.size(); ++i)
      if (corpus.restoration[i].id == source) job.pair = i;
    if (job.pair == kNone) fail(ErrorCode::kUnknownImage, "restoration pair " + source + " is not configured");
  } else {
    job.image = find_image(corpus, source);
  }

  ReplayResult r;
  r.sample_id = sample_id;
  auto matches = [&](const Synthesized& syn) {
    bool ok = same_pixels(syn.target, out / row->target_path, r.detail);
    if (syn.condition) ok = same_pixels(*syn.condition, out / *row->input_path, r.detail) && ok;
    return ok;
  };
  raster::Rng64 unused(0);
  r.from_params = matches(run_synth(cfg, corpus, job, unused, &row->params));

  raster::Rng64 rng(row->seed);
  const Synthesized again = run_synth(cfg, corpus, job, rng, nullptr);
  r.from_seed = matches(again) && again.params == row->params &&
                row->seed == raster::derive_seed(cfg.global_seed, sample_id, proxytasks::task_code(task));
  if (!r.from_seed && r.detail.empty()) r.detail = "seed or params differ from the manifest row\n";
  return r;
}

FilterDepthResult filter_depth(const PipelineConfig& cfg) {
  validate_config(cfg);
  const Corpus corpus = load_corpus(cfg);
  const auto order = corpus_order(corpus, cfg.global_seed);
  const DepthSelection sel = select_depth_images(cfg, corpus, order);
  const fs::path dir = cfg.out_dir() / "depth_filter";
  fs::create_directories(dir);
  FilterDepthResult r;
  r.log = dir / "rejections.jsonl";
  depthfilter::write_rejection_log(r.log, sel.outcome, cfg.depth_threshold);
  std::string kept;
  for (std::size_t idx : sel.images) kept += corpus.images[idx].id + "\n";
  write_text(dir / "kept.txt", kept);
  r.kept = sel.images.size();
  r.rejected = sel.outcome.log.size() - sel.outcome.kept.size();
  r.replacements = sel.outcome.replacements;
  return r;
}

MixResult mix(const PipelineConfig& cfg) {
  validate_config(cfg);
  const fs::path out = cfg.out_dir();
  std::vector<TrainingSample> sgt;
  for (const auto& t : cfg.tasks) {
    if (t.quota == 0) continue;
    auto rows = mixer::read_task_manifest(out / task_dir(t.kind) / "manifest.jsonl");
    sgt.insert(sgt.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
  }
  std::vector<mixer::VqaRef> vqa;
  if (!cfg.io.vqa.empty()) vqa = mixer::read_vqa_list(cfg.resolve(cfg.io.vqa));

  MixResult r;
  r.batches = cfg.mix_batches;
  if (r.batches == 0) r.batches = mixer::batches_to_cover(cfg.ratio, cfg.batch_size, 0, sgt.size());
  mixer::BatchPlanner planner({{"sgt", sgt.size(), cfg.ratio[0]}, {"vqa", vqa.size(), cfg.ratio[1]}},
                              cfg.batch_size, cfg.global_seed);
  std::vector<mixer::BatchPlan> plans;
  plans.reserve(r.batches);
  for (std::uint64_t i = 0; i < r.batches; ++i) plans.push_back(planner.next());
  const auto rows = mixer::rows_from_plan(plans, sgt, vqa);
  for (const auto& row : rows) (row.stream == "sgt" ? r.sgt_rows : r.vqa_rows)++;

  const fs::path dir = out / "mix";
  fs::create_directories(dir);
  const auto header = manifest_header(cfg);
  r.manifest = mixer::write_manifest(dir / "manifest.jsonl", header, rows, out);

  std::string epochs;
  for (const auto& b : planner.boundaries()) {
    Json j;
    j["stream"] = planner.streams()[b.stream].name;
    j["epoch"] = b.epoch;
    j["batch"] = b.batch_index;
    j["pos"] = b.pos;
    epochs += j.dump() + "\n";
  }
  write_text(dir / "epochs.jsonl", epochs);

  std::vector<std::uint64_t> sizes;
  for (auto s : cfg.scaling_sizes) {
    if (s <= sgt.size()) sizes.push_back(s);
    else spdlog::warn("mix: scaling slice {} skipped, only {} SGT samples", s, sgt.size());
  }
  const auto slices = mixer::slice_scaling(sgt.size(), sizes, cfg.global_seed);
  for (std::size_t k = 0; k < slices.size(); ++k) {
    std::vector<mixer::ManifestRow> srows;
    for (std::size_t i = 0; i < slices[k].size(); ++i) srows.push_back({sgt[slices[k][i]], "sgt", 0, i});
    r.slices.push_back(
        mixer::write_manifest(dir / ("scaling_" + std::to_string(sizes[k]) + ".jsonl"), header, srows, out));
  }
  return r;
}

mixer::DataCard stats(const PipelineConfig& cfg, bool planned) {
  if (planned) {
    std::vector<std::pair<std::string, std::uint64_t>> quotas;
    for (const auto& t : cfg.tasks)
      if (t.quota > 0) quotas.emplace_back(std::string(proxytasks::task_name(t.kind)), t.quota);
    return mixer::planned_data_card(quotas, cfg.vqa_counts);
  }
  const fs::path out = cfg.out_dir();
  std::vector<fs::path> manifests;
  if (fs::exists(out / "mix" / "manifest.jsonl")) {
    manifests.push_back(out / "mix" / "manifest.jsonl");
  } else {
    for (TaskKind t : proxytasks::all_tasks()) {
      const fs::path p = out / task_dir(t) / "manifest.jsonl";
      if (fs::exists(p)) manifests.push_back(p);
    }
  }
  return manifests.empty() ? mixer::empty_data_card() : mixer::data_card(manifests);
}

}  // namespace proxyforge::pipeline
