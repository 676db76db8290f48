#include "unirec/pipeline/pipeline.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <functional>
#include <set>

#include "unirec/core/io.hpp"
#include "unirec/core/rng.hpp"
#include "unirec/corpus/sampler.hpp"
#include "unirec/corpus/samples.hpp"
#include "unirec/decode/greedy.hpp"
#include "unirec/decode/scorer.hpp"
#include "unirec/eval/report.hpp"
#include "unirec/hst/codec.hpp"
#include "unirec/sdt/bpe.hpp"
#include "unirec/sdt/vocabulary.hpp"

namespace unirec::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kStagingName = ".unirec-staging";

// The three label variants of the ablation: both techniques, without the
// supervision tokens, and without them on a single coupled tokenizer.
struct Variant {
  const char* name;
  bool hst;
  bool decoupled;
};
constexpr Variant kVariants[] = {{"full", true, true}, {"no_hst", false, true}, {"no_sdt", false, false}};

std::uint64_t positive(const json& j, const char* key) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 1) {
    throw ConfigError(std::string("'") + key + "' must be a positive integer");
  }
  return j.get<std::uint64_t>();
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

json with_header(json body, std::string_view artifact, std::uint64_t seed) {
  json out = io::jsonl_header(artifact, seed);
  for (auto& [key, value] : body.items()) out[key] = std::move(value);
  return out;
}

void write_jsonl(const fs::path& path, std::string_view artifact, std::uint64_t seed, std::vector<json> records) {
  records.insert(records.begin(), io::jsonl_header(artifact, seed));
  io::write_file(path, io::to_jsonl(records));
}

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
  std::string text;
  for (const std::string& l : lines) {
    text += l;
    text += '\n';
  }
  io::write_file(path, text);
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::vector<std::string> out;
  for (std::string& l : io::split_lines(io::read_file(path))) {
    if (!l.empty()) out.push_back(std::move(l));
  }
  return out;
}

sdt::DecoupledVocabulary load_vocab(const fs::path& dir, const Variant& v) {
  return sdt::DecoupledVocabulary::from_json(io::read_json(dir / "tokenizer" / (v.decoupled ? "sdt.json" : "coupled.json")));
}

// --- stages -----------------------------------------------------------------

json stage_gen(const PipelineConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir / "corpus");
  const auto docs = corpus::generate_corpus(cfg.seed, cfg.documents, cfg.profile);
  std::vector<json> doc_lines;
  for (const auto& d : docs) doc_lines.push_back(hst::to_json(d));
  write_jsonl(dir / "corpus" / "documents.jsonl", "documents", cfg.seed, std::move(doc_lines));

  const auto samples = corpus::make_samples(docs, cfg.levels, mix_seed(cfg.seed, 1));
  std::vector<json> sample_lines;
  for (const auto& s : samples) sample_lines.push_back(corpus::to_json(s));
  write_jsonl(dir / "corpus" / "samples.jsonl", "samples", cfg.seed, std::move(sample_lines));
  return {{"documents", docs.size()}, {"samples", samples.size()}};
}

json stage_tokenize(const PipelineConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir / "tokenizer");
  std::vector<std::string> text_corpus, formula_corpus, coupled_corpus;
  for (const json& j : io::read_jsonl(dir / "corpus" / "documents.jsonl")) {
    const hst::StructuredDocument doc = hst::document_from_json(j);
    for (const hst::Paragraph& para : doc.paragraphs) {
      for (const hst::Line& line : para) {
        for (const hst::Span& span : line) {
          (span.kind == SpanKind::Formula ? formula_corpus : text_corpus).push_back(span.content);
        }
        coupled_corpus.push_back(hst::join_line(line));
      }
    }
  }
  write_lines(dir / "tokenizer" / "text_corpus.txt", text_corpus);
  write_lines(dir / "tokenizer" / "formula_corpus.txt", formula_corpus);
  write_lines(dir / "tokenizer" / "coupled_corpus.txt", coupled_corpus);

  const auto train = [&](const char* corpus_file, std::size_t target, sdt::TokenModality modality) {
    return sdt::train_bpe(read_lines(dir / "tokenizer" / corpus_file), target, modality);
  };
  const sdt::BpeModel text = train("text_corpus.txt", cfg.text_vocab_size, sdt::TokenModality::Text);
  const sdt::BpeModel formula = train("formula_corpus.txt", cfg.formula_vocab_size, sdt::TokenModality::Formula);
  const sdt::BpeModel coupled = train("coupled_corpus.txt", cfg.coupled_vocab_size, sdt::TokenModality::Text);
  io::write_json(dir / "tokenizer" / "text_bpe.json", with_header(text.to_json(), "bpe_text", cfg.seed));
  io::write_json(dir / "tokenizer" / "formula_bpe.json", with_header(formula.to_json(), "bpe_formula", cfg.seed));
  io::write_json(dir / "tokenizer" / "coupled_bpe.json", with_header(coupled.to_json(), "bpe_coupled", cfg.seed));

  const auto sdt_vocab = sdt::merge_decoupled(
      sdt::BpeModel::from_json(io::read_json(dir / "tokenizer" / "text_bpe.json")),
      sdt::BpeModel::from_json(io::read_json(dir / "tokenizer" / "formula_bpe.json")));
  const auto coupled_vocab = sdt::DecoupledVocabulary::coupled(
      sdt::BpeModel::from_json(io::read_json(dir / "tokenizer" / "coupled_bpe.json")));
  io::write_json(dir / "tokenizer" / "sdt.json", with_header(sdt_vocab.to_json(), "vocab_sdt", cfg.seed));
  io::write_json(dir / "tokenizer" / "coupled.json", with_header(coupled_vocab.to_json(), "vocab_coupled", cfg.seed));

  json overlap = json::array();
  for (const auto& e : sdt::modality_overlap_report(text, formula)) {
    overlap.push_back({{"surface", e.surface}, {"text_frequency", e.text_frequency},
                       {"formula_frequency", e.formula_frequency}});
  }
  io::write_json(dir / "tokenizer" / "overlap.json", with_header({{"shared", overlap}}, "overlap", cfg.seed));
  return {{"text_size", text.size()},
          {"formula_size", formula.size()},
          {"sdt_size", sdt_vocab.size()},
          {"excluded", sdt_vocab.excluded().size()},
          {"coupled_size", coupled_vocab.size()}};
}

json label_record(const corpus::SampleRecord& s, const std::string& label, const std::vector<sdt::TokenId>& ids) {
  return {{"id", s.id}, {"label", label}, {"ids", ids}, {"tags", to_json(s.tags)}};
}

const std::string& variant_label(const corpus::SampleRecord& s, const Variant& v) {
  return v.hst ? s.hst_label : s.label;
}

json stage_labels(const PipelineConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir / "labels");
  const auto samples = corpus::read_samples(io::read_file(dir / "corpus" / "samples.jsonl"));
  json out = json::object();
  for (const Variant& v : kVariants) {
    const auto vocab = load_vocab(dir, v);
    std::vector<json> lines;
    std::size_t tokens = 0;
    for (const auto& s : samples) {
      const std::string& label = variant_label(s, v);
      const auto ids = vocab.encode(label);
      tokens += ids.size();
      lines.push_back(label_record(s, label, ids));
    }
    write_jsonl(dir / "labels" / (std::string(v.name) + ".jsonl"), std::string("labels_") + v.name, cfg.seed,
                std::move(lines));
    out[v.name] = {{"labels", samples.size()}, {"tokens", tokens}};
  }
  return out;
}

json stage_filter(const PipelineConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir / "filtered");
  const auto samples = corpus::read_samples(io::read_file(dir / "corpus" / "samples.jsonl"));
  json out = json::object();
  for (const Variant& v : kVariants) {
    const auto vocab = load_vocab(dir, v);
    const auto result = corpus::length_filter(vocab, samples, cfg.max_len,
                                              v.hst ? corpus::LabelField::Hst : corpus::LabelField::Plain);
    std::set<std::string> kept;
    for (const auto& s : result.kept) kept.insert(s.id);
    std::vector<json> lines;
    for (json& j : io::read_jsonl(dir / "labels" / (std::string(v.name) + ".jsonl"))) {
      if (kept.contains(j.at("id").get<std::string>())) lines.push_back(std::move(j));
    }
    write_jsonl(dir / "filtered" / (std::string(v.name) + ".jsonl"), std::string("filtered_") + v.name, cfg.seed,
                std::move(lines));
    out[v.name] = corpus::filter_summary(result, cfg.max_len);
  }
  io::write_json(dir / "filtered" / "summary.json", with_header(out, "filter_summary", cfg.seed));
  return out;
}

json stage_plan(const PipelineConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir / "sampling");
  const auto sources = cfg.manifest ? corpus::load_manifest(*cfg.manifest, cfg.scale)
                                    : corpus::unirec40m_sources(cfg.scale);
  const auto plan = corpus::plan_epoch(sources, mix_seed(cfg.seed, 2));
  io::write_json(dir / "sampling" / "plan.json", with_header(corpus::to_json(plan), "epoch_plan", cfg.seed));
  std::uint64_t total = 0;
  json per_source = json::array();
  for (const auto& sp : corpus::plan_from_json(io::read_json(dir / "sampling" / "plan.json")).sources) {
    total += sp.total();
    per_source.push_back({{"name", sp.name}, {"target", sp.epoch_target}, {"planned", sp.total()}});
  }
  return {{"scale", cfg.scale}, {"sources", per_source}, {"total", total}};
}

json stage_decode(const PipelineConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir / "decode");
  json out = json::object();
  for (std::size_t vi = 0; vi < std::size(kVariants); ++vi) {
    const Variant& v = kVariants[vi];
    const auto vocab = load_vocab(dir, v);
    const auto records = io::read_jsonl(dir / "filtered" / (std::string(v.name) + ".jsonl"));
    std::vector<json> lines;
    std::size_t exact = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto target = records[i].at("ids").get<std::vector<sdt::TokenId>>();
      const decode::OracleScorer scorer(vocab.size(), target, vocab.eos(), cfg.mock_error_rate,
                                        mix_seed(mix_seed(cfg.seed, 3 + vi), i));
      const auto ids = decode::greedy_decode(scorer, vocab, cfg.max_len);
      exact += ids == target ? 1 : 0;
      lines.push_back({{"id", records[i].at("id")}, {"ids", ids}, {"pred", vocab.decode(ids)}});
    }
    write_jsonl(dir / "decode" / (std::string(v.name) + ".jsonl"), std::string("decode_") + v.name, cfg.seed,
                std::move(lines));
    out[v.name] = {{"decoded", records.size()}, {"exact", exact}};
  }
  return out;
}

json stage_eval(const PipelineConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir / "eval");
  fs::create_directories(dir / "reports");
  json out = json::object();
  for (const Variant& v : kVariants) {
    const auto vocab = load_vocab(dir, v);
    const std::string name = v.name;
    const auto labels = io::read_jsonl(dir / "filtered" / (name + ".jsonl"));
    const auto preds = io::read_jsonl(dir / "decode" / (name + ".jsonl"));
    if (labels.size() != preds.size()) throw Error("decode output does not match the filtered labels");

    std::vector<json> identity, mock;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const json& l = labels[i];
      if (preds[i].at("id") != l.at("id")) throw Error("decode output out of order at record " + std::to_string(i));
      eval::EvalRecord r;
      r.id = l.at("id").get<std::string>();
      r.gt = l.at("label").get<std::string>();
      r.modality = l.at("tags").at("modality").get<std::string>();
      r.level = l.at("tags").at("level").get<std::string>();
      r.language = l.at("tags").at("language").get<std::string>();
      r.domain = l.at("tags").at("domain").get<std::string>();
      r.degenerate = r.gt.empty();
      // Identity prediction: the label's own ids decoded back.
      r.pred = vocab.decode(l.at("ids").get<std::vector<sdt::TokenId>>());
      identity.push_back(eval::to_json(r));
      r.pred = preds[i].at("pred").get<std::string>();
      mock.push_back(eval::to_json(r));
    }
    json variant = json::object();
    for (auto& [kind, recs] : {std::pair<std::string, std::vector<json>&>{"identity", identity}, {"mock", mock}}) {
      const fs::path records_path = dir / "eval" / (name + "." + kind + ".jsonl");
      write_jsonl(records_path, "eval_" + name + "_" + kind, cfg.seed, recs);
      const auto parsed = eval::parse_eval_records(io::read_file(records_path));
      const auto report = eval::evaluate(parsed.records, cfg.mode, parsed.rejected);
      io::write_json(dir / "reports" / (name + "." + kind + ".json"),
                     with_header(eval::to_json(report), "report_" + name + "_" + kind, cfg.seed));
      io::write_file(dir / "reports" / (name + "." + kind + ".txt"),
                     eval::render_report(report, eval::ReportFormat::Table));
      variant[kind] = {{"records", report.records},
                       {"rejected", report.rejected.size()},
                       {"avg", report.avg ? json(*report.avg) : json(nullptr)}};
    }
    out[name] = std::move(variant);
  }
  return out;
}

void collect(const fs::path& root, const fs::path& dir, std::vector<fs::path>& out) {
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory()) {
      collect(root, e.path(), out);
    } else {
      out.push_back(fs::relative(e.path(), root));
    }
  }
}

}  // namespace

PipelineConfig config_from_json(const json& j, const fs::path& base_dir) {
  check_keys(j, {"seed", "out_dir", "documents", "profile", "levels", "tokenizer", "max_len", "sampling", "eval"},
             "config");
  PipelineConfig c;
  try {
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) throw ConfigError("'seed' must be an unsigned integer");
      c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("out_dir")) c.out_dir = (base_dir / j["out_dir"].get<std::string>()).lexically_normal();
    if (j.contains("documents")) c.documents = positive(j["documents"], "documents");
    if (j.contains("profile")) {
      const json& p = j["profile"];
      if (p.is_string()) {
        const fs::path path = base_dir / p.get<std::string>();
        if (!fs::is_regular_file(path)) throw ConfigError("profile not found: " + path.string());
        c.profile = corpus::profile_from_json(io::read_json(path));
      } else {
        c.profile = corpus::profile_from_json(p);
      }
    }
    if (j.contains("levels")) {
      c.levels.clear();
      for (const json& l : j["levels"]) {
        const auto level = parse_level(l.get<std::string>());
        if (!level) throw ConfigError("unknown level '" + l.get<std::string>() + "'");
        c.levels.push_back(*level);
      }
    }
    if (j.contains("tokenizer")) {
      const json& t = j["tokenizer"];
      check_keys(t, {"text_vocab_size", "formula_vocab_size", "coupled_vocab_size"}, "tokenizer");
      if (t.contains("text_vocab_size")) c.text_vocab_size = positive(t["text_vocab_size"], "text_vocab_size");
      if (t.contains("formula_vocab_size")) c.formula_vocab_size = positive(t["formula_vocab_size"], "formula_vocab_size");
      if (t.contains("coupled_vocab_size")) c.coupled_vocab_size = positive(t["coupled_vocab_size"], "coupled_vocab_size");
    }
    if (j.contains("max_len")) c.max_len = positive(j["max_len"], "max_len");
    if (j.contains("sampling")) {
      const json& s = j["sampling"];
      check_keys(s, {"manifest", "scale"}, "sampling");
      if (s.contains("manifest")) c.manifest = (base_dir / s["manifest"].get<std::string>()).lexically_normal();
      if (s.contains("scale")) c.scale = positive(s["scale"], "scale");
    }
    if (j.contains("eval")) {
      const json& e = j["eval"];
      check_keys(e, {"mode", "mock_error_rate"}, "eval");
      if (e.contains("mode")) {
        const auto mode = eval::parse_score_mode(e["mode"].get<std::string>());
        if (!mode) throw ConfigError("eval mode must be 'hst' or 'raw'");
        c.mode = *mode;
      }
      if (e.contains("mock_error_rate")) c.mock_error_rate = e["mock_error_rate"].get<double>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw ConfigError("config not found: " + path.string());
  json j;
  try {
    j = io::read_json(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return config_from_json(j, path.parent_path());
}

void apply_env_overrides(PipelineConfig& config) {
  const char* env = std::getenv("UNIREC_SEED");
  if (env == nullptr) return;
  const std::string s = env;
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("UNIREC_SEED must be an unsigned integer, got '" + s + "'");
  }
  errno = 0;
  const unsigned long long v = std::strtoull(s.c_str(), nullptr, 10);
  if (errno == ERANGE) throw ConfigError("UNIREC_SEED out of range");
  config.seed = v;
}

void validate(const PipelineConfig& c) {
  if (c.out_dir.empty()) throw ConfigError("out_dir is not set");
  if (fs::exists(c.out_dir) && !fs::is_directory(c.out_dir)) {
    throw ConfigError("out_dir is not a directory: " + c.out_dir.string());
  }
  if (c.manifest && !fs::is_regular_file(*c.manifest)) throw ConfigError("manifest not found: " + c.manifest->string());
  if (c.levels.empty()) throw ConfigError("no levels selected");
  if (c.max_len < 2) throw ConfigError("max_len must leave room for <BOS> and <EOS>");
  if (!(c.mock_error_rate >= 0.0 && c.mock_error_rate <= 1.0)) throw ConfigError("mock_error_rate must lie in [0, 1]");
  try {
    corpus::validate(c.profile);
    if (c.manifest) corpus::load_manifest(*c.manifest, c.scale);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  validate(config);
  const fs::path staging = config.out_dir / kStagingName;
  const bool created_out_dir = !fs::exists(config.out_dir);
  // Removes the staging area, and out_dir too if this run created it.
  const auto discard = [&] {
    std::error_code ec;
    fs::remove_all(staging, ec);
    if (created_out_dir && fs::is_empty(config.out_dir, ec)) fs::remove(config.out_dir, ec);
  };
  fs::remove_all(staging);
  fs::create_directories(staging);

  json summary = io::jsonl_header("summary", config.seed);
  summary["config"] = {{"documents", config.documents},
                       {"profile", corpus::to_json(config.profile)},
                       {"max_len", config.max_len},
                       {"scale", config.scale},
                       {"mode", eval::mode_name(config.mode)},
                       {"mock_error_rate", config.mock_error_rate}};
  const std::pair<const char*, std::function<json(const PipelineConfig&, const fs::path&)>> stages[] = {
      {"gen", stage_gen},       {"tokenize", stage_tokenize}, {"labels", stage_labels}, {"filter", stage_filter},
      {"plan", stage_plan},     {"decode", stage_decode},     {"eval", stage_eval},
  };
  for (const auto& [name, run] : stages) {
    try {
      summary["stages"][name] = run(config, staging);
    } catch (const std::exception& e) {
      discard();
      throw StageError(name, e.what());
    }
  }

  PipelineResult result;
  try {
    io::write_json(staging / "summary.json", summary);
    collect(staging, staging, result.artifacts);
    std::sort(result.artifacts.begin(), result.artifacts.end());
    for (const auto& e : fs::directory_iterator(staging)) {
      const fs::path dst = config.out_dir / e.path().filename();
      fs::remove_all(dst);
      fs::rename(e.path(), dst);
    }
    fs::remove(staging);
  } catch (const std::exception& e) {
    discard();
    throw StageError("publish", e.what());
  }
  result.summary = std::move(summary);
  return result;
}

}  // namespace unirec::pipeline
