// unirec: command-line front end for the tokenizer, label codec, corpus,
// evaluation, decoding and pipeline modules.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "unirec/core/error.hpp"
#include "unirec/core/io.hpp"
#include "unirec/corpus/generator.hpp"
#include "unirec/corpus/sampler.hpp"
#include "unirec/corpus/samples.hpp"
#include "unirec/decode/geometry.hpp"
#include "unirec/decode/greedy.hpp"
#include "unirec/decode/scorer.hpp"
#include "unirec/eval/report.hpp"
#include "unirec/hst/codec.hpp"
#include "unirec/hst/document.hpp"
#include "unirec/pipeline/pipeline.hpp"
#include "unirec/sdt/bpe.hpp"
#include "unirec/sdt/vocabulary.hpp"

namespace {

using nlohmann::json;
using namespace unirec;

constexpr int kExitError = 1;
constexpr int kExitRejected = 2;

// Input from a file, or stdin for "-" or an empty path.
std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  return io::read_file(path);
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    io::write_file(path, text);
  }
}

std::vector<std::string> non_empty_lines(const std::string& text) {
  std::vector<std::string> out;
  for (std::string& l : io::split_lines(text)) {
    if (!l.empty()) out.push_back(std::move(l));
  }
  return out;
}

sdt::DecoupledVocabulary load_vocab(const std::string& path) {
  return sdt::DecoupledVocabulary::from_json(io::read_json(path));
}

// Seed from the flag, else UNIREC_SEED, else 0.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  pipeline::PipelineConfig probe;
  pipeline::apply_env_overrides(probe);
  return probe.seed;
}

std::string ids_line(const std::vector<sdt::TokenId>& ids) { return json(ids).dump() + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unirec: unified text and formula recognition infrastructure"};
  app.require_subcommand(1);
  int exit_code = 0;

  // --- tok ------------------------------------------------------------------
  auto* tok = app.add_subcommand("tok", "Train, merge and apply tokenizers");
  tok->require_subcommand(1);

  std::string train_modality = "text", train_in, train_out;
  std::size_t train_vocab = 0;
  auto* tok_train = tok->add_subcommand("train", "Train a byte-level BPE model on one string per line");
  tok_train->add_option("--modality", train_modality, "text or formula")
      ->check(CLI::IsMember({"text", "formula"}));
  tok_train->add_option("--vocab-size", train_vocab, "Target vocabulary size (>= 256)")->required();
  tok_train->add_option("--in", train_in, "Corpus file, one string per line")->required();
  tok_train->add_option("--out", train_out, "Model JSON (default stdout)");
  tok_train->callback([&] {
    const auto modality = train_modality == "formula" ? sdt::TokenModality::Formula : sdt::TokenModality::Text;
    const auto model = sdt::train_bpe(non_empty_lines(read_input(train_in)), train_vocab, modality);
    write_output(train_out, model.to_json().dump(2) + "\n");
  });

  std::string merge_text, merge_formula, merge_out, merge_overlap;
  bool merge_coupled = false;
  auto* tok_merge = tok->add_subcommand("merge", "Merge text and formula models into one decoupled vocabulary");
  tok_merge->add_option("--text", merge_text, "Text model JSON")->required()->check(CLI::ExistingFile);
  tok_merge->add_option("--formula", merge_formula, "Formula model JSON")->check(CLI::ExistingFile);
  tok_merge->add_flag("--coupled", merge_coupled, "Wrap the --text model alone as a coupled vocabulary");
  tok_merge->add_option("--out", merge_out, "Vocabulary JSON (default stdout)");
  tok_merge->add_option("--overlap", merge_overlap, "Also write the modality overlap report here");
  tok_merge->callback([&] {
    const auto text = sdt::BpeModel::from_json(io::read_json(merge_text));
    if (merge_coupled == !merge_formula.empty()) throw Error("give exactly one of --formula and --coupled");
    if (merge_coupled) {
      write_output(merge_out, sdt::DecoupledVocabulary::coupled(text).to_json().dump(2) + "\n");
      return;
    }
    const auto formula = sdt::BpeModel::from_json(io::read_json(merge_formula));
    const auto vocab = sdt::merge_decoupled(text, formula);
    if (!merge_overlap.empty()) {
      json report = json::array();
      for (const auto& e : sdt::modality_overlap_report(text, formula)) {
        report.push_back({{"surface", e.surface}, {"text_frequency", e.text_frequency},
                          {"formula_frequency", e.formula_frequency}});
      }
      io::write_json(merge_overlap, report);
    }
    write_output(merge_out, vocab.to_json().dump(2) + "\n");
  });

  std::string enc_vocab, enc_in, enc_out;
  auto* tok_encode = tok->add_subcommand("encode", "Encode one label per line into a JSON id array per line");
  tok_encode->add_option("--vocab", enc_vocab, "Vocabulary JSON")->required()->check(CLI::ExistingFile);
  tok_encode->add_option("--in", enc_in, "Labels, one per line (default stdin)");
  tok_encode->add_option("--out", enc_out, "Output (default stdout)");
  tok_encode->callback([&] {
    const auto vocab = load_vocab(enc_vocab);
    std::string out;
    for (const std::string& line : io::split_lines(read_input(enc_in))) out += ids_line(vocab.encode(line));
    write_output(enc_out, out);
  });

  std::string dec_vocab, dec_in, dec_out;
  auto* tok_decode = tok->add_subcommand("decode", "Decode one JSON id array per line into labels");
  tok_decode->add_option("--vocab", dec_vocab, "Vocabulary JSON")->required()->check(CLI::ExistingFile);
  tok_decode->add_option("--in", dec_in, "Id arrays, one per line (default stdin)");
  tok_decode->add_option("--out", dec_out, "Output (default stdout)");
  tok_decode->callback([&] {
    const auto vocab = load_vocab(dec_vocab);
    std::string out;
    std::size_t line_no = 0;
    for (const std::string& line : io::split_lines(read_input(dec_in))) {
      ++line_no;
      if (line.empty()) continue;
      std::vector<sdt::TokenId> ids;
      try {
        ids = json::parse(line).get<std::vector<sdt::TokenId>>();
      } catch (const json::exception&) {
        throw Error("line " + std::to_string(line_no) + ": expected a JSON array of ids");
      }
      out += vocab.decode(ids);
      out += '\n';
    }
    write_output(dec_out, out);
  });

  // --- hst ------------------------------------------------------------------
  auto* hst_cmd = app.add_subcommand("hst", "Hierarchical supervision labels");
  hst_cmd->require_subcommand(1);

  std::string hst_enc_in, hst_enc_out;
  auto* hst_encode = hst_cmd->add_subcommand("encode", "Structured document JSON to a label");
  hst_encode->add_option("--in", hst_enc_in, "Document JSON (default stdin)");
  hst_encode->add_option("--out", hst_enc_out, "Label file (default stdout)");
  hst_encode->callback([&] {
    json j;
    try {
      j = json::parse(read_input(hst_enc_in));
    } catch (const json::parse_error& e) {
      throw Error(std::string("document: ") + e.what());
    }
    write_output(hst_enc_out, hst::encode_hst(hst::document_from_json(j)) + "\n");
  });

  std::string hst_dec_in, hst_dec_out;
  bool hst_strip = false;
  auto* hst_decode = hst_cmd->add_subcommand("decode", "Prediction with supervision tokens to plain paragraphs");
  hst_decode->add_option("--in", hst_dec_in, "Prediction text (default stdin)");
  hst_decode->add_option("--out", hst_dec_out, "Output (default stdout)");
  hst_decode->add_flag("--strip", hst_strip, "Remove the tokens without paragraph breaks instead");
  hst_decode->callback([&] {
    std::string text = read_input(hst_dec_in);
    if (!text.empty() && text.back() == '\n') text.pop_back();
    write_output(hst_dec_out, (hst_strip ? hst::strip_hst(text) : hst::decode_hst(text)) + "\n");
  });

  // --- corpus ---------------------------------------------------------------
  auto* corpus_cmd = app.add_subcommand("corpus", "Synthetic corpora, epoch plans and length filtering");
  corpus_cmd->require_subcommand(1);

  std::optional<std::uint64_t> gen_seed;
  std::size_t gen_n = 1;
  std::string gen_profile, gen_out, gen_docs;
  std::vector<std::string> gen_levels;
  auto* corpus_gen = corpus_cmd->add_subcommand("gen", "Generate documents and multi-level samples");
  corpus_gen->add_option("--seed", gen_seed, "Seed (default UNIREC_SEED, else 0)");
  corpus_gen->add_option("--n", gen_n, "Number of documents")->check(CLI::PositiveNumber);
  corpus_gen->add_option("--profile", gen_profile, "Generator profile JSON")->check(CLI::ExistingFile);
  corpus_gen->add_option("--levels", gen_levels, "Levels to cut (default all)");
  corpus_gen->add_option("--out", gen_out, "Samples JSONL (default stdout)");
  corpus_gen->add_option("--docs", gen_docs, "Also write the documents as JSONL here");
  corpus_gen->callback([&] {
    const std::uint64_t seed = resolve_seed(gen_seed);
    const auto profile = gen_profile.empty() ? corpus::GeneratorProfile{}
                                             : corpus::profile_from_json(io::read_json(gen_profile));
    std::vector<HierLevel> levels(std::begin(kAllLevels), std::end(kAllLevels));
    if (!gen_levels.empty()) {
      levels.clear();
      for (const std::string& l : gen_levels) {
        const auto level = parse_level(l);
        if (!level) throw Error("unknown level '" + l + "'");
        levels.push_back(*level);
      }
    }
    const auto docs = corpus::generate_corpus(seed, gen_n, profile);
    if (!gen_docs.empty()) {
      std::vector<json> lines{io::jsonl_header("documents", seed)};
      for (const auto& d : docs) lines.push_back(hst::to_json(d));
      io::write_file(gen_docs, io::to_jsonl(lines));
    }
    std::vector<json> lines{io::jsonl_header("samples", seed)};
    for (const auto& s : corpus::make_samples(docs, levels, mix_seed(seed, 1))) lines.push_back(corpus::to_json(s));
    write_output(gen_out, io::to_jsonl(lines));
  });

  std::optional<std::uint64_t> plan_seed;
  std::uint64_t plan_scale = 1;
  std::string plan_manifest, plan_out;
  bool plan_entries = false;
  auto* corpus_plan = corpus_cmd->add_subcommand("plan", "Plan one proportion-balanced epoch");
  corpus_plan->add_option("--manifest", plan_manifest, "Source manifest JSON (default: built-in UniRec40M table)")
      ->check(CLI::ExistingFile);
  corpus_plan->add_option("--seed", plan_seed, "Seed (default UNIREC_SEED, else 0)");
  corpus_plan->add_option("--scale", plan_scale, "Divide every count by this")->check(CLI::PositiveNumber);
  corpus_plan->add_option("--out", plan_out, "Write the full plan JSON here");
  corpus_plan->add_flag("--entries", plan_entries, "Print the full plan instead of the per-source summary");
  corpus_plan->callback([&] {
    const std::uint64_t seed = resolve_seed(plan_seed);
    const auto sources = plan_manifest.empty() ? corpus::unirec40m_sources(plan_scale)
                                               : corpus::load_manifest(plan_manifest, plan_scale);
    const auto plan = corpus::plan_epoch(sources, seed);
    const json full = corpus::to_json(plan);
    if (!plan_out.empty()) io::write_json(plan_out, full);
    if (plan_entries) {
      std::cout << full.dump(2) << "\n";
      return;
    }
    json summary = json::array();
    std::uint64_t total = 0;
    for (const auto& sp : plan.sources) {
      std::uint64_t max_rep = 0;
      for (const auto& e : sp.entries) max_rep = std::max(max_rep, e.count);
      total += sp.total();
      summary.push_back({{"name", sp.name},
                         {"pool_size", sp.pool_size},
                         {"epoch_target", sp.epoch_target},
                         {"mode", sp.resampled() ? "resample" : "subsample"},
                         {"distinct", sp.entries.size()},
                         {"planned", sp.total()},
                         {"max_repeat", max_rep}});
    }
    std::cout << json{{"seed", seed}, {"scale", plan_scale}, {"sources", summary}, {"total", total}}.dump(2) << "\n";
  });

  std::string filt_vocab, filt_in, filt_out, filt_field = "hst";
  std::size_t filt_max = kMaxTokenLength;
  auto* corpus_filter = corpus_cmd->add_subcommand("filter", "Drop samples whose encoding exceeds the budget");
  corpus_filter->add_option("--vocab", filt_vocab, "Vocabulary JSON")->required()->check(CLI::ExistingFile);
  corpus_filter->add_option("--max-len", filt_max, "Token budget including <BOS> and <EOS>");
  corpus_filter->add_option("--in", filt_in, "Samples JSONL (default stdin)");
  corpus_filter->add_option("--out", filt_out, "Kept samples JSONL (default stdout)");
  corpus_filter->add_option("--field", filt_field, "Label to measure: hst or plain")
      ->check(CLI::IsMember({"hst", "plain"}));
  corpus_filter->callback([&] {
    const auto vocab = load_vocab(filt_vocab);
    const auto samples = corpus::read_samples(read_input(filt_in));
    const auto result = corpus::length_filter(vocab, samples, filt_max,
                                              filt_field == "hst" ? corpus::LabelField::Hst : corpus::LabelField::Plain);
    std::vector<json> lines;
    for (const auto& s : result.kept) lines.push_back(corpus::to_json(s));
    write_output(filt_out, io::to_jsonl(lines));
    std::cerr << corpus::filter_summary(result, filt_max).dump() << "\n";
  });

  // --- eval -----------------------------------------------------------------
  std::string eval_in, eval_mode = "hst", eval_format = "table", eval_golden, eval_out;
  bool eval_strict = false;
  auto* eval_cmd = app.add_subcommand("eval", "Score predictions by normalized edit distance");
  eval_cmd->add_option("--in", eval_in, "Records JSONL (default stdin)");
  eval_cmd->add_option("--mode", eval_mode, "hst or raw")->check(CLI::IsMember({"hst", "raw"}));
  eval_cmd->add_option("--format", eval_format, "table or json")->check(CLI::IsMember({"table", "json"}));
  eval_cmd->add_option("--golden", eval_golden, "Fail unless the JSON report equals this file byte for byte")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", eval_out, "Report file (default stdout)");
  eval_cmd->add_flag("--strict", eval_strict, "Exit 2 if any record is rejected");
  eval_cmd->callback([&] {
    const auto parsed = eval::parse_eval_records(read_input(eval_in));
    const auto report = eval::evaluate(parsed.records, *eval::parse_score_mode(eval_mode), parsed.rejected);
    write_output(eval_out, eval::render_report(report, *eval::parse_report_format(eval_format)));
    if (!eval_golden.empty()) {
      if (eval::render_report(report, eval::ReportFormat::Json) != io::read_file(eval_golden)) {
        throw Error("report differs from golden file " + eval_golden);
      }
      std::cerr << "golden: match\n";
    }
    if (eval_strict && !report.rejected.empty()) {
      std::cerr << "unirec: " << report.rejected.size() << " record(s) rejected\n";
      exit_code = kExitRejected;
    }
  });

  // --- geom -----------------------------------------------------------------
  std::int64_t geom_h = 0, geom_w = 0;
  auto* geom = app.add_subcommand("geom", "Native-resolution geometry and visual token grid");
  geom->set_help_flag("--help", "Print this help message and exit");  // frees "--h"
  geom->add_option("--h", geom_h, "Image height in pixels")->required();
  geom->add_option("--w", geom_w, "Image width in pixels")->required();
  geom->callback([&] { std::cout << decode::to_json(decode::fit_geometry(geom_h, geom_w)).dump(2) << "\n"; });

  // --- decode-mock ----------------------------------------------------------
  std::string dm_vocab, dm_scorer, dm_fit, dm_save;
  std::size_t dm_max = kMaxTokenLength;
  std::size_t dm_order = 3;
  auto* dm = app.add_subcommand("decode-mock", "Greedy decoding with an n-gram mock scorer");
  dm->add_option("--vocab", dm_vocab, "Vocabulary JSON")->required()->check(CLI::ExistingFile);
  dm->add_option("--scorer", dm_scorer, "N-gram scorer JSON")->check(CLI::ExistingFile);
  dm->add_option("--fit", dm_fit, "Fit the scorer on these labels, one per line")->check(CLI::ExistingFile);
  dm->add_option("--order", dm_order, "N-gram order when fitting")->check(CLI::PositiveNumber);
  dm->add_option("--save-scorer", dm_save, "Write the fitted scorer here");
  dm->add_option("--max-len", dm_max, "Token budget including <BOS>")->check(CLI::PositiveNumber);
  dm->callback([&] {
    if (dm_scorer.empty() == dm_fit.empty()) throw Error("give exactly one of --scorer and --fit");
    const auto vocab = load_vocab(dm_vocab);
    std::optional<decode::NgramScorer> scorer;
    if (!dm_scorer.empty()) {
      scorer = decode::NgramScorer::from_json(io::read_json(dm_scorer));
    } else {
      std::vector<std::vector<sdt::TokenId>> seqs;
      for (const std::string& line : non_empty_lines(io::read_file(dm_fit))) seqs.push_back(vocab.encode(line));
      scorer.emplace(vocab.size(), dm_order);
      scorer->fit(seqs);
      if (!dm_save.empty()) io::write_json(dm_save, scorer->to_json());
    }
    const auto ids = decode::greedy_decode(*scorer, vocab, dm_max);
    std::cout << json{{"ids", ids}, {"length", ids.size()}, {"text", vocab.decode(ids)}}.dump(
                     -1, ' ', false, json::error_handler_t::replace)
              << "\n";
  });

  // --- pipeline -------------------------------------------------------------
  std::string pipe_config, pipe_out;
  auto* pipe = app.add_subcommand("pipeline", "Run gen, tokenize, labels, filter, plan, decode and eval");
  pipe->add_option("--config", pipe_config, "Pipeline config JSON")->required();
  pipe->add_option("--out", pipe_out, "Output directory (overrides the config)");
  pipe->callback([&] {
    auto config = pipeline::load_config(pipe_config);
    if (!pipe_out.empty()) config.out_dir = pipe_out;
    pipeline::apply_env_overrides(config);
    const auto result = pipeline::run_pipeline(config);
    std::cout << "seed " << config.seed << ": " << result.artifacts.size() << " artifacts in "
              << config.out_dir.string() << "\n";
    const json& stages = result.summary.at("stages");
    for (const auto& [variant, r] : stages.at("eval").items()) {
      std::cout << "  " << variant << ": identity avg " << r.at("identity").at("avg").dump() << ", mock avg "
                << r.at("mock").at("avg").dump() << "\n";
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "unirec: error: " << e.what() << "\n";
    return kExitError;
  }
  return exit_code;
}
