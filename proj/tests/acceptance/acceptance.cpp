// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "unirec/core/io.hpp"
#include "unirec/core/rng.hpp"
#include "unirec/core/utf8.hpp"
#include "unirec/corpus/generator.hpp"
#include "unirec/corpus/sampler.hpp"
#include "unirec/decode/geometry.hpp"
#include "unirec/decode/greedy.hpp"
#include "unirec/decode/scorer.hpp"
#include "unirec/eval/edit_distance.hpp"
#include "unirec/eval/report.hpp"
#include "unirec/hst/codec.hpp"
#include "unirec/pipeline/pipeline.hpp"
#include "unirec/sdt/bpe.hpp"
#include "unirec/sdt/specials.hpp"
#include "unirec/sdt/vocabulary.hpp"

namespace fs = std::filesystem;
using namespace unirec;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

std::size_t count(std::string_view hay, std::string_view needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string_view::npos; p = hay.find(needle, p + needle.size())) ++n;
  return n;
}

corpus::GeneratorProfile mixed_profile() {
  corpus::GeneratorProfile p;
  p.paragraphs = {1, 4};
  p.lines = {1, 4};
  p.formula_density = 0.4;
  p.language = Language::Mix;
  return p;
}

Outcome sdt_round_trip() {
  const auto t0 = Clock::now();
  const auto profile = mixed_profile();
  std::vector<std::string> text_corpus;
  std::vector<std::string> formula_corpus;
  for (std::uint64_t i = 0; i < 200; ++i) {
    for (const auto& para : corpus::generate_document(mix_seed(1, i), profile).paragraphs) {
      for (const auto& line : para) {
        for (const auto& span : line) {
          (span.kind == SpanKind::Formula ? formula_corpus : text_corpus).push_back(span.content);
        }
      }
    }
  }
  const auto vocab = sdt::merge_decoupled(sdt::train_bpe(text_corpus, 600, sdt::TokenModality::Text),
                                          sdt::train_bpe(formula_corpus, 400, sdt::TokenModality::Formula));
  std::size_t ok = 0;
  constexpr std::size_t kLabels = 1000;
  for (std::uint64_t i = 0; i < kLabels; ++i) {
    const std::string label = hst::encode_hst(corpus::generate_document(mix_seed(2, i), profile));
    ok += vocab.decode(vocab.encode(label)) == label ? 1 : 0;
  }
  const double s = seconds_since(t0);
  return {ok == kLabels && s < 10.0,
          std::to_string(ok) + "/" + std::to_string(kLabels) + " byte-exact in " + fmt_seconds(s) +
              " including tokenizer training (limit 10s)"};
}

Outcome decoupling() {
  std::vector<std::string> text_corpus;
  std::vector<std::string> formula_corpus;
  for (int i = 0; i < 30; ++i) {
    for (const char* line : {"sum of the terms", "left side", "frac part", "infty in prose"}) {
      text_corpus.emplace_back(line);
    }
    formula_corpus.push_back("$\\sum_{i=1}^{\\infty} \\left( \\frac{a_i}{b} \\right)$");
  }
  const auto text = sdt::train_bpe(text_corpus, 400, sdt::TokenModality::Text);
  const auto formula = sdt::train_bpe(formula_corpus, 400, sdt::TokenModality::Formula);
  const auto vocab = sdt::merge_decoupled(text, formula);
  std::set<sdt::TokenId> text_ids;
  for (const auto& e : text.vocab()) text_ids.insert(e.id);
  std::size_t disjoint = 0;
  for (const char* cmd : {"\\sum", "\\infty", "\\left", "\\frac", "\\right"}) {
    const auto id = vocab.find(cmd);
    if (id && !text_ids.contains(*id) && vocab.entries()[*id].modality == sdt::TokenModality::Formula) ++disjoint;
  }
  std::size_t stems = 0;
  for (const char* stem : {"sum", "infty", "left", "frac"}) stems += text.find(stem) ? 1 : 0;
  const auto report = sdt::modality_overlap_report(text, formula);
  std::vector<std::string> surfaces;
  for (const auto& r : report) surfaces.push_back(r.surface);
  const bool equal = surfaces == vocab.excluded();
  return {disjoint == 5 && stems == 4 && equal,
          std::to_string(disjoint) + "/5 commands on formula-only ids, " + std::to_string(stems) +
              "/4 stems in text vocab, overlap report " + (equal ? "==" : "!=") + " excluded (" +
              std::to_string(surfaces.size()) + " surfaces)"};
}

Outcome merge_cardinality() {
  Rng rng(3);
  std::size_t deviations = 0;
  constexpr int kPairs = 100;
  for (int trial = 0; trial < kPairs; ++trial) {
    std::vector<std::string> t;
    std::vector<std::string> f;
    const auto pool = 5 + rng.below(60);
    for (std::uint64_t k = 0; k < pool; ++k) {
      std::string s = "s" + std::to_string(k);
      if (rng.below(40) == 0) s = std::string(sdt::kReservedSpecials[rng.below(5)]);
      if (rng.below(2) == 0 && std::find(t.begin(), t.end(), s) == t.end()) t.push_back(s);
      if (rng.below(2) == 0 && std::find(f.begin(), f.end(), s) == f.end()) f.push_back(s);
    }
    std::set<std::string> oracle(t.begin(), t.end());
    oracle.insert(f.begin(), f.end());
    for (auto s : sdt::kReservedSpecials) oracle.emplace(s);
    const auto v = sdt::merge_decoupled(sdt::BpeModel(sdt::TokenModality::Text, t, {}, t),
                                        sdt::BpeModel(sdt::TokenModality::Formula, f, {}, f));
    deviations += v.size() == oracle.size() ? 0 : 1;
  }
  return {deviations == 0, std::to_string(deviations) + " deviations over " + std::to_string(kPairs) + " pairs"};
}

Outcome hst_codec() {
  auto profile = mixed_profile();
  profile.paragraphs = {1, 8};
  profile.lines = {1, 6};
  std::size_t ok = 0;
  constexpr std::uint64_t kDocs = 500;
  for (std::uint64_t i = 0; i < kDocs; ++i) {
    const auto doc = corpus::generate_document(mix_seed(4, i), profile);
    const std::string label = hst::encode_hst(doc);
    std::string expected;
    for (std::size_t p = 0; p < doc.paragraphs.size(); ++p) {
      if (p > 0) expected += "\n\n";
      for (const auto& line : doc.paragraphs[p]) expected += hst::join_line(line);
    }
    const bool good = count(label, sdt::kLineBreak) == hst::total_lines(doc) - doc.paragraphs.size() &&
                      count(label, sdt::kParagraphEnd) == doc.paragraphs.size() &&
                      hst::decode_hst(label) == expected;
    ok += good ? 1 : 0;
  }
  return {ok == kDocs, std::to_string(ok) + "/" + std::to_string(kDocs) + " documents"};
}

Outcome sampler() {
  const auto sources = corpus::unirec40m_sources(1000);
  const auto plan = corpus::plan_epoch(sources, 2025);
  std::size_t exact = 0;
  bool lsvt = false;
  bool en = false;
  for (const auto& s : plan.sources) {
    exact += s.total() == s.epoch_target ? 1 : 0;
    if (s.name == "LSVT") {
      lsvt = s.pool_size == 260 && s.epoch_target == 1300 && s.entries.size() == 260 &&
             std::all_of(s.entries.begin(), s.entries.end(), [](const auto& e) { return e.count == 5; });
    }
    if (s.name == "En-Text") {
      std::set<std::uint64_t> distinct;
      for (const auto& e : s.entries) distinct.insert(e.item);
      en = s.pool_size == 9050 && distinct.size() == 1680 && s.total() == 1680;
    }
  }
  return {plan.sources.size() == 15 && exact == 15 && lsvt && en,
          std::string("LSVT 260->1300 x5 ") + (lsvt ? "ok" : "wrong") + ", En-Text 9050->1680 distinct " +
              (en ? "ok" : "wrong") + ", " + std::to_string(exact) + "/15 sources sum to target"};
}

std::string random_mixed(Rng& rng, std::size_t max_len) {
  static const char32_t kAlphabet[] = {U'a', U'b', U'c', U'x', U' ', U'数', U'学', U'公', U'式', U'é'};
  std::string out;
  const auto len = rng.below(max_len + 1);
  for (std::uint64_t i = 0; i < len; ++i) utf8::append(out, kAlphabet[rng.below(std::size(kAlphabet))]);
  return out;
}

std::size_t dp_distance(std::string_view a, std::string_view b) {
  const std::u32string x = utf8::decode(a);
  const std::u32string y = utf8::decode(b);
  std::vector<std::size_t> prev(y.size() + 1);
  std::vector<std::size_t> cur(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[y.size()];
}

Outcome edit_distance() {
  Rng rng(6);
  std::size_t dp_fail = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::string a = random_mixed(rng, 64);
    const std::string b = random_mixed(rng, 64);
    dp_fail += eval::levenshtein(a, b) == dp_distance(a, b) ? 0 : 1;
  }
  std::size_t axiom_fail = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::string a = random_mixed(rng, 24);
    const std::string b = random_mixed(rng, 24);
    const std::string c = random_mixed(rng, 24);
    const auto ab = eval::levenshtein(a, b);
    const bool ok = eval::levenshtein(a, a) == 0 && (ab == 0) == (a == b) && ab == eval::levenshtein(b, a) &&
                    eval::levenshtein(a, c) <= ab + eval::levenshtein(b, c);
    axiom_fail += ok ? 0 : 1;
  }
  const bool kitten = eval::normalized_ed("kitten", "sitting") == 3.0 / 7.0;
  return {dp_fail == 0 && axiom_fail == 0 && kitten,
          std::to_string(dp_fail) + " DP mismatches, " + std::to_string(axiom_fail) +
              " axiom violations, kitten/sitting " + (kitten ? "== 3/7" : "!= 3/7")};
}

Outcome eval_fixture() {
  const fs::path data(UNIREC_TEST_DATA_DIR);
  auto parsed = eval::parse_eval_records(io::read_file(data / "eval_fixture.jsonl"));
  const std::string golden = io::read_file(data / "eval_fixture.golden.json");
  const std::string json = eval::render_report(eval::evaluate(parsed.records, eval::ScoreMode::Hst, parsed.rejected),
                                               eval::ReportFormat::Json);
  Rng rng(7);
  std::size_t shuffled_ok = 0;
  for (int i = 0; i < 100; ++i) {
    rng.shuffle(parsed.records);
    shuffled_ok += eval::render_report(eval::evaluate(parsed.records, eval::ScoreMode::Hst, parsed.rejected),
                                       eval::ReportFormat::Json) == golden
                       ? 1
                       : 0;
  }
  return {parsed.records.size() == 6 && json == golden && shuffled_ok == 100,
          std::string("golden ") + (json == golden ? "byte-exact" : "differs") + ", " + std::to_string(shuffled_ok) +
              "/100 shuffles identical"};
}

Outcome geometry() {
  const auto g = decode::fit_geometry(2816, 1920);
  const bool example = g.scaled_h == 1408 && g.scaled_w == 960 && g.tokens == 1320;
  Rng rng(8);
  std::size_t bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto h = rng.between(1, 20000);
    const auto w = rng.between(1, 20000);
    const auto s = decode::fit_geometry(h, w);
    const bool ok = s.scaled_h <= h && s.scaled_w <= w && s.padded_h <= decode::kMaxHeight &&
                    s.padded_w <= decode::kMaxWidth && s.padded_h % 32 == 0 && s.padded_w % 32 == 0 &&
                    s.tokens == (s.padded_h / 32) * (s.padded_w / 32);
    bad += ok ? 0 : 1;
  }
  return {example && bad == 0, "(2816,1920) -> (" + std::to_string(g.scaled_h) + "," + std::to_string(g.scaled_w) +
                                   ") N=" + std::to_string(g.tokens) + ", " + std::to_string(bad) +
                                   " invariant violations on 10000 sizes"};
}

class NeverEos final : public decode::NextTokenScorer {
 public:
  explicit NeverEos(std::size_t v) : v_(v) {}
  std::size_t vocab_size() const override { return v_; }
  void score(std::span<const sdt::TokenId>, const decode::DecodeContext&, std::vector<double>& out) const override {
    out.assign(v_, 0.0);
    out['a'] = 1.0;
  }

 private:
  std::size_t v_;
};

Outcome greedy() {
  const auto vocab = sdt::DecoupledVocabulary::coupled(sdt::BpeModel::byte_level(sdt::TokenModality::Text, {}));
  decode::NgramScorer trigram(vocab.size(), 3);
  const std::vector<std::vector<sdt::TokenId>> train{vocab.encode("abc")};
  trigram.fit(train);
  const auto out = decode::greedy_decode(trigram, vocab);
  const bool reproduces = out == train[0];
  const auto budget = decode::greedy_decode(NeverEos(vocab.size()), vocab).size();
  const std::vector<std::vector<double>> one_hot{{0, 1, 0}, {0, 0, 1}};
  const std::vector<sdt::TokenId> targets{1, 2};
  const auto loss = decode::sequence_loss(one_hot, targets);
  const bool zero = loss.value == 0.0 && !loss.infinite;
  return {reproduces && budget == 1024 && zero,
          std::string("3-gram decodes '") + vocab.decode(out) + "', never-EOS length " + std::to_string(budget) +
              ", one-hot loss " + (zero ? "0" : "nonzero")};
}

struct PipelineRuns {
  bool ran = false;
  std::string error;
  pipeline::PipelineResult a;
  fs::path dir_a;
  fs::path dir_b;
  std::vector<fs::path> artifacts_b;
  double seconds = 0;
};

PipelineRuns run_demo_twice(const fs::path& workdir) {
  PipelineRuns r;
  const auto t0 = Clock::now();
  try {
    pipeline::PipelineConfig cfg = pipeline::load_config(fs::path(UNIREC_CONFIG_DIR) / "demo_pipeline.json");
    r.dir_a = workdir / "run_a";
    r.dir_b = workdir / "run_b";
    fs::remove_all(r.dir_a);
    fs::remove_all(r.dir_b);
    cfg.out_dir = r.dir_a;
    r.a = pipeline::run_pipeline(cfg);
    cfg.out_dir = r.dir_b;
    r.artifacts_b = pipeline::run_pipeline(cfg).artifacts;
    r.ran = true;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = seconds_since(t0);
  return r;
}

Outcome ablation(const PipelineRuns& runs) {
  if (!runs.ran) return {false, "pipeline failed: " + runs.error};
  const auto& eval = runs.a.summary.at("stages").at("eval");
  std::string detail;
  bool ok = true;
  for (const char* variant : {"full", "no_hst", "no_sdt"}) {
    const bool has = eval.contains(variant) && fs::exists(runs.dir_a / "labels" / (std::string(variant) + ".jsonl"));
    const auto& id = has ? eval.at(variant).at("identity") : nlohmann::json();
    const bool zero = has && id.at("avg") == 0.0 && id.at("rejected") == 0 && id.at("records").get<int>() > 0;
    ok = ok && zero;
    detail += std::string(detail.empty() ? "" : ", ") + variant + " identity " +
              (has ? id.at("avg").dump() : std::string("missing"));
  }
  return {ok, detail};
}

Outcome determinism(const PipelineRuns& runs) {
  if (!runs.ran) return {false, "pipeline failed: " + runs.error};
  std::size_t identical = 0;
  for (const auto& rel : runs.a.artifacts) {
    if (io::read_file(runs.dir_a / rel) == io::read_file(runs.dir_b / rel)) ++identical;
  }
  const bool same_set = runs.a.artifacts == runs.artifacts_b;
  const bool ok = same_set && identical == runs.a.artifacts.size() && runs.seconds < 60.0;
  return {ok, std::to_string(identical) + "/" + std::to_string(runs.a.artifacts.size()) +
                  " artifacts byte-identical, two runs in " + fmt_seconds(runs.seconds) + " (limit 60s)"};
}

}  // namespace

int main(int argc, char** argv) {
  fs::path workdir = fs::temp_directory_path() / "unirec_acceptance";
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--workdir") == 0 && i + 1 < argc) {
      workdir = argv[++i];
    } else {
      std::cerr << "usage: unirec_acceptance [--workdir DIR]\n";
      return 64;
    }
  }
  fs::create_directories(workdir);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"SDT round-trip", sdt_round_trip},
      {"decoupling", decoupling},
      {"merge cardinality", merge_cardinality},
      {"HST codec", hst_codec},
      {"sampler composition", sampler},
      {"edit distance", edit_distance},
      {"evaluation fixture", eval_fixture},
      {"geometry", geometry},
      {"greedy decode", greedy},
  };
  int failed = 0;
  int n = 0;
  const auto report = [&](const std::string& name, const std::function<Outcome()>& check) {
    ++n;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << n << ". " << name << ": " << o.detail << std::endl;
  };
  for (const auto& [name, check] : criteria) report(name, check);
  const PipelineRuns runs = run_demo_twice(workdir);
  report("ablation plumbing", [&] { return ablation(runs); });
  report("end-to-end determinism", [&] { return determinism(runs); });
  std::cout << (n - failed) << "/" << n << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
