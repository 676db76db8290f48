#include "unirec/corpus/generator.hpp"

#include <array>
#include <cmath>
#include <string_view>

#include "unirec/core/error.hpp"

namespace unirec::corpus {

using nlohmann::json;

namespace {

// "sum", "left", "right", "fraction", "infinity" share stems with LaTeX
// commands, which is what separates the coupled and decoupled tokenizers.
constexpr std::array<std::string_view, 64> kEnglish{
    "the",      "sum",       "of",        "left",     "right",    "fraction", "infinity", "value",
    "model",    "data",      "paper",     "we",       "show",     "that",     "each",     "term",
    "is",       "bounded",   "by",        "a",        "constant", "for",      "all",      "large",
    "and",      "small",     "inputs",    "table",    "results",  "method",   "line",     "page",
    "text",     "formula",   "number",    "section",  "figure",   "where",    "then",     "with",
    "series",   "limit",     "integral",  "function", "equation", "proof",    "theorem",  "let",
    "report",   "market",    "growth",    "price",    "year",     "total",    "over",     "under",
    "student",  "answer",    "question",  "note",     "study",    "level",    "given",    "across",
};

constexpr std::array<std::string_view, 48> kChinese{
    "我们", "模型", "数据", "文本", "公式", "识别", "结果", "方法", "表格", "段落", "文档", "问题",
    "答案", "学生", "考试", "报告", "市场", "增长", "价格", "年度", "总计", "函数", "方程", "证明",
    "定理", "极限", "积分", "求和", "左边", "右边", "分数", "无穷", "研究", "笔记", "书籍", "杂志",
    "新闻", "教材", "文学", "页面", "章节", "图表", "数值", "常数", "给定", "每个", "所有", "输入",
};

constexpr std::array<std::string_view, 12> kGreek{
    "\\alpha", "\\beta", "\\gamma", "\\delta", "\\epsilon", "\\theta",
    "\\lambda", "\\mu",  "\\pi",    "\\sigma", "\\phi",     "\\omega",
};

constexpr std::array<std::string_view, 10> kVariables{"x", "y", "z", "a", "b", "n", "k", "i", "t", "f(x)"};

std::string atom(Rng& rng) {
  switch (rng.below(4)) {
    case 0: return std::string(rng.pick(kGreek));
    case 1: return std::to_string(rng.below(100));
    default: return std::string(rng.pick(kVariables));
  }
}

void check_range(const IntRange& r, std::string_view name) {
  if (r.lo < 1 || r.hi < r.lo) {
    throw Error("profile: invalid " + std::string(name) + " range [" + std::to_string(r.lo) + ", " +
                std::to_string(r.hi) + "]");
  }
}

int draw(Rng& rng, const IntRange& r) { return static_cast<int>(rng.between(r.lo, r.hi)); }

std::string text_body(Rng& rng, Language lang, int words) {
  std::string out;
  for (int w = 0; w < words; ++w) {
    if (lang == Language::CH) {
      out += rng.pick(kChinese);
    } else {
      if (w > 0) out += ' ';
      out += rng.pick(kEnglish);
    }
  }
  return out;
}

std::string wrap_formula(Rng& rng, const std::string& body) {
  const auto r = rng.below(10);
  if (r < 7) return "$" + body + "$";
  if (r < 9) return "\\(" + body + "\\)";
  return "\\[" + body + "\\]";
}

IntRange range_from(const json& j, IntRange fallback) {
  if (j.is_null()) return fallback;
  if (j.is_number_integer()) {
    const int v = j.get<int>();
    return {v, v};
  }
  return {j.at(0).get<int>(), j.at(1).get<int>()};
}

}  // namespace

std::string generate_formula(Rng& rng, int depth) {
  if (depth <= 0) return atom(rng);
  const int d = depth - 1;
  // Each draw is its own statement: operand order of a + chain is unspecified.
  switch (rng.below(9)) {
    case 0: {
      const std::string num = generate_formula(rng, d);
      const std::string den = generate_formula(rng, d);
      return "\\frac{" + num + "}{" + den + "}";
    }
    case 1: {
      const std::string index(rng.pick(kVariables).substr(0, 1));
      const std::string body = generate_formula(rng, d);
      return "\\sum_{" + index + "=1}^{n} " + body;
    }
    case 2:
    case 3: {
      const std::string base = atom(rng);
      const std::string script = generate_formula(rng, d);
      return base + (rng.below(2) == 0 ? "^{" : "_{") + script + "}";
    }
    case 4: return "\\left( " + generate_formula(rng, d) + " \\right)";
    case 5: return "\\sqrt{" + generate_formula(rng, d) + "}";
    case 6: return "\\int_{0}^{\\infty} " + generate_formula(rng, d) + " dx";
    case 7: {
      const std::string lhs = generate_formula(rng, d);
      const std::string rhs = generate_formula(rng, d);
      return lhs + " + " + rhs;
    }
    default: {
      const std::string lhs = generate_formula(rng, d);
      return lhs + " = " + atom(rng);
    }
  }
}

void validate(const GeneratorProfile& profile) {
  check_range(profile.paragraphs, "paragraphs");
  check_range(profile.lines, "lines");
  check_range(profile.spans, "spans");
  check_range(profile.words, "words");
  if (!(profile.formula_density >= 0.0 && profile.formula_density <= 1.0)) {
    throw Error("profile: formula density must lie in [0, 1]");
  }
  if (profile.domains.empty()) throw Error("profile: no domains");
}

hst::StructuredDocument generate_document(std::uint64_t seed, const GeneratorProfile& profile) {
  validate(profile);
  Rng rng(seed);
  hst::StructuredDocument doc;
  doc.language = profile.language;
  doc.domain = rng.pick(profile.domains);

  const int paragraphs = draw(rng, profile.paragraphs);
  for (int p = 0; p < paragraphs; ++p) {
    hst::Paragraph para;
    const int lines = draw(rng, profile.lines);
    for (int l = 0; l < lines; ++l) {
      hst::Line line;
      const int spans = draw(rng, profile.spans);
      for (int s = 0; s < spans; ++s) {
        if (rng.bernoulli(profile.formula_density)) {
          line.push_back({SpanKind::Formula, wrap_formula(rng, generate_formula(rng, static_cast<int>(rng.below(3))))});
          continue;
        }
        Language lang = profile.language;
        if (lang == Language::Mix) lang = rng.below(2) == 0 ? Language::EN : Language::CH;
        line.push_back({SpanKind::Text, text_body(rng, lang, draw(rng, profile.words))});
      }
      // Separate text from an adjacent formula the way running prose does.
      for (std::size_t s = 0; s + 1 < line.size(); ++s) {
        if (line[s].kind == SpanKind::Text && line[s + 1].kind == SpanKind::Formula) line[s].content += ' ';
        if (line[s].kind == SpanKind::Formula && line[s + 1].kind == SpanKind::Text) {
          line[s + 1].content.insert(0, " ");
        }
      }
      para.push_back(std::move(line));
    }
    doc.paragraphs.push_back(std::move(para));
  }
  return doc;
}

json to_json(const GeneratorProfile& profile) {
  json domains = json::array();
  for (Domain d : profile.domains) domains.push_back(tag_name(d));
  const auto range = [](const IntRange& r) { return json::array({r.lo, r.hi}); };
  return json{{"paragraphs", range(profile.paragraphs)},
              {"lines", range(profile.lines)},
              {"spans", range(profile.spans)},
              {"words", range(profile.words)},
              {"formula_density", profile.formula_density},
              {"language", tag_name(profile.language)},
              {"domains", std::move(domains)}};
}

GeneratorProfile profile_from_json(const json& j) {
  try {
    GeneratorProfile p;
    p.paragraphs = range_from(j.value("paragraphs", json()), p.paragraphs);
    p.lines = range_from(j.value("lines", json()), p.lines);
    p.spans = range_from(j.value("spans", json()), p.spans);
    p.words = range_from(j.value("words", json()), p.words);
    p.formula_density = j.value("formula_density", p.formula_density);
    if (j.contains("language")) {
      const auto lang = parse_language(j["language"].get<std::string>());
      if (!lang) throw Error("profile: unknown language '" + j["language"].get<std::string>() + "'");
      p.language = *lang;
    }
    if (j.contains("domains")) {
      p.domains.clear();
      for (const json& d : j["domains"]) {
        const auto dom = parse_domain(d.get<std::string>());
        if (!dom) throw Error("profile: unknown domain '" + d.get<std::string>() + "'");
        p.domains.push_back(*dom);
      }
    }
    validate(p);
    return p;
  } catch (const json::exception& e) {
    throw Error(std::string("profile json: ") + e.what());
  }
}

}  // namespace unirec::corpus
