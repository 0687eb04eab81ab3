// Copyright 2026 The Batik KG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "batik/extract/parse.h"

#include <algorithm>
#include <array>

#include "batik/core/error.h"
#include "batik/core/text.h"
#include "batik/extract/cluster.h"

namespace batik::extract {

namespace {

constexpr std::array<std::string_view, 15> kDeprels = {
    "SBV", "VOB", "IOB", "FOB", "DBL", "ATT", "ADV", "CMP",
    "COO", "POB", "LAD", "RAD", "IS",  "WP",  "HED"};

Error SentenceError(const ParsedSentence& s, const std::string& what) {
  return SyntaxError("parse sentence " + std::to_string(s.id) + ": " + what);
}

bool IsPunctuation(std::string_view form) {
  static constexpr std::array<std::string_view, 12> kPunct = {
      "，", "。", "、", "；", "：", "！", "？", ",", ".", ";", "!", "?"};
  return std::find(kPunct.begin(), kPunct.end(), form) != kPunct.end();
}

}  // namespace

bool IsKnownDeprel(std::string_view label) {
  return std::find(kDeprels.begin(), kDeprels.end(), label) != kDeprels.end();
}

void ValidateSentence(const ParsedSentence& s) {
  const int n = static_cast<int>(s.tokens.size());
  if (n == 0) throw SentenceError(s, "no tokens");
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const ParsedToken& t = s.tokens[i];
    if (t.index != i + 1) {
      throw SentenceError(s, "token indices must run 1.." + std::to_string(n));
    }
    if (t.form.empty()) throw SentenceError(s, "empty form");
    if (t.head < 0 || t.head > n || t.head == t.index) {
      throw SentenceError(s, "head out of range at token " +
                                 std::to_string(t.index));
    }
    if (!IsKnownDeprel(t.deprel)) {
      throw SentenceError(s, "unknown dependency label " + t.deprel);
    }
    if ((t.head == 0) != (t.deprel == "HED")) {
      throw SentenceError(s, "root must carry HED and only the root may");
    }
    roots += t.head == 0;
  }
  if (roots != 1) {
    throw SentenceError(s, "expected one root, found " + std::to_string(roots));
  }
  for (int i = 0; i < n; ++i) {
    int at = i + 1;
    for (int steps = 0; at != 0; ++steps) {
      if (steps > n) throw SentenceError(s, "cycle through token " +
                                                std::to_string(i + 1));
      at = s.tokens[at - 1].head;
    }
  }
}

std::vector<ParsedSentence> ParseParses(std::string_view text) {
  std::vector<ParsedSentence> out;
  ParsedSentence current;
  size_t line_no = 0;
  auto flush = [&] {
    if (current.tokens.empty()) return;
    current.id = static_cast<int>(out.size()) + 1;
    ValidateSentence(current);
    out.push_back(std::move(current));
    current = ParsedSentence{};
  };
  for (const std::string& raw : Split(text, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') continue;
    const auto f = Split(line, '\t');
    if (f.size() != 4) {
      throw SyntaxError("parse line " + std::to_string(line_no) +
                        ": expected index<TAB>form<TAB>head<TAB>deprel");
    }
    ParsedToken t;
    try {
      t.index = std::stoi(f[0]);
      t.head = std::stoi(f[2]);
    } catch (const std::exception&) {
      throw SyntaxError("parse line " + std::to_string(line_no) +
                        ": non-numeric index or head");
    }
    t.form = f[1];
    t.deprel = f[3];
    current.tokens.push_back(std::move(t));
  }
  flush();
  return out;
}

std::vector<ParsedSentence> LoadParses(const std::filesystem::path& path) {
  return ParseParses(ReadFile(path));
}

std::string FormatParses(const std::vector<ParsedSentence>& sentences) {
  std::string out;
  for (size_t i = 0; i < sentences.size(); ++i) {
    if (i > 0) out += '\n';
    for (const ParsedToken& t : sentences[i].tokens) {
      out += std::to_string(t.index) + "\t" + t.form + "\t" +
             std::to_string(t.head) + "\t" + t.deprel + "\n";
    }
  }
  return out;
}

corpus::Sentence Forms(const ParsedSentence& sentence) {
  corpus::Sentence out;
  for (const ParsedToken& t : sentence.tokens) out.push_back(t.form);
  return out;
}

std::optional<ParsedSentence> ParseCopula(const corpus::Sentence& tokens,
                                          const EntitySet& entities, int id) {
  const int n = static_cast<int>(tokens.size());
  int verb = -1;
  for (int i = 1; i < n; ++i) {
    if (tokens[i] == "是") {
      verb = i;
      break;
    }
  }
  if (verb < 0) return std::nullopt;
  int subject = -1;
  for (int i = verb - 1; i >= 0; --i) {
    if (entities.Contains(tokens[i])) {
      subject = i;
      break;
    }
  }
  int object = -1;
  for (int i = n - 1; i > verb; --i) {
    if (entities.Contains(tokens[i])) {
      object = i;
      break;
    }
  }
  if (subject < 0 || object < 0) return std::nullopt;
  ParsedSentence s;
  s.id = id;
  for (int i = 0; i < n; ++i) {
    ParsedToken t{i + 1, tokens[i], verb + 1, "ADV"};
    if (i == verb) {
      t.head = 0;
      t.deprel = "HED";
    } else if (i == subject) {
      t.deprel = "SBV";
    } else if (i == object) {
      t.deprel = "VOB";
    } else if (IsPunctuation(tokens[i])) {
      t.deprel = "WP";
    } else if (i > verb && i < object) {
      t.head = object + 1;
      t.deprel = "ATT";
    } else if (i < subject) {
      t.head = subject + 1;
      t.deprel = "ATT";
    }
    s.tokens.push_back(std::move(t));
  }
  ValidateSentence(s);
  return s;
}

}  // namespace batik::extract
