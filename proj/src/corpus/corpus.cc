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

#include "batik/corpus/corpus.h"

#include <algorithm>
#include <cmath>

#include "batik/core/error.h"
#include "batik/core/random.h"
#include "batik/core/text.h"

namespace batik::corpus {

bool UserDictionary::Add(std::string_view term) {
  if (term.empty()) throw InvalidArgument("empty dictionary term");
  if (!IsValidUtf8(term)) throw IoError("malformed UTF-8 in dictionary term");
  if (index_.contains(std::string(term))) return false;
  const int priority = static_cast<int>(entries_.size());
  entries_.push_back({std::string(term), priority});
  index_.emplace(std::string(term), priority);
  max_code_points_ = std::max(max_code_points_, CountCodePoints(term));
  return true;
}

void UserDictionary::Merge(const UserDictionary& other) {
  for (const Entry& e : other.entries()) Add(e.term);
}

bool UserDictionary::Contains(std::string_view term) const {
  return index_.contains(std::string(term));
}

std::optional<int> UserDictionary::Priority(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

DictionaryLoad LoadDictionary(const std::filesystem::path& path) {
  DictionaryLoad out;
  for (const std::string& raw : ReadLines(path)) {
    const std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!out.dictionary.Add(line)) out.duplicates.emplace_back(line);
  }
  return out;
}

namespace {

bool IsAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
}

// Byte length of the longest dictionary term starting at text[pos], 0 if
// none does.
size_t LongestMatch(std::string_view text, size_t pos,
                    const UserDictionary& dict) {
  if (dict.empty()) return 0;
  std::vector<size_t> ends;
  size_t p = pos;
  for (size_t cp = 0; cp < dict.max_term_code_points() && p < text.size();
       ++cp) {
    if (text[p] == '\n') break;
    const size_t n = Utf8SequenceLength(text, p);
    if (n == 0) break;
    p += n;
    ends.push_back(p);
  }
  for (auto it = ends.rbegin(); it != ends.rend(); ++it) {
    if (dict.Contains(text.substr(pos, *it - pos))) return *it - pos;
  }
  return 0;
}

void TokenizeLine(std::string_view line, const UserDictionary& dict,
                  Sentence& out) {
  size_t i = 0;
  while (i < line.size()) {
    if (IsAsciiSpace(line[i])) {
      ++i;
      continue;
    }
    if (const size_t m = LongestMatch(line, i, dict); m > 0) {
      out.emplace_back(line.substr(i, m));
      i += m;
      continue;
    }
    const unsigned char c = static_cast<unsigned char>(line[i]);
    if (c < 0x80) {
      size_t j = i + 1;
      while (j < line.size() && static_cast<unsigned char>(line[j]) < 0x80 &&
             !IsAsciiSpace(line[j]) && LongestMatch(line, j, dict) == 0) {
        ++j;
      }
      out.emplace_back(line.substr(i, j - i));
      i = j;
      continue;
    }
    const size_t n = Utf8SequenceLength(line, i);
    if (n == 0) throw InvalidArgument("tokenize: malformed UTF-8 input");
    out.emplace_back(line.substr(i, n));
    i += n;
  }
}

}  // namespace

TokenSeq Tokenize(std::string_view text, const UserDictionary& dict) {
  if (!IsValidUtf8(text)) throw InvalidArgument("tokenize: malformed UTF-8");
  TokenSeq seq;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    Sentence sentence;
    TokenizeLine(text.substr(start, end - start), dict, sentence);
    if (!sentence.empty()) seq.push_back(std::move(sentence));
    start = end + 1;
  }
  return seq;
}

TokenSeq TokenizeFile(const std::filesystem::path& path,
                      const UserDictionary& dict) {
  TokenSeq seq;
  for (const std::string& line : ReadLines(path)) {
    Sentence sentence;
    TokenizeLine(line, dict, sentence);
    if (!sentence.empty()) seq.push_back(std::move(sentence));
  }
  return seq;
}

Vocabulary Vocabulary::Build(const TokenSeq& corpus, int64_t min_count) {
  if (min_count < 1) throw InvalidArgument("min_count must be >= 1");
  std::unordered_map<std::string, int64_t> counts;
  int64_t total = 0;
  for (const Sentence& s : corpus) {
    for (const std::string& t : s) {
      ++counts[t];
      ++total;
    }
  }
  std::vector<std::pair<std::string, int64_t>> rows;
  for (auto& [token, count] : counts) {
    if (count >= min_count) rows.emplace_back(token, count);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return FromCounts(std::move(rows), total, min_count);
}

Vocabulary Vocabulary::FromCounts(
    std::vector<std::pair<std::string, int64_t>> rows, int64_t total_count,
    int64_t min_count) {
  Vocabulary v;
  v.total_count_ = total_count;
  v.min_count_ = min_count;
  for (auto& [token, count] : rows) {
    if (count < min_count) {
      throw InvalidArgument("vocabulary count below min_count: " + token);
    }
    const auto id = static_cast<int32_t>(v.tokens_.size());
    if (!v.ids_.emplace(token, id).second) {
      throw InvalidArgument("duplicate vocabulary token: " + token);
    }
    v.tokens_.push_back(std::move(token));
    v.counts_.push_back(count);
  }
  return v;
}

std::optional<int32_t> Vocabulary::Id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::string Vocabulary::Serialize() const {
  std::string out = "#total\t" + std::to_string(total_count_) + "\t" +
                    std::to_string(min_count_) + "\n";
  for (size_t i = 0; i < tokens_.size(); ++i) {
    out += tokens_[i] + "\t" + std::to_string(counts_[i]) + "\n";
  }
  return out;
}

Vocabulary Vocabulary::Parse(std::string_view text) {
  std::vector<std::pair<std::string, int64_t>> rows;
  int64_t total = 0;
  int64_t min_count = 1;
  bool header = false;
  size_t line_no = 0;
  for (const std::string& line : Split(text, '\n')) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = Split(line, '\t');
    try {
      if (f[0] == "#total" && f.size() == 3) {
        total = std::stoll(f[1]);
        min_count = std::stoll(f[2]);
        header = true;
        continue;
      }
      if (f.size() != 2) throw std::invalid_argument("field count");
      rows.emplace_back(f[0], std::stoll(f[1]));
    } catch (const std::exception&) {
      throw SyntaxError("vocabulary line " + std::to_string(line_no) +
                        ": expected token<TAB>count");
    }
  }
  if (!header) throw SyntaxError("vocabulary: missing #total header");
  return FromCounts(std::move(rows), total, min_count);
}

double KeepProbability(int64_t count, int64_t total, double sample) {
  if (count <= 0 || total <= 0) return 1.0;
  const double f = static_cast<double>(count) / static_cast<double>(total);
  if (f <= sample) return 1.0;
  return std::min(1.0, std::sqrt(sample / f));
}

TokenSeq Subsample(const TokenSeq& corpus, const Vocabulary& vocab,
                   double sample, uint64_t seed) {
  if (!(sample > 0.0 && sample <= 1.0)) {
    throw InvalidArgument("sample must be in (0, 1]");
  }
  std::vector<double> keep(vocab.size());
  for (size_t i = 0; i < vocab.size(); ++i) {
    keep[i] = KeepProbability(vocab.Count(static_cast<int32_t>(i)),
                              vocab.total_count(), sample);
  }
  Rng rng(seed);
  TokenSeq out;
  for (const Sentence& s : corpus) {
    Sentence kept;
    for (const std::string& t : s) {
      const auto id = vocab.Id(t);
      if (!id || keep[*id] >= 1.0 || rng.Uniform() < keep[*id]) {
        kept.push_back(t);
      }
    }
    if (!kept.empty()) out.push_back(std::move(kept));
  }
  return out;
}

std::string FormatTokens(const TokenSeq& seq) {
  std::string out;
  for (const Sentence& s : seq) {
    for (size_t i = 0; i < s.size(); ++i) {
      if (i > 0) out += ' ';
      out += s[i];
    }
    out += '\n';
  }
  return out;
}

TokenSeq ParseTokens(std::string_view text) {
  TokenSeq seq;
  for (const std::string& line : Split(text, '\n')) {
    Sentence s = SplitFields(line);
    if (!s.empty()) seq.push_back(std::move(s));
  }
  return seq;
}

}  // namespace batik::corpus
