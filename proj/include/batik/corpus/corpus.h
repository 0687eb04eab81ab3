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

#ifndef BATIK_CORPUS_CORPUS_H_
#define BATIK_CORPUS_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace batik::corpus {

// Term list used both as segmentation lexicon and as the seed list for
// entity clustering. Priority is the position of first appearance.
class UserDictionary {
 public:
  struct Entry {
    std::string term;
    int priority = 0;
  };

  // Returns false (and leaves the dictionary unchanged) for duplicates.
  // Throws on empty or malformed terms.
  bool Add(std::string_view term);

  // Appends every term of `other` not already present.
  void Merge(const UserDictionary& other);

  bool Contains(std::string_view term) const;
  std::optional<int> Priority(std::string_view term) const;

  const std::vector<Entry>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  size_t max_term_code_points() const { return max_code_points_; }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, int> index_;
  size_t max_code_points_ = 0;
};

struct DictionaryLoad {
  UserDictionary dictionary;
  std::vector<std::string> duplicates;
};

// One term per line; blank lines and lines starting with '#' are skipped.
// Throws IoError for unreadable files or malformed UTF-8.
DictionaryLoad LoadDictionary(const std::filesystem::path& path);

using Sentence = std::vector<std::string>;
using TokenSeq = std::vector<Sentence>;

// Greedy left-to-right longest dictionary match. Spans no dictionary term
// starts in fall back to single code points for non-ASCII text and to
// whitespace-delimited runs for ASCII text. Whitespace separates tokens and
// is dropped; newlines end sentences. Empty sentences are omitted.
TokenSeq Tokenize(std::string_view text, const UserDictionary& dict);

// Tokenizes a corpus file, one sentence per line.
TokenSeq TokenizeFile(const std::filesystem::path& path,
                      const UserDictionary& dict);

class Vocabulary {
 public:
  Vocabulary() = default;

  // Ids are assigned by descending count, ties by byte order of the token.
  static Vocabulary Build(const TokenSeq& corpus, int64_t min_count);

  // Rebuilds from explicit (token, count) rows in id order.
  static Vocabulary FromCounts(
      std::vector<std::pair<std::string, int64_t>> rows, int64_t total_count,
      int64_t min_count);

  std::optional<int32_t> Id(std::string_view token) const;
  const std::string& Token(int32_t id) const { return tokens_[id]; }
  int64_t Count(int32_t id) const { return counts_[id]; }

  size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  // Token count of the corpus before min-count filtering.
  int64_t total_count() const { return total_count_; }
  int64_t min_count() const { return min_count_; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<int64_t>& counts() const { return counts_; }

  // "token\tcount" lines preceded by a "#total\t<T>\t<min_count>" header.
  std::string Serialize() const;
  static Vocabulary Parse(std::string_view text);

 private:
  std::vector<std::string> tokens_;
  std::vector<int64_t> counts_;
  std::unordered_map<std::string, int32_t> ids_;
  int64_t total_count_ = 0;
  int64_t min_count_ = 1;
};

// Probability of keeping a token of relative frequency count/total:
// min(1, sqrt(sample / f)).
double KeepProbability(int64_t count, int64_t total, double sample);

// Randomly drops frequent tokens. Unknown tokens pass through unchanged and
// consume no random draws. Sentences left empty are removed.
TokenSeq Subsample(const TokenSeq& corpus, const Vocabulary& vocab,
                   double sample, uint64_t seed);

// Space-joined sentences, one per line.
std::string FormatTokens(const TokenSeq& seq);
TokenSeq ParseTokens(std::string_view text);

}  // namespace batik::corpus

#endif  // BATIK_CORPUS_CORPUS_H_
