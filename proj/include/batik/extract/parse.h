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

#ifndef BATIK_EXTRACT_PARSE_H_
#define BATIK_EXTRACT_PARSE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "batik/corpus/corpus.h"

namespace batik::extract {

class EntitySet;

struct ParsedToken {
  int index = 0;  // 1-based
  std::string form;
  int head = 0;  // 0 = root
  std::string deprel;

  friend bool operator==(const ParsedToken&, const ParsedToken&) = default;
};

struct ParsedSentence {
  int id = 0;  // 1-based position in the parse file
  std::vector<ParsedToken> tokens;

  friend bool operator==(const ParsedSentence&,
                         const ParsedSentence&) = default;
};

// Dependency labels accepted in parse files.
bool IsKnownDeprel(std::string_view label);

// Exactly one root, heads in range, consecutive indices, no cycles, known
// labels. Throws SyntaxError naming the sentence.
void ValidateSentence(const ParsedSentence& sentence);

// Tab-separated "index form head deprel" per token, blank line between
// sentences, '#' comment lines. Every sentence is validated.
std::vector<ParsedSentence> ParseParses(std::string_view text);
std::vector<ParsedSentence> LoadParses(const std::filesystem::path& path);
std::string FormatParses(const std::vector<ParsedSentence>& sentences);

// Forms of the sentence, in order.
corpus::Sentence Forms(const ParsedSentence& sentence);

// Minimal parser for copula sentences "X 是 ... Y": X attaches to the first
// 是 by SBV, the last entity after it by VOB, words in between modify that
// object (ATT), anything else attaches to the verb (ADV / WP for
// punctuation). Returns nothing if the sentence has no such shape.
std::optional<ParsedSentence> ParseCopula(const corpus::Sentence& tokens,
                                          const EntitySet& entities, int id);

}  // namespace batik::extract

#endif  // BATIK_EXTRACT_PARSE_H_
