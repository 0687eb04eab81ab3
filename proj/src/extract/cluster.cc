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

#include "batik/extract/cluster.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>

#include "batik/core/error.h"
#include "batik/core/text.h"

namespace batik::extract {

ClusterResult ClusterEntities(const embed::EmbeddingMatrix& emb,
                              const corpus::Vocabulary& vocab,
                              const corpus::UserDictionary& seeds,
                              double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InvalidArgument("cluster threshold must be in [0, 1]");
  }
  if (emb.rows() != vocab.size()) {
    throw InvalidArgument("embedding rows do not match vocabulary");
  }
  ClusterResult out;
  std::vector<int32_t> seed_ids;
  for (const auto& e : seeds.entries()) {
    if (auto id = vocab.Id(e.term)) {
      seed_ids.push_back(*id);
      out.clusters.push_back({e.term, {}, threshold});
    } else {
      out.missing_seeds.push_back(e.term);
    }
  }
  if (seed_ids.empty()) throw InvalidArgument("no seed term is in the vocabulary");

  for (size_t t = 0; t < vocab.size(); ++t) {
    const auto id = static_cast<int32_t>(t);
    if (seeds.Contains(vocab.Token(id))) continue;
    int best = -1;
    double best_sim = -2.0;
    bool tied = false;
    for (size_t s = 0; s < seed_ids.size(); ++s) {
      const double sim = embed::Cosine(emb.Input(t), emb.Input(seed_ids[s])).value;
      if (sim > best_sim) {
        best = static_cast<int>(s);
        best_sim = sim;
        tied = false;
      } else if (sim == best_sim) {
        tied = true;
        if (out.clusters[s].seed < out.clusters[best].seed) {
          best = static_cast<int>(s);
        }
      }
    }
    if (best_sim >= threshold) {
      out.clusters[best].members.push_back({vocab.Token(id), best_sim, tied});
      if (tied) out.ties.push_back(vocab.Token(id));
    } else {
      out.unassigned.push_back(vocab.Token(id));
    }
  }
  for (EntityCluster& c : out.clusters) {
    std::sort(c.members.begin(), c.members.end(),
              [](const ClusterMember& a, const ClusterMember& b) {
                if (a.similarity != b.similarity) {
                  return a.similarity > b.similarity;
                }
                return a.token < b.token;
              });
  }
  return out;
}

bool EntitySet::Add(std::string_view entity) {
  if (!index_.emplace(entity).second) return false;
  entities_.emplace_back(entity);
  return true;
}

std::string ExportReview(const ClusterResult& result) {
  std::string out = "# seed\tcandidate\tsimilarity\tkeep|drop\n";
  char buf[32];
  for (const EntityCluster& c : result.clusters) {
    for (const ClusterMember& m : c.members) {
      std::snprintf(buf, sizeof(buf), "%.6f", m.similarity);
      out += c.seed + "\t" + m.token + "\t" + buf + "\tkeep\n";
    }
  }
  return out;
}

namespace {

std::optional<ReviewRow> ParseReviewLine(std::string line, size_t line_no) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (Trim(line).empty() || line.front() == '#') return std::nullopt;
  const auto f = Split(line, '\t');
  auto fail = [&](const std::string& what) {
    return SyntaxError("review line " + std::to_string(line_no) + ": " + what);
  };
  if (f.size() != 4) throw fail("expected 4 tab-separated fields");
  ReviewRow row{f[0], f[1], std::nan(""), Mark::kKeep};
  if (f[2] != "-") {
    try {
      size_t used = 0;
      row.similarity = std::stod(f[2], &used);
      if (used != f[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw fail("bad similarity '" + f[2] + "'");
    }
  }
  if (f[3] == "keep") {
    row.mark = Mark::kKeep;
  } else if (f[3] == "drop") {
    row.mark = Mark::kDrop;
  } else {
    throw fail("mark must be keep or drop, got '" + f[3] + "'");
  }
  return row;
}

}  // namespace

std::vector<ReviewRow> ParseReview(std::string_view text) {
  std::vector<ReviewRow> rows;
  size_t line_no = 0;
  for (const std::string& raw : Split(text, '\n')) {
    if (auto row = ParseReviewLine(raw, ++line_no)) rows.push_back(std::move(*row));
  }
  return rows;
}

EntitySet ImportReview(std::string_view text,
                       const corpus::UserDictionary& seeds,
                       const corpus::Vocabulary& vocab) {
  EntitySet set;
  for (const auto& e : seeds.entries()) set.Add(e.term);
  size_t line_no = 0;
  for (const std::string& raw : Split(text, '\n')) {
    ++line_no;
    const auto parsed = ParseReviewLine(raw, line_no);
    if (!parsed) continue;
    const ReviewRow& row = *parsed;
    if (!seeds.Contains(row.seed)) {
      throw SyntaxError("review line " + std::to_string(line_no) +
                        ": unknown seed '" + row.seed + "'");
    }
    if (!vocab.Id(row.candidate)) {
      throw SyntaxError("review line " + std::to_string(line_no) +
                        ": unknown candidate '" + row.candidate + "'");
    }
    if (row.mark == Mark::kKeep) set.Add(row.candidate);
  }
  return set;
}

}  // namespace batik::extract
