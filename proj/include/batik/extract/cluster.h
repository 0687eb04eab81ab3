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

#ifndef BATIK_EXTRACT_CLUSTER_H_
#define BATIK_EXTRACT_CLUSTER_H_

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "batik/corpus/corpus.h"
#include "batik/embed/word2vec.h"

namespace batik::extract {

inline constexpr double kDefaultClusterThreshold = 0.5;

struct ClusterMember {
  std::string token;
  double similarity = 0.0;
  // Another seed had exactly the same similarity.
  bool tied = false;
};

struct EntityCluster {
  std::string seed;
  // Descending similarity, ties by token byte order.
  std::vector<ClusterMember> members;
  double threshold = kDefaultClusterThreshold;
};

struct ClusterResult {
  // One cluster per usable seed, in dictionary order.
  std::vector<EntityCluster> clusters;
  // Non-seed tokens below threshold for every seed, in vocabulary order.
  std::vector<std::string> unassigned;
  // Seeds absent from the vocabulary.
  std::vector<std::string> missing_seeds;
  // Tokens whose best similarity was shared by several seeds; they go to the
  // byte-order-first of those seeds.
  std::vector<std::string> ties;
};

// Assigns every non-seed vocabulary token to its most similar seed (cosine
// over input vectors) if that similarity reaches `threshold`. Throws when no
// seed is in the vocabulary or the threshold is outside [0, 1].
ClusterResult ClusterEntities(const embed::EmbeddingMatrix& emb,
                              const corpus::Vocabulary& vocab,
                              const corpus::UserDictionary& seeds,
                              double threshold = kDefaultClusterThreshold);

// Curated entity list, order of first appearance, no duplicates.
class EntitySet {
 public:
  bool Add(std::string_view entity);
  bool Contains(std::string_view entity) const {
    return index_.contains(std::string(entity));
  }
  const std::vector<std::string>& entities() const { return entities_; }
  size_t size() const { return entities_.size(); }

 private:
  std::vector<std::string> entities_;
  std::unordered_set<std::string> index_;
};

enum class Mark { kKeep, kDrop };

struct ReviewRow {
  std::string seed;
  std::string candidate;
  // NaN for rows added by hand ("-" in the file).
  double similarity;
  Mark mark;
};

// Tab-separated "seed candidate similarity keep|drop", one row per cluster
// member, marked keep. Lines starting with '#' are comments.
std::string ExportReview(const ClusterResult& result);

std::vector<ReviewRow> ParseReview(std::string_view text);

// Entity set = every seed, then kept candidates in file order. Rows may add
// vocabulary tokens that no cluster proposed. A seed not in the dictionary
// or a candidate not in the vocabulary is a SyntaxError naming the line.
EntitySet ImportReview(std::string_view text,
                       const corpus::UserDictionary& seeds,
                       const corpus::Vocabulary& vocab);

}  // namespace batik::extract

#endif  // BATIK_EXTRACT_CLUSTER_H_
