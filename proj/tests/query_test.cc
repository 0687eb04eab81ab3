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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include <json.hpp>

#include "batik/core/random.h"
#include "batik/core/text.h"
#include "batik/query/query.h"
#include "query_oracle.h"
#include "test_util.h"

namespace batik::query {
namespace {

using kg::GraphStore;
using testing::BatikSchema;
using testing::ThrownKind;
using testing::Oracle;
using testing::RandomEvalQuery;
using testing::RandomQuery;
using testing::RandomStore;

TEST(ParseTest, BelongToQuery) {
  const Query q = Parse("MATCH (n)-[r:属于]->(m) RETURN n, r, m");
  ASSERT_EQ(q.nodes.size(), 2u);
  ASSERT_EQ(q.edges.size(), 1u);
  EXPECT_EQ(q.edges[0].label, "属于");
  EXPECT_EQ(q.edges[0].var, "r");
  EXPECT_EQ(q.edges[0].direction, EdgeDirection::kRight);
  EXPECT_EQ(q.returns, (std::vector<std::string>{"n", "r", "m"}));
}

TEST(ParseTest, MinimalQuery) {
  const Query q = Parse("MATCH (n) RETURN n");
  EXPECT_EQ(q.nodes.size(), 1u);
  EXPECT_TRUE(q.edges.empty());
  EXPECT_EQ(q.returns, std::vector<std::string>{"n"});
}

TEST(ParseTest, UnboundReturnVariableIsNamed) {
  std::string msg;
  EXPECT_EQ(ThrownKind([] { Parse("MATCH (n)-[r]->(m) RETURN x"); }, &msg),
            ErrorKind::kSyntax);
  EXPECT_NE(msg.find("x"), std::string::npos);
  EXPECT_NE(msg.find("1:27"), std::string::npos) << msg;
}

TEST(ParseTest, UnboundWhereVariable) {
  std::string msg;
  EXPECT_EQ(ThrownKind([] {
              Parse("MATCH (n)\nWHERE q.name = 'a' RETURN n");
            }, &msg),
            ErrorKind::kSyntax);
  EXPECT_NE(msg.find("2:7"), std::string::npos) << msg;
}

TEST(ParseTest, ErrorsCarryLineAndColumn) {
  std::string msg;
  ThrownKind([] { Parse("MATCH (n:纹样\nRETURN n"); }, &msg);
  EXPECT_NE(msg.find("2:1"), std::string::npos) << msg;
  ThrownKind([] { Parse("MATCH (n)-[r]-(m) RETURN n"); }, &msg);
  EXPECT_NE(msg.find("1:14"), std::string::npos) << msg;
  ThrownKind([] { Parse("MATCH (n) WHERE n.name = 'x RETURN n"); }, &msg);
  EXPECT_NE(msg.find("unterminated"), std::string::npos) << msg;
  EXPECT_EQ(ThrownKind([] { Parse("MATCH (n) WHERE n.color = 'x' RETURN n"); }),
            ErrorKind::kSyntax);
  EXPECT_EQ(ThrownKind([] { Parse("MATCH (n)-[r]->(m) WHERE r.concept = 'x' RETURN r"); }),
            ErrorKind::kSyntax);
  EXPECT_EQ(ThrownKind([] { Parse("MATCH (n)-[n]->(m) RETURN n"); }),
            ErrorKind::kSyntax);
  EXPECT_EQ(ThrownKind([] { Parse("MATCH (n) RETURN n, n"); }), ErrorKind::kSyntax);
  EXPECT_EQ(ThrownKind([] { Parse("MATCH (n) RETURN"); }), ErrorKind::kSyntax);
  EXPECT_EQ(ThrownKind([] { Parse(""); }), ErrorKind::kSyntax);
}

TEST(ParseTest, KeywordsCaseInsensitiveAndLeftEdges) {
  const Query q = Parse(
      "match (p:纹样)<-[:同义]-(s) where s.name contains \"蝴蝶\" and "
      "p.concept <> 'Meaning' return p, s");
  EXPECT_EQ(q.edges[0].direction, EdgeDirection::kLeft);
  EXPECT_EQ(q.edges[0].var, "");
  ASSERT_EQ(q.where.size(), 2u);
  EXPECT_EQ(q.where[0].op, Comparator::kContains);
  EXPECT_EQ(q.where[1].op, Comparator::kNe);
  EXPECT_EQ(q.where[1].literal, "Meaning");
}

TEST(ParseTest, RepeatedNodeVariableAllowed) {
  const Query q = Parse("MATCH (a)-[r]->(b)-[s]->(a) RETURN a, b");
  EXPECT_EQ(q.nodes[0].var, q.nodes[2].var);
}

TEST(ParsePropertyTest, PrintParseRoundTrip) {
  for (uint64_t seed = 1; seed <= 2000; ++seed) {
    Rng rng(seed);
    const Query q = RandomQuery(rng);
    const std::string text = Print(q);
    Query back;
    ASSERT_NO_THROW(back = Parse(text)) << text;
    EXPECT_EQ(back, q) << text;
    EXPECT_EQ(Print(back), text);
  }
}

// The worked graph: a few belong-to edges plus meanings and synonyms.
GraphStore FixtureStore() {
  GraphStore g(BatikSchema());
  g.InsertEdge("鸟纹", "属于", "动物纹");
  g.InsertEdge("鱼纹", "属于", "动物纹");
  g.InsertEdge("石榴纹", "属于", "植物纹");
  g.InsertEdge("蝴蝶纹", "属于", "动物纹");
  g.InsertEdge("蝴蝶纹", "蕴含", "敬重祖先");
  g.InsertEdge("鱼纹", "蕴含", "子嗣绵延");
  g.InsertEdge("石榴纹", "蕴含", "子嗣绵延");
  g.InsertEdge("蝴蝶纹", "同义", "蝴蝶妈妈");
  g.InsertEdge("鱼纹", "崇拜", "生殖崇拜");
  return g;
}

TEST(EvaluateTest, BelongToReturnsEveryBelongToEdge) {
  const GraphStore g = FixtureStore();
  const auto t = Evaluate(Parse("MATCH (n)-[r:属于]->(m) RETURN n, r, m"), g);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"n", "r", "m"}));
  ASSERT_EQ(t.rows.size(), g.EdgesOfRelation("属于").size());
  std::set<kg::EdgeId> edges;
  for (const auto& row : t.rows) {
    const kg::Edge& e = g.edge(row[1].id);
    EXPECT_EQ(e.relation, "属于");
    EXPECT_EQ(e.source, row[0].id);
    EXPECT_EQ(e.target, row[2].id);
    edges.insert(e.id);
  }
  EXPECT_EQ(edges.size(), t.rows.size());
  EXPECT_TRUE(std::is_sorted(t.rows.begin(), t.rows.end()));
}

TEST(EvaluateTest, AliasesResolveInLabelsAndLiterals) {
  const GraphStore g = FixtureStore();
  const auto a = Evaluate(Parse("MATCH (n)-[r:属于]->(m) RETURN n, r, m"), g);
  const auto b = Evaluate(Parse("MATCH (n:Pattern)-[r:`Belong to`]->(m) RETURN n, r, m"), g);
  EXPECT_EQ(a, b);
  const auto c = Evaluate(
      Parse("MATCH (n)-[r]->(m) WHERE r.name = 'Mean' AND m.concept = 'Meaning' RETURN n"),
      g);
  EXPECT_EQ(c.rows.size(), 3u);
}

TEST(EvaluateTest, UnusedDeclaredLabelGivesEmptyNotError) {
  const auto t = Evaluate(Parse("MATCH (n)-[r:父女]->(m) RETURN n"), FixtureStore());
  EXPECT_TRUE(t.rows.empty());
  EXPECT_EQ(t.columns, std::vector<std::string>{"n"});
}

TEST(EvaluateTest, UndeclaredLabelIsSchemaError) {
  const GraphStore g = FixtureStore();
  EXPECT_EQ(ThrownKind([&] { Evaluate(Parse("MATCH (n)-[r:喜欢]->(m) RETURN n"), g); }),
            ErrorKind::kSchema);
  EXPECT_EQ(ThrownKind([&] { Evaluate(Parse("MATCH (n:Colour) RETURN n"), g); }),
            ErrorKind::kSchema);
}

TEST(EvaluateTest, MeaningSearch) {
  const GraphStore g = FixtureStore();
  const auto t = Evaluate(
      Parse("MATCH (p:纹样)-[r:蕴含]->(m:寓意) WHERE m.name = '子嗣绵延' RETURN p"), g);
  ASSERT_EQ(t.rows.size(), 2u);
  std::set<std::string> names;
  for (const auto& row : t.rows) names.insert(CellText(row[0], g));
  EXPECT_EQ(names, (std::set<std::string>{"石榴纹", "鱼纹"}));
}

TEST(EvaluateTest, ProjectionDeduplicates) {
  const auto t = Evaluate(Parse("MATCH (n)-[:属于]->(m) RETURN m"), FixtureStore());
  EXPECT_EQ(t.rows.size(), 2u);
}

TEST(EvaluateTest, HomomorphismLetsVariablesShareANode) {
  GraphStore g(BatikSchema());
  g.InsertEdge("a", "同义", "b");
  g.InsertEdge("b", "同义", "a");
  g.InsertEdge("c", "同义", "c");
  // x and z may coincide; the two edges must differ.
  const auto t = Evaluate(Parse("MATCH (x)-[e]->(y)-[f]->(z) RETURN x, z"), g);
  std::set<std::pair<std::string, std::string>> got;
  for (const auto& row : t.rows) got.emplace(CellText(row[0], g), CellText(row[1], g));
  EXPECT_EQ(got, (std::set<std::pair<std::string, std::string>>{{"a", "a"}, {"b", "b"}}));
  const auto cyc = Evaluate(Parse("MATCH (x)-[e]->(y)-[f]->(x) RETURN x, y"), g);
  EXPECT_EQ(cyc.rows.size(), 2u);
}

TEST(EvaluatePropertyTest, MatchesAllAssignmentsOracle) {
  size_t nonempty = 0;
  for (uint64_t seed = 1; seed <= 600; ++seed) {
    Rng rng(seed);
    const GraphStore g = RandomStore(rng);
    ASSERT_LE(g.node_count(), 20u);
    for (int j = 0; j < 5; ++j) {
      const Query q = RandomEvalQuery(rng);
      const auto got = Evaluate(q, g);
      ASSERT_EQ(got, Oracle(q, g)) << Print(q) << " seed " << seed;
      nonempty += !got.rows.empty();
    }
  }
  EXPECT_GT(nonempty, 500u);
}

TEST(EvaluateTest, TwoHopEqualsDoubleLoopOverEdges) {
  GraphStore g(BatikSchema());
  g.InsertEdge("p0", "属于", "p1");
  g.InsertEdge("p1", "属于", "p2");
  g.InsertEdge("p1", "同义", "p3");
  g.InsertEdge("p3", "属于", "p4");
  g.InsertEdge("p2", "属于", "p4");
  g.InsertEdge("p0", "同义", "p3");
  ASSERT_EQ(g.node_count(), 5u);
  const auto t = Evaluate(Parse("MATCH (a)-[r]->(b)-[s]->(c) RETURN a, r, b, s, c"), g);
  std::set<std::vector<Cell>> want;
  for (const auto& e1 : g.edges()) {
    for (const auto& e2 : g.edges()) {
      if (e1.id == e2.id || e1.target != e2.source) continue;
      want.insert({{Cell::Kind::kNode, e1.source}, {Cell::Kind::kEdge, e1.id},
                   {Cell::Kind::kNode, e1.target}, {Cell::Kind::kEdge, e2.id},
                   {Cell::Kind::kNode, e2.target}});
    }
  }
  EXPECT_EQ(t.rows, std::vector<std::vector<Cell>>(want.begin(), want.end()));
  EXPECT_EQ(t.rows.size(), 5u);
}

// With every variable returned, filtering inside evaluation equals
// filtering the sorted unfiltered table.
TEST(EvaluatePropertyTest, FilterCommutesWithOrdering) {
  for (uint64_t seed = 1; seed <= 200; ++seed) {
    Rng rng(seed);
    const GraphStore g = RandomStore(rng);
    Query q = RandomEvalQuery(rng);
    q.returns.clear();
    for (const auto& n : q.nodes) {
      if (!n.var.empty() &&
          std::find(q.returns.begin(), q.returns.end(), n.var) == q.returns.end()) {
        q.returns.push_back(n.var);
      }
    }
    for (const auto& e : q.edges) {
      if (!e.var.empty()) q.returns.push_back(e.var);
    }
    Query unfiltered = q;
    unfiltered.where.clear();
    const auto all = Evaluate(unfiltered, g);
    const auto filtered = Evaluate(q, g);
    BindingTable manual{all.columns, {}};
    for (const auto& row : all.rows) {
      bool keep = true;
      for (const Condition& c : q.where) {
        const size_t col = std::find(q.returns.begin(), q.returns.end(), c.var) -
                           q.returns.begin();
        const Cell cell = row[col];
        const std::string value =
            cell.kind == Cell::Kind::kEdge ? g.edge(cell.id).relation
            : c.property == "concept"      ? g.node(cell.id).concept_name
                                           : g.node(cell.id).name;
        std::string lit = c.literal;
        if (c.op != Comparator::kContains) {
          if (cell.kind == Cell::Kind::kEdge) {
            lit = g.schema().ResolveRelation(lit).value_or(lit);
          } else if (c.property == "concept") {
            lit = g.schema().ResolveConcept(lit).value_or(lit);
          }
        }
        keep = keep && (c.op == Comparator::kEq   ? value == lit
                        : c.op == Comparator::kNe ? value != lit
                                                  : value.find(lit) != std::string::npos);
      }
      if (keep) manual.rows.push_back(row);
    }
    EXPECT_EQ(filtered, manual) << Print(q);
  }
}

TEST(FormatTest, EmptyTableIsHeaderOnly) {
  const GraphStore g = FixtureStore();
  const BindingTable t{{"n", "m"}, {}};
  EXPECT_EQ(Format(t, g, Style::kTsv), "n\tm\n");
  const std::string aligned = Format(t, g, Style::kAligned);
  EXPECT_EQ(aligned.rfind("n | m\n", 0), 0u);
  EXPECT_NE(aligned.find("(0 rows)"), std::string::npos);
  const auto j = nlohmann::json::parse(Format(t, g, Style::kJson));
  EXPECT_TRUE(j.at("rows").empty());
}

TEST(FormatTest, OneRowIsOneDataLine) {
  const GraphStore g = FixtureStore();
  const auto t = Evaluate(
      Parse("MATCH (n)-[r:同义]->(m) RETURN n, r, m"), g);
  ASSERT_EQ(t.rows.size(), 1u);
  const std::string tsv = Format(t, g, Style::kTsv);
  EXPECT_EQ(tsv, "n\tr\tm\n蝴蝶纹\t同义\t蝴蝶妈妈\n");
  const auto lines = Split(Format(t, g, Style::kAligned), '\n');
  EXPECT_EQ(lines[2], "蝴蝶纹 | 同义 | 蝴蝶妈妈");
}

TEST(FormatTest, TsvRoundTripsAwkwardValues) {
  GraphStore g(BatikSchema());
  const std::vector<std::string> names = {"with space", "tab\there", "new\nline",
                                          "back\\slash", "  padded  "};
  for (const auto& n : names) g.UpsertNode(n, "纹样");
  const auto t = Evaluate(Parse("MATCH (n) RETURN n"), g);
  const auto parsed = ParseTsv(Format(t, g, Style::kTsv));
  ASSERT_EQ(parsed.size(), names.size() + 1);
  for (size_t i = 0; i < names.size(); ++i) EXPECT_EQ(parsed[i + 1][0], names[i]);
}

TEST(FormatTest, JsonIsLossless) {
  const GraphStore g = FixtureStore();
  const auto t = Evaluate(Parse("MATCH (n)-[r]->(m) RETURN n, r, m"), g);
  const auto j = nlohmann::json::parse(Format(t, g, Style::kJson));
  ASSERT_EQ(j.at("rows").size(), t.rows.size());
  for (size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_EQ(j["rows"][i]["n"]["id"].get<int64_t>(), t.rows[i][0].id);
    EXPECT_EQ(j["rows"][i]["r"]["relation"], g.edge(t.rows[i][1].id).relation);
  }
}

TEST(FormatTest, AlignedTruncatesWithEllipsis) {
  GraphStore g(BatikSchema());
  g.UpsertNode("非常非常非常非常长的纹样名称", "纹样");
  g.UpsertNode("short", "纹样");
  const auto t = Evaluate(Parse("MATCH (n) RETURN n"), g);
  const auto lines = Split(Format(t, g, Style::kAligned, 10), '\n');
  EXPECT_EQ(lines[2], "非常非常…");
  EXPECT_LE(DisplayWidth(lines[2]), 10u);
  EXPECT_EQ(lines[3], "short");
}

}  // namespace
}  // namespace batik::query
