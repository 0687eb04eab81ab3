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

#include <cctype>
#include <map>
#include <set>

#include "batik/core/error.h"
#include "batik/core/text.h"
#include "batik/query/query.h"

namespace batik::query {

namespace {

enum class Tok {
  kIdent,
  kString,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kColon,
  kComma,
  kDot,
  kDash,
  kRArrow,  // ->
  kLArrow,  // <-
  kEq,
  kNe,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  bool quoted = false;  // backquoted identifier
  int line;
  int column;
};

bool IsIdentByte(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> Run() {
    std::vector<Token> out;
    while (true) {
      SkipSpace();
      const int line = line_;
      const int col = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::kEnd, "", false, line, col});
        return out;
      }
      const unsigned char c = static_cast<unsigned char>(src_[pos_]);
      auto single = [&](Tok k) {
        Advance();
        out.push_back({k, std::string(1, static_cast<char>(c)), false, line, col});
      };
      switch (c) {
        case '(': single(Tok::kLParen); continue;
        case ')': single(Tok::kRParen); continue;
        case '[': single(Tok::kLBracket); continue;
        case ']': single(Tok::kRBracket); continue;
        case ':': single(Tok::kColon); continue;
        case ',': single(Tok::kComma); continue;
        case '.': single(Tok::kDot); continue;
        case '=': single(Tok::kEq); continue;
        default: break;
      }
      if (c == '-') {
        Advance();
        if (Peek() == '>') {
          Advance();
          out.push_back({Tok::kRArrow, "->", false, line, col});
        } else {
          out.push_back({Tok::kDash, "-", false, line, col});
        }
        continue;
      }
      if (c == '<') {
        Advance();
        if (Peek() == '-') {
          Advance();
          out.push_back({Tok::kLArrow, "<-", false, line, col});
        } else if (Peek() == '>') {
          Advance();
          out.push_back({Tok::kNe, "<>", false, line, col});
        } else {
          throw Fail(line, col, "unexpected '<'");
        }
        continue;
      }
      if (c == '\'' || c == '"') {
        out.push_back({Tok::kString, ReadString(static_cast<char>(c), line, col),
                       false, line, col});
        continue;
      }
      if (c == '`') {
        Advance();
        std::string text;
        while (pos_ < src_.size() && src_[pos_] != '`') {
          const size_t n = Utf8SequenceLength(src_, pos_);
          text.append(src_.substr(pos_, n == 0 ? 1 : n));
          Advance();
        }
        if (pos_ >= src_.size()) throw Fail(line, col, "unterminated `identifier`");
        Advance();
        if (text.empty()) throw Fail(line, col, "empty `identifier`");
        out.push_back({Tok::kIdent, text, true, line, col});
        continue;
      }
      if (IsIdentByte(c)) {
        std::string text;
        while (pos_ < src_.size() &&
               IsIdentByte(static_cast<unsigned char>(src_[pos_])) &&
               !IsFullWidthPunct()) {
          const size_t n = Utf8SequenceLength(src_, pos_);
          text.append(src_.substr(pos_, n == 0 ? 1 : n));
          for (size_t i = 0; i < (n == 0 ? 1 : n); ++i) ++pos_;
          ++col_;
        }
        if (text.empty()) throw Fail(line, col, "unexpected character");
        out.push_back({Tok::kIdent, text, false, line, col});
        continue;
      }
      throw Fail(line, col, std::string("unexpected character '") +
                                static_cast<char>(c) + "'");
    }
  }

  static Error Fail(int line, int col, const std::string& what) {
    return SyntaxError(std::to_string(line) + ":" + std::to_string(col) +
                       ": " + what);
  }

 private:
  char Peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  // Advances one code point.
  void Advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
      ++pos_;
      return;
    }
    const size_t n = Utf8SequenceLength(src_, pos_);
    pos_ += n == 0 ? 1 : n;
    ++col_;
  }

  // Full-width punctuation that users type by habit ends an identifier.
  bool IsFullWidthPunct() const {
    const std::string_view rest = src_.substr(pos_);
    for (std::string_view p : {"，", "（", "）", "：", "。"}) {
      if (rest.substr(0, p.size()) == p) return true;
    }
    return false;
  }

  void SkipSpace() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      Advance();
    }
  }

  std::string ReadString(char quote, int line, int col) {
    Advance();
    std::string out;
    while (true) {
      if (pos_ >= src_.size()) throw Fail(line, col, "unterminated string");
      const char c = src_[pos_];
      if (c == quote) {
        Advance();
        return out;
      }
      if (c == '\\') {
        Advance();
        if (pos_ >= src_.size()) throw Fail(line, col, "unterminated string");
        const char e = src_[pos_];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '\\': out += '\\'; break;
          case '\'': out += '\''; break;
          case '"': out += '"'; break;
          default:
            throw Fail(line_, col_, std::string("bad escape \\") + e);
        }
        Advance();
        continue;
      }
      const size_t n = Utf8SequenceLength(src_, pos_);
      out.append(src_.substr(pos_, n == 0 ? 1 : n));
      Advance();
    }
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

std::string Upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool IsKeyword(const Token& t) {
  if (t.kind != Tok::kIdent || t.quoted) return false;
  const std::string u = Upper(t.text);
  return u == "MATCH" || u == "WHERE" || u == "RETURN" || u == "AND" ||
         u == "CONTAINS";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Query Run() {
    Query q;
    ExpectKeyword("MATCH");
    q.nodes.push_back(ParseNode());
    while (At(Tok::kDash) || At(Tok::kLArrow)) {
      q.edges.push_back(ParseEdge());
      q.nodes.push_back(ParseNode());
    }
    if (AtKeyword("WHERE")) {
      Next();
      q.where.push_back(ParseCondition());
      while (AtKeyword("AND")) {
        Next();
        q.where.push_back(ParseCondition());
      }
    }
    ExpectKeyword("RETURN");
    q.returns.push_back(ParseReturnItem());
    while (At(Tok::kComma)) {
      Next();
      q.returns.push_back(ParseReturnItem());
    }
    if (!At(Tok::kEnd)) throw Unexpected("end of query");
    Bind(q);
    return q;
  }

 private:
  const Token& Cur() const { return toks_[pos_]; }
  bool At(Tok k) const { return Cur().kind == k; }
  bool AtKeyword(std::string_view kw) const {
    return IsKeyword(Cur()) && Upper(Cur().text) == kw;
  }
  const Token& Next() { return toks_[pos_++]; }

  Error Unexpected(const std::string& wanted) const {
    const Token& t = Cur();
    const std::string got = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    return Lexer::Fail(t.line, t.column, "expected " + wanted + ", got " + got);
  }

  const Token& Expect(Tok k, const std::string& what) {
    if (!At(k)) throw Unexpected(what);
    return Next();
  }

  void ExpectKeyword(std::string_view kw) {
    if (!AtKeyword(kw)) throw Unexpected(std::string(kw));
    Next();
  }

  std::string ParseVariableOpt() {
    if (At(Tok::kIdent) && !IsKeyword(Cur())) {
      positions_.push_back({Cur().line, Cur().column});
      return Next().text;
    }
    positions_.push_back({Cur().line, Cur().column});
    return "";
  }

  std::string ParseLabelOpt() {
    if (!At(Tok::kColon)) return "";
    Next();
    if (!At(Tok::kIdent)) throw Unexpected("label");
    return Next().text;
  }

  NodePattern ParseNode() {
    Expect(Tok::kLParen, "'('");
    NodePattern n;
    n.var = ParseVariableOpt();
    n.label = ParseLabelOpt();
    Expect(Tok::kRParen, "')'");
    return n;
  }

  EdgePattern ParseEdge() {
    EdgePattern e;
    const bool left = At(Tok::kLArrow);
    Next();
    Expect(Tok::kLBracket, "'['");
    e.var = ParseVariableOpt();
    e.label = ParseLabelOpt();
    Expect(Tok::kRBracket, "']'");
    if (left) {
      Expect(Tok::kDash, "'-'");
      e.direction = EdgeDirection::kLeft;
    } else {
      Expect(Tok::kRArrow, "'->'");
      e.direction = EdgeDirection::kRight;
    }
    return e;
  }

  Condition ParseCondition() {
    Condition c;
    const Token& v = Expect(Tok::kIdent, "variable");
    uses_.push_back({v.text, v.line, v.column});
    c.var = v.text;
    Expect(Tok::kDot, "'.'");
    const Token& p = Expect(Tok::kIdent, "property");
    c.property = p.text;
    prop_uses_.push_back({v.text, p.text, p.line, p.column});
    if (At(Tok::kEq)) {
      Next();
      c.op = Comparator::kEq;
    } else if (At(Tok::kNe)) {
      Next();
      c.op = Comparator::kNe;
    } else if (AtKeyword("CONTAINS")) {
      Next();
      c.op = Comparator::kContains;
    } else {
      throw Unexpected("'=', '<>' or CONTAINS");
    }
    c.literal = Expect(Tok::kString, "string literal").text;
    return c;
  }

  std::string ParseReturnItem() {
    if (!At(Tok::kIdent) || IsKeyword(Cur())) throw Unexpected("variable");
    const Token& v = Next();
    uses_.push_back({v.text, v.line, v.column});
    return v.text;
  }

  struct Use {
    std::string var;
    int line;
    int column;
  };
  struct PropUse {
    std::string var;
    std::string property;
    int line;
    int column;
  };

  void Bind(const Query& q) {
    // positions_ holds one entry per pattern element in source order:
    // node0, edge0, node1, ...
    std::map<std::string, bool> is_edge;
    for (size_t i = 0; i < positions_.size(); ++i) {
      const bool edge = i % 2 == 1;
      const std::string& var = edge ? q.edges[i / 2].var : q.nodes[i / 2].var;
      if (var.empty()) continue;
      auto [it, fresh] = is_edge.emplace(var, edge);
      if (!fresh && (edge || it->second)) {
        throw Lexer::Fail(positions_[i].first, positions_[i].second,
                          "variable " + var + " bound twice" +
                              (edge || it->second ? " (edge variables must be unique)" : ""));
      }
    }
    for (const Use& u : uses_) {
      if (!is_edge.contains(u.var)) {
        throw Lexer::Fail(u.line, u.column, "unbound variable " + u.var);
      }
    }
    for (const PropUse& p : prop_uses_) {
      const bool edge = is_edge.at(p.var);
      const bool ok = p.property == "name" || (!edge && p.property == "concept");
      if (!ok) {
        throw Lexer::Fail(p.line, p.column,
                          "unknown property " + p.var + "." + p.property);
      }
    }
    std::set<std::string> seen;
    for (const std::string& r : q.returns) {
      if (!seen.insert(r).second) {
        throw SyntaxError("duplicate return item " + r);
      }
    }
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::vector<std::pair<int, int>> positions_;
  std::vector<Use> uses_;
  std::vector<PropUse> prop_uses_;
};

bool PrintsAsIdent(std::string_view s) {
  if (s.empty()) return false;
  for (unsigned char c : s) {
    if (!IsIdentByte(c)) return false;
  }
  const std::string u = Upper(s);
  if (u == "MATCH" || u == "WHERE" || u == "RETURN" || u == "AND" ||
      u == "CONTAINS") {
    return false;
  }
  // Must survive the lexer unchanged (full-width punctuation splits).
  for (std::string_view p : {"，", "（", "）", "：", "。"}) {
    if (s.find(p) != std::string_view::npos) return false;
  }
  return true;
}

std::string Ident(std::string_view s) {
  return PrintsAsIdent(s) ? std::string(s) : "`" + std::string(s) + "`";
}

std::string Quote(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\'': out += "\\'"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "'";
}

std::string PrintElement(const std::string& var, const std::string& label) {
  std::string out = var.empty() ? "" : Ident(var);
  if (!label.empty()) out += ":" + Ident(label);
  return out;
}

}  // namespace

Query Parse(std::string_view text) {
  if (!IsValidUtf8(text)) throw SyntaxError("1:1: query is not valid UTF-8");
  return Parser(Lexer(text).Run()).Run();
}

std::string Print(const Query& q) {
  std::string out = "MATCH ";
  for (size_t i = 0; i < q.nodes.size(); ++i) {
    if (i > 0) {
      const EdgePattern& e = q.edges[i - 1];
      const std::string body = "[" + PrintElement(e.var, e.label) + "]";
      out += e.direction == EdgeDirection::kRight ? "-" + body + "->"
                                                  : "<-" + body + "-";
    }
    out += "(" + PrintElement(q.nodes[i].var, q.nodes[i].label) + ")";
  }
  for (size_t i = 0; i < q.where.size(); ++i) {
    const Condition& c = q.where[i];
    out += i == 0 ? " WHERE " : " AND ";
    out += Ident(c.var) + "." + Ident(c.property);
    switch (c.op) {
      case Comparator::kEq: out += " = "; break;
      case Comparator::kNe: out += " <> "; break;
      case Comparator::kContains: out += " CONTAINS "; break;
    }
    out += Quote(c.literal);
  }
  out += " RETURN ";
  for (size_t i = 0; i < q.returns.size(); ++i) {
    if (i > 0) out += ", ";
    out += Ident(q.returns[i]);
  }
  return out;
}

}  // namespace batik::query
