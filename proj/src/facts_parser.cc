// Copyright 2026 The dglbf Authors
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
// -----------------------------------------------------------------------------

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "raw_facts.h"

namespace dglbf::internal {
namespace {

enum class TokenKind {
  kIdentifier,
  kNumber,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kComma,
  kPeriod,
  kEnd,
};

struct Token {
  TokenKind kind;
  absl::string_view text;
  int line;
  int column;
};

absl::string_view KindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::kIdentifier:
      return "identifier";
    case TokenKind::kNumber:
      return "number";
    case TokenKind::kLParen:
      return "'('";
    case TokenKind::kRParen:
      return "')'";
    case TokenKind::kLBracket:
      return "'['";
    case TokenKind::kRBracket:
      return "']'";
    case TokenKind::kComma:
      return "','";
    case TokenKind::kPeriod:
      return "'.'";
    case TokenKind::kEnd:
      return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  Lexer(absl::string_view source_name, absl::string_view text)
      : source_name_(source_name), text_(text) {}

  absl::Status Next(Token& token) {
    SkipBlanks();
    token.line = line_;
    token.column = column_;
    if (pos_ >= text_.size()) {
      token.kind = TokenKind::kEnd;
      token.text = {};
      return absl::OkStatus();
    }
    const char c = text_[pos_];
    const size_t start = pos_;
    auto single = [&](TokenKind kind) {
      Advance();
      token.kind = kind;
      token.text = text_.substr(start, 1);
      return absl::OkStatus();
    };
    switch (c) {
      case '(':
        return single(TokenKind::kLParen);
      case ')':
        return single(TokenKind::kRParen);
      case '[':
        return single(TokenKind::kLBracket);
      case ']':
        return single(TokenKind::kRBracket);
      case ',':
        return single(TokenKind::kComma);
      case '.':
        return single(TokenKind::kPeriod);
      default:
        break;
    }
    if (c >= 'a' && c <= 'z') {
      while (pos_ < text_.size() && IsIdentChar(text_[pos_])) Advance();
      token.kind = TokenKind::kIdentifier;
      token.text = text_.substr(start, pos_ - start);
      return absl::OkStatus();
    }
    if (c == '-' || IsDigit(c)) {
      if (c == '-') Advance();
      if (!ConsumeDigits()) return Error(token, "malformed number");
      // A '.' is a decimal point only when a digit follows; otherwise it
      // terminates the clause.
      if (Peek(0) == '.' && IsDigit(Peek(1))) {
        Advance();
        ConsumeDigits();
      }
      if (Peek(0) == 'e' || Peek(0) == 'E') {
        const size_t save_pos = pos_;
        const int save_col = column_;
        Advance();
        if (Peek(0) == '+' || Peek(0) == '-') Advance();
        if (!ConsumeDigits()) {
          pos_ = save_pos;
          column_ = save_col;
        }
      }
      token.kind = TokenKind::kNumber;
      token.text = text_.substr(start, pos_ - start);
      return absl::OkStatus();
    }
    return Error(token, absl::StrCat("unexpected character '",
                                     std::string(1, c), "'"));
  }

  absl::Status Error(const Token& at, absl::string_view message) const {
    return absl::InvalidArgumentError(absl::StrCat(
        source_name_, ":", at.line, ":", at.column, ": ", message));
  }

 private:
  static bool IsDigit(char c) { return c >= '0' && c <= '9'; }
  static bool IsIdentChar(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  char Peek(size_t offset) const {
    return pos_ + offset < text_.size() ? text_[pos_ + offset] : '\0';
  }

  void Advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  bool ConsumeDigits() {
    const size_t start = pos_;
    while (pos_ < text_.size() && IsDigit(text_[pos_])) Advance();
    return pos_ > start;
  }

  void SkipBlanks() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') Advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        Advance();
      } else {
        break;
      }
    }
  }

  absl::string_view source_name_;
  absl::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

// One clause argument: identifier, number or list of identifiers.
struct Argument {
  Token token;
  std::variant<std::string, double, std::vector<std::string>> value;
  bool integral = false;
};

struct Clause {
  Token head;
  std::vector<Argument> args;
};

class FactsParser {
 public:
  FactsParser(absl::string_view source_name, absl::string_view text)
      : source_name_(source_name), lexer_(source_name, text) {}

  absl::Status Run(RawFacts& out) {
    if (absl::Status s = Advance(); !s.ok()) return s;
    while (current_.kind != TokenKind::kEnd) {
      Clause clause;
      if (absl::Status s = ParseClause(clause); !s.ok()) return s;
      if (absl::Status s = Store(clause, out); !s.ok()) return s;
    }
    return absl::OkStatus();
  }

 private:
  absl::Status Advance() { return lexer_.Next(current_); }

  absl::Status Expect(TokenKind kind) {
    if (current_.kind != kind) {
      return lexer_.Error(current_, absl::StrCat("expected ", KindName(kind),
                                                 ", found ",
                                                 KindName(current_.kind)));
    }
    return Advance();
  }

  absl::Status ParseClause(Clause& clause) {
    if (current_.kind != TokenKind::kIdentifier) {
      return lexer_.Error(current_, absl::StrCat("expected fact name, found ",
                                                 KindName(current_.kind)));
    }
    clause.head = current_;
    if (absl::Status s = Advance(); !s.ok()) return s;
    if (absl::Status s = Expect(TokenKind::kLParen); !s.ok()) return s;
    while (true) {
      Argument arg;
      if (absl::Status s = ParseArgument(arg); !s.ok()) return s;
      clause.args.push_back(std::move(arg));
      if (current_.kind == TokenKind::kComma) {
        if (absl::Status s = Advance(); !s.ok()) return s;
        continue;
      }
      break;
    }
    if (absl::Status s = Expect(TokenKind::kRParen); !s.ok()) return s;
    return Expect(TokenKind::kPeriod);
  }

  absl::Status ParseArgument(Argument& arg) {
    arg.token = current_;
    switch (current_.kind) {
      case TokenKind::kIdentifier:
        arg.value = std::string(current_.text);
        return Advance();
      case TokenKind::kNumber: {
        double value = 0;
        const char* first = current_.text.data();
        const char* last = first + current_.text.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
          return lexer_.Error(current_, "number out of range");
        }
        arg.value = value;
        arg.integral =
            current_.text.find_first_of(".eE") == absl::string_view::npos;
        return Advance();
      }
      case TokenKind::kLBracket: {
        if (absl::Status s = Advance(); !s.ok()) return s;
        std::vector<std::string> items;
        if (current_.kind != TokenKind::kRBracket) {
          while (true) {
            if (current_.kind != TokenKind::kIdentifier) {
              return lexer_.Error(
                  current_, absl::StrCat("expected identifier in list, found ",
                                         KindName(current_.kind)));
            }
            items.emplace_back(current_.text);
            if (absl::Status s = Advance(); !s.ok()) return s;
            if (current_.kind == TokenKind::kComma) {
              if (absl::Status s = Advance(); !s.ok()) return s;
              continue;
            }
            break;
          }
        }
        arg.value = std::move(items);
        return Expect(TokenKind::kRBracket);
      }
      default:
        return lexer_.Error(current_, absl::StrCat("expected argument, found ",
                                                   KindName(current_.kind)));
    }
  }

  absl::Status Id(const Argument& arg, std::string& out) {
    if (const auto* s = std::get_if<std::string>(&arg.value)) {
      out = *s;
      return absl::OkStatus();
    }
    return lexer_.Error(arg.token, "expected identifier");
  }

  absl::Status Num(const Argument& arg, double& out) {
    if (const auto* d = std::get_if<double>(&arg.value)) {
      out = *d;
      return absl::OkStatus();
    }
    return lexer_.Error(arg.token, "expected number");
  }

  absl::Status Int(const Argument& arg, int& out) {
    const auto* d = std::get_if<double>(&arg.value);
    if (d == nullptr || !arg.integral || std::abs(*d) > 1e9) {
      return lexer_.Error(arg.token, "expected integer");
    }
    out = static_cast<int>(*d);
    return absl::OkStatus();
  }

  absl::Status List(const Argument& arg, std::vector<std::string>& out) {
    if (const auto* l = std::get_if<std::vector<std::string>>(&arg.value)) {
      out = *l;
      return absl::OkStatus();
    }
    return lexer_.Error(arg.token, "expected list of identifiers");
  }

  absl::Status Arity(const Clause& clause, size_t expected) {
    if (clause.args.size() != expected) {
      return lexer_.Error(
          clause.head,
          absl::StrCat(clause.head.text, "/", clause.args.size(),
                       " is not a known fact; expected ", clause.head.text,
                       "/", expected));
    }
    return absl::OkStatus();
  }

  std::string Location(const Token& token) const {
    return absl::StrCat(source_name_, ":", token.line);
  }

  absl::Status Store(const Clause& c, RawFacts& out) {
    const absl::string_view name = c.head.text;
    const auto& a = c.args;
    absl::Status s;
    if (name == "node") {
      if (s = Arity(c, 2); !s.ok()) return s;
      Node node;
      if (s = Id(a[0], node.id); !s.ok()) return s;
      if (s = Num(a[1], node.d_proc); !s.ok()) return s;
      out.nodes.push_back(std::move(node));
      out.node_locations.push_back(Location(c.head));
    } else if (name == "link") {
      if (s = Arity(c, 5); !s.ok()) return s;
      Link link;
      if (s = Id(a[0], link.src); !s.ok()) return s;
      if (s = Id(a[1], link.dst); !s.ok()) return s;
      if (s = Num(a[2], link.d_prop); !s.ok()) return s;
      if (s = Num(a[3], link.bandwidth); !s.ok()) return s;
      if (s = Num(a[4], link.reliability); !s.ok()) return s;
      out.links.push_back(std::move(link));
      out.link_locations.push_back(Location(c.head));
    } else if (name == "flow") {
      if (s = Arity(c, 3); !s.ok()) return s;
      RawFlow flow;
      if (s = Id(a[0], flow.id); !s.ok()) return s;
      if (s = Id(a[1], flow.src); !s.ok()) return s;
      if (s = Id(a[2], flow.dst); !s.ok()) return s;
      flow.location = Location(c.head);
      out.flows.push_back(std::move(flow));
    } else if (name == "flowReqs" || name == "dataReqs") {
      if (s = Arity(c, 6); !s.ok()) return s;
      RawFlowReqs reqs;
      if (s = Id(a[0], reqs.flow); !s.ok()) return s;
      if (s = Num(a[1], reqs.pkt_size); !s.ok()) return s;
      if (s = Int(a[2], reqs.burst_size); !s.ok()) return s;
      if (s = Num(a[3], reqs.rate); !s.ok()) return s;
      if (s = Num(a[4], reqs.latency_budget); !s.ok()) return s;
      if (s = Num(a[5], reqs.tolerance); !s.ok()) return s;
      reqs.location = Location(c.head);
      out.flow_reqs.push_back(std::move(reqs));
    } else if (name == "reliabilityReqs") {
      if (s = Arity(c, 3); !s.ok()) return s;
      RawReliabilityReqs reqs;
      if (s = Id(a[0], reqs.flow); !s.ok()) return s;
      if (s = Num(a[1], reqs.req_rel); !s.ok()) return s;
      if (s = Int(a[2], reqs.replica_factor); !s.ok()) return s;
      reqs.location = Location(c.head);
      out.reliability_reqs.push_back(std::move(reqs));
    } else if (name == "antiAffinity") {
      if (s = Arity(c, 2); !s.ok()) return s;
      RawAntiAffinity aa;
      if (s = Id(a[0], aa.flow); !s.ok()) return s;
      if (s = List(a[1], aa.avoided); !s.ok()) return s;
      aa.location = Location(c.head);
      out.anti_affinity.push_back(std::move(aa));
    } else if (name == "candidate") {
      if (s = Arity(c, 4); !s.ok()) return s;
      CandidateFact cand;
      if (s = Id(a[0], cand.id); !s.ok()) return s;
      if (s = Id(a[1], cand.src); !s.ok()) return s;
      if (s = Id(a[2], cand.dst); !s.ok()) return s;
      if (s = List(a[3], cand.nodes); !s.ok()) return s;
      out.candidates.push_back(std::move(cand));
      out.candidate_locations.push_back(Location(c.head));
    } else {
      return lexer_.Error(c.head, absl::StrCat("unknown fact '", name, "'"));
    }
    return absl::OkStatus();
  }

  absl::string_view source_name_;
  Lexer lexer_;
  Token current_{};
};

}  // namespace

absl::Status ParseFactsInto(absl::string_view source_name, absl::string_view text,
                            RawFacts& out) {
  // Work on a copy so a failed parse leaves `out` untouched.
  RawFacts scratch = out;
  FactsParser parser(source_name, text);
  if (absl::Status s = parser.Run(scratch); !s.ok()) return s;
  out = std::move(scratch);
  return absl::OkStatus();
}

}  // namespace dglbf::internal
