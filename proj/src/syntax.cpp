#include "wel/syntax.hpp"

#include <cctype>
#include <optional>

namespace wel {
namespace {

enum class Tok {
  kIdent,
  kLBrace,
  kRBrace,
  kComma,
  kLParen,
  kRParen,
  kNot,
  kAnd,
  kOr,
  kImplies,
  kIff,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0;
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}
bool operator_char(char c) {
  static const std::string_view ops = "!@$%^*+=-<>/\\?:;.'\"`[]";
  return ops.find(c) != std::string_view::npos;
}

std::vector<Token> lex(std::string_view text, std::size_t base) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    std::size_t at = base + i;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      out.push_back({Tok::kIdent, std::string(text.substr(i, j - i)), at});
      i = j;
      continue;
    }
    auto starts = [&](std::string_view s) { return text.substr(i).starts_with(s); };
    if (starts("<->")) {
      out.push_back({Tok::kIff, "<->", at});
      i += 3;
      continue;
    }
    if (starts("->")) {
      out.push_back({Tok::kImplies, "->", at});
      i += 2;
      continue;
    }
    switch (c) {
      case '{': out.push_back({Tok::kLBrace, "{", at}); break;
      case '}': out.push_back({Tok::kRBrace, "}", at}); break;
      case ',': out.push_back({Tok::kComma, ",", at}); break;
      case '(': out.push_back({Tok::kLParen, "(", at}); break;
      case ')': out.push_back({Tok::kRParen, ")", at}); break;
      case '~': out.push_back({Tok::kNot, "~", at}); break;
      case '&': out.push_back({Tok::kAnd, "&", at}); break;
      case '|': out.push_back({Tok::kOr, "|", at}); break;
      default: {
        if (operator_char(c)) {
          std::size_t j = i;
          while (j < text.size() && operator_char(text[j])) ++j;
          throw ParseError(
              "unknown operator '" + std::string(text.substr(i, j - i)) + "'",
              at);
        }
        throw ParseError("unexpected character", at);
      }
    }
    ++i;
  }
  out.push_back({Tok::kEnd, "", base + text.size()});
  return out;
}

bool reserved(std::string_view s) {
  return s == "K" || s == "E" || s == "C" || s == "D" || s == "F" ||
         s == "true" || s == "false";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse_all() {
    Formula f = parse_iff();
    if (peek().kind == Tok::kRParen)
      throw ParseError("unbalanced parentheses: unmatched ')'", peek().offset);
    if (peek().kind != Tok::kEnd)
      throw ParseError("unexpected '" + peek().text + "'", peek().offset);
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  Formula parse_iff() {
    Formula lhs = parse_implies();
    while (peek().kind == Tok::kIff) {
      next();
      lhs = Formula::iff(lhs, parse_implies());
    }
    return lhs;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (peek().kind == Tok::kImplies) {
      next();
      return Formula::implies(lhs, parse_implies());
    }
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (peek().kind == Tok::kOr) {
      next();
      lhs = Formula::disj(lhs, parse_and());
    }
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    while (peek().kind == Tok::kAnd) {
      next();
      lhs = Formula::conj(lhs, parse_unary());
    }
    return lhs;
  }

  Formula parse_unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kNot:
        next();
        return Formula::negation(parse_unary());
      case Tok::kLParen: {
        std::size_t open = t.offset;
        next();
        Formula f = parse_iff();
        if (peek().kind != Tok::kRParen) {
          if (peek().kind == Tok::kEnd)
            throw ParseError("unbalanced parentheses: '(' is never closed",
                             open);
          throw ParseError("expected ')' but found '" + peek().text + "'",
                           peek().offset);
        }
        next();
        return f;
      }
      case Tok::kIdent:
        return parse_word();
      case Tok::kRParen:
        throw ParseError("unbalanced parentheses: unmatched ')'", t.offset);
      case Tok::kEnd:
        throw ParseError("unexpected end of formula", t.offset);
      default:
        throw ParseError("unexpected '" + t.text + "'", t.offset);
    }
  }

  Formula parse_word() {
    Token t = next();
    if (t.text == "true") return Formula::top();
    if (t.text == "false") return Formula::bottom();
    if (t.text == "K") {
      const Token& a = peek();
      if (a.kind != Tok::kIdent || reserved(a.text))
        throw ParseError("expected an agent after 'K'", a.offset);
      std::string agent = next().text;
      return Formula::know(std::move(agent), parse_unary());
    }
    std::optional<Op> op;
    if (t.text == "E") op = Op::kMutual;
    if (t.text == "C") op = Op::kCommon;
    if (t.text == "D") op = Op::kDistributed;
    if (t.text == "F") op = Op::kField;
    if (op) {
      Group g = parse_group(t);
      return Formula::group_modality(*op, std::move(g), parse_unary());
    }
    return Formula::atom(std::move(t.text));
  }

  Group parse_group(const Token& modality) {
    const Token& open = peek();
    if (open.kind != Tok::kLBrace)
      throw ParseError("expected '{' after '" + modality.text + "'",
                       open.offset);
    next();
    std::vector<std::string> agents;
    if (peek().kind == Tok::kRBrace)
      throw ParseError("empty group", open.offset);
    while (true) {
      const Token& a = peek();
      if (a.kind != Tok::kIdent || reserved(a.text))
        throw ParseError("expected an agent in group", a.offset);
      agents.push_back(next().text);
      if (peek().kind == Tok::kComma) {
        next();
        continue;
      }
      if (peek().kind == Tok::kRBrace) {
        next();
        break;
      }
      if (peek().kind == Tok::kEnd)
        throw ParseError("unbalanced braces: '{' is never closed", open.offset);
      throw ParseError("expected ',' or '}' in group", peek().offset);
    }
    return Group(std::move(agents));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

Formula parse_at(std::string_view text, std::size_t base) {
  return Parser(lex(text, base)).parse_all();
}

// Binding strength used when deciding on parentheses.
int precedence(Op op) {
  switch (op) {
    case Op::kIff: return 1;
    case Op::kImplies: return 2;
    case Op::kOr: return 3;
    case Op::kAnd: return 4;
    default: return 5;
  }
}

void render_into(const Formula& f, std::string& out);

void render_operand(const Formula& f, bool paren, std::string& out) {
  if (paren) out += '(';
  render_into(f, out);
  if (paren) out += ')';
}

void render_into(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Op::kTop: out += "true"; return;
    case Op::kBottom: out += "false"; return;
    case Op::kAtom: out += f.name(); return;
    case Op::kNot:
      out += '~';
      render_operand(f.child(), is_binary(f.child().op()), out);
      return;
    case Op::kKnow:
      out += "K ";
      out += f.name();
      out += ' ';
      render_operand(f.child(), is_binary(f.child().op()), out);
      return;
    case Op::kMutual:
    case Op::kCommon:
    case Op::kDistributed:
    case Op::kField: {
      static const char* letters = "ECDF";
      out += letters[static_cast<int>(f.op()) - static_cast<int>(Op::kMutual)];
      out += ' ';
      out += render(f.group());
      out += ' ';
      render_operand(f.child(), is_binary(f.child().op()), out);
      return;
    }
    case Op::kImplies:
    case Op::kAnd:
    case Op::kOr:
    case Op::kIff: {
      int p = precedence(f.op());
      bool right_assoc = f.op() == Op::kImplies;
      int lp = precedence(f.left().op());
      int rp = precedence(f.right().op());
      render_operand(f.left(), lp < p || (lp == p && right_assoc), out);
      switch (f.op()) {
        case Op::kImplies: out += " -> "; break;
        case Op::kAnd: out += " & "; break;
        case Op::kOr: out += " | "; break;
        default: out += " <-> "; break;
      }
      render_operand(f.right(), rp < p || (rp == p && !right_assoc), out);
      return;
    }
  }
}

}  // namespace

Formula parse(std::string_view text) { return parse_at(text, 0); }

std::vector<Formula> parse_formula_list(std::string_view text) {
  std::vector<Formula> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (!blank) out.push_back(parse_at(line, start));
    start = end + 1;
  }
  return out;
}

std::string render(const Formula& f) {
  std::string out;
  render_into(f, out);
  return out;
}

std::string render(const Group& g) {
  std::string out = "{";
  for (std::size_t i = 0; i < g.agents().size(); ++i) {
    if (i) out += ',';
    out += g.agents()[i];
  }
  return out + "}";
}

}  // namespace wel
