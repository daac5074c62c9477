#include "lbox/parse.hpp"

#include <cctype>

namespace lbox {
namespace {

enum class TK { Ident, Int, Sym, End };

struct Tok {
  TK kind = TK::End;
  std::string text;
  int ival = 0;
  int line = 1, col = 1;
};

const std::set<std::string> kTermReserved = {
    "quo", "unq", "with", "proj1", "proj2", "dbox", "dlet", "gbox", "in", "Unit"};

[[noreturn]] void perr(const Tok& t, const std::string& msg) {
  fail(ErrKind::SyntaxError, "line " + std::to_string(t.line) + ", col " +
                                 std::to_string(t.col) + ": " + msg);
}

std::vector<Tok> lex(const std::string& src, int lineBase) {
  std::vector<Tok> out;
  int line = lineBase, col = 1;
  size_t i = 0;
  auto push = [&](TK k, std::string text, int ival = 0) {
    out.push_back({k, std::move(text), ival, line, col});
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) ||
              src[j] == '_' || src[j] == '\''))
        ++j;
      push(TK::Ident, src.substr(i, j - i));
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      std::string s = src.substr(i, j - i);
      push(TK::Int, s, std::stoi(s));
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      push(TK::Sym, "->");
      col += 2;
      i += 2;
      continue;
    }
    if (c == '|' && i + 1 < src.size() && src[i + 1] == '-') {
      push(TK::Sym, "|-");
      col += 2;
      i += 2;
      continue;
    }
    if (std::string("()[],.;:*=@\\").find(c) != std::string::npos) {
      push(TK::Sym, std::string(1, c));
      ++col;
      ++i;
      continue;
    }
    Tok t{TK::End, "", 0, line, col};
    perr(t, std::string("unexpected character '") + c + "'");
  }
  Tok end{TK::End, "", 0, line, col};
  out.push_back(end);
  return out;
}

struct Parser {
  std::vector<Tok> toks;
  size_t pos = 0;

  const Tok& peek(int k = 0) const {
    size_t p = pos + k;
    return p < toks.size() ? toks[p] : toks.back();
  }
  bool atSym(const std::string& s) const {
    return peek().kind == TK::Sym && peek().text == s;
  }
  bool atIdent(const std::string& s) const {
    return peek().kind == TK::Ident && peek().text == s;
  }
  Tok next() { return toks[pos < toks.size() - 1 ? pos++ : pos]; }
  void expectSym(const std::string& s) {
    if (!atSym(s)) perr(peek(), "expected '" + s + "'");
    ++pos;
  }
  void expectIdent(const std::string& s) {
    if (!atIdent(s)) perr(peek(), "expected '" + s + "'");
    ++pos;
  }
  std::string ident() {
    if (peek().kind != TK::Ident) perr(peek(), "expected an identifier");
    return next().text;
  }
  int integer() {
    if (peek().kind != TK::Int) perr(peek(), "expected a number");
    return next().ival;
  }
  bool done() const { return peek().kind == TK::End; }

  // ---- types ----
  TypeP type0() {
    TypeP left = tprod();
    if (atSym("->")) {
      ++pos;
      return t_arrow(left, type0());
    }
    return left;
  }
  TypeP tprod() {
    TypeP left = tprefix();
    while (atSym("*")) {
      ++pos;
      left = t_prod(left, tprefix());
    }
    return left;
  }
  TypeP tprefix() {
    if (atSym("[")) {
      ++pos;
      std::vector<TypeP> hyps;
      if (!atSym("]")) {
        hyps.push_back(type0());
        while (atSym(",")) {
          ++pos;
          hyps.push_back(type0());
        }
      }
      expectSym("]");
      return t_cbox(std::move(hyps), tatom());
    }
    if (atIdent("dbox")) {
      ++pos;
      return t_dbox(tatom());
    }
    return tatom();
  }
  TypeP tatom() {
    if (atSym("(")) {
      ++pos;
      TypeP t = type0();
      expectSym(")");
      return t;
    }
    if (peek().kind == TK::Ident) {
      std::string n = next().text;
      if (n == "Unit") return t_unit();
      return t_base(n);
    }
    perr(peek(), "expected a type");
  }

  // ---- terms ----
  bool atAtomStart() const {
    if (atSym("(")) return true;
    if (peek().kind != TK::Ident) return false;
    const std::string& s = peek().text;
    if (s == "with" || s == "in" || s == "Unit" || s == "dlet" || s == "gbox")
      return false;
    return true;  // quo/unq/proj1/proj2/dbox start prefix forms
  }

  Binder binder() {
    Binder b;
    b.name = ident();
    if (atSym(":")) {
      ++pos;
      b.ann = type0();
    }
    return b;
  }

  TermP term0() {
    if (atSym("\\")) {
      ++pos;
      Binder b = binder();
      expectSym(".");
      TermP body = term0();
      return std::make_shared<const Term>(Term{Lam{std::move(b), std::move(body)}});
    }
    if (atIdent("gbox")) {
      ++pos;
      std::vector<Binder> bs;
      std::vector<TermP> as;
      if (!atIdent("in")) {
        bs.push_back(binder());
        while (atSym(",")) {
          ++pos;
          bs.push_back(binder());
        }
        expectSym("=");
        as.push_back(appterm());
        while (atSym(",")) {
          ++pos;
          as.push_back(appterm());
        }
        if (bs.size() != as.size())
          perr(peek(), "gbox binder/argument count mismatch");
      }
      expectIdent("in");
      return gbox(std::move(bs), std::move(as), term0());
    }
    if (atIdent("dlet")) {
      ++pos;
      std::string n = ident();
      expectSym("=");
      TermP box = term0();
      expectIdent("in");
      return dlet(std::move(n), std::move(box), term0());
    }
    return appterm();
  }

  TermP appterm() {
    TermP acc = prefix();
    while (atAtomStart()) acc = app(acc, prefix());
    return acc;
  }

  TermP prefix() {
    if (atIdent("quo")) {
      ++pos;
      std::vector<Binder> bs;
      if (atSym("[")) {
        ++pos;
        if (!atSym("]")) {
          bs.push_back(binder());
          while (atSym(",")) {
            ++pos;
            bs.push_back(binder());
          }
        }
        expectSym("]");
      }
      return quo(std::move(bs), atom());
    }
    if (atIdent("unq")) {
      ++pos;
      TermP code = atom();
      std::vector<TermP> args;
      if (atIdent("with")) {
        ++pos;
        expectSym("[");
        if (!atSym("]")) {
          args.push_back(term0());
          while (atSym(",")) {
            ++pos;
            args.push_back(term0());
          }
        }
        expectSym("]");
      }
      return unq(std::move(code), std::move(args));
    }
    if (atIdent("proj1")) {
      ++pos;
      return proj1(atom());
    }
    if (atIdent("proj2")) {
      ++pos;
      return proj2(atom());
    }
    if (atIdent("dbox")) {
      ++pos;
      return dbox(atom());
    }
    return atom();
  }

  TermP atom() {
    if (atSym("(")) {
      ++pos;
      if (atSym(")")) {
        ++pos;
        return star();
      }
      TermP t = term0();
      if (atSym(",")) {
        ++pos;
        TermP s = term0();
        expectSym(")");
        return pair_(std::move(t), std::move(s));
      }
      expectSym(")");
      return t;
    }
    if (peek().kind == TK::Ident && !kTermReserved.count(peek().text))
      return v_(next().text);
    perr(peek(), "expected a term");
  }

  // ---- judgments ----
  Frame frame() {
    Frame f;
    if (atSym(".")) {
      ++pos;
      return f;
    }
    f.push_back({ident(), (expectSym(":"), type0())});
    while (atSym(",")) {
      ++pos;
      std::string n = ident();
      expectSym(":");
      f.push_back({std::move(n), type0()});
    }
    return f;
  }

  Judgment judgment() {
    Judgment j;
    j.stack.frames.push_back(frame());
    while (atSym(";")) {
      ++pos;
      j.stack.frames.push_back(frame());
    }
    expectSym("|-");
    j.term = term0();
    expectSym(":");
    j.type = type0();
    if (atSym("@")) {
      ++pos;
      return stamp_judgment(j, integer());
    }
    return j;
  }
};

Parser make_parser(const std::string& src, int lineBase = 1) {
  return Parser{lex(src, lineBase), 0};
}

}  // namespace

std::map<std::string, std::set<int>> FileDecls::signature() const {
  std::map<std::string, std::set<int>> sig;
  for (auto& b : bases) sig[b.name].insert(b.level);
  return sig;
}

FileDecls parse_file(const std::string& src) {
  FileDecls out;
  int lineNo = 0;
  size_t start = 0;
  while (start <= src.size()) {
    size_t end = src.find('\n', start);
    std::string line = src.substr(
        start, end == std::string::npos ? std::string::npos : end - start);
    ++lineNo;
    Parser p = make_parser(line, lineNo);
    if (!p.done()) {
      if (p.atIdent("base")) {
        ++p.pos;
        BaseDecl d;
        d.line = lineNo;
        d.name = p.ident();
        p.expectSym("@");
        d.level = p.integer();
        out.bases.push_back(std::move(d));
      } else if (p.atIdent("def")) {
        ++p.pos;
        DefDecl d;
        d.line = lineNo;
        d.name = p.ident();
        p.expectSym(":");
        d.type = p.type0();
        if (p.atSym("@")) {
          ++p.pos;
          d.level = p.integer();
        }
        p.expectSym("=");
        d.term = p.term0();
        out.defs.push_back(std::move(d));
      } else if (p.atIdent("jdg")) {
        ++p.pos;
        JdgDecl d;
        d.line = lineNo;
        d.j = p.judgment();
        out.jdgs.push_back(std::move(d));
      } else if (p.atIdent("eq")) {
        ++p.pos;
        EqDecl d;
        d.line = lineNo;
        d.lhs = p.term0();
        p.expectSym("=");
        d.rhs = p.term0();
        if (p.atSym(":")) {
          ++p.pos;
          d.type = p.type0();
        }
        if (p.atSym("@")) {
          ++p.pos;
          d.level = p.integer();
        }
        out.eqs.push_back(std::move(d));
      } else if (p.atIdent("model")) {
        ++p.pos;
        ModelDecl d;
        d.line = lineNo;
        d.monoid = p.ident();
        d.depth = p.integer();
        while (!p.done()) {
          ValSpec v;
          v.name = p.ident();
          if (p.atSym("@")) {
            ++p.pos;
            v.level = p.integer();
          }
          p.expectSym("=");
          v.size = p.integer();
          d.vals.push_back(std::move(v));
        }
        out.models.push_back(std::move(d));
      } else {
        perr(p.peek(), "expected a declaration (base/def/jdg/eq/model)");
      }
      if (!p.done()) perr(p.peek(), "trailing input after declaration");
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

TermP parse_term(const std::string& src) {
  Parser p = make_parser(src);
  TermP t = p.term0();
  if (!p.done()) perr(p.peek(), "trailing input after term");
  return t;
}

TypeP parse_type(const std::string& src) {
  Parser p = make_parser(src);
  TypeP t = p.type0();
  if (!p.done()) perr(p.peek(), "trailing input after type");
  return t;
}

Judgment parse_judgment(const std::string& src) {
  Parser p = make_parser(src);
  Judgment j = p.judgment();
  if (!p.done()) perr(p.peek(), "trailing input after judgment");
  return j;
}

}  // namespace lbox
