#include "pfg/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "pfg/catalog.hpp"
#include "pfg/group_ops.hpp"

namespace pfg {

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok { Name, Int, Str, Punct, Newline, Eof, Bad };

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  std::int64_t value = 0;
  SourceLoc loc;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Name: return "'" + t.text + "'";
    case Tok::Int: return "integer " + t.text;
    case Tok::Str: return "string";
    case Tok::Punct: return "'" + t.text + "'";
    case Tok::Newline: return "end of line";
    case Tok::Eof: return "end of input";
    case Tok::Bad: return t.text;
  }
  return "token";
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&]() {
    unsigned char c = static_cast<unsigned char>(src[i]);
    ++i;
    if (c == '\n') {
      ++line;
      col = 1;
    } else if ((c & 0xC0) != 0x80) {
      // Continuation bytes of a UTF-8 sequence do not start a column.
      if (i < src.size() && (static_cast<unsigned char>(src[i]) & 0xC0) == 0x80) {
        while (i < src.size() && (static_cast<unsigned char>(src[i]) & 0xC0) == 0x80) ++i;
      }
      ++col;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    SourceLoc loc{line, col};
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    if (c == '\n') {
      out.push_back({Tok::Newline, "\n", 0, loc});
      advance();
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      advance();
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) advance();
      out.push_back({Tok::Name, src.substr(start, i - start), 0, loc});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) advance();
      std::string text = src.substr(start, i - start);
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc{} || p != text.data() + text.size()) {
        out.push_back({Tok::Bad, "integer " + text + " is too large", 0, loc});
        continue;
      }
      out.push_back({Tok::Int, text, v, loc});
      continue;
    }
    if (c == '"') {
      advance();
      std::string text;
      bool closed = false;
      while (i < src.size() && src[i] != '\n') {
        if (src[i] == '"') {
          advance();
          closed = true;
          break;
        }
        if (src[i] == '\\' && i + 1 < src.size() && src[i + 1] != '\n') advance();
        text += src[i];
        advance();
      }
      if (!closed) out.push_back({Tok::Bad, "unterminated string", 0, loc});
      else out.push_back({Tok::Str, text, 0, loc});
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      advance();
      advance();
      out.push_back({Tok::Punct, "->", 0, loc});
      continue;
    }
    if (std::string("(){}<>,=*^@-").find(c) != std::string::npos) {
      advance();
      out.push_back({Tok::Punct, std::string(1, c), 0, loc});
      continue;
    }
    std::size_t start = i;
    advance();
    out.push_back({Tok::Bad, "unexpected character '" + src.substr(start, i - start) + "'", 0, loc});
  }
  out.push_back({Tok::Eof, "", 0, {line, col}});
  return out;
}

// ---------------------------------------------------------------- shape tables

struct Arity {
  std::size_t min, max;
};

const std::map<std::string, Arity>& group_ctors() {
  static const std::map<std::string, Arity> t{{"cyclic", {1, 1}},    {"units_mod", {2, 2}}, {"product", {2, 2}},
                                              {"semidirect", {3, 3}}, {"table", {1, 1}},     {"dihedral", {1, 1}},
                                              {"symmetric", {1, 1}},  {"quaternion8", {0, 0}}};
  return t;
}

const std::map<std::string, Arity>& hom_forms() {
  static const std::map<std::string, Arity> t{{"map", {1, 1}},          {"scale_first", {1, 1}}, {"scale", {2, 2}},
                                              {"power", {1, 1}},        {"project_away", {1, 1}}, {"conj", {1, 1}},
                                              {"identity", {0, 0}},     {"trivial", {0, 0}}};
  return t;
}

const std::map<std::string, Arity>& tower_builders() {
  static const std::map<std::string, Arity> t{{"zp", {1, 1}},          {"zpn", {2, 2}},     {"units_semidirect", {1, 1}},
                                              {"product", {2, 2}},     {"s3_times_z2", {0, 0}}, {"trivial", {0, 0}}};
  return t;
}

// Argument patterns per analysis: G group, H homomorphism, E endomorphism,
// S semigroup, T tower, K subgroup literal, P prime set, N integer, O automorphism set.
const std::map<std::string, std::vector<std::string>>& analysis_signatures() {
  static const std::map<std::string, std::vector<std::string>> t{
      {"contraction", {"GE", "E"}}, {"theorem_a", {"GE", "T"}},   {"splitthm", {"GS"}},
      {"theorem_b", {"T"}},         {"regulation", {"GSO"}},     {"tfrelstab2", {"GSO"}},
      {"shrinkind", {"GE", "GEK"}}, {"o_pi", {"GP"}},            {"fewprimes", {"GGP", "HP"}},
      {"hom_search", {"GG", "GK"}}, {"typef", {"TN", "GN"}},     {"o_lambda", {"GS"}},
      {"lambdareslem", {"GKP"}}};
  return t;
}

const std::set<std::string>& option_keys() {
  static const std::set<std::string> t{"order_guard", "node_budget", "jobs", "seed", "label"};
  return t;
}

// ---------------------------------------------------------------- parser

struct ParseFailure {
  std::string message;
  SourceLoc loc;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  void run(ScenarioSpec& spec, std::vector<std::pair<std::string, SourceLoc>>& errors) {
    while (peek().kind != Tok::Eof) {
      if (peek().kind == Tok::Newline) {
        ++pos_;
        continue;
      }
      try {
        spec.statements.push_back(statement());
        const auto& t = peek();
        if (t.kind != Tok::Newline && t.kind != Tok::Eof)
          throw ParseFailure{"unexpected " + describe(t) + " after statement", t.loc};
      } catch (const ParseFailure& f) {
        errors.emplace_back(f.message, f.loc);
        while (peek().kind != Tok::Newline && peek().kind != Tok::Eof) ++pos_;
      }
    }
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }

  const Token& next() {
    const Token& t = peek();
    if (t.kind == Tok::Bad) throw ParseFailure{t.text, t.loc};
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  bool at_punct(const char* p) const { return peek().kind == Tok::Punct && peek().text == p; }
  bool at_name(const char* n) const { return peek().kind == Tok::Name && peek().text == n; }

  void expect_punct(const char* p, const std::string& context) {
    if (!at_punct(p)) {
      const auto& t = peek();
      if (t.kind == Tok::Bad) throw ParseFailure{t.text, t.loc};
      throw ParseFailure{"expected '" + std::string(p) + "' " + context + ", found " + describe(t), t.loc};
    }
    next();
  }

  std::string expect_name(const std::string& what) {
    if (peek().kind != Tok::Name) throw ParseFailure{"expected " + what + ", found " + describe(peek()), peek().loc};
    return next().text;
  }

  void expect_keyword(const char* kw) {
    if (!at_name(kw))
      throw ParseFailure{"expected '" + std::string(kw) + "', found " + describe(peek()), peek().loc};
    next();
  }

  // Closing bracket; a missing one at end of line is reported at the opener.
  void close(const char* closer, const char* opener, SourceLoc open_loc, const char* what) {
    if (at_punct(closer)) {
      next();
      return;
    }
    const auto& t = peek();
    if (t.kind == Tok::Newline || t.kind == Tok::Eof)
      throw ParseFailure{"unclosed '" + std::string(opener) + "'", open_loc};
    if (t.kind == Tok::Bad) throw ParseFailure{t.text, t.loc};
    throw ParseFailure{"expected ',' or '" + std::string(closer) + "' in " + what + ", found " + describe(t), t.loc};
  }

  Statement statement() {
    const Token& kw = peek();
    if (kw.kind != Tok::Name) throw ParseFailure{"expected a statement, found " + describe(kw), kw.loc};
    Statement s;
    s.loc = kw.loc;
    const std::string word = kw.text;
    next();
    if (word == "group") {
      s.kind = StmtKind::Group;
      s.name = expect_name("a group name");
      expect_punct("=", "after the group name");
      s.value = expr();
      check_group(s.value);
    } else if (word == "endo") {
      s.kind = StmtKind::Endo;
      s.name = expect_name("an endomorphism name");
      expect_keyword("on");
      s.on = expect_name("a group name");
      expect_punct("=", "after the group name");
      s.value = expr();
      check_hom(s.value);
    } else if (word == "hom") {
      s.kind = StmtKind::Hom;
      s.name = expect_name("a homomorphism name");
      expect_keyword("from");
      s.on = expect_name("a group name");
      expect_keyword("to");
      s.to = expect_name("a group name");
      expect_punct("=", "after the codomain");
      s.value = expr();
      check_hom(s.value);
    } else if (word == "semigroup") {
      s.kind = StmtKind::Semigroup;
      s.name = expect_name("a semigroup name");
      expect_keyword("on");
      s.on = expect_name("a group name");
      expect_punct("=", "after the group name");
      s.value = expr();
      if (s.value.kind != Expr::Kind::Set || s.value.items.empty())
        throw ParseFailure{"a semigroup is a non-empty set of endomorphism names", s.value.loc};
      for (const auto& m : s.value.items)
        if (m.kind != Expr::Kind::Name) throw ParseFailure{"semigroup members must be names", m.loc};
      if (at_name("commutative")) {
        next();
        s.commutative = true;
      }
    } else if (word == "tower") {
      s.kind = StmtKind::Tower;
      s.name = expect_name("a tower name");
      expect_punct("=", "after the tower name");
      s.value = expr();
      check_builder(s.value);
      expect_keyword("depth");
      if (peek().kind != Tok::Int) throw ParseFailure{"expected the tower depth", peek().loc};
      s.depth = static_cast<std::uint64_t>(next().value);
    } else if (word == "analyze") {
      s.kind = StmtKind::Analyze;
      s.value = expr();
      if (s.value.kind != Expr::Kind::Call) throw ParseFailure{"expected an analysis call", s.value.loc};
      auto it = analysis_signatures().find(s.value.text);
      if (it == analysis_signatures().end())
        throw ParseFailure{"unknown analysis '" + s.value.text + "'", s.value.loc};
      bool fits = std::any_of(it->second.begin(), it->second.end(),
                              [&](const std::string& sig) { return sig.size() == s.value.items.size(); });
      if (!fits) throw ParseFailure{"arity mismatch: " + s.value.text + " cannot take " +
                                        std::to_string(s.value.items.size()) + " argument(s)", s.value.loc};
      s.name = s.value.text;
    } else if (word == "set") {
      s.kind = StmtKind::Set;
      const auto key_loc = peek().loc;
      s.name = expect_name("an option name");
      if (!option_keys().count(s.name)) throw ParseFailure{"unknown option '" + s.name + "'", key_loc};
      expect_punct("=", "after the option name");
      s.value = expr();
      bool want_str = s.name == "label";
      if (want_str ? s.value.kind != Expr::Kind::Str : s.value.kind != Expr::Kind::Int)
        throw ParseFailure{std::string("option '") + s.name + "' takes " + (want_str ? "a string" : "an integer"),
                           s.value.loc};
    } else {
      throw ParseFailure{"unknown keyword '" + word + "'", kw.loc};
    }
    return s;
  }

  Expr expr() {
    Expr first = term();
    if (!at_punct("*")) return first;
    Expr prod;
    prod.kind = Expr::Kind::Product;
    prod.loc = first.loc;
    prod.items.push_back(std::move(first));
    while (at_punct("*")) {
      next();
      prod.items.push_back(term());
    }
    return prod;
  }

  Expr term() {
    Expr base = atom();
    if (!at_punct("^")) return base;
    next();
    bool neg = false;
    if (at_punct("-")) {
      next();
      neg = true;
    }
    if (peek().kind != Tok::Int) throw ParseFailure{"expected an integer exponent", peek().loc};
    Expr p;
    p.kind = Expr::Kind::Power;
    p.loc = base.loc;
    p.number = neg ? -next().value : next().value;
    p.items.push_back(std::move(base));
    return p;
  }

  Expr atom() {
    const Token& t = peek();
    Expr e;
    e.loc = t.loc;
    if (t.kind == Tok::Int) {
      e.kind = Expr::Kind::Int;
      e.number = next().value;
      return e;
    }
    if (at_punct("-") && peek(1).kind == Tok::Int) {
      next();
      e.kind = Expr::Kind::Int;
      e.number = -next().value;
      return e;
    }
    if (t.kind == Tok::Str) {
      e.kind = Expr::Kind::Str;
      e.text = next().text;
      return e;
    }
    if (at_punct("@")) {
      next();
      if (peek().kind != Tok::Int) throw ParseFailure{"expected an element index after '@'", peek().loc};
      e.kind = Expr::Kind::Raw;
      e.number = next().value;
      return e;
    }
    if (t.kind == Tok::Name) {
      e.text = next().text;
      if (e.text == "map" && at_punct("{")) {
        e.kind = Expr::Kind::Call;
        e.items.push_back(atom());
        return e;
      }
      if (!at_punct("(")) {
        e.kind = Expr::Kind::Name;
        return e;
      }
      e.kind = Expr::Kind::Call;
      auto open = peek().loc;
      next();
      if (!at_punct(")")) {
        while (true) {
          if (peek().kind == Tok::Newline || peek().kind == Tok::Eof) throw ParseFailure{"unclosed '('", open};
          e.items.push_back(expr());
          if (!at_punct(",")) break;
          next();
        }
      }
      close(")", "(", open, "argument list");
      return e;
    }
    if (at_punct("{")) {
      auto open = peek().loc;
      next();
      e.kind = Expr::Kind::Set;
      bool first = true;
      while (!at_punct("}")) {
        if (peek().kind == Tok::Newline || peek().kind == Tok::Eof) throw ParseFailure{"unclosed '{'", open};
        Expr key = expr();
        bool arrow = at_punct("->");
        if (first) e.kind = arrow ? Expr::Kind::Map : Expr::Kind::Set;
        else if (arrow != (e.kind == Expr::Kind::Map))
          throw ParseFailure{"cannot mix 'a -> b' entries with plain entries", key.loc};
        first = false;
        e.items.push_back(std::move(key));
        if (arrow) {
          next();
          e.items.push_back(expr());
        }
        if (!at_punct(",")) break;
        next();
      }
      close("}", "{", open, "braces");
      return e;
    }
    if (at_punct("<")) {
      auto open = peek().loc;
      next();
      e.kind = Expr::Kind::SubgroupLit;
      while (!at_punct(">")) {
        if (peek().kind == Tok::Newline || peek().kind == Tok::Eof) throw ParseFailure{"unclosed '<'", open};
        e.items.push_back(expr());
        if (!at_punct(",")) break;
        next();
      }
      close(">", "<", open, "subgroup generators");
      return e;
    }
    if (t.kind == Tok::Bad) throw ParseFailure{t.text, t.loc};
    throw ParseFailure{"expected an expression, found " + describe(t), t.loc};
  }

  static void check_arity(const Expr& e, const std::map<std::string, Arity>& table, const std::string& what) {
    auto it = table.find(e.text);
    if (it == table.end()) throw ParseFailure{"unknown " + what + " '" + e.text + "'", e.loc};
    std::size_t n = e.kind == Expr::Kind::Call ? e.items.size() : 0;
    if (n < it->second.min || n > it->second.max)
      throw ParseFailure{"arity mismatch: " + e.text + " takes " + std::to_string(it->second.min) +
                             (it->second.max != it->second.min ? "-" + std::to_string(it->second.max) : "") +
                             " argument(s), got " + std::to_string(n),
                         e.loc};
  }

  static void check_group(const Expr& e) {
    if (e.kind == Expr::Kind::Name) return;  // reference or zero-argument constructor
    if (e.kind != Expr::Kind::Call) throw ParseFailure{"expected a group expression", e.loc};
    check_arity(e, group_ctors(), "group constructor");
    if (e.text == "product") {
      check_group(e.items[0]);
      check_group(e.items[1]);
    } else if (e.text == "semidirect") {
      check_group(e.items[0]);
      check_group(e.items[1]);
      const auto& a = e.items[2];
      bool ok = (a.kind == Expr::Kind::Name && (a.text == "invert" || a.text == "mult_action")) ||
                a.kind == Expr::Kind::Map || (a.kind == Expr::Kind::Set && a.items.empty());
      if (!ok) throw ParseFailure{"action must be 'invert', 'mult_action' or {generator -> endomorphism}", a.loc};
    } else if (e.text == "table") {
      if (e.items[0].kind != Expr::Kind::Str) throw ParseFailure{"table() takes a quoted path", e.items[0].loc};
    } else {
      for (const auto& a : e.items)
        if (a.kind != Expr::Kind::Int) throw ParseFailure{e.text + " takes integer arguments", a.loc};
    }
  }

  static void check_hom(const Expr& e) {
    if (e.kind == Expr::Kind::Name) return;  // identity, trivial, or a reference
    if (e.kind != Expr::Kind::Call) throw ParseFailure{"expected a homomorphism expression", e.loc};
    check_arity(e, hom_forms(), "homomorphism form");
    if (e.text == "map") {
      const auto& m = e.items[0];
      if (m.kind != Expr::Kind::Map && !(m.kind == Expr::Kind::Set && m.items.empty()))
        throw ParseFailure{"map takes {generator -> word, ...}", m.loc};
    }
  }

  static void check_builder(const Expr& e) {
    if (e.kind != Expr::Kind::Name && e.kind != Expr::Kind::Call)
      throw ParseFailure{"expected a tower builder", e.loc};
    check_arity(e, tower_builders(), "tower builder");
    if (e.text == "product") {
      for (const auto& a : e.items) check_builder(a);
    } else {
      for (const auto& a : e.items)
        if (a.kind != Expr::Kind::Int) throw ParseFailure{e.text + " takes integer arguments", a.loc};
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::vector<std::string> split_lines(const std::string& src) {
  std::vector<std::string> lines;
  std::stringstream ss(src);
  std::string l;
  while (std::getline(ss, l)) lines.push_back(l);
  return lines;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string join(const std::vector<Expr>& items, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + unparse(items[i]);
  return out;
}

// ---------------------------------------------------------------- validation

class Validator {
 public:
  Validator(Scenario& sc, const ValidateOptions& opts) : sc_(sc), opts_(opts) {}

  void statement(const Statement& s) {
    switch (s.kind) {
      case StmtKind::Group: define(s.name), sc_.groups.emplace(s.name, group(s.value, s.name)); break;
      case StmtKind::Endo: {
        define(s.name);
        auto g = group_ref(s.on);
        sc_.homs.emplace(s.name, hom(s.value, g, g));
        break;
      }
      case StmtKind::Hom: {
        define(s.name);
        sc_.homs.emplace(s.name, hom(s.value, group_ref(s.on), group_ref(s.to)));
        break;
      }
      case StmtKind::Semigroup: semigroup(s); break;
      case StmtKind::Tower: {
        define(s.name);
        if (s.depth < 1) fail(ErrorKind::ParamOutOfRange, "tower depth must be >= 1");
        auto t = std::make_shared<const TowerBuild>(build_tower(tower_spec(s.value), s.depth));
        sc_.towers.emplace(s.name, std::move(t));
        break;
      }
      case StmtKind::Analyze: analysis(s); break;
      case StmtKind::Set: option(s); break;
    }
  }

 private:
  void define(const std::string& name) {
    if (!names_.insert(name).second) fail(ErrorKind::DuplicateName, "'" + name + "' is already defined");
  }

  const char* kind_of(const std::string& name) const {
    if (sc_.groups.count(name)) return "group";
    if (sc_.homs.count(name)) return "homomorphism";
    if (sc_.semigroups.count(name)) return "semigroup";
    if (sc_.towers.count(name)) return "tower";
    return nullptr;
  }

  [[noreturn]] void unresolved(const std::string& name, const char* wanted) const {
    if (auto k = kind_of(name))
      fail(ErrorKind::TypeMismatch, "'" + name + "' is a " + k + ", expected a " + wanted);
    fail(ErrorKind::NameUnresolved, "'" + name + "' is not defined");
  }

  GroupPtr group_ref(const std::string& name) const {
    auto it = sc_.groups.find(name);
    if (it == sc_.groups.end()) unresolved(name, "group");
    return it->second;
  }

  static std::uint64_t integer(const Expr& e, const char* what) {
    if (e.kind != Expr::Kind::Int || e.number < 0)
      fail(ErrorKind::ParamOutOfRange, std::string(what) + " must be a non-negative integer");
    return static_cast<std::uint64_t>(e.number);
  }

  static std::int64_t signed_integer(const Expr& e, const char* what) {
    if (e.kind != Expr::Kind::Int) fail(ErrorKind::ParamOutOfRange, std::string(what) + " must be an integer");
    return e.number;
  }

  GroupPtr group(const Expr& e, const std::string& name) {
    if (e.kind == Expr::Kind::Name) {
      if (e.text == "quaternion8") return quaternion8();
      return group_ref(e.text);
    }
    const auto& a = e.items;
    if (e.text == "cyclic") return cyclic(integer(a[0], "order"));
    if (e.text == "units_mod") {
      auto k = integer(a[1], "exponent");
      if (k > 64) fail(ErrorKind::ParamOutOfRange, "exponent too large");
      return units_mod(integer(a[0], "prime"), static_cast<unsigned>(k));
    }
    if (e.text == "dihedral") return dihedral(integer(a[0], "n"));
    if (e.text == "symmetric") {
      auto d = integer(a[0], "degree");
      if (d > 7) fail(ErrorKind::ParamOutOfRange, "symmetric(d) supports d <= 7");
      return symmetric(static_cast<unsigned>(d));
    }
    if (e.text == "quaternion8") return quaternion8();
    if (e.text == "product") return direct_product(group(a[0], name), group(a[1], name));
    if (e.text == "semidirect") {
      auto n = group(a[0], name);
      auto h = group(a[1], name);
      const auto& act = a[2];
      if (act.kind == Expr::Kind::Name && act.text == "invert") return semidirect(n, h, invert_action(n, h));
      if (act.kind == Expr::Kind::Name && act.text == "mult_action") return semidirect(n, h, mult_action(n, h));
      auto gens = h->generators();
      std::vector<std::vector<Elem>> images(gens.size());
      std::vector<bool> seen(gens.size(), false);
      for (std::size_t i = 0; i + 1 < act.items.size(); i += 2) {
        auto gi = generator_index(act.items[i], *h);
        auto img = hom(act.items[i + 1], n, n);
        images[gi].assign(img.table().begin(), img.table().end());
        seen[gi] = true;
      }
      for (std::size_t i = 0; i < gens.size(); ++i)
        if (!seen[i]) fail(ErrorKind::BadAction, "no action given for generator g" + std::to_string(i));
      return semidirect(n, h, action_from_generator_images(n, h, images));
    }
    if (e.text == "table") {
      std::filesystem::path p(e.items[0].text);
      if (p.is_relative() && !opts_.base_dir.empty()) p = std::filesystem::path(opts_.base_dir) / p;
      auto rows = read_table_file(p.string());
      if (rows.size() > order_guard())
        fail(ErrorKind::OrderGuard,
             "order " + std::to_string(rows.size()) + " exceeds guard " + std::to_string(order_guard()),
             {rows.size()});
      return build_from_table(rows, name);
    }
    fail(ErrorKind::ParamOutOfRange, "unknown group constructor '" + e.text + "'");
  }

  static std::size_t generator_index(const Expr& e, const FiniteGroup& g) {
    if (e.kind == Expr::Kind::Name && e.text.size() > 1 && e.text[0] == 'g' &&
        std::all_of(e.text.begin() + 1, e.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      std::size_t i = std::stoul(e.text.substr(1));
      if (i < g.generators().size()) return i;
      fail(ErrorKind::ParamOutOfRange, "'" + g.label() + "' has " + std::to_string(g.generators().size()) +
                                           " generators; " + e.text + " does not exist");
    }
    fail(ErrorKind::ParamOutOfRange, "expected a generator name g0, g1, ..., found '" + unparse(e) + "'");
  }

  static Elem word(const Expr& e, const FiniteGroup& g) {
    switch (e.kind) {
      case Expr::Kind::Int:
        if (e.number == 1) return 0;
        fail(ErrorKind::ParamOutOfRange, "only 1 (the identity) may appear as a number in a word");
      case Expr::Kind::Raw:
        if (e.number < 0 || static_cast<std::uint64_t>(e.number) >= g.order())
          fail(ErrorKind::ParamOutOfRange, "element @" + std::to_string(e.number) + " is out of range");
        return static_cast<Elem>(e.number);
      case Expr::Kind::Name: return g.generators()[generator_index(e, g)];
      case Expr::Kind::Power: return g.pow(word(e.items[0], g), e.number);
      case Expr::Kind::Product: {
        Elem x = 0;
        for (const auto& f : e.items) x = g.mul(x, word(f, g));
        return x;
      }
      default: fail(ErrorKind::ParamOutOfRange, "'" + unparse(e) + "' is not a group word");
    }
  }

  GroupHom hom(const Expr& e, const GroupPtr& g, const GroupPtr& h) {
    const std::string form = e.text;
    auto need_endo = [&]() {
      if (g != h) fail(ErrorKind::TypeMismatch, form + " needs the domain and codomain to agree");
    };
    auto coordinate_power = [&](std::uint64_t c, std::int64_t m) {
      need_endo();
      std::vector<Elem> map(g->order());
      if (g->structure().factors.size() != 2) {
        if (c != 0) fail(ErrorKind::TypeMismatch, "'" + g->label() + "' has no coordinate " + std::to_string(c));
        for (Elem x = 0; x < g->order(); ++x) map[x] = g->pow(x, m);
      } else {
        if (c > 1) fail(ErrorKind::ParamOutOfRange, "coordinate must be 0 or 1");
        const auto& f = *g->structure().factors[c];
        for (Elem x = 0; x < g->order(); ++x) {
          auto [a, b] = g->coordinates(x);
          map[x] = c == 0 ? g->from_coordinates(f.pow(a, m), b) : g->from_coordinates(a, f.pow(b, m));
        }
      }
      return GroupHom(g, h, std::move(map));
    };

    if (e.kind == Expr::Kind::Name) {
      if (e.text == "identity") {
        need_endo();
        return GroupHom::identity(g);
      }
      if (e.text == "trivial") return GroupHom::trivial(g, h);
      auto it = sc_.homs.find(e.text);
      if (it == sc_.homs.end()) unresolved(e.text, "homomorphism");
      if (it->second.domain() != g || it->second.codomain() != h)
        fail(ErrorKind::TypeMismatch, "'" + e.text + "' has a different domain or codomain");
      return it->second;
    }
    const auto& a = e.items;
    if (form == "identity") return hom(Expr{Expr::Kind::Name, 0, "identity", {}, e.loc}, g, h);
    if (form == "trivial") return GroupHom::trivial(g, h);
    if (form == "scale_first") return coordinate_power(0, signed_integer(a[0], "multiplier"));
    if (form == "scale")
      return coordinate_power(integer(a[0], "coordinate"), signed_integer(a[1], "multiplier"));
    if (form == "power") {
      need_endo();
      std::vector<Elem> map(g->order());
      auto m = signed_integer(a[0], "exponent");
      for (Elem x = 0; x < g->order(); ++x) map[x] = g->pow(x, m);
      return GroupHom(g, h, std::move(map));
    }
    if (form == "project_away") {
      need_endo();
      auto c = integer(a[0], "coordinate");
      if (g->structure().factors.size() != 2 || c > 1)
        fail(ErrorKind::TypeMismatch, "'" + g->label() + "' has no coordinate " + std::to_string(c));
      std::vector<Elem> map(g->order());
      for (Elem x = 0; x < g->order(); ++x) {
        auto [u, v] = g->coordinates(x);
        map[x] = c == 0 ? g->from_coordinates(0, v) : g->from_coordinates(u, 0);
      }
      return GroupHom(g, h, std::move(map));
    }
    if (form == "conj") {
      need_endo();
      return conjugation(g, word(a[0], *g));
    }
    if (form == "map") return generator_map(a[0], g, h);
    fail(ErrorKind::ParamOutOfRange, "unknown homomorphism form '" + form + "'");
  }

  // Expands generator images breadth-first; an inconsistent edge x -> x s
  // is reported as the violated pair (x, s).
  static GroupHom generator_map(const Expr& m, const GroupPtr& g, const GroupPtr& h) {
    auto gens = g->generators();
    std::vector<Elem> images(gens.size());
    std::vector<bool> seen(gens.size(), false);
    for (std::size_t i = 0; i + 1 < m.items.size(); i += 2) {
      auto gi = generator_index(m.items[i], *g);
      if (seen[gi]) fail(ErrorKind::ParamOutOfRange, "generator g" + std::to_string(gi) + " is given twice");
      images[gi] = word(m.items[i + 1], *h);
      seen[gi] = true;
    }
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (!seen[i]) fail(ErrorKind::ParamOutOfRange, "generator g" + std::to_string(i) + " has no image");
    const Elem unset = static_cast<Elem>(h->order());
    std::vector<Elem> map(g->order(), unset);
    map[0] = 0;
    std::vector<Elem> queue{0};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Elem x = queue[head];
      for (std::size_t i = 0; i < gens.size(); ++i) {
        Elem y = g->mul(x, gens[i]);
        Elem v = h->mul(map[x], images[i]);
        if (map[y] == unset) {
          map[y] = v;
          queue.push_back(y);
        } else if (map[y] != v) {
          fail(ErrorKind::NotAHomomorphism,
               "generator images violate a relation at the pair (" + g->element_name(x) + ", " +
                   g->element_name(gens[i]) + ")",
               {x, gens[i]});
        }
      }
    }
    return GroupHom(g, h, std::move(map));
  }

  void semigroup(const Statement& s) {
    define(s.name);
    auto g = group_ref(s.on);
    std::vector<Endomorphism> gens;
    for (const auto& m : s.value.items) {
      auto it = sc_.homs.find(m.text);
      if (it == sc_.homs.end()) unresolved(m.text, "endomorphism");
      if (it->second.domain() != g || it->second.codomain() != g)
        fail(ErrorKind::TypeMismatch, "'" + m.text + "' is not an endomorphism of '" + s.on + "'");
      gens.emplace_back(it->second);
    }
    EndoSemigroup sg(g, std::move(gens));
    if (s.commutative && !sg.commutative()) {
      auto [i, j] = *sg.noncommuting_pair();
      fail(ErrorKind::CommutativityFailed,
           "'" + s.value.items[i].text + "' and '" + s.value.items[j].text + "' do not commute", {i, j});
    }
    sc_.semigroups.emplace(s.name, std::move(sg));
  }

  static TowerSpec tower_spec(const Expr& e) {
    TowerSpec t;
    t.kind = e.text;
    for (const auto& a : e.items) {
      if (a.kind == Expr::Kind::Int) t.params.push_back(integer(a, "parameter"));
      else t.parts.push_back(tower_spec(a));
    }
    return t;
  }

  void option(const Statement& s) {
    const auto& v = s.value;
    if (s.name == "label") {
      sc_.options.label = v.text;
      return;
    }
    auto n = integer(v, s.name.c_str());
    if (s.name == "order_guard") {
      if (n < 1) fail(ErrorKind::ParamOutOfRange, "order_guard must be >= 1");
      sc_.options.order_guard = n;
      if (!opts_.order_guard) set_order_guard(n);
    } else if (s.name == "node_budget") {
      sc_.options.node_budget = n;
    } else if (s.name == "jobs") {
      if (n < 1) fail(ErrorKind::ParamOutOfRange, "jobs must be >= 1");
      sc_.options.jobs = n;
    } else if (s.name == "seed") {
      sc_.options.seed = n;
    }
  }

  // Converts one argument to the type named by `t`; `ctx` is the group that
  // subgroup literals and automorphism sets refer to.
  Value convert(char t, const Expr& e, const GroupPtr& ctx) const {
    auto name = [&](const char* wanted) -> const std::string& {
      if (e.kind != Expr::Kind::Name) fail(ErrorKind::TypeMismatch, "expected a " + std::string(wanted) + " name");
      return e.text;
    };
    switch (t) {
      case 'G': return group_ref(name("group"));
      case 'H': {
        auto it = sc_.homs.find(name("homomorphism"));
        if (it == sc_.homs.end()) unresolved(e.text, "homomorphism");
        return it->second;
      }
      case 'E': {
        auto it = sc_.homs.find(name("endomorphism"));
        if (it == sc_.homs.end()) unresolved(e.text, "endomorphism");
        if (!it->second.is_endomorphism()) fail(ErrorKind::TypeMismatch, "'" + e.text + "' is not an endomorphism");
        return it->second;
      }
      case 'S': {
        const auto& n = name("semigroup");
        if (auto it = sc_.semigroups.find(n); it != sc_.semigroups.end()) return it->second;
        if (auto it = sc_.homs.find(n); it != sc_.homs.end() && it->second.is_endomorphism())
          return EndoSemigroup(Endomorphism(it->second));
        unresolved(n, "semigroup");
      }
      case 'T': {
        auto it = sc_.towers.find(name("tower"));
        if (it == sc_.towers.end()) unresolved(e.text, "tower");
        return it->second;
      }
      case 'K': {
        if (e.kind != Expr::Kind::SubgroupLit) fail(ErrorKind::TypeMismatch, "expected a subgroup <w1, w2, ...>");
        if (!ctx) fail(ErrorKind::TypeMismatch, "a subgroup literal needs a group argument before it");
        std::vector<Elem> gens;
        for (const auto& w : e.items) gens.push_back(word(w, *ctx));
        return closure(ctx, gens);
      }
      case 'P': {
        if (e.kind != Expr::Kind::Set || e.items.empty()) fail(ErrorKind::TypeMismatch, "expected a prime set {p, ...}");
        PrimeSet pi;
        for (const auto& p : e.items) {
          auto v = integer(p, "prime");
          if (!is_prime(v)) fail(ErrorKind::ParamOutOfRange, std::to_string(v) + " is not prime");
          pi.insert(v);
        }
        return pi;
      }
      case 'N': {
        auto v = integer(e, "count");
        if (v < 1) fail(ErrorKind::ParamOutOfRange, "expected a positive integer");
        return v;
      }
      case 'O': {
        if (e.kind != Expr::Kind::Set) fail(ErrorKind::TypeMismatch, "expected an automorphism set {w, ...}");
        std::vector<Endomorphism> maps;
        for (const auto& m : e.items) {
          if (m.kind != Expr::Kind::Name) fail(ErrorKind::TypeMismatch, "automorphism sets list endomorphism names");
          auto it = sc_.homs.find(m.text);
          if (it == sc_.homs.end()) unresolved(m.text, "endomorphism");
          if (it->second.domain() != ctx || it->second.codomain() != ctx)
            fail(ErrorKind::TypeMismatch, "'" + m.text + "' does not act on the analysed group");
          maps.emplace_back(it->second);
        }
        return AutoSet(ctx, std::move(maps));
      }
    }
    fail(ErrorKind::TypeMismatch, "bad argument type");
  }

  static GroupPtr group_of(const Value& v) {
    if (auto g = std::get_if<GroupPtr>(&v)) return *g;
    if (auto h = std::get_if<GroupHom>(&v)) return h->domain();
    if (auto s = std::get_if<EndoSemigroup>(&v)) return s->parent();
    return nullptr;
  }

  void analysis(const Statement& s) {
    const auto& call = s.value;
    const auto& sigs = analysis_signatures().at(call.text);
    std::optional<Error> last;
    for (const auto& sig : sigs) {
      if (sig.size() != call.items.size()) continue;
      try {
        std::vector<Value> args;
        GroupPtr ctx;
        for (std::size_t i = 0; i < sig.size(); ++i) {
          args.push_back(convert(sig[i], call.items[i], ctx));
          if (!ctx) ctx = group_of(args.back());
        }
        consistent(sig, args);
        sc_.analyses.push_back({call.text, join(call.items), std::move(args), s.loc});
        return;
      } catch (const Error& e) {
        last = e;
      }
    }
    if (last) throw *last;
    fail(ErrorKind::ParamOutOfRange, "arity mismatch for " + call.text);
  }

  // Later arguments must act on the group named first.
  static void consistent(const std::string& sig, const std::vector<Value>& args) {
    if (sig.empty() || sig[0] != 'G') return;
    const auto& g = std::get<GroupPtr>(args[0]);
    for (std::size_t i = 1; i < sig.size(); ++i) {
      if (sig[i] == 'E' && std::get<GroupHom>(args[i]).domain() != g)
        fail(ErrorKind::TypeMismatch, "endomorphism does not act on the named group");
      if (sig[i] == 'S' && std::get<EndoSemigroup>(args[i]).parent() != g)
        fail(ErrorKind::TypeMismatch, "semigroup does not act on the named group");
    }
  }

  Scenario& sc_;
  const ValidateOptions& opts_;
  std::set<std::string> names_;
};

}  // namespace

// ---------------------------------------------------------------- public API

std::string format(const ParseDiagnostic& d) {
  std::string out = std::to_string(d.line) + ":" + std::to_string(d.column) + ": " +
                    (d.severity == ParseDiagnostic::Severity::Error ? "error: " : "warning: ") + d.message;
  if (!d.snippet.empty()) {
    out += "\n  " + d.snippet + "\n  ";
    // Caret under the column, counting code points.
    std::size_t cp = 1;
    for (std::size_t i = 0; i < d.snippet.size() && cp < d.column; ++i) {
      unsigned char c = static_cast<unsigned char>(d.snippet[i]);
      if ((c & 0xC0) == 0x80) continue;
      out += d.snippet[i] == '\t' ? '\t' : ' ';
      ++cp;
    }
    out += "^";
  }
  return out;
}

bool operator==(const Expr& a, const Expr& b) {
  return a.kind == b.kind && a.number == b.number && a.text == b.text && a.items == b.items;
}

bool operator==(const Statement& a, const Statement& b) {
  return a.kind == b.kind && a.name == b.name && a.on == b.on && a.to == b.to && a.value == b.value &&
         a.commutative == b.commutative && a.depth == b.depth;
}

bool operator==(const ScenarioSpec& a, const ScenarioSpec& b) { return a.statements == b.statements; }

std::vector<const Statement*> ScenarioSpec::definitions() const {
  std::vector<const Statement*> out;
  for (const auto& s : statements)
    if (s.kind != StmtKind::Analyze && s.kind != StmtKind::Set) out.push_back(&s);
  return out;
}

std::vector<const Statement*> ScenarioSpec::analyses() const {
  std::vector<const Statement*> out;
  for (const auto& s : statements)
    if (s.kind == StmtKind::Analyze) out.push_back(&s);
  return out;
}

std::vector<const Statement*> ScenarioSpec::options() const {
  std::vector<const Statement*> out;
  for (const auto& s : statements)
    if (s.kind == StmtKind::Set) out.push_back(&s);
  return out;
}

std::string unparse(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Int: return std::to_string(e.number);
    case Expr::Kind::Str: return quote(e.text);
    case Expr::Kind::Raw: return "@" + std::to_string(e.number);
    case Expr::Kind::Name: return e.text;
    case Expr::Kind::Call:
      if (e.text == "map" && e.items.size() == 1 &&
          (e.items[0].kind == Expr::Kind::Map || e.items[0].kind == Expr::Kind::Set))
        return "map " + unparse(e.items[0]);
      return e.text + "(" + join(e.items) + ")";
    case Expr::Kind::Set: return "{" + join(e.items) + "}";
    case Expr::Kind::Map: {
      std::string out = "{";
      for (std::size_t i = 0; i + 1 < e.items.size(); i += 2)
        out += (i ? ", " : "") + unparse(e.items[i]) + " -> " + unparse(e.items[i + 1]);
      return out + "}";
    }
    case Expr::Kind::SubgroupLit: return "<" + join(e.items) + ">";
    case Expr::Kind::Power: return unparse(e.items[0]) + "^" + std::to_string(e.number);
    case Expr::Kind::Product: return join(e.items, "*");
  }
  return {};
}

std::string unparse(const Statement& s) {
  switch (s.kind) {
    case StmtKind::Group: return "group " + s.name + " = " + unparse(s.value);
    case StmtKind::Endo: return "endo " + s.name + " on " + s.on + " = " + unparse(s.value);
    case StmtKind::Hom: return "hom " + s.name + " from " + s.on + " to " + s.to + " = " + unparse(s.value);
    case StmtKind::Semigroup:
      return "semigroup " + s.name + " on " + s.on + " = " + unparse(s.value) + (s.commutative ? " commutative" : "");
    case StmtKind::Tower: return "tower " + s.name + " = " + unparse(s.value) + " depth " + std::to_string(s.depth);
    case StmtKind::Analyze: return "analyze " + unparse(s.value);
    case StmtKind::Set: return "set " + s.name + " = " + unparse(s.value);
  }
  return {};
}

std::string unparse(const ScenarioSpec& spec) {
  std::string out;
  for (const auto& s : spec.statements) out += unparse(s) + "\n";
  return out;
}

ParseResult parse(const std::string& source) {
  ScenarioSpec spec;
  std::vector<std::pair<std::string, SourceLoc>> errors;
  Parser(lex(source)).run(spec, errors);
  ParseResult out;
  auto lines = split_lines(source);
  for (auto& [msg, loc] : errors) {
    ParseDiagnostic d;
    d.message = msg;
    d.line = loc.line;
    d.column = loc.column;
    if (loc.line >= 1 && loc.line <= lines.size()) d.snippet = lines[loc.line - 1];
    out.diagnostics.push_back(std::move(d));
  }
  if (out.diagnostics.empty()) out.spec = std::move(spec);
  return out;
}

Scenario validate(const ScenarioSpec& spec, const ValidateOptions& opts) {
  Scenario sc;
  sc.spec = spec;
  if (opts.order_guard) sc.options.order_guard = *opts.order_guard;
  OrderGuardScope scope(sc.options.order_guard);
  Validator v(sc, opts);
  for (const auto& s : spec.statements) {
    try {
      v.statement(s);
    } catch (const ScenarioError&) {
      throw;
    } catch (const Error& e) {
      throw ScenarioError(e, s.loc);
    }
  }
  if (opts.order_guard) sc.options.order_guard = *opts.order_guard;
  return sc;
}

const std::vector<std::string>& analysis_kinds() {
  static const std::vector<std::string> kinds = [] {
    std::vector<std::string> k;
    for (const auto& [name, sigs] : analysis_signatures()) k.push_back(name);
    return k;
  }();
  return kinds;
}

std::vector<std::vector<Elem>> read_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open table file '" + path + "'");
  std::vector<std::uint64_t> values;
  std::string tok;
  while (in >> tok) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
      fail(ErrorKind::BadTable, "non-integer entry '" + tok + "' in '" + path + "'");
    values.push_back(v);
  }
  std::size_t n = 0;
  while (n * n < values.size()) ++n;
  if (n == 0 || n * n != values.size())
    fail(ErrorKind::BadTable, "table in '" + path + "' has " + std::to_string(values.size()) + " entries, not a square");
  std::vector<std::vector<Elem>> rows(n, std::vector<Elem>(n));
  for (std::size_t i = 0; i < n * n; ++i) {
    if (values[i] >= n) fail(ErrorKind::BadTable, "entry " + std::to_string(values[i]) + " out of range");
    rows[i / n][i % n] = static_cast<Elem>(values[i]);
  }
  return rows;
}

}  // namespace pfg
