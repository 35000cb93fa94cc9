#include "mrpn/format.hpp"

#include <cctype>
#include <sstream>

namespace mrpn {

namespace {

enum class Tok { Ident, Int, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

struct SyntaxError {
  Diagnostic diag;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Ident;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          t.text += advance();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::Int;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) t.text += advance();
      } else if (std::string_view("{}[](),:#-.=*").find(c) != std::string_view::npos) {
        t.kind = Tok::Punct;
        t.text = advance();
      } else {
        throw SyntaxError{{"SYNTAX-CHAR", std::string("unexpected character '") + c + "'", line_, col_}};
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == ';') {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct ArcItemVar {
  std::string name;
  std::optional<std::string> type;
  SourceSpan at;
};

struct RawArc {
  bool in = true;
  std::string place;
  SourceSpan at;
  std::vector<ArcItemVar> vars;
  std::vector<std::pair<VarBond, SourceSpan>> bonds;
};

struct RawTransition {
  std::string name;
  SourceSpan at;
  std::vector<RawArc> arcs;
};

struct RawToken {
  TokenInstance token;
  SourceSpan at;
};

struct RawBond {
  TokenId a, b;
  SourceSpan at;
};

struct RawMarking {
  std::vector<std::pair<std::string, SourceSpan>> places;
  std::map<std::string, std::vector<RawToken>> tokens;
  std::map<std::string, std::vector<RawBond>> bonds;
};

struct RawRecord {
  std::string transition;
  int key = 0;
  Binding binding;
  SourceSpan at;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is_punct(const char* p, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Punct && peek(ahead).text == p;
  }
  bool is_word(const char* w) const { return peek().kind == Tok::Ident && peek().text == w; }
  SourceSpan span() const { return {peek().line, peek().column}; }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError{{"SYNTAX", "expected " + what + ", found " + found, t.line, t.column}};
  }

  void expect(const char* p) {
    if (!is_punct(p)) fail(std::string("'") + p + "'");
    ++pos_;
  }
  bool accept(const char* p) {
    if (!is_punct(p)) return false;
    ++pos_;
    return true;
  }
  std::string ident(const char* what = "identifier") {
    if (peek().kind != Tok::Ident) fail(what);
    return toks_[pos_++].text;
  }
  int integer(const char* what = "integer") {
    if (peek().kind != Tok::Int) fail(what);
    const std::string& s = toks_[pos_++].text;
    if (s.size() > 9) throw SyntaxError{{"SYNTAX-INT", "integer " + s + " out of range", peek().line, peek().column}};
    return std::stoi(s);
  }

  TokenId token_ref() {
    std::string type = ident("token type");
    expect("#");
    int index = integer("token index");
    return {type, index};
  }

  Path path() {
    Path out;
    expect("[");
    if (accept("]")) return out;
    do {
      PathEntry e;
      e.key = integer("occurrence key");
      expect(":");
      e.transition = ident("transition name");
      expect(".");
      e.var = accept("*") ? std::string(kBystander) : ident("variable or '*'");
      out.push_back(std::move(e));
    } while (accept(","));
    expect("]");
    return out;
  }

  RawArc arc() {
    RawArc a;
    a.at = span();
    std::string dir = ident("'in' or 'out'");
    if (dir != "in" && dir != "out") {
      --pos_;
      fail("'in' or 'out'");
    }
    a.in = dir == "in";
    a.place = ident("place name");
    expect("[");
    if (!accept("]")) {
      do {
        SourceSpan at = span();
        std::string v = ident("variable");
        if (accept(":")) {
          a.vars.push_back({v, ident("token type"), at});
        } else if (accept("-")) {
          a.bonds.push_back({make_var_bond(v, ident("variable")), at});
        } else {
          a.vars.push_back({v, std::nullopt, at});
        }
      } while (accept(","));
      expect("]");
    }
    return a;
  }

  RawTransition transition() {
    RawTransition t;
    t.at = span();
    t.name = ident("transition name");
    expect("{");
    while (!accept("}")) t.arcs.push_back(arc());
    return t;
  }

  std::vector<std::string> name_list() {
    std::vector<std::string> out;
    expect("{");
    if (accept("}")) return out;
    do out.push_back(ident()); while (accept(","));
    expect("}");
    return out;
  }

  std::vector<std::pair<TypeBond, SourceSpan>> type_bond_list() {
    std::vector<std::pair<TypeBond, SourceSpan>> out;
    expect("{");
    if (accept("}")) return out;
    do {
      SourceSpan at = span();
      std::string a = ident("token type");
      expect("-");
      out.push_back({make_type_bond(a, ident("token type")), at});
    } while (accept(","));
    expect("}");
    return out;
  }

  RawMarking marking() {
    RawMarking m;
    expect("{");
    while (!accept("}")) {
      SourceSpan at = span();
      std::string place = ident("place name");
      expect(":");
      m.places.push_back({place, at});
      auto& toks = m.tokens[place];
      auto& bonds = m.bonds[place];
      // An entry may be empty ("u:") when followed by the next place or '}'.
      if (is_punct("}") || (peek().kind == Tok::Ident && is_punct(":", 1))) continue;
      do {
        SourceSpan item_at = span();
        TokenId a = token_ref();
        if (accept("-")) {
          bonds.push_back({a, token_ref(), item_at});
        } else {
          TokenInstance ti{a.type, a.index, {}};
          if (is_punct("[")) ti.path = path();
          toks.push_back({std::move(ti), item_at});
        }
      } while (accept(","));
    }
    return m;
  }

  std::vector<RawRecord> history() {
    std::vector<RawRecord> out;
    expect("{");
    while (!accept("}")) {
      std::string t = ident("transition name");
      expect(":");
      if (is_punct("}") || (peek().kind == Tok::Ident && is_punct(":", 1))) continue;
      do {
        RawRecord r;
        r.transition = t;
        r.at = span();
        r.key = integer("occurrence key");
        expect("(");
        if (!accept(")")) {
          do {
            std::string v = ident("variable");
            expect("=");
            r.binding[v] = token_ref();
          } while (accept(","));
          expect(")");
        }
        out.push_back(std::move(r));
      } while (accept(","));
    }
    return out;
  }

  std::size_t pos_ = 0;

 private:
  std::vector<Token> toks_;
};

void diag(std::vector<Diagnostic>& out, std::string code, std::string msg, SourceSpan at, std::string subject = {}) {
  out.push_back({std::move(code), std::move(msg), at.line, at.column, std::move(subject)});
}

// Shared between net files (initial marking) and state snapshots.
Marking build_marking(const RawMarking& raw, const std::set<std::string>& places, const Net* net, bool initial,
                      std::vector<Diagnostic>& out) {
  Marking m;
  std::map<TokenId, std::string> where;
  std::set<std::string> seen_places;
  for (const auto& [place, at] : raw.places) {
    if (!places.count(place)) diag(out, "MARK-UNKNOWN-PLACE", "unknown place " + place, at);
    if (!seen_places.insert(place).second) diag(out, "MARK-DUP-PLACE", "place " + place + " listed twice", at);
  }
  for (const auto& [place, toks] : raw.tokens)
    for (const auto& rt : toks) {
      const TokenInstance& t = rt.token;
      if (net && !net->types.count(t.type)) diag(out, "MARK-UNKNOWN-TYPE", "unknown token type " + t.type, rt.at);
      if (t.index < 1) diag(out, "MARK-BAD-INDEX", "token index must be >= 1: " + t.id().str(), rt.at);
      if (initial && !t.path.empty())
        diag(out, "MARK-NONEMPTY-PATH", "initial token " + t.id().str() + " has a non-empty path", rt.at);
      for (const auto& e : t.path) {
        if (e.key < 1) diag(out, "MARK-BAD-KEY", "occurrence key must be >= 1 in " + t.id().str(), rt.at);
        if (net && !net->transitions.count(e.transition))
          diag(out, "MARK-UNKNOWN-TRANSITION", "path of " + t.id().str() + " names unknown transition " + e.transition,
               rt.at);
      }
      auto [it, fresh] = where.emplace(t.id(), place);
      if (!fresh) {
        diag(out, "MARK-DUP-INSTANCE", "token " + t.id().str() + " occurs more than once", rt.at);
        continue;
      }
      m.mut(place).insert(t);
    }
  for (const auto& [place, bonds] : raw.bonds)
    for (const auto& rb : bonds) {
      if (rb.a == rb.b) {
        diag(out, "MARK-BOND-SELF", "bond endpoints must be distinct: " + rb.a.str(), rb.at);
        continue;
      }
      Bond b(rb.a, rb.b);
      auto ia = where.find(rb.a), ib = where.find(rb.b);
      if (ia == where.end() || ib == where.end()) {
        diag(out, "MARK-BOND-DANGLING", "bond " + b.str() + " refers to an undeclared token", rb.at);
        continue;
      }
      if (ia->second != place || ib->second != place) {
        diag(out, "MARK-BOND-SPLIT", "bond " + b.str() + " in " + place + " has an endpoint in another place", rb.at);
        continue;
      }
      if (net && !net->bondable(rb.a.type, rb.b.type))
        diag(out, "MARK-BOND-TYPE", "no bond type " + rb.a.type + "-" + rb.b.type + " for " + b.str(), rb.at);
      if (m.at(place).contains(b)) diag(out, "MARK-DUP-BOND", "bond " + b.str() + " listed twice", rb.at);
      m.mut(place).insert(b);
    }
  m.prune();
  return m;
}

void write_label(std::ostream& os, const Net& net, const ArcLabel& label) {
  os << "[";
  bool first = true;
  for (const auto& v : label.vars) {
    os << (first ? "" : ", ") << v << ":" << net.type_of(v);
    first = false;
  }
  for (const auto& [a, b] : label.bonds) {
    os << (first ? "" : ", ") << a << "-" << b;
    first = false;
  }
  os << "]";
}

void write_bag(std::ostream& os, const Bag& bag) {
  bool first = true;
  for (const auto& [id, path] : bag.tokens) {
    os << (first ? "" : ", ") << id.str();
    if (!path.empty()) os << format_path(path);
    first = false;
  }
  for (const auto& b : bag.bonds) {
    os << (first ? "" : ", ") << b.str();
    first = false;
  }
}

}  // namespace

std::string format_path(const Path& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(p[i].key) + ":" + p[i].transition + "." + p[i].var;
  }
  return out + "]";
}

std::string format_token(const TokenInstance& t) { return t.id().str() + format_path(t.path); }

ParseResult<NetDocument> parse_net(std::string_view text) {
  ParseResult<NetDocument> res;
  auto& out = res.diagnostics;
  NetDocument doc;
  std::vector<RawTransition> transitions;
  std::optional<std::vector<std::pair<TypeBond, SourceSpan>>> bond_decls;
  std::optional<RawMarking> raw_marking;
  std::map<std::string, SourceSpan> type_at;

  try {
    Parser p(Lexer(text).run());
    while (!p.at_end()) {
      SourceSpan at = p.span();
      std::string kw = p.ident("declaration keyword");
      if (kw == "net") {
        if (!doc.name.empty()) diag(out, "NET-DUP-NAME", "net name declared twice", at);
        doc.name = p.ident("net name");
      } else if (kw == "types") {
        for (auto& name : p.name_list()) {
          if (!doc.net.types.insert(name).second) diag(out, "NET-DUP-TYPE", "type " + name + " declared twice", at);
          type_at.emplace(name, at);
        }
      } else if (kw == "bonds") {
        if (bond_decls) diag(out, "NET-DUP-SECTION", "bonds section declared twice", at);
        auto list = p.type_bond_list();
        if (!bond_decls) bond_decls.emplace();
        bond_decls->insert(bond_decls->end(), list.begin(), list.end());
      } else if (kw == "place") {
        do {
          SourceSpan pat = p.span();
          std::string name = p.ident("place name");
          if (!doc.net.places.insert(name).second) diag(out, "NET-DUP-PLACE", "place " + name + " declared twice", pat);
          doc.spans["place " + name] = pat;
        } while (p.accept(","));
      } else if (kw == "transition") {
        transitions.push_back(p.transition());
      } else if (kw == "marking") {
        if (raw_marking) diag(out, "NET-DUP-SECTION", "marking declared twice", at);
        raw_marking = p.marking();
      } else {
        --p.pos_;
        p.fail("'net', 'types', 'bonds', 'place', 'transition' or 'marking'");
      }
    }
  } catch (const SyntaxError& e) {
    out.push_back(e.diag);
    return res;
  }

  Net& net = doc.net;
  // Variables: type annotations must agree across the whole net.
  std::map<std::string, SourceSpan> var_at;
  for (const auto& rt : transitions)
    for (const auto& a : rt.arcs)
      for (const auto& v : a.vars) {
        if (!v.type) continue;
        if (!net.types.count(*v.type))
          diag(out, "NET-UNKNOWN-TYPE", "variable " + v.name + " has undeclared type " + *v.type, v.at);
        auto [it, fresh] = net.variables.emplace(v.name, *v.type);
        if (!fresh && it->second != *v.type)
          diag(out, "NET-VAR-TYPE-CONFLICT",
               "variable " + v.name + " declared with types " + it->second + " and " + *v.type, v.at);
        var_at.emplace(v.name, v.at);
      }

  for (const auto& rt : transitions) {
    doc.spans["transition " + rt.name] = rt.at;
    if (!net.transitions.insert(rt.name).second)
      diag(out, "NET-DUP-TRANSITION", "transition " + rt.name + " declared twice", rt.at);
    for (const auto& a : rt.arcs) {
      if (!net.places.count(a.place))
        diag(out, "NET-UNKNOWN-PLACE", "transition " + rt.name + " refers to unknown place " + a.place, a.at);
      auto& arcs = a.in ? net.inputs[rt.name] : net.outputs[rt.name];
      if (arcs.count(a.place))
        diag(out, "NET-DUP-ARC",
             "transition " + rt.name + " has two " + (a.in ? "in" : "out") + "-arcs on place " + a.place, a.at);
      ArcLabel& label = arcs[a.place];
      for (const auto& v : a.vars) {
        if (!net.variables.count(v.name))
          diag(out, "NET-VAR-UNTYPED", "variable " + v.name + " is never given a type", v.at);
        if (!label.vars.insert(v.name).second)
          diag(out, "NET-DUP-VAR", "variable " + v.name + " listed twice on one arc", v.at);
      }
      for (const auto& [b, at] : a.bonds) {
        if (b.first == b.second) diag(out, "NET-BOND-SELF", "bond " + b.first + "-" + b.second + " is a loop", at);
        label.bonds.insert(b);
      }
    }
  }

  if (bond_decls) {
    for (const auto& [b, at] : *bond_decls) {
      if (!net.types.count(b.first) || !net.types.count(b.second))
        diag(out, "NET-UNKNOWN-TYPE", "bond type " + b.first + "-" + b.second + " uses an undeclared type", at);
      net.bond_types.insert(b);
    }
  } else {
    // Inferred from arc bonds and initial-marking bonds.
    for (const auto& dir : {&net.inputs, &net.outputs})
      for (const auto& [t, arcs] : *dir)
        for (const auto& [place, label] : arcs)
          for (const auto& [a, b] : label.bonds)
            if (net.variables.count(a) && net.variables.count(b))
              net.bond_types.insert(make_type_bond(net.variables.at(a), net.variables.at(b)));
    if (raw_marking)
      for (const auto& [place, bonds] : raw_marking->bonds)
        for (const auto& rb : bonds) net.bond_types.insert(make_type_bond(rb.a.type, rb.b.type));
  }

  if (out.empty()) {
    for (auto d : validate_well_formed(net)) {
      if (auto it = doc.spans.find(d.subject); it != doc.spans.end()) {
        d.line = it->second.line;
        d.column = it->second.column;
      }
      out.push_back(std::move(d));
    }
  }

  if (raw_marking) doc.initial = build_marking(*raw_marking, net.places, &net, true, out);

  if (out.empty()) res.value = std::move(doc);
  return res;
}

std::string serialize_net(const NetDocument& doc) {
  const Net& net = doc.net;
  std::ostringstream os;
  if (!doc.name.empty()) os << "net " << doc.name << "\n\n";
  os << "types {";
  bool first = true;
  for (const auto& t : net.types) {
    os << (first ? " " : ", ") << t;
    first = false;
  }
  os << (first ? "}\n" : " }\n");
  os << "bonds {";
  first = true;
  for (const auto& [a, b] : net.bond_types) {
    os << (first ? " " : ", ") << a << "-" << b;
    first = false;
  }
  os << (first ? "}\n" : " }\n");

  if (!net.places.empty()) os << "\n";
  for (const auto& p : net.places) os << "place " << p << "\n";

  for (const auto& t : net.transitions) {
    os << "\ntransition " << t << " {\n";
    for (const auto& [place, label] : net.in_arcs(t)) {
      os << "  in " << place << " ";
      write_label(os, net, label);
      os << "\n";
    }
    for (const auto& [place, label] : net.out_arcs(t)) {
      os << "  out " << place << " ";
      write_label(os, net, label);
      os << "\n";
    }
    os << "}\n";
  }

  os << "\nmarking {";
  if (doc.initial.places().empty()) {
    os << "}\n";
  } else {
    os << "\n";
    for (const auto& [place, bag] : doc.initial.places()) {
      os << "  " << place << ": ";
      write_bag(os, bag);
      os << "\n";
    }
    os << "}\n";
  }
  return os.str();
}

std::string serialize_state(const State& s) {
  std::ostringstream os;
  os << "marking {";
  if (s.marking.places().empty()) {
    os << "}\n";
  } else {
    os << "\n";
    for (const auto& [place, bag] : s.marking.places()) {
      os << "  " << place << ": ";
      write_bag(os, bag);
      os << "\n";
    }
    os << "}\n";
  }
  os << "history {";
  if (s.history.empty()) {
    os << "}\n";
  } else {
    os << "\n";
    for (const auto& [t, recs] : s.history) {
      os << "  " << t << ": ";
      bool first = true;
      for (const auto& [k, binding] : recs) {
        os << (first ? "" : ", ") << k << "(" << binding_str(binding) << ")";
        first = false;
      }
      os << "\n";
    }
    os << "}\n";
  }
  return os.str();
}

std::string compact_state(const State& s) {
  std::ostringstream os;
  for (const auto& [place, bag] : s.marking.places()) {
    os << place << "{";
    write_bag(os, bag);
    os << "}";
  }
  os << "|";
  for (const auto& [t, recs] : s.history) {
    os << t << "{";
    bool first = true;
    for (const auto& [k, binding] : recs) {
      os << (first ? "" : ",") << k << "(" << binding_str(binding) << ")";
      first = false;
    }
    os << "}";
  }
  return os.str();
}

std::vector<Diagnostic> validate_state(const Net& net, const std::set<TokenId>& declared, const State& s) {
  std::vector<Diagnostic> out;
  for (const auto& msg : check_conservation(s.marking, declared)) out.push_back({"STATE-CONSERVATION", msg});
  for (const auto& [place, bag] : s.marking.places())
    if (!net.places.count(place)) out.push_back({"STATE-UNKNOWN-PLACE", "unknown place " + place});

  // Every path entry needs a history record whose binding agrees; every
  // record of a transition with variables must be carried by a token.
  std::map<std::pair<std::string, int>, int> carried;
  for (const auto& [place, bag] : s.marking.places())
    for (const auto& [id, path] : bag.tokens) {
      std::set<std::pair<std::string, int>> seen;
      for (const auto& e : path) {
        if (!seen.insert({e.transition, e.key}).second)
          out.push_back({"STATE-DUP-ENTRY", "token " + id.str() + " carries occurrence " + std::to_string(e.key) +
                                                " of " + e.transition + " twice"});
        auto ht = s.history.find(e.transition);
        const Binding* rec = nullptr;
        if (ht != s.history.end())
          if (auto hk = ht->second.find(e.key); hk != ht->second.end()) rec = &hk->second;
        if (!rec) {
          out.push_back({"STATE-PATH-NO-RECORD", "token " + id.str() + " carries " + std::to_string(e.key) + ":" +
                                                     e.transition + " with no history record"});
          continue;
        }
        ++carried[{e.transition, e.key}];
        if (!e.bystander()) {
          auto b = rec->find(e.var);
          if (b == rec->end() || b->second != id)
            out.push_back({"STATE-RECORD-MISMATCH", "token " + id.str() + " entry " + std::to_string(e.key) + ":" +
                                                        e.transition + "." + e.var + " disagrees with the record"});
        }
      }
    }
  for (const auto& [t, recs] : s.history) {
    if (!net.transitions.count(t)) {
      out.push_back({"STATE-UNKNOWN-TRANSITION", "history names unknown transition " + t});
      continue;
    }
    const auto vars = net.guard(t).vars;
    for (const auto& [k, binding] : recs) {
      if (k < 1) out.push_back({"STATE-BAD-KEY", "history key must be >= 1 for " + t});
      std::set<std::string> bound;
      for (const auto& [v, id] : binding) bound.insert(v);
      if (bound != vars)
        out.push_back({"STATE-RECORD-DOMAIN", "record " + std::to_string(k) + " of " + t +
                                                  " does not bind exactly the variables of the transition"});
      if (!vars.empty() && !carried.count({t, k}))
        out.push_back({"STATE-RECORD-UNCARRIED", "record " + std::to_string(k) + " of " + t + " is carried by no token"});
    }
  }
  return out;
}

ParseResult<State> parse_state(std::string_view text, const NetDocument& doc) {
  ParseResult<State> res;
  auto& out = res.diagnostics;
  std::optional<RawMarking> raw_marking;
  std::vector<RawRecord> records;
  try {
    Parser p(Lexer(text).run());
    while (!p.at_end()) {
      SourceSpan at = p.span();
      std::string kw = p.ident("'marking' or 'history'");
      if (kw == "marking") {
        if (raw_marking) diag(out, "NET-DUP-SECTION", "marking declared twice", at);
        raw_marking = p.marking();
      } else if (kw == "history") {
        auto recs = p.history();
        records.insert(records.end(), recs.begin(), recs.end());
      } else {
        --p.pos_;
        p.fail("'marking' or 'history'");
      }
    }
  } catch (const SyntaxError& e) {
    out.push_back(e.diag);
    return res;
  }

  State s;
  if (raw_marking) s.marking = build_marking(*raw_marking, doc.net.places, &doc.net, false, out);
  for (const auto& r : records) {
    if (!doc.net.transitions.count(r.transition)) {
      diag(out, "STATE-UNKNOWN-TRANSITION", "history names unknown transition " + r.transition, r.at);
      continue;
    }
    auto [it, fresh] = s.history[r.transition].emplace(r.key, r.binding);
    if (!fresh)
      diag(out, "STATE-DUP-KEY", "occurrence " + std::to_string(r.key) + " of " + r.transition + " listed twice", r.at);
  }
  if (!out.empty()) return res;
  for (auto& d : validate_state(doc.net, identities(doc.initial), s)) out.push_back(std::move(d));
  if (out.empty()) res.value = std::move(s);
  return res;
}

}  // namespace mrpn
