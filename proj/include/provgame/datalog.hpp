#pragma once

/// Non-recursive Datalog-with-negation front end: surface syntax,
/// validation, active-domain grounding, and two reference evaluators
/// (stratified truth values and annotation polynomials).
///
/// Surface syntax, whitespace-insensitive, '%' comments to end of line:
///
///   program:   rule*        rule: atom [":-" literal ("," literal)*] "."
///   literal:   ["not" | "!"] atom
///   atom:      predicate "(" term ("," term)* ")"
///   database:  fact*        fact: atom ["@" ident] "."
///
/// Terms starting with an uppercase letter are variables, everything
/// else is a constant. Database facts may name their annotation with
/// "@ident"; unannotated facts are annotated with their own text.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "provgame/errors.hpp"
#include "provgame/polynomial.hpp"

namespace provgame {

struct term {
  bool is_variable;
  std::string text;

  friend bool operator==(const term& a, const term& b) {
    return a.is_variable == b.is_variable && a.text == b.text;
  }
  friend bool operator<(const term& a, const term& b) {
    return std::tie(a.is_variable, a.text) < std::tie(b.is_variable, b.text);
  }
};

/// A ground atom; the workhorse key type for facts and query results.
struct gatom {
  std::string pred;
  std::vector<std::string> args;

  std::string to_string() const {
    std::string out = pred + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ",";
      out += args[i];
    }
    return out + ")";
  }

  friend bool operator==(const gatom& a, const gatom& b) {
    return a.pred == b.pred && a.args == b.args;
  }
  friend bool operator!=(const gatom& a, const gatom& b) { return !(a == b); }
  friend bool operator<(const gatom& a, const gatom& b) {
    return std::tie(a.pred, a.args) < std::tie(b.pred, b.args);
  }
};

struct atom {
  std::string pred;
  std::vector<term> args;

  bool is_ground() const {
    return std::none_of(args.begin(), args.end(),
                        [](const term& t) { return t.is_variable; });
  }

  gatom ground_atom() const {
    gatom g;
    g.pred = pred;
    for (const auto& t : args) {
      if (t.is_variable)
        throw validation_error("atom " + to_string() + " is not ground");
      g.args.push_back(t.text);
    }
    return g;
  }

  /// Instantiates under a variable binding; every variable must be bound.
  gatom apply(const std::map<std::string, std::string>& binding) const {
    gatom g;
    g.pred = pred;
    for (const auto& t : args) {
      if (t.is_variable) {
        auto it = binding.find(t.text);
        if (it == binding.end())
          throw internal_error("unbound variable " + t.text);
        g.args.push_back(it->second);
      } else {
        g.args.push_back(t.text);
      }
    }
    return g;
  }

  std::string to_string() const {
    std::string out = pred + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ",";
      out += args[i].text;
    }
    return out + ")";
  }

  friend bool operator==(const atom& a, const atom& b) {
    return a.pred == b.pred && a.args == b.args;
  }
};

struct literal {
  bool positive;
  atom a;

  std::string to_string() const {
    return (positive ? "" : "not ") + a.to_string();
  }

  friend bool operator==(const literal& x, const literal& y) {
    return x.positive == y.positive && x.a == y.a;
  }
};

struct rule {
  int index;  // 1-based, in file order
  atom head;
  std::vector<literal> body;

  /// The rule's variables, sorted by name; this is the binding order of
  /// the rule's game nodes.
  std::vector<std::string> variables() const {
    std::set<std::string> vars;
    auto scan = [&vars](const atom& a) {
      for (const auto& t : a.args)
        if (t.is_variable) vars.insert(t.text);
    };
    scan(head);
    for (const auto& l : body) scan(l.a);
    return {vars.begin(), vars.end()};
  }

  std::string to_string() const {
    std::string out = head.to_string();
    if (!body.empty()) {
      out += " :- ";
      for (std::size_t i = 0; i < body.size(); ++i) {
        if (i) out += ", ";
        out += body[i].to_string();
      }
    }
    return out + ".";
  }

  friend bool operator==(const rule& a, const rule& b) {
    return a.index == b.index && a.head == b.head && a.body == b.body;
  }
};

namespace detail {

/// Shared tokenizer for programs, databases, and command-line atoms.
class lexer {
 public:
  explicit lexer(const std::string& source) : src_(source) {}

  struct token {
    enum kind { ident, lparen, rparen, comma, period, implies, at, bang, end };
    kind k;
    std::string text;
    int line;
    int column;
  };

  token next() {
    skip_space();
    token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= src_.size()) {
      t.k = token::end;
      return t;
    }
    char c = src_[pos_];
    if (c == '(') return simple(token::lparen, "(");
    if (c == ')') return simple(token::rparen, ")");
    if (c == ',') return simple(token::comma, ",");
    if (c == '.') return simple(token::period, ".");
    if (c == '@') return simple(token::at, "@");
    if (c == '!') return simple(token::bang, "!");
    if (c == ':') {
      if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        advance();
        advance();
        t.k = token::implies;
        t.text = ":-";
        return t;
      }
      throw parse_error(line_, column_, "expected ':-'");
    }
    if (is_ident_char(c)) {
      std::string text;
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) {
        text += src_[pos_];
        advance();
      }
      t.k = token::ident;
      t.text = text;
      return t;
    }
    throw parse_error(line_, column_,
                      std::string("unexpected character '") + c + "'");
  }

 private:
  static bool is_ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_';
  }

  token simple(token::kind k, const std::string& text) {
    token t{k, text, line_, column_};
    advance();
    return t;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class parser {
 public:
  explicit parser(const std::string& source) : lex_(source) { shift(); }

  bool at_end() const { return tok_.k == lexer::token::end; }

  atom parse_atom() {
    auto name = expect(lexer::token::ident, "predicate name");
    atom a;
    a.pred = name.text;
    expect(lexer::token::lparen, "'('");
    a.args.push_back(parse_term());
    while (tok_.k == lexer::token::comma) {
      shift();
      a.args.push_back(parse_term());
    }
    expect(lexer::token::rparen, "')'");
    return a;
  }

  literal parse_literal() {
    literal l;
    l.positive = true;
    if (tok_.k == lexer::token::bang) {
      l.positive = false;
      shift();
    } else if (tok_.k == lexer::token::ident && tok_.text == "not") {
      l.positive = false;
      shift();
    }
    l.a = parse_atom();
    return l;
  }

  rule parse_rule(int index) {
    rule r;
    r.index = index;
    r.head = parse_atom();
    if (tok_.k == lexer::token::implies) {
      shift();
      r.body.push_back(parse_literal());
      while (tok_.k == lexer::token::comma) {
        shift();
        r.body.push_back(parse_literal());
      }
    }
    expect(lexer::token::period, "'.'");
    return r;
  }

  /// fact: atom ["@" ident] "." — returns the atom plus optional name.
  std::pair<atom, std::optional<std::string>> parse_fact() {
    atom a = parse_atom();
    std::optional<std::string> annotation;
    if (tok_.k == lexer::token::at) {
      shift();
      annotation = expect(lexer::token::ident, "annotation name").text;
    }
    expect(lexer::token::period, "'.'");
    return {a, annotation};
  }

  lexer::token expect(lexer::token::kind k, const std::string& what) {
    if (tok_.k != k)
      throw parse_error(tok_.line, tok_.column,
                        "expected " + what + ", found '" + describe(tok_) +
                            "'");
    lexer::token t = tok_;
    shift();
    return t;
  }

 private:
  term parse_term() {
    auto t = expect(lexer::token::ident, "term");
    bool var = t.text[0] >= 'A' && t.text[0] <= 'Z';
    return term{var, t.text};
  }

  static std::string describe(const lexer::token& t) {
    return t.k == lexer::token::end ? "end of input" : t.text;
  }

  void shift() { tok_ = lex_.next(); }

  lexer lex_;
  lexer::token tok_{lexer::token::end, "", 1, 1};
};

}  // namespace detail

class program {
 public:
  /// Parses and validates: consistent arities and an acyclic predicate
  /// dependency graph (recursion is rejected, naming the cycle).
  static program parse(const std::string& source) {
    detail::parser p(source);
    program out;
    int index = 1;
    while (!p.at_end()) out.add_rule(p.parse_rule(index++));
    out.check_nonrecursive();
    return out;
  }

  const std::vector<rule>& rules() const { return rules_; }

  bool known(const std::string& pred) const { return arity_.count(pred) != 0; }

  int arity(const std::string& pred) const {
    auto it = arity_.find(pred);
    if (it == arity_.end())
      throw validation_error("unknown predicate " + pred);
    return it->second;
  }

  bool is_idb(const std::string& pred) const { return idb_.count(pred) != 0; }

  /// Every predicate mentioned in the program, in name order.
  std::vector<std::string> predicates() const {
    std::vector<std::string> out;
    for (const auto& [p, _] : arity_) out.push_back(p);
    return out;
  }

  const std::vector<rule>& rules_for(const std::string& pred) const {
    static const std::vector<rule> none;
    auto it = rules_by_head_.find(pred);
    return it == rules_by_head_.end() ? none : it->second;
  }

  bool is_positive() const {
    for (const auto& r : rules_)
      for (const auto& l : r.body)
        if (!l.positive) return false;
    return true;
  }

  /// IDB predicates ordered so that every rule body only mentions
  /// predicates that come earlier (or EDB ones).
  std::vector<std::string> stratum_order() const {
    std::vector<std::string> order;
    std::set<std::string> done;
    std::vector<std::string> pending(idb_.begin(), idb_.end());
    while (!pending.empty()) {
      bool progressed = false;
      std::vector<std::string> rest;
      for (const auto& p : pending) {
        bool ready = true;
        for (const auto& r : rules_for(p))
          for (const auto& l : r.body)
            if (is_idb(l.a.pred) && !done.count(l.a.pred)) ready = false;
        if (ready) {
          order.push_back(p);
          done.insert(p);
          progressed = true;
        } else {
          rest.push_back(p);
        }
      }
      if (!progressed)
        throw internal_error("stratum order on a recursive program");
      pending = std::move(rest);
    }
    return order;
  }

  std::string to_string() const {
    std::string out;
    for (const auto& r : rules_) out += r.to_string() + "\n";
    return out;
  }

  /// Constants appearing anywhere in the rules.
  std::set<std::string> constants() const {
    std::set<std::string> out;
    auto scan = [&out](const atom& a) {
      for (const auto& t : a.args)
        if (!t.is_variable) out.insert(t.text);
    };
    for (const auto& r : rules_) {
      scan(r.head);
      for (const auto& l : r.body) scan(l.a);
    }
    return out;
  }

 private:
  void add_rule(rule r) {
    note_arity(r.head);
    for (const auto& l : r.body) note_arity(l.a);
    idb_.insert(r.head.pred);
    rules_by_head_[r.head.pred].push_back(r);
    rules_.push_back(std::move(r));
  }

  void note_arity(const atom& a) {
    auto [it, inserted] = arity_.emplace(a.pred, (int)a.args.size());
    if (!inserted && it->second != (int)a.args.size())
      throw validation_error("predicate " + a.pred + " used with arity " +
                             std::to_string(a.args.size()) + " and " +
                             std::to_string(it->second));
  }

  void check_nonrecursive() const {
    // DFS over the predicate dependency graph (head -> body predicates).
    std::map<std::string, int> state;  // 0 fresh, 1 on stack, 2 done
    std::vector<std::string> stack;
    for (const auto& p : idb_) {
      if (state[p] == 0) dfs(p, state, stack);
    }
  }

  void dfs(const std::string& p, std::map<std::string, int>& state,
           std::vector<std::string>& stack) const {
    state[p] = 1;
    stack.push_back(p);
    for (const auto& r : rules_for(p)) {
      for (const auto& l : r.body) {
        const std::string& q = l.a.pred;
        if (!is_idb(q)) continue;
        if (state[q] == 1) {
          auto at = std::find(stack.begin(), stack.end(), q);
          std::string cycle;
          for (auto it = at; it != stack.end(); ++it)
            cycle += *it + " -> ";
          cycle += q;
          throw validation_error("recursive program: " + cycle);
        }
        if (state[q] == 0) dfs(q, state, stack);
      }
    }
    stack.pop_back();
    state[p] = 2;
  }

  std::vector<rule> rules_;
  std::map<std::string, int> arity_;
  std::set<std::string> idb_;
  std::map<std::string, std::vector<rule>> rules_by_head_;
};

/// parse_program / parse_database free-function spellings.
inline program parse_program(const std::string& source) {
  return program::parse(source);
}

class database {
 public:
  static database parse(const std::string& source) {
    detail::parser p(source);
    database out;
    while (!p.at_end()) {
      auto [a, annotation] = p.parse_fact();
      if (!a.is_ground())
        throw validation_error("database fact " + a.to_string() +
                               " is not ground");
      out.add_fact(a.ground_atom(), annotation);
    }
    return out;
  }

  void add_fact(const gatom& fact, std::optional<std::string> annotation) {
    std::string name = annotation ? *annotation : fact.to_string();
    if (!annotation_.emplace(fact, name).second)
      throw validation_error("duplicate fact " + fact.to_string());
    facts_.push_back(fact);
    note_arity(fact);
  }

  bool contains(const gatom& fact) const {
    return annotation_.count(fact) != 0;
  }

  const std::string& annotation(const gatom& fact) const {
    auto it = annotation_.find(fact);
    if (it == annotation_.end())
      throw validation_error("no such fact: " + fact.to_string());
    return it->second;
  }

  const std::vector<gatom>& facts() const { return facts_; }

  std::size_t size() const { return facts_.size(); }

  bool known(const std::string& pred) const { return arity_.count(pred) != 0; }

  int arity(const std::string& pred) const { return arity_.at(pred); }

  std::set<std::string> constants() const {
    std::set<std::string> out;
    for (const auto& f : facts_)
      for (const auto& c : f.args) out.insert(c);
    return out;
  }

  std::string to_string() const {
    std::string out;
    for (const auto& f : facts_) {
      out += f.to_string();
      const std::string& ann = annotation_.at(f);
      if (ann != f.to_string()) out += " @" + ann;
      out += ".\n";
    }
    return out;
  }

 private:
  void note_arity(const gatom& f) {
    auto [it, inserted] = arity_.emplace(f.pred, (int)f.args.size());
    if (!inserted && it->second != (int)f.args.size())
      throw validation_error("predicate " + f.pred + " used with arity " +
                             std::to_string(f.args.size()) + " and " +
                             std::to_string(it->second));
  }

  std::vector<gatom> facts_;
  std::map<gatom, std::string> annotation_;
  std::map<std::string, int> arity_;
};

inline database parse_database(const std::string& source) {
  return database::parse(source);
}

/// Cross-checks a program/database pair: facts may not feed predicates
/// that rules also define, and arities must agree.
inline void check_compatible(const program& p, const database& d) {
  for (const auto& f : d.facts()) {
    if (p.is_idb(f.pred))
      throw validation_error("predicate " + f.pred +
                             " has both facts and rules");
    if (p.known(f.pred) && p.arity(f.pred) != (int)f.args.size())
      throw validation_error("fact " + f.to_string() + " has arity " +
                             std::to_string(f.args.size()) +
                             " but the program uses arity " +
                             std::to_string(p.arity(f.pred)));
  }
}

/// Constants of program and database, in token order.
inline std::vector<std::string> active_domain(const program& p,
                                              const database& d) {
  std::set<std::string> consts = p.constants();
  auto dc = d.constants();
  consts.insert(dc.begin(), dc.end());
  return {consts.begin(), consts.end()};
}

/// One rule instance under a total assignment of the rule's variables.
struct ground_rule {
  struct goal {
    int position;  // 1-based position in the body
    bool positive;
    gatom a;
  };

  int rule_index;
  std::vector<std::string> variables;  // sorted names
  std::vector<std::string> binding;    // parallel to variables
  gatom head;
  std::vector<goal> goals;

  std::map<std::string, std::string> binding_map() const {
    std::map<std::string, std::string> out;
    for (std::size_t i = 0; i < variables.size(); ++i)
      out.emplace(variables[i], binding[i]);
    return out;
  }
};

/// All assignments of one rule's variables over the active domain, in
/// odometer order (last variable fastest). |adom|^#vars instances; a
/// rule with variables over an empty domain grounds to nothing.
inline std::vector<ground_rule> ground(const rule& r,
                                       const std::vector<std::string>& adom) {
  std::vector<ground_rule> out;
  std::vector<std::string> vars = r.variables();
  if (!vars.empty() && adom.empty()) return out;

  std::vector<std::size_t> odometer(vars.size(), 0);
  while (true) {
    ground_rule g;
    g.rule_index = r.index;
    g.variables = vars;
    std::map<std::string, std::string> binding;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      g.binding.push_back(adom[odometer[i]]);
      binding.emplace(vars[i], adom[odometer[i]]);
    }
    g.head = r.head.apply(binding);
    int position = 1;
    for (const auto& l : r.body)
      g.goals.push_back({position++, l.positive, l.a.apply(binding)});
    out.push_back(std::move(g));

    std::size_t i = vars.size();
    while (i > 0) {
      --i;
      if (++odometer[i] < adom.size()) break;
      odometer[i] = 0;
      if (i == 0) return out;
    }
    if (vars.empty()) return out;
  }
}

inline std::vector<ground_rule> ground(const program& p,
                                       const std::vector<std::string>& adom) {
  std::vector<ground_rule> out;
  for (const auto& r : p.rules()) {
    auto instances = ground(r, adom);
    out.insert(out.end(), instances.begin(), instances.end());
  }
  return out;
}

/// Bottom-up stratified evaluation over the active domain. Negated
/// goals test against the completed lower strata. Returns all derived
/// IDB atoms.
inline std::set<gatom> evaluate_stratified(const program& p,
                                           const database& d) {
  check_compatible(p, d);
  auto adom = active_domain(p, d);
  std::set<gatom> derived;
  auto holds = [&](bool positive, const gatom& a) {
    bool present = p.is_idb(a.pred) ? derived.count(a) != 0 : d.contains(a);
    return positive == present;
  };
  for (const auto& pred : p.stratum_order()) {
    for (const auto& r : p.rules_for(pred)) {
      for (const auto& g : ground(r, adom)) {
        bool satisfied = true;
        for (const auto& goal : g.goals)
          if (!holds(goal.positive, goal.a)) {
            satisfied = false;
            break;
          }
        if (satisfied) derived.insert(g.head);
      }
    }
  }
  return derived;
}

/// Bottom-up annotation propagation for positive programs: every ground
/// instance contributes the product of its goal annotations, and the
/// alternatives for one atom are summed. The reference route for the
/// polynomials the game pipeline extracts.
inline std::map<gatom, polynomial> evaluate_semiring(const program& p,
                                                     const database& d) {
  if (!p.is_positive())
    throw negation_error(
        "annotation evaluation is defined for positive programs only");
  check_compatible(p, d);
  auto adom = active_domain(p, d);
  std::map<gatom, polynomial> poly;
  auto annotation_of = [&](const gatom& a) {
    if (p.is_idb(a.pred)) {
      auto it = poly.find(a);
      return it == poly.end() ? polynomial::zero() : it->second;
    }
    return d.contains(a) ? polynomial::variable(d.annotation(a))
                         : polynomial::zero();
  };
  for (const auto& pred : p.stratum_order()) {
    for (const auto& r : p.rules_for(pred)) {
      for (const auto& g : ground(r, adom)) {
        polynomial product = polynomial::one();
        for (const auto& goal : g.goals) {
          product = product.times(annotation_of(goal.a));
          if (product.is_zero()) break;
        }
        if (!product.is_zero()) {
          auto [it, _] = poly.emplace(g.head, polynomial::zero());
          it->second = it->second.plus(product);
        }
      }
    }
  }
  // Only derived atoms carry entries.
  for (auto it = poly.begin(); it != poly.end();)
    it = it->second.is_zero() ? poly.erase(it) : std::next(it);
  return poly;
}

/// Parses a ground atom, e.g. a query target from the command line.
inline gatom parse_ground_atom(const std::string& source) {
  detail::parser p(source);
  atom a = p.parse_atom();
  if (!p.at_end())
    throw parse_error(1, 1, "trailing input after atom");
  return a.ground_atom();
}

}  // namespace provgame
