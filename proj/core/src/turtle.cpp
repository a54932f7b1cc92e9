#include <cctype>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "schemaforge/errors.hpp"
#include "schemaforge/rdf.hpp"
#include "uri.hpp"

namespace schemaforge {

namespace detail {
void append_utf8(std::string& out, std::uint32_t cp);  // ntriples.cpp
}

namespace {

bool is_local_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
         c == ':' || static_cast<unsigned char>(c) >= 0x80;
}

bool is_pn_local_esc(char c) {
  return std::string_view("_~.-!$&'()*+,;=/?#@%").find(c) != std::string_view::npos;
}

/// Recursive-descent parser for the Turtle subset used by schema files:
/// directives, ';'/',' lists, 'a', blank-node property lists, collections,
/// and the common literal forms.
class TurtleParser {
 public:
  explicit TurtleParser(std::string_view text) : in_(text) {}

  Graph parse() {
    while (true) {
      skip_ws();
      if (at_end()) break;
      statement();
    }
    return Graph::from_triples(std::move(triples_), std::move(prefixes_));
  }

 private:
  // ---- statements ------------------------------------------------------

  void statement() {
    if (peek() == '@') {
      at_directive();
      return;
    }
    if (sparql_directive()) return;
    triples();
    skip_ws();
    expect('.', "expected '.' at end of statement");
  }

  void at_directive() {
    expect('@', "expected '@'");
    std::string word = read_bare_word();
    if (word == "prefix") {
      prefix_directive();
      skip_ws();
      expect('.', "expected '.' after @prefix");
    } else if (word == "base") {
      base_directive();
      skip_ws();
      expect('.', "expected '.' after @base");
    } else {
      fail("unknown directive '@" + word + "'");
    }
  }

  // SPARQL-style PREFIX/BASE, no trailing dot. A prefixed name whose prefix
  // happens to spell "prefix" is disambiguated by the following ':'.
  bool sparql_directive() {
    std::size_t save = pos_;
    std::string word = read_bare_word();
    if (!word.empty() && peek() != ':') {
      std::string lower;
      for (char c : word) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (lower == "prefix") {
        prefix_directive();
        return true;
      }
      if (lower == "base") {
        base_directive();
        return true;
      }
    }
    pos_ = save;
    return false;
  }

  void prefix_directive() {
    skip_ws();
    std::string prefix = read_prefix_name();
    expect(':', "expected ':' in prefix declaration");
    skip_ws();
    std::string ns = read_iriref();
    prefixes_[prefix] = ns;
  }

  void base_directive() {
    skip_ws();
    base_ = read_iriref();
  }

  void triples() {
    skip_ws();
    if (peek() == '[') {
      Term node = blank_node_property_list();
      skip_ws();
      if (peek() != '.') predicate_object_list(node);
      return;
    }
    Term subject = parse_subject();
    predicate_object_list(subject);
  }

  Term parse_subject() {
    skip_ws();
    char c = peek();
    if (c == '(') return collection();
    if (c == '_') return labeled_blank();
    Term t = parse_iri();
    return t;
  }

  void predicate_object_list(const Term& subject) {
    while (true) {
      skip_ws();
      Term predicate = parse_verb();
      object_list(subject, predicate);
      skip_ws();
      if (peek() != ';') break;
      advance();
      skip_ws();
      // Turtle allows a dangling ';' before '.' or ']'.
      if (peek() == '.' || peek() == ']' || at_end()) break;
    }
  }

  Term parse_verb() {
    if (peek() == 'a') {
      char n = peek_at(1);
      if (n == '\0' || std::isspace(static_cast<unsigned char>(n)) || n == '<' || n == '[' ||
          n == '(' || n == '_' || n == '"' || n == '\'' || n == '#') {
        advance();
        return Term::iri(std::string(iri::rdf_type));
      }
    }
    Term t = parse_iri();
    return t;
  }

  void object_list(const Term& subject, const Term& predicate) {
    while (true) {
      Term object = parse_object();
      triples_.push_back({subject, predicate, object});
      skip_ws();
      if (peek() != ',') break;
      advance();
      skip_ws();
    }
  }

  Term parse_object() {
    skip_ws();
    char c = peek();
    if (c == '\0') fail("unexpected end of input, expected object");
    if (c == '<') return parse_iri();
    if (c == '[') return blank_node_property_list();
    if (c == '(') return collection();
    if (c == '_') return labeled_blank();
    if (c == '"' || c == '\'') return string_literal();
    if (c == '+' || c == '-' || std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek_at(1))))) {
      return numeric_literal();
    }
    if (boolean_ahead()) return boolean_literal();
    return parse_iri();  // prefixed name
  }

  // ---- terms -----------------------------------------------------------

  Term parse_iri() {
    skip_ws();
    if (peek() == '<') return Term::iri(read_iriref());
    return prefixed_name();
  }

  std::string read_iriref() {
    expect('<', "expected '<'");
    std::string value;
    while (true) {
      char c = peek();
      if (c == '\0' || c == '\n') fail("unterminated IRI");
      if (c == '>') break;
      if (c == '\\') {
        value += read_uchar();
        continue;
      }
      if (c == ' ' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`') {
        fail("invalid character in IRI");
      }
      value += c;
      advance();
    }
    advance();  // '>'
    if (detail::has_uri_scheme(value)) return value;
    if (base_.empty()) fail("relative IRI <" + value + "> without @base");
    return detail::resolve_uri(base_, value);
  }

  Term prefixed_name() {
    std::size_t start = pos_;
    std::string prefix = read_prefix_name();
    if (peek() != ':') {
      pos_ = start;
      fail("expected IRI or prefixed name");
    }
    advance();
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) {
      auto [line, col] = position_at(start);
      throw UnresolvedPrefixError(prefix, line, col);
    }
    std::string local = read_local_name();
    return Term::iri(it->second + local);
  }

  std::string read_prefix_name() {
    std::string name;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-' ||
           peek() == '.' || static_cast<unsigned char>(peek()) >= 0x80) {
      name += peek();
      advance();
    }
    while (!name.empty() && name.back() == '.') {
      name.pop_back();
      --pos_;
    }
    return name;
  }

  std::string read_local_name() {
    std::string local;
    std::size_t taken = 0;  // bytes consumed for the current run, for dot backoff
    while (true) {
      char c = peek();
      if (c == '\\') {
        char e = peek_at(1);
        if (!is_pn_local_esc(e)) fail("invalid local-name escape");
        local += e;
        advance();
        advance();
        taken = 0;
      } else if (c == '%') {
        char h1 = peek_at(1), h2 = peek_at(2);
        if (!std::isxdigit(static_cast<unsigned char>(h1)) ||
            !std::isxdigit(static_cast<unsigned char>(h2))) {
          fail("invalid percent escape in local name");
        }
        local += c;
        local += h1;
        local += h2;
        advance();
        advance();
        advance();
        taken = 0;
      } else if (is_local_char(c)) {
        local += c;
        advance();
        ++taken;
      } else {
        break;
      }
    }
    // A trailing '.' belongs to the statement, not the name.
    while (!local.empty() && local.back() == '.' && taken > 0) {
      local.pop_back();
      --pos_;
      --taken;
    }
    return local;
  }

  Term labeled_blank() {
    expect('_', "expected blank node");
    expect(':', "expected ':' after '_'");
    std::string label;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-' ||
           peek() == '.') {
      label += peek();
      advance();
    }
    while (!label.empty() && label.back() == '.') {
      label.pop_back();
      --pos_;
    }
    if (label.empty()) fail("empty blank node label");
    auto [it, inserted] = blank_names_.emplace(label, "");
    if (inserted) it->second = fresh_blank_label();
    return Term::blank(it->second);
  }

  Term blank_node_property_list() {
    expect('[', "expected '['");
    Term node = Term::blank(fresh_blank_label());
    skip_ws();
    if (peek() == ']') {
      advance();
      return node;
    }
    predicate_object_list(node);
    skip_ws();
    expect(']', "expected ']'");
    return node;
  }

  Term collection() {
    expect('(', "expected '('");
    std::vector<Term> items;
    while (true) {
      skip_ws();
      if (peek() == ')') {
        advance();
        break;
      }
      if (at_end()) fail("unterminated collection");
      items.push_back(parse_object());
    }
    if (items.empty()) return Term::iri(std::string(iri::rdf_nil));
    Term head = Term::blank(fresh_blank_label());
    Term node = head;
    for (std::size_t i = 0; i < items.size(); ++i) {
      triples_.push_back({node, Term::iri(std::string(iri::rdf_first)), items[i]});
      if (i + 1 < items.size()) {
        Term next = Term::blank(fresh_blank_label());
        triples_.push_back({node, Term::iri(std::string(iri::rdf_rest)), next});
        node = next;
      } else {
        triples_.push_back({node, Term::iri(std::string(iri::rdf_rest)),
                            Term::iri(std::string(iri::rdf_nil))});
      }
    }
    return head;
  }

  Term string_literal() {
    char quote = peek();
    std::string lexical;
    bool long_form = peek_at(1) == quote && peek_at(2) == quote;
    if (long_form) {
      advance();
      advance();
      advance();
      while (true) {
        if (at_end()) fail("unterminated long string");
        if (peek() == quote && peek_at(1) == quote && peek_at(2) == quote) {
          advance();
          advance();
          advance();
          break;
        }
        if (peek() == '\\') {
          lexical += read_echar();
        } else {
          lexical += peek();
          advance();
        }
      }
    } else {
      advance();
      while (true) {
        char c = peek();
        if (c == '\0' || c == '\n') fail("unterminated string");
        if (c == quote) {
          advance();
          break;
        }
        if (c == '\\') {
          lexical += read_echar();
        } else {
          lexical += c;
          advance();
        }
      }
    }

    if (peek() == '@') {
      advance();
      std::string lang;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-') {
        lang += peek();
        advance();
      }
      if (lang.empty()) fail("empty language tag");
      return Term::literal(std::move(lexical), "", std::move(lang));
    }
    if (peek() == '^' && peek_at(1) == '^') {
      advance();
      advance();
      Term dt = parse_iri();
      return Term::literal(std::move(lexical), std::move(dt.value));
    }
    return Term::literal(std::move(lexical));
  }

  Term numeric_literal() {
    std::string lex;
    bool has_dot = false, has_exp = false;
    if (peek() == '+' || peek() == '-') {
      lex += peek();
      advance();
    }
    while (true) {
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        lex += c;
        advance();
      } else if (c == '.' && !has_dot && !has_exp &&
                 std::isdigit(static_cast<unsigned char>(peek_at(1)))) {
        has_dot = true;
        lex += c;
        advance();
      } else if ((c == 'e' || c == 'E') && !has_exp) {
        char n = peek_at(1);
        char n2 = peek_at(2);
        if (std::isdigit(static_cast<unsigned char>(n)) ||
            ((n == '+' || n == '-') && std::isdigit(static_cast<unsigned char>(n2)))) {
          has_exp = true;
          lex += c;
          advance();
          if (peek() == '+' || peek() == '-') {
            lex += peek();
            advance();
          }
        } else {
          break;
        }
      } else {
        break;
      }
    }
    if (lex.empty() || lex == "+" || lex == "-") fail("malformed numeric literal");
    std::string_view dt = has_exp ? iri::xsd_double : has_dot ? iri::xsd_decimal : iri::xsd_integer;
    return Term::literal(std::move(lex), std::string(dt));
  }

  bool boolean_ahead() {
    for (std::string_view word : {std::string_view("true"), std::string_view("false")}) {
      if (in_.substr(pos_, word.size()) == word) {
        char after = peek_at(word.size());
        if (after == '\0' || !is_local_char(after)) return true;
      }
    }
    return false;
  }

  Term boolean_literal() {
    std::string lex = peek() == 't' ? "true" : "false";
    pos_ += lex.size();
    return Term::literal(std::move(lex), std::string(iri::xsd_boolean));
  }

  // ---- low level -------------------------------------------------------

  std::string read_echar() {
    char e = peek_at(1);
    switch (e) {
      case 't': pos_ += 2; return "\t";
      case 'b': pos_ += 2; return "\b";
      case 'n': pos_ += 2; return "\n";
      case 'r': pos_ += 2; return "\r";
      case 'f': pos_ += 2; return "\f";
      case '"': pos_ += 2; return "\"";
      case '\'': pos_ += 2; return "'";
      case '\\': pos_ += 2; return "\\";
      case 'u':
      case 'U': return read_uchar();
      default: fail("unknown escape sequence");
    }
  }

  std::string read_uchar() {
    char e = peek_at(1);
    int digits = e == 'u' ? 4 : e == 'U' ? 8 : 0;
    if (digits == 0) fail("invalid escape");
    std::uint32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      char h = peek_at(2 + static_cast<std::size_t>(i));
      cp <<= 4;
      if (h >= '0' && h <= '9') cp |= static_cast<std::uint32_t>(h - '0');
      else if (h >= 'a' && h <= 'f') cp |= static_cast<std::uint32_t>(h - 'a' + 10);
      else if (h >= 'A' && h <= 'F') cp |= static_cast<std::uint32_t>(h - 'A' + 10);
      else fail("bad hex digit in \\u escape");
    }
    pos_ += 2 + static_cast<std::size_t>(digits);
    std::string out;
    detail::append_utf8(out, cp);
    return out;
  }

  std::string read_bare_word() {
    std::string word;
    while (std::isalpha(static_cast<unsigned char>(peek()))) {
      word += peek();
      advance();
    }
    return word;
  }

  std::string fresh_blank_label() { return "b" + std::to_string(blank_counter_++); }

  void skip_ws() {
    while (pos_ < in_.size()) {
      char c = in_[pos_];
      if (c == '#') {
        while (pos_ < in_.size() && in_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool at_end() const { return pos_ >= in_.size(); }
  char peek() const { return pos_ < in_.size() ? in_[pos_] : '\0'; }
  char peek_at(std::size_t off) const { return pos_ + off < in_.size() ? in_[pos_ + off] : '\0'; }
  void advance() { ++pos_; }

  void expect(char c, const std::string& msg) {
    if (peek() != c) fail(msg);
    advance();
  }

  std::pair<std::size_t, std::size_t> position_at(std::size_t offset) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < in_.size(); ++i) {
      if (in_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  [[noreturn]] void fail(const std::string& msg) const {
    auto [line, col] = position_at(pos_);
    throw SyntaxError(msg, line, col);
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  std::map<std::string, std::string> prefixes_;
  std::string base_;
  std::vector<Triple> triples_;
  std::map<std::string, std::string> blank_names_;
  int blank_counter_ = 0;
};

}  // namespace

Graph parse_turtle(std::string_view text) { return TurtleParser(text).parse(); }

}  // namespace schemaforge
