#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "schemaforge/errors.hpp"
#include "schemaforge/rdf.hpp"

namespace schemaforge {

namespace detail {

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

}  // namespace detail

namespace {

class NtLine {
 public:
  NtLine(std::string_view line, std::size_t lineno) : s_(line), lineno_(lineno) {}

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, lineno_, 0); }

  Term parse_term() {
    skip_ws();
    char c = peek();
    if (c == '<') return parse_iri();
    if (c == '_') return parse_blank();
    if (c == '"') return parse_literal();
    fail("expected IRI, blank node, or literal");
  }

  Term parse_iri() {
    expect('<');
    std::string value;
    while (pos_ < s_.size() && s_[pos_] != '>') {
      char c = s_[pos_];
      if (c == '\\') {
        value += read_uchar();
      } else if (c == ' ' || c == '<' || c == '"') {
        fail("invalid character in IRI");
      } else {
        value += c;
        ++pos_;
      }
    }
    expect('>');
    return Term::iri(std::move(value));
  }

  Term parse_blank() {
    expect('_');
    expect(':');
    std::string label;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                s_[pos_] == '_' || s_[pos_] == '-' || s_[pos_] == '.')) {
      label += s_[pos_++];
    }
    while (!label.empty() && label.back() == '.') {
      label.pop_back();
      --pos_;
    }
    if (label.empty()) fail("empty blank node label");
    return Term::blank(std::move(label));
  }

  Term parse_literal() {
    expect('"');
    std::string lexical;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      char c = s_[pos_];
      if (c == '\\') {
        lexical += read_escape();
      } else {
        lexical += c;
        ++pos_;
      }
    }
    expect('"');
    std::string datatype;
    std::string language;
    if (peek() == '@') {
      ++pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-')) {
        language += s_[pos_++];
      }
      if (language.empty()) fail("empty language tag");
    } else if (peek() == '^') {
      expect('^');
      expect('^');
      datatype = parse_iri().value;
    }
    return Term::literal(std::move(lexical), std::move(datatype), std::move(language));
  }

  void expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void expect_dot() {
    skip_ws();
    expect('.');
    if (!at_end()) fail("trailing content after '.'");
  }

 private:
  std::string read_escape() {
    // pos_ is at '\'
    if (pos_ + 1 >= s_.size()) fail("dangling escape");
    char e = s_[pos_ + 1];
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
    // pos_ at '\', next is 'u' (4 hex digits) or 'U' (8 hex digits)
    if (pos_ + 1 >= s_.size()) fail("dangling escape");
    char e = s_[pos_ + 1];
    int digits = e == 'u' ? 4 : e == 'U' ? 8 : 0;
    if (digits == 0) fail("invalid IRI escape");
    if (pos_ + 2 + digits > s_.size()) fail("truncated \\u escape");
    std::uint32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      char h = s_[pos_ + 2 + i];
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

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t lineno_;
};

}  // namespace

Graph parse_ntriples(std::string_view text) {
  std::vector<Triple> triples;
  std::map<std::string, std::string> blank_names;
  auto canonical_blank = [&](Term t) {
    if (t.is_blank()) {
      auto [it, inserted] = blank_names.emplace(t.value, "b" + std::to_string(blank_names.size()));
      t.value = it->second;
    }
    return t;
  };

  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++lineno;

    NtLine p(line, lineno);
    if (!p.at_end()) {
      Term subject = p.parse_term();
      if (subject.is_literal()) p.fail("literal subject");
      Term predicate = p.parse_term();
      if (!predicate.is_iri()) p.fail("predicate must be an IRI");
      Term object = p.parse_term();
      p.expect_dot();
      triples.push_back({canonical_blank(std::move(subject)), std::move(predicate),
                         canonical_blank(std::move(object))});
    }

    if (end == text.size()) break;
    start = end + 1;
  }
  return Graph::from_triples(std::move(triples));
}

}  // namespace schemaforge
