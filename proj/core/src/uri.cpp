#include "uri.hpp"

#include <cctype>
#include <stdexcept>
#include <vector>

namespace schemaforge::detail {

bool has_uri_scheme(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (std::size_t i = 1; i < s.size(); ++i) {
    char c = s[i];
    if (c == ':') return true;
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') return false;
  }
  return false;
}

namespace {

struct Parts {
  std::string_view scheme;     // without ':'
  std::string_view authority;  // without '//'
  std::string_view path;
  std::string_view query;      // without '?'
  std::string_view fragment;   // without '#'
  bool has_authority = false;
  bool has_query = false;
  bool has_fragment = false;
};

Parts split(std::string_view uri) {
  Parts p;
  auto hash = uri.find('#');
  if (hash != std::string_view::npos) {
    p.has_fragment = true;
    p.fragment = uri.substr(hash + 1);
    uri = uri.substr(0, hash);
  }
  auto q = uri.find('?');
  if (q != std::string_view::npos) {
    p.has_query = true;
    p.query = uri.substr(q + 1);
    uri = uri.substr(0, q);
  }
  if (has_uri_scheme(uri)) {
    auto colon = uri.find(':');
    p.scheme = uri.substr(0, colon);
    uri = uri.substr(colon + 1);
  }
  if (uri.substr(0, 2) == "//") {
    p.has_authority = true;
    uri = uri.substr(2);
    auto slash = uri.find('/');
    if (slash == std::string_view::npos) {
      p.authority = uri;
      uri = {};
    } else {
      p.authority = uri.substr(0, slash);
      uri = uri.substr(slash);
    }
  }
  p.path = uri;
  return p;
}

std::string remove_dot_segments(std::string_view path) {
  std::vector<std::string_view> out;
  bool absolute = !path.empty() && path[0] == '/';
  bool trailing_slash = false;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    auto start = i;
    while (i < path.size() && path[i] != '/') ++i;
    auto seg = path.substr(start, i - start);
    if (seg == ".") {
      trailing_slash = true;
    } else if (seg == "..") {
      if (!out.empty()) out.pop_back();
      trailing_slash = true;
    } else if (!seg.empty()) {
      out.push_back(seg);
      trailing_slash = false;
    }
  }
  if (!path.empty() && path.back() == '/') trailing_slash = true;
  std::string result;
  if (absolute) result += '/';
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k) result += '/';
    result += out[k];
  }
  if (trailing_slash && !result.empty() && result.back() != '/') result += '/';
  return result;
}

std::string merge_paths(const Parts& base, std::string_view ref_path) {
  if (base.has_authority && base.path.empty()) return "/" + std::string(ref_path);
  auto slash = base.path.rfind('/');
  if (slash == std::string_view::npos) return std::string(ref_path);
  return std::string(base.path.substr(0, slash + 1)) + std::string(ref_path);
}

std::string recompose(std::string_view scheme, bool has_authority, std::string_view authority,
                      std::string_view path, bool has_query, std::string_view query,
                      bool has_fragment, std::string_view fragment) {
  std::string out;
  if (!scheme.empty()) {
    out += scheme;
    out += ':';
  }
  if (has_authority) {
    out += "//";
    out += authority;
  }
  out += path;
  if (has_query) {
    out += '?';
    out += query;
  }
  if (has_fragment) {
    out += '#';
    out += fragment;
  }
  return out;
}

}  // namespace

std::string resolve_uri(std::string_view base, std::string_view reference) {
  Parts r = split(reference);
  if (!r.scheme.empty()) {
    return recompose(r.scheme, r.has_authority, r.authority, remove_dot_segments(r.path),
                     r.has_query, r.query, r.has_fragment, r.fragment);
  }
  Parts b = split(base);
  if (r.has_authority) {
    return recompose(b.scheme, true, r.authority, remove_dot_segments(r.path), r.has_query,
                     r.query, r.has_fragment, r.fragment);
  }
  if (r.path.empty()) {
    return recompose(b.scheme, b.has_authority, b.authority, std::string(b.path),
                     r.has_query ? true : b.has_query, r.has_query ? r.query : b.query,
                     r.has_fragment, r.fragment);
  }
  std::string path;
  if (r.path[0] == '/') {
    path = remove_dot_segments(r.path);
  } else {
    path = remove_dot_segments(merge_paths(b, r.path));
  }
  return recompose(b.scheme, b.has_authority, b.authority, path, r.has_query, r.query,
                   r.has_fragment, r.fragment);
}

UrlParts split_url(std::string_view url) {
  Parts p = split(url);
  if (p.scheme.empty()) throw std::invalid_argument("URL has no scheme: " + std::string(url));
  UrlParts out;
  out.scheme = std::string(p.scheme);
  std::string_view auth = p.authority;
  auto colon = auth.rfind(':');
  if (colon != std::string_view::npos && colon + 1 < auth.size() &&
      std::isdigit(static_cast<unsigned char>(auth[colon + 1]))) {
    out.port = std::stoi(std::string(auth.substr(colon + 1)));
    auth = auth.substr(0, colon);
  }
  out.host = std::string(auth);
  out.target = std::string(p.path);
  if (p.has_query) {
    out.target += '?';
    out.target += p.query;
  }
  if (out.target.empty()) out.target = "/";
  return out;
}

}  // namespace schemaforge::detail
