#pragma once

// Polytope documents, certificate files and reports.
//
// Text format:
//   # comment
//   label <free text>
//   dim <n>
//   v <int> <int> [<int>]
// A file may hold several documents; a `dim` line after vertices, or a
// `label` line after vertices, starts the next one.
//
// Certificates:
//   dim 3
//   target
//   v ...
//   <blank>
//   piece <witness_kind>
//   v ...

#include <charconv>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "latnorm/certificate.hpp"

namespace latnorm {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& source, int line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

struct PolytopeDocument {
  int dim = 3;
  std::vector<Point> vertices;
  std::optional<std::string> label;

  Polytope polytope() const { return convex_hull(vertices); }

  static PolytopeDocument from(const Polytope& P, std::optional<std::string> label = std::nullopt) {
    return {P.ambient_dim(), P.vertices(), std::move(label)};
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<Int> parse_int(std::string_view s) {
  Int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

struct LineReader {
  std::string source;

  Point vertex(const std::vector<std::string_view>& tok, int dim, int line) const {
    if (int(tok.size()) - 1 != dim)
      throw ParseError(source, line, "expected " + std::to_string(dim) + " coordinates, got " +
                                         std::to_string(tok.size() - 1));
    Point p(dim);
    for (int i = 0; i < dim; ++i) {
      auto v = parse_int(tok[i + 1]);
      if (!v) throw ParseError(source, line, "not an integer: '" + std::string(tok[i + 1]) + "'");
      p[i] = *v;
    }
    return p;
  }

  int dim(const std::vector<std::string_view>& tok, int line) const {
    if (tok.size() != 2) throw ParseError(source, line, "expected 'dim <n>'");
    auto d = parse_int(tok[1]);
    if (!d || *d < 1 || *d > 3) throw ParseError(source, line, "dimension must be 1, 2 or 3");
    return int(*d);
  }
};

inline bool looks_like_json(std::string_view text) {
  text = trim(text);
  return !text.empty() && (text.front() == '{' || text.front() == '[');
}

inline PolytopeDocument document_from_json(const nlohmann::json& j, const std::string& source) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("vertices"))
    throw ParseError(source, 1, "JSON document needs 'dim' and 'vertices'");
  PolytopeDocument d;
  if (!j["dim"].is_number_integer()) throw ParseError(source, 1, "'dim' must be an integer");
  d.dim = j["dim"].get<int>();
  if (d.dim < 1 || d.dim > 3) throw ParseError(source, 1, "dimension must be 1, 2 or 3");
  for (const auto& v : j["vertices"]) {
    if (!v.is_array() || int(v.size()) != d.dim)
      throw ParseError(source, 1, "vertex " + v.dump() + " does not have " + std::to_string(d.dim) + " coordinates");
    Point p(d.dim);
    for (int i = 0; i < d.dim; ++i) {
      if (!v[i].is_number_integer()) throw ParseError(source, 1, "non-integer coordinate in " + v.dump());
      p[i] = v[i].get<Int>();
    }
    d.vertices.push_back(p);
  }
  if (d.vertices.empty()) throw ParseError(source, 1, "document has no vertices");
  if (j.contains("label")) d.label = j["label"].get<std::string>();
  return d;
}

}  // namespace detail

/// Reads one or more documents in the text or JSON format.
inline std::vector<PolytopeDocument> parse_documents(std::string_view text, const std::string& source = "<input>") {
  std::vector<PolytopeDocument> docs;
  if (detail::looks_like_json(text)) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(source, 1, std::string("invalid JSON: ") + e.what());
    }
    if (j.is_array())
      for (const auto& e : j) docs.push_back(detail::document_from_json(e, source));
    else
      docs.push_back(detail::document_from_json(j, source));
  } else {
    detail::LineReader rd{source};
    std::optional<PolytopeDocument> cur;
    bool has_dim = false;
    int line_no = 0, start_line = 0;
    auto finish = [&] {
      if (!cur) return;
      if (!has_dim) throw ParseError(source, start_line, "document has no 'dim' line");
      if (cur->vertices.empty()) throw ParseError(source, start_line, "document has no vertices");
      docs.push_back(std::move(*cur));
      cur.reset();
      has_dim = false;
    };
    for (auto raw : detail::lines_of(text)) {
      ++line_no;
      auto l = raw.substr(0, raw.find('#'));
      auto tok = detail::split_ws(l);
      if (tok.empty()) continue;
      if (tok[0] == "label") {
        if (cur && (!cur->vertices.empty() || cur->label)) finish();
        if (!cur) cur.emplace(), start_line = line_no;
        cur->label = std::string(detail::trim(detail::trim(l).substr(5)));
      } else if (tok[0] == "dim") {
        if (cur && (has_dim || !cur->vertices.empty())) finish();
        if (!cur) cur.emplace(), start_line = line_no;
        cur->dim = rd.dim(tok, line_no);
        has_dim = true;
      } else if (tok[0] == "v") {
        if (!cur || !has_dim) throw ParseError(source, line_no, "vertex before 'dim' line");
        cur->vertices.push_back(rd.vertex(tok, cur->dim, line_no));
      } else {
        throw ParseError(source, line_no, "unknown keyword '" + std::string(tok[0]) + "'");
      }
    }
    finish();
  }
  if (docs.empty()) throw ParseError(source, 1, "no polytope document found");
  return docs;
}

inline std::string write_document(const PolytopeDocument& d) {
  std::ostringstream os;
  if (d.label) os << "label " << *d.label << "\n";
  os << "dim " << d.dim << "\n";
  for (const auto& v : d.vertices) {
    os << "v";
    for (int i = 0; i < d.dim; ++i) os << " " << v[i];
    os << "\n";
  }
  return os.str();
}

inline nlohmann::json to_json(const Point& p) {
  auto a = nlohmann::json::array();
  for (int i = 0; i < p.dim(); ++i) a.push_back(p[i]);
  return a;
}

inline nlohmann::json to_json(const PolytopeDocument& d) {
  nlohmann::json j;
  j["dim"] = d.dim;
  if (d.label) j["label"] = *d.label;
  j["vertices"] = nlohmann::json::array();
  for (const auto& v : d.vertices) j["vertices"].push_back(to_json(v));
  return j;
}

// ---------------------------------------------------------------------------
// Certificates

inline std::string write_certificate(const NormalityCertificate& c) {
  std::ostringstream os;
  auto block = [&](const Polytope& P) {
    for (const auto& v : P.vertices()) {
      os << "v";
      for (int i = 0; i < v.dim(); ++i) os << " " << v[i];
      os << "\n";
    }
  };
  os << "dim " << c.target.ambient_dim() << "\ntarget\n";
  block(c.target);
  for (const auto& p : c.pieces) {
    os << "\npiece " << to_string(p.kind) << "\n";
    block(p.polytope);
  }
  return os.str();
}

inline NormalityCertificate parse_certificate(std::string_view text, const std::string& source = "<certificate>") {
  detail::LineReader rd{source};
  int dim = 0, line_no = 0, first_piece = 0;
  std::optional<WitnessKind> kind;
  bool in_target = false;
  std::vector<Point> target, cur;
  std::vector<std::pair<WitnessKind, std::vector<Point>>> pieces;
  auto close = [&] {
    if (kind) pieces.emplace_back(*kind, std::move(cur));
    cur.clear();
    kind.reset();
  };
  for (auto raw : detail::lines_of(text)) {
    ++line_no;
    auto tok = detail::split_ws(raw.substr(0, raw.find('#')));
    if (tok.empty()) continue;
    if (tok[0] == "dim") {
      dim = rd.dim(tok, line_no);
    } else if (tok[0] == "target") {
      close();
      in_target = true;
    } else if (tok[0] == "piece") {
      close();
      in_target = false;
      if (!first_piece) first_piece = line_no;
      if (tok.size() != 2) throw ParseError(source, line_no, "expected 'piece <witness_kind>'");
      kind = parse_witness_kind(tok[1]);
      if (!kind) throw ParseError(source, line_no, "unknown witness kind '" + std::string(tok[1]) + "'");
    } else if (tok[0] == "v") {
      if (dim == 0) throw ParseError(source, line_no, "vertex before 'dim' line");
      if (in_target)
        target.push_back(rd.vertex(tok, dim, line_no));
      else if (kind)
        cur.push_back(rd.vertex(tok, dim, line_no));
      else
        throw ParseError(source, line_no, "vertex outside a target or piece block");
    } else {
      throw ParseError(source, line_no, "unknown keyword '" + std::string(tok[0]) + "'");
    }
  }
  close();
  if (target.empty()) throw ParseError(source, first_piece ? first_piece : std::max(line_no, 1), "certificate has no target");
  NormalityCertificate c{convex_hull(target), {}};
  for (auto& [k, pts] : pieces) {
    if (pts.empty()) throw ParseError(source, line_no, "empty piece");
    c.pieces.push_back({convex_hull(pts), k});
  }
  return c;
}

inline nlohmann::json to_json(const NormalityCertificate& c) {
  nlohmann::json j;
  j["target"] = to_json(PolytopeDocument::from(c.target));
  j["pieces"] = nlohmann::json::array();
  for (const auto& p : c.pieces) {
    nlohmann::json e;
    e["kind"] = std::string(to_string(p.kind));
    e["vertices"] = nlohmann::json::array();
    for (const auto& v : p.polytope.vertices()) e["vertices"].push_back(to_json(v));
    j["pieces"].push_back(e);
  }
  return j;
}

// ---------------------------------------------------------------------------
// Reports

struct Report {
  std::string label;
  std::optional<bool> simple, smooth, very_ample, normal;
  std::optional<std::string> witness;
  std::optional<std::string> certificate;
  std::optional<double> seconds;

  /// Every requested flag holds.
  bool holds() const {
    for (const auto& f : {simple, smooth, very_ample, normal})
      if (f && !*f) return false;
    return true;
  }

  std::string text() const {
    std::ostringstream os;
    os << "polytope: " << label << "\n";
    auto flag = [&](const char* name, const std::optional<bool>& f) {
      if (f) os << "  " << name << ": " << (*f ? "yes" : "no") << "\n";
    };
    flag("simple", simple);
    flag("smooth", smooth);
    flag("very_ample", very_ample);
    flag("normal", normal);
    if (witness) os << "  witness: " << *witness << "\n";
    if (certificate) os << "  certificate: " << *certificate << "\n";
    if (seconds) os << "  seconds: " << *seconds << "\n";
    return os.str();
  }

  nlohmann::json json() const {
    nlohmann::json j;
    j["polytope"] = label;
    auto flag = [&](const char* name, const std::optional<bool>& f) {
      if (f) j[name] = *f;
    };
    flag("simple", simple);
    flag("smooth", smooth);
    flag("very_ample", very_ample);
    flag("normal", normal);
    if (witness) j["witness"] = *witness;
    if (certificate) j["certificate"] = *certificate;
    if (seconds) j["seconds"] = *seconds;
    return j;
  }
};

}  // namespace latnorm
