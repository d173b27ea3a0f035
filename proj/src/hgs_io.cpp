#include "hss/hgs_io.hpp"

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

namespace hss {

namespace {

[[noreturn]] void fail(uint64_t line, const std::string& msg) {
  throw MalformedInput("line " + std::to_string(line) + ": " + msg);
}

// strips comments and surrounding whitespace; empty result means skip
std::string clean_line(const std::string& raw) {
  std::string s = raw;
  auto hash = s.find('#');
  if (hash != std::string::npos) s.erase(hash);
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
    s.pop_back();
  size_t start = s.find_first_not_of(" \t");
  return start == std::string::npos ? std::string() : s.substr(start);
}

uint64_t parse_u64(const std::string& tok, uint64_t line, const char* what) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    fail(line, std::string("expected unsigned integer for ") + what + ", got '" + tok + "'");
  errno = 0;
  char* end = nullptr;
  uint64_t v = std::strtoull(tok.c_str(), &end, 10);
  if (errno != 0 || *end != '\0') fail(line, std::string("bad integer for ") + what);
  return v;
}

uint64_t parse_kv(const std::string& tok, const char* key, uint64_t line) {
  std::string prefix = std::string(key) + "=";
  if (tok.rfind(prefix, 0) != 0) fail(line, "expected " + prefix + "<int>, got '" + tok + "'");
  return parse_u64(tok.substr(prefix.size()), line, key);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace

StreamHeader stream_hgs(std::istream& is,
                        const std::function<void(const StreamUpdate&)>& fn,
                        const std::function<void(const StreamHeader&)>& on_header) {
  StreamHeader hdr;
  uint64_t line_no = 0;
  std::string raw;
  bool have_header = false;

  while (std::getline(is, raw)) {
    ++line_no;
    std::string s = clean_line(raw);
    if (s.empty()) continue;
    auto toks = split_ws(s);

    if (!have_header) {
      if (toks.size() != 4 || toks[0] != "H") fail(line_no, "expected header 'H n=<n> r=<r> k=<k>'");
      hdr.n = static_cast<uint32_t>(parse_kv(toks[1], "n", line_no));
      hdr.r = static_cast<uint32_t>(parse_kv(toks[2], "r", line_no));
      hdr.k = parse_kv(toks[3], "k", line_no);
      if (hdr.n == 0 || hdr.n > kMaxVertices) fail(line_no, "n out of range");
      if (hdr.r == 0 || hdr.r > kMaxArity) fail(line_no, "r out of range");
      have_header = true;
      if (on_header) on_header(hdr);
      continue;
    }

    int delta;
    if (toks[0] == "+")
      delta = +1;
    else if (toks[0] == "-")
      delta = -1;
    else
      fail(line_no, "update must start with '+' or '-'");
    if (toks.size() < 2) fail(line_no, "update has no vertices");
    std::vector<VertexId> vs;
    for (size_t i = 1; i < toks.size(); ++i) {
      uint64_t v = parse_u64(toks[i], line_no, "vertex");
      if (v >= hdr.n) fail(line_no, "vertex " + std::to_string(v) + " out of range");
      vs.push_back(static_cast<VertexId>(v));
    }
    if (vs.size() > hdr.r) fail(line_no, "arity exceeds r");
    std::sort(vs.begin(), vs.end());
    if (std::adjacent_find(vs.begin(), vs.end()) != vs.end())
      fail(line_no, "duplicate vertex in edge");
    fn(StreamUpdate{Hyperedge(vs), delta});
  }
  if (!have_header) throw MalformedInput("empty stream: missing header");
  return hdr;
}

Hypergraph materialize_hgs(std::istream& is, StreamHeader* header_out) {
  std::optional<Hypergraph> h;
  StreamHeader hdr = stream_hgs(
      is, [&](const StreamUpdate& u) { h->apply(u); },
      [&](const StreamHeader& hd) { h.emplace(hd.n, hd.r); });
  if (header_out) *header_out = hdr;
  return std::move(*h);
}

void write_hgs(std::ostream& os, const StreamHeader& header,
               const std::vector<StreamUpdate>& updates) {
  os << "H n=" << header.n << " r=" << header.r << " k=" << header.k << "\n";
  for (const auto& u : updates) {
    os << (u.delta > 0 ? "+" : "-");
    for (VertexId v : u.edge.vertices()) os << " " << v;
    os << "\n";
  }
}

WeightedHypergraph read_hgw(std::istream& is) {
  uint64_t line_no = 0;
  std::string raw;
  uint32_t n = 0;
  bool have_header = false;
  std::vector<std::pair<Hyperedge, uint64_t>> edges;
  uint32_t max_arity = 1;

  while (std::getline(is, raw)) {
    ++line_no;
    std::string s = clean_line(raw);
    if (s.empty()) continue;
    auto toks = split_ws(s);
    if (!have_header) {
      if (toks.size() != 2 || toks[0] != "W") fail(line_no, "expected header 'W n=<n>'");
      n = static_cast<uint32_t>(parse_kv(toks[1], "n", line_no));
      if (n == 0 || n > kMaxVertices) fail(line_no, "n out of range");
      have_header = true;
      continue;
    }
    if (toks.size() < 2) fail(line_no, "weighted edge needs a weight and vertices");
    uint64_t w = parse_u64(toks[0], line_no, "weight");
    if (w == 0) fail(line_no, "zero weight");
    std::vector<VertexId> vs;
    for (size_t i = 1; i < toks.size(); ++i) {
      uint64_t v = parse_u64(toks[i], line_no, "vertex");
      if (v >= n) fail(line_no, "vertex out of range");
      vs.push_back(static_cast<VertexId>(v));
    }
    std::sort(vs.begin(), vs.end());
    if (std::adjacent_find(vs.begin(), vs.end()) != vs.end())
      fail(line_no, "duplicate vertex in edge");
    Hyperedge e(vs);
    max_arity = std::max(max_arity, e.arity());
    edges.emplace_back(std::move(e), w);
  }
  if (!have_header) throw MalformedInput("empty sparsifier: missing header");
  WeightedHypergraph h(n, std::min(std::max(max_arity, 1u), kMaxArity));
  for (auto& [e, w] : edges) h.add(e, w);
  return h;
}

void write_hgw(std::ostream& os, const WeightedHypergraph& h) {
  os << "W n=" << h.n() << "\n";
  for (const auto& [e, w] : h.weighted_edges()) {
    os << w;
    for (VertexId v : e.vertices()) os << " " << v;
    os << "\n";
  }
}

void write_manifest(std::ostream& os,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
  for (const auto& [k, v] : entries) os << k << " = " << v << "\n";
}

}  // namespace hss
