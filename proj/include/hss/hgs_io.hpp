#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hss/hypergraph.hpp"
#include "hss/stream_engine.hpp"

namespace hss {

// Stream file (.hgs), UTF-8 text, one pass:
//   H n=<n> r=<r> k=<k>
//   + v1 v2 ... vj
//   - v1 v2 ... vj
// '#' starts a comment; blank lines are ignored.
//
// Weighted output (.hgw):
//   W n=<n>
//   w v1 v2 ...        (w a positive decimal integer)

struct StreamHeader {
  uint32_t n = 0;
  uint32_t r = 0;
  uint64_t k = 0;
};

// Reads the header (reported through `on_header` before any update), then
// feeds updates to `fn` in order. Never seeks; safe on pipes. Throws
// MalformedInput with a line number on any parse error.
StreamHeader stream_hgs(std::istream& is, const std::function<void(const StreamUpdate&)>& fn,
                        const std::function<void(const StreamHeader&)>& on_header = {});

// Materializes the final hypergraph, validating 0/1 multiplicities.
Hypergraph materialize_hgs(std::istream& is, StreamHeader* header_out = nullptr);

void write_hgs(std::ostream& os, const StreamHeader& header,
               const std::vector<StreamUpdate>& updates);

WeightedHypergraph read_hgw(std::istream& is);
void write_hgw(std::ostream& os, const WeightedHypergraph& h);

void write_manifest(std::ostream& os,
                    const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace hss
