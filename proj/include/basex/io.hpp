#pragma once

#include <string>
#include <vector>

#include "basex/distribution.hpp"
#include "basex/linalg.hpp"

namespace basex::io {

// Floating-point serialization with 17 significant digits (round-trip
// exact, byte-stable across runs).
std::string format_double(double v);

// Ensemble CSV: n lines of n comma-separated reals.
linalg::SymmetricMatrix parse_ensemble_csv(const std::string& path);

// Table CSV: one `i1;i2;...;ik,weight` line per subset, 0-based indices.
ExplicitTable parse_table_csv(const std::string& path);

// Graph CSV: one `u,v,weight` line per edge, 0-based vertices.
SpanningTreeDistribution parse_graph_csv(const std::string& path);

}  // namespace basex::io
