#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cplearn/model.hpp"
#include "cplearn/search.hpp"

namespace cplearn::coloring {

struct GraphColoringInstance {
    int n_vertex = 0;
    std::vector<std::pair<int, int>> edges; // 1-based vertex ids

    int n_edge() const { return static_cast<int>(edges.size()); }
};

// Model: x_1..x_n in {1..n}, k in {0..n}, NotEqual per edge,
// x_i <= k for all i, objective k.
struct BuiltModel {
    std::unique_ptr<CPModel> model;
    std::vector<int> vertex_vars; // var ids for x_1..x_n
    int k_var = -1;               // objective var id
};

BuiltModel build_model(const GraphColoringInstance& inst);

// k-colorable random graph: vertices split into k near-equal groups,
// each cross-group pair kept with probability p (Culberson style).
GraphColoringInstance generate(int n, double p, int k, unsigned seed);

// Exhaustive chromatic number, n <= 8.
std::optional<int> brute_force_optimal(const GraphColoringInstance& inst);

// DIMACS-like text: "p edge n m" then "e u v" lines, 1-based.
std::string to_text(const GraphColoringInstance& inst);
GraphColoringInstance from_text(const std::string& text);
GraphColoringInstance load_file(const std::string& path);
void save_file(const GraphColoringInstance& inst, const std::string& path);

} // namespace cplearn::coloring
