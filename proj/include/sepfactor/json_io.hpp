#pragma once

#include "json.hpp"
#include "minors.hpp"
#include "mixed_partition.hpp"

namespace sepfactor {

inline nlohmann::json witness_json(const minor_witness& w) {
  nlohmann::json ev = nlohmann::json::array();
  for (const auto& row : w.evidence) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& e : row) {
      if (!e.present) {
        r.push_back(nullptr);
      } else if (w.kind == minor_kind::grid) {
        r.push_back({{"one", {e.row + 1, e.col + 1}}});
      } else {
        r.push_back({{"rows", {e.row_a + 1, e.row_b + 1}},
                     {"at_col", e.col_at + 1},
                     {"cols", {e.col_a + 1, e.col_b + 1}},
                     {"at_row", e.row_at + 1}});
      }
    }
    ev.push_back(std::move(r));
  }
  return {{"kind", minor_kind_name(w.kind)},
          {"k", w.k},
          {"row_cuts", w.row_cuts},
          {"col_cuts", w.col_cuts},
          {"evidence", std::move(ev)}};
}

inline nlohmann::json coloring_json(const coloring& c) { return c.color; }

}  // namespace sepfactor
