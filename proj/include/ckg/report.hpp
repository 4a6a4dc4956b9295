#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ckg/graph.hpp"
#include "ckg/graph_io.hpp"
#include "ckg/ktheory.hpp"
#include "ckg/moves.hpp"
#include "ckg/pipeline.hpp"

namespace ckg {

using Json = nlohmann::ordered_json;

/// Everything a command reports. Text and JSON are two renderings of it.
struct Report {
  std::string command;
  std::optional<Graph> graph;
  std::optional<Graph> output;
  std::vector<std::pair<std::string, KInvariants>> invariants;
  std::optional<MoveLog> moves;
  std::vector<Certificate> certificates;
  Json verdicts = Json::object();
  /// Human summary, printed first in text mode.
  std::vector<std::string> headline;
  /// Extra text-only lines (e.g. vertex table for `info`).
  std::vector<std::string> details;
  /// In text mode print only the headline.
  bool brief = false;
};

namespace detail {

inline Json integer_json(const Integer& x) {
  if (x >= Integer(INT64_MIN) && x <= Integer(INT64_MAX)) return Json(x.convert_to<std::int64_t>());
  return Json(x.str());
}

}  // namespace detail

inline Json graph_json(const Graph& g) {
  Json j = Json::object();
  j["fingerprint"] = fingerprint(g);
  j["vertices"] = g.vertex_list();
  Json edges = Json::array();
  for (const auto& [id, e] : g.edges()) edges.push_back({{"id", id}, {"source", e.source}, {"range", e.range}});
  j["edges"] = std::move(edges);
  return j;
}

inline Json invariants_json(const KInvariants& k) {
  Json t = Json::array();
  for (const auto& d : k.k0_torsion) t.push_back(detail::integer_json(d));
  Json div = Json::array();
  for (std::size_t i = 0; i < kProfileDivisors; ++i)
    if (k.unit.divisible[i]) div.push_back(i + 1);
  return Json{{"k0_torsion", std::move(t)},
              {"k0_rank", k.k0_rank},
              {"k1_rank", k.k1_rank},
              {"unit_order", k.unit.order ? detail::integer_json(*k.unit.order) : Json(nullptr)},
              {"unit_divisible_by", std::move(div)}};
}

inline Json moves_json(const MoveLog& log) {
  Json steps = Json::array();
  for (const auto& e : log.entries) steps.push_back({{"move", format_move(e.move)}, {"fingerprint", e.fingerprint}});
  return Json{{"initial", log.initial_fingerprint}, {"steps", std::move(steps)}};
}

/// Top-level keys are always present, in this order; absent parts are null.
inline Json to_json(const Report& r) {
  Json j = Json::object();
  j["command"] = r.command;
  j["graph"] = r.graph ? graph_json(*r.graph) : Json(nullptr);
  j["output"] = r.output ? graph_json(*r.output) : Json(nullptr);
  Json inv = Json::object();
  for (const auto& [name, k] : r.invariants) inv[name] = invariants_json(k);
  j["invariants"] = std::move(inv);
  j["moves"] = r.moves ? moves_json(*r.moves) : Json(nullptr);
  Json certs = Json::array();
  for (const auto& c : r.certificates) certs.push_back({{"name", c.name}, {"holds", c.holds}});
  j["certificates"] = std::move(certs);
  j["verdicts"] = r.verdicts;
  return j;
}

inline std::string to_text(const Report& r) {
  std::ostringstream out;
  for (const auto& l : r.headline) out << l << '\n';
  if (r.brief) return out.str();
  for (const auto& l : r.details) out << l << '\n';
  if (r.graph) out << "input " << fingerprint(*r.graph) << '\n';
  if (r.output) out << "output " << fingerprint(*r.output) << '\n' << "-- output graph\n" << serialize_graph(*r.output);
  for (const auto& [name, k] : r.invariants) out << "-- invariants (" << name << ")\n" << to_record(k);
  if (r.moves) out << "-- moves\n" << serialize_log(*r.moves);
  if (!r.certificates.empty()) {
    out << "-- certificates\n";
    for (const auto& c : r.certificates) out << (c.holds ? "ok   " : "FAIL ") << c.name << '\n';
  }
  return out.str();
}

/// Report for a pipeline run: input, output, both invariant records, the move
/// log and the certificates.
inline Report pipeline_report(std::string command, const Graph& input, const PipelineResult& p) {
  Report r;
  r.command = std::move(command);
  r.graph = input;
  r.output = p.output;
  r.invariants = {{p.reference, p.before}, {"output", p.after}};
  r.moves = p.log;
  r.certificates = p.certificates;
  r.verdicts["pipeline"] = p.pipeline;
  r.verdicts["k_groups_preserved"] = p.before.same_groups(p.after);
  r.verdicts["unit_profile_preserved"] = p.before.unit == p.after.unit;
  if (p.projection) r.verdicts["projection"] = format_multiset(*p.projection);
  r.headline.push_back(p.pipeline + ": " + std::to_string(p.output.vertex_count()) + " vertices, " +
                       std::to_string(p.output.edge_count()) + " edges, " +
                       std::to_string(p.log.entries.size()) + " moves");
  return r;
}

}  // namespace ckg
