#pragma once

#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ckg/error.hpp"
#include "ckg/fuzz.hpp"
#include "ckg/graph.hpp"
#include "ckg/graph_io.hpp"
#include "ckg/ktheory.hpp"
#include "ckg/monoid.hpp"
#include "ckg/moves.hpp"
#include "ckg/pipeline.hpp"
#include "ckg/report.hpp"

namespace ckg::cli {

enum ExitCode : int { ok = 0, precondition = 1, parse = 2, internal = 3 };

namespace detail {

inline std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

inline std::string describe_groups(const KInvariants& k) {
  auto group = [](std::size_t rank, const std::vector<Integer>& torsion) {
    std::vector<std::string> parts;
    if (rank == 1) parts.push_back("Z");
    if (rank > 1) parts.push_back("Z^" + std::to_string(rank));
    for (const auto& d : torsion) parts.push_back("Z/" + d.str());
    return parts.empty() ? std::string("0") : join(parts, " + ");
  };
  return "K0 = " + group(k.k0_rank, k.k0_torsion) + ", K1 = " + group(k.k1_rank, {});
}

inline std::string ck_headline(const CkVerdict& v) {
  if (v.is_ck)
    return "CK: yes (finite, no sinks; rank K0 = rank K1 = " + std::to_string(v.k0_rank) + ")";
  return std::string("CK: no (") + (v.sinks.size() == 1 ? "sink at " : "sinks at ") + join(v.sinks, ", ") +
         "; rank K0 = " + std::to_string(v.k0_rank) + ", rank K1 = " + std::to_string(v.k1_rank) + ")";
}

inline Json fuzz_json(const FuzzReport& f) {
  Json failures = Json::array();
  for (const auto& x : f.failures)
    failures.push_back({{"check", x.check}, {"detail", x.detail}, {"graph", x.graph}});
  return Json{{"graphs", f.graphs}, {"checks", f.checks}, {"failures", std::move(failures)}};
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("io", "cannot write '" + path + "'");
  f << text;
}

inline MoveLog read_log(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "'");
  return parse_log(f);
}

}  // namespace detail

/// Runs one command line. Reports go to `out`, diagnostics to `err`.
/// Exit status: 0 success, 1 precondition failure, 2 parse or usage error,
/// 3 failed self-check (a bug).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph algebra toolkit: K-theory, moves, pipelines and monoid equivalence", "ckg"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));

  std::string graph_path;
  auto with_graph = [&](CLI::App* sub) {
    sub->fallthrough();
    sub->add_option("graph", graph_path, "Graph file")->required();
    return sub;
  };
  auto* info = with_graph(app.add_subcommand("info", "Vertex classes and degrees"));
  auto* ktheory = with_graph(app.add_subcommand("ktheory", "K0, K1 and the unit profile"));
  auto* is_ck = with_graph(app.add_subcommand("is-ck", "Decide whether the graph is Cuntz-Krieger"));
  auto* normalize = with_graph(app.add_subcommand("normalize", "Rewrite to a graph without sinks or sources"));

  auto* move = with_graph(app.add_subcommand("move", "Apply moves or replay a move log"));
  std::vector<std::string> move_specs;
  std::string write_log, replay;
  auto* move_opt = move->add_option("--move", move_specs, "Move spec, e.g. add-head:v0:2 (repeatable)");
  move->add_option("--write-log", write_log, "Write the replay log to this file");
  move->add_option("--replay", replay, "Replay a move log file")->excludes(move_opt);

  auto* corner = with_graph(app.add_subcommand("corner", "Realize the corner cut down by a projection"));
  std::string proj;
  corner->add_option("--proj", proj, "Multiset literal, e.g. v0=2,v1=1")->required();

  auto* amplify = with_graph(app.add_subcommand("amplify", "Matrix amplification by heads"));
  std::int64_t amp_n = 0;
  amplify->add_option("--n", amp_n, "Matrix size")->required();

  auto* monoid_eq = with_graph(app.add_subcommand("monoid-eq", "Decide equivalence of two vertex multisets"));
  std::string lit_a, lit_b;
  std::size_t budget = 10000;
  monoid_eq->add_option("--a", lit_a, "Multiset literal")->required();
  monoid_eq->add_option("--b", lit_b, "Multiset literal")->required();
  monoid_eq->add_option("--budget", budget, "State expansion budget")->capture_default_str();

  auto* fuzz = app.add_subcommand("fuzz", "Seeded invariant fuzzing");
  fuzz->fallthrough();
  std::uint64_t seed = 0;
  std::size_t count = 100;
  fuzz->add_option("--seed", seed, "Seed")->capture_default_str();
  fuzz->add_option("--count", count, "Graphs per check")->capture_default_str();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return parse;
  }

  try {
    Report r;
    int status = ok;
    if (fuzz->parsed()) {
      const FuzzReport ck = fuzz_ck_decision(seed, count);
      const FuzzReport mv = fuzz_moves(seed, count);
      r.command = "fuzz";
      r.verdicts["seed"] = seed;
      r.verdicts["count"] = count;
      r.verdicts["ck_decision"] = detail::fuzz_json(ck);
      r.verdicts["moves"] = detail::fuzz_json(mv);
      r.verdicts["ok"] = ck.ok() && mv.ok();
      const std::size_t failures = ck.failures.size() + mv.failures.size();
      r.headline.push_back("fuzz seed " + std::to_string(seed) + ": " + std::to_string(ck.graphs + mv.graphs) +
                           " graphs, " + std::to_string(ck.checks + mv.checks) + " checks, " +
                           std::to_string(failures) + " failures");
      for (const auto* f : {&ck, &mv})
        for (const auto& x : f->failures) r.details.push_back("FAIL " + x.check + ": " + x.detail + "\n" + x.graph);
      if (failures) status = internal;
    } else {
      // Literal flags are parsed before the graph is read.
      std::vector<Move> moves;
      for (const auto& s : move_specs) moves.push_back(parse_move(s));
      std::optional<MoveLog> log_in;
      if (!replay.empty()) log_in = detail::read_log(replay);
      VertexMultiset proj_m, a, b;
      if (corner->parsed()) proj_m = parse_multiset(proj);
      if (monoid_eq->parsed()) {
        a = parse_multiset(lit_a);
        b = parse_multiset(lit_b);
      }

      const Graph g = load_graph(graph_path);
      if (info->parsed()) {
        r.command = "info";
        r.graph = g;
        const auto sk = sinks(g), sc = sources(g);
        r.verdicts["sinks"] = sk;
        r.verdicts["sources"] = sc;
        Json kinds = Json::object();
        for (const auto& v : g.vertices()) kinds[v] = to_string(classify_vertex(g, v).kind);
        r.verdicts["vertex_kinds"] = std::move(kinds);
        r.headline.push_back(std::to_string(g.vertex_count()) + " vertices, " + std::to_string(g.edge_count()) +
                             " edges, " + std::to_string(sk.size()) + " sinks, " + std::to_string(sc.size()) +
                             " sources");
        for (const auto& v : g.vertices())
          r.details.push_back(v + " " + to_string(classify_vertex(g, v).kind) + " out=" +
                              std::to_string(g.out_degree(v)) + " in=" + std::to_string(g.in_degree(v)) +
                              " loops=" + std::to_string(g.loop_count(v)));
      } else if (ktheory->parsed()) {
        r.command = "ktheory";
        r.graph = g;
        const KInvariants k = k_invariants(g);
        r.invariants = {{"input", k}};
        r.headline.push_back(detail::describe_groups(k));
      } else if (is_ck->parsed()) {
        r.command = "is-ck";
        r.graph = g;
        const CkVerdict v = is_cuntz_krieger(g);
        r.invariants = {{"input", k_invariants(g)}};
        r.verdicts["is_ck"] = v.is_ck;
        r.verdicts["sinks"] = v.sinks;
        r.verdicts["k0_rank"] = v.k0_rank;
        r.verdicts["k1_rank"] = v.k1_rank;
        r.headline.push_back(detail::ck_headline(v));
        r.brief = true;
      } else if (normalize->parsed()) {
        r = pipeline_report("normalize", g, normalize_to_ck(g));
      } else if (move->parsed()) {
        MoveLog log = start_log(g);
        Graph cur = g;
        if (log_in) {
          cur = replay_log(g, *log_in);
          log = *log_in;
        } else {
          for (const auto& m : moves) cur = apply_logged(cur, m, log);
        }
        if (!write_log.empty()) detail::write_file(write_log, serialize_log(log));
        r.command = "move";
        r.graph = g;
        r.output = cur;
        const KInvariants before = k_invariants(g), after = k_invariants(cur);
        r.invariants = {{"input", before}, {"output", after}};
        r.moves = log;
        r.verdicts["k_groups_preserved"] = before.same_groups(after);
        r.verdicts["unit_profile_preserved"] = before.unit == after.unit;
        r.headline.push_back(std::string(log_in ? "replayed " : "applied ") +
                             std::to_string(log.entries.size()) + " moves; K-groups " +
                             (before.same_groups(after) ? "preserved" : "changed"));
      } else if (corner->parsed()) {
        r = pipeline_report("corner", g, realize_corner(g, proj_m));
        r.verdicts["input_projection"] = format_multiset(proj_m);
      } else if (amplify->parsed()) {
        r = pipeline_report("amplify", g, matrix_amplify(g, amp_n));
        r.verdicts["n"] = amp_n;
      } else if (monoid_eq->parsed()) {
        const EquivalenceResult e = mvn_equivalent(g, a, b, budget);
        r.command = "monoid-eq";
        r.graph = g;
        r.verdicts["a"] = format_multiset(a);
        r.verdicts["b"] = format_multiset(b);
        r.verdicts["budget"] = budget;
        r.verdicts["equivalence"] = to_string(e.verdict);
        r.verdicts["explored"] = e.explored;
        Json trace = Json::array();
        for (const auto& s : e.trace)
          trace.push_back((s.direction == RewriteDirection::expand ? "expand:" : "contract:") + s.vertex);
        r.verdicts["trace"] = std::move(trace);
        std::string head = to_string(e.verdict);
        if (e.verdict == Equivalence::yes) head += " (trace length " + std::to_string(e.trace.size()) + ")";
        if (e.verdict == Equivalence::no) head += " (" + std::to_string(e.explored) + " states explored)";
        if (e.verdict == Equivalence::unknown) head += " (budget of " + std::to_string(budget) + " states exhausted)";
        r.headline.push_back(head);
        r.brief = true;
      }
    }
    if (format == "json")
      out << to_json(r).dump(2) << '\n';
    else
      out << to_text(r);
    return status;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return parse;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return precondition;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return internal;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
  return run(args, out, err);
}

}  // namespace ckg::cli
