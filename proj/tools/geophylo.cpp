// geophylo command line: generate, optimize, render, bench, reduce-maxcut, serve.
//
// Exit status: 0 success, 1 invalid input, 2 infeasible constraints,
// 3 exact solve stopped by its time limit (the incumbent is still printed).

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "geophylo/bench.hpp"
#include "geophylo/generators.hpp"
#include "geophylo/io.hpp"
#include "geophylo/maxcut.hpp"
#include "geophylo/optimize.hpp"
#include "geophylo/service.hpp"
#include "geophylo/svg.hpp"

using namespace geophylo;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kInfeasible = 2, kTimeout = 3 };

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

std::string join_labels(const Geophylogeny& g, const LeafOrder& order) {
  std::string out;
  for (LeafId l : order.sequence()) out += (out.empty() ? "" : " ") + detail::newick_label(g.tree().label(l));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leaf orders for geophylogeny drawings"};
  app.require_subcommand(1);

  // generate
  GeneratorSpec gen;
  std::string gen_kind = "uniform", gen_out;
  auto* generate_cmd = app.add_subcommand("generate", "write a random instance");
  generate_cmd->add_option("--kind", gen_kind, "uniform, coastline or clustered")->capture_default_str();
  generate_cmd->add_option("-n,--n", gen.n, "number of taxa")->capture_default_str();
  generate_cmd->add_option("--seed", gen.seed, "random seed")->capture_default_str();
  generate_cmd->add_option("--width", gen.width, "map width")->capture_default_str();
  generate_cmd->add_option("--height", gen.height, "map height")->capture_default_str();
  generate_cmd->add_option("-o,--output", gen_out, "output file (default stdout)");

  // optimize
  std::string opt_instance, opt_mode = "s", opt_solver, opt_measure = "xhop", opt_count = "s", opt_constraints_file,
                            opt_order_out;
  std::vector<std::string> opt_constraints;
  double opt_time_limit = 0;
  int opt_k_cap = 20;
  bool opt_table = false;
  auto* optimize_cmd = app.add_subcommand("optimize", "compute a leaf order");
  optimize_cmd->add_option("instance", opt_instance, "instance file")->required();
  optimize_cmd->add_option("--mode", opt_mode, "internal, s or po")->capture_default_str();
  optimize_cmd->add_option("--solver", opt_solver,
                           "ilp, fpt, bruteforce, bu, td, la:<measure>, greedy, pipeline:<spec> (dp in internal mode)");
  optimize_cmd->add_option("--measure", opt_measure, "internal measure: xhop, xoffset or sumdist")->capture_default_str();
  optimize_cmd->add_option("--count", opt_count, "leader type for the crossing count in internal mode")
      ->capture_default_str();
  optimize_cmd->add_option("--constraint,-c", opt_constraints, "constraint item: l3@1, l1@2-4 or l1^l2=1");
  optimize_cmd->add_option("--constraints", opt_constraints_file, "file with one constraint item per line");
  optimize_cmd->add_option("--time-limit", opt_time_limit, "exact solver limit in seconds (0: none)");
  optimize_cmd->add_option("--k-cap", opt_k_cap, "largest k accepted by the fpt solver")->capture_default_str();
  optimize_cmd->add_option("--order-out", opt_order_out, "also write the order, one label per line");
  optimize_cmd->add_flag("--table", opt_table, "print a results table row instead of key=value lines");

  // render
  std::string ren_instance, ren_order, ren_order_file, ren_leaders = "s", ren_out;
  bool ren_highlight = false, ren_no_labels = false;
  auto* render_cmd = app.add_subcommand("render", "draw an instance as SVG");
  render_cmd->add_option("instance", ren_instance, "instance file")->required();
  render_cmd->add_option("--order", ren_order, "leaf labels left to right, space separated (default neutral)");
  render_cmd->add_option("--order-file", ren_order_file, "file with the leaf labels");
  render_cmd->add_option("--leaders", ren_leaders, "s, po or internal")->capture_default_str();
  render_cmd->add_flag("--highlight", ren_highlight, "mark crossing leaders");
  render_cmd->add_flag("--no-labels", ren_no_labels, "omit leaf labels");
  render_cmd->add_option("-o,--output", ren_out, "output file (default stdout)");

  // bench
  std::string bench_preset;
  double bench_limit = 60;
  auto* bench_cmd = app.add_subcommand("bench", "run a preset sweep and print a results table");
  bench_cmd->add_option("--preset", bench_preset, "preset name")->required();
  bench_cmd->add_option("--time-limit", bench_limit, "exact solver limit per instance in seconds")->capture_default_str();
  bench_cmd->add_flag_callback("--list", [] {
    for (const BenchPreset& p : bench_presets()) std::cout << p.name << '\n';
    std::exit(kOk);
  }, "list presets");

  // reduce-maxcut
  std::string mc_graph, mc_leader = "po", mc_out;
  int mc_c = 0, mc_units = -1;
  auto* maxcut_cmd = app.add_subcommand("reduce-maxcut", "build the instance for a max-cut question");
  maxcut_cmd->add_option("graph", mc_graph, "graph file, one 'u v' edge per line")->required();
  maxcut_cmd->add_option("--c", mc_c, "cut size asked for")->required();
  maxcut_cmd->add_option("--leaders", mc_leader, "s or po")->capture_default_str();
  maxcut_cmd->add_option("--units", mc_units, "fixing units per gadget (default max(1, m - c))");
  maxcut_cmd->add_option("-o,--output", mc_out, "instance file (default stdout; the summary then goes to stderr)");

  // serve
  int serve_port = default_port();
  std::string serve_host = "127.0.0.1";
  ServiceConfig serve_cfg;
  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");
  serve_cmd->add_option("--port", serve_port, "port (default from GEOPHYLO_PORT, else 8080)")->capture_default_str();
  serve_cmd->add_option("--host", serve_host, "bind address")->capture_default_str();
  serve_cmd->add_option("--time-limit", serve_cfg.exact_time_limit_seconds, "exact solver limit per request")
      ->capture_default_str();
  serve_cmd->add_option("--k-cap", serve_cfg.k_cap, "largest k accepted by the fpt solver")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*generate_cmd) {
      gen.kind = parse_generator_kind(gen_kind);
      emit(gen_out, write_instance(generate(gen)));
      return kOk;
    }

    if (*optimize_cmd) {
      const Geophylogeny g = read_instance_file(opt_instance);
      OptimizeRequest req;
      req.mode = parse_mode(opt_mode);
      req.solver = opt_solver;
      req.measure = opt_measure;
      req.count_type = parse_leader_type(opt_count);
      req.time_limit_seconds = opt_time_limit;
      req.k_cap = opt_k_cap;
      std::vector<std::string> items = opt_constraints;
      if (!opt_constraints_file.empty()) {
        std::istringstream is(read_text_file(opt_constraints_file));
        for (std::string line; std::getline(is, line);) {
          if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
          for (const std::string& w : split_words(line)) items.push_back(w);
        }
      }
      for (const std::string& item : items) req.constraints.add(g.tree(), item);
      const OptimizeOutcome r = optimize(g, req);
      if (opt_table) {
        const std::string leader = req.mode == Mode::kInternal ? "internal" : opt_mode;
        write_results(std::cout, {{opt_instance, r.solver, leader, r.crossings, r.runtime_ms, r.k, r.optimal}});
      } else {
        std::cout << "solver=" << r.solver << "\n"
                  << "crossings=" << r.crossings << "\n"
                  << "objective=" << r.objective << "\n"
                  << "optimal=" << (r.optimal ? 1 : 0) << "\n"
                  << "runtime_ms=" << r.runtime_ms << "\n";
        if (r.k >= 0) std::cout << "k=" << r.k << "\n";
        std::cout << "order=" << join_labels(g, r.order) << "\n";
      }
      if (!opt_order_out.empty()) {
        std::string text;
        for (LeafId l : r.order.sequence()) text += g.tree().label(l) + "\n";
        write_text_file(opt_order_out, text);
      }
      const bool exact = r.solver == "ilp";
      return exact && !r.optimal ? kTimeout : kOk;
    }

    if (*render_cmd) {
      const Geophylogeny g = read_instance_file(ren_instance);
      LeafOrder order = LeafOrder::neutral(g.tree());
      std::vector<std::string> labels = split_words(ren_order);
      if (!ren_order_file.empty()) {
        std::istringstream is(read_text_file(ren_order_file));
        for (std::string line; std::getline(is, line);)
          if (!line.empty()) labels.push_back(line);
      }
      if (!labels.empty()) order = LeafOrder::from_labels(g.tree(), labels);
      RenderOptions opt;
      opt.leaders = ren_leaders == "internal" ? std::nullopt : std::optional<LeaderType>(parse_leader_type(ren_leaders));
      opt.highlight_crossings = ren_highlight;
      opt.labels = !ren_no_labels;
      emit(ren_out, render_svg(g, order, opt));
      return kOk;
    }

    if (*bench_cmd) {
      const BenchPreset& preset = find_preset(bench_preset);
      std::cout << kResultHeader << '\n' << std::flush;
      run_bench(preset, bench_limit, [](const ResultRow& row) { std::cout << format_result(row) << '\n' << std::flush; });
      return kOk;
    }

    if (*maxcut_cmd) {
      const MaxCutInput in = parse_graph(read_text_file(mc_graph), mc_c);
      const MaxCutInstance mi = build_maxcut_instance(in, parse_leader_type(mc_leader), mc_units);
      std::ostringstream summary;
      summary << "m=" << mi.m << "\nk_fix=" << mi.k_fix << "\nk_threshold=" << mi.k_threshold << "\nunits=" << mi.units
              << "\nd=" << mi.d << "\nn=" << mi.geophylogeny.n() << "\n";
      if (mc_out.empty() || mc_out == "-") {
        std::cout << write_instance(mi.geophylogeny);
        std::cerr << summary.str();
      } else {
        write_text_file(mc_out, write_instance(mi.geophylogeny));
        std::cout << summary.str();
      }
      return kOk;
    }

    if (*serve_cmd) {
      std::cerr << "listening on " << serve_host << ":" << serve_port << "\n";
      if (!serve(serve_host, serve_port, serve_cfg)) {
        std::cerr << "error: cannot listen on " << serve_host << ":" << serve_port << "\n";
        return kInvalid;
      }
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::kInfeasible ? kInfeasible : kInvalid;
  }
  return kOk;
}
