#include "powercast/dist_sim.hpp"
#include "powercast/graph_approx.hpp"
#include "powercast/instance_gen.hpp"
#include "powercast/json_io.hpp"
#include "powercast/line_broadcast.hpp"
#include "powercast/line_convergecast.hpp"
#include "powercast/model.hpp"
#include "powercast/strategy.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

using namespace powercast;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

struct Context {
  std::vector<std::string> argv;
  ScalarFormat fmt;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> inputs;

  Json header() const {
    Json h;
    h["argv"] = argv;
    h["seed"] = seed ? Json(*seed) : Json(nullptr);
    Json files = Json::array();
    for (const auto& p : inputs) files.push_back({{"path", p}, {"sha256", sha256_file(p)}});
    h["inputs"] = files;
    return h;
  }

  int emit(Json body, int code) const {
    Json out;
    out["header"] = header();
    for (auto& [k, v] : body.items()) out[k] = v;
    std::cout << out.dump(2) << "\n";
    return code;
  }

  Json num(const Scalar& v) const { return scalar_json(v, fmt); }
  Json nums(const std::vector<Scalar>& vs) const {
    Json a = Json::array();
    for (const auto& v : vs) a.push_back(num(v));
    return a;
  }
};

Configuration load(Context& ctx, const std::string& path) {
  ctx.inputs.push_back(path);
  return load_configuration_file(path);
}

LineConfig need_line(const Configuration& c) {
  if (const auto* l = std::get_if<LineConfig>(&c)) return *l;
  throw UsageError("this command needs a line instance");
}

Network need_network(const Configuration& c) {
  if (const auto* l = std::get_if<LineConfig>(&c)) return line_to_path(*l);
  return std::get<Network>(c);
}

Scalar parse_power(const std::string& text) {
  try {
    return parse_scalar(text);
  } catch (const std::exception&) {
    throw UsageError("bad scalar '" + text + "'");
  }
}

std::size_t pick_source(std::optional<int> flag, std::optional<int> in_file, std::size_t n) {
  std::optional<int> s = flag ? flag : in_file;
  if (!s) throw UsageError("a source agent is required (--source or \"source\" in the file)");
  if (*s < 1 || static_cast<std::size_t>(*s) > n) throw UsageError("source agent out of range");
  return static_cast<std::size_t>(*s);
}

Json power_summary(const Context& ctx, const Trace& tr) {
  PowerSummary p = max_power_used(tr);
  return Json{{"max", ctx.num(p.max)}, {"per_agent", ctx.nums(p.per_agent)}};
}

// Runs a strategy through the simulator; fills ok/budget fields.
Json check_strategy(const Context& ctx, const Configuration& arena, const Strategy& s, const Scalar& budget,
                    bool convergecast, int source, bool& ok) {
  Json r;
  try {
    Trace tr = simulate(arena, s, budget);
    r["power"] = power_summary(ctx, tr);
    if (convergecast) {
      ConvergecastWitness w = verify_convergecast(tr);
      ok = w.ok;
      if (w.ok) {
        r["witness"] = {{"agent", w.agent}, {"time", ctx.num(w.time)}, {"where", location_json(arena, w.where, ctx.fmt)}};
      } else {
        r["maximal_sets"] = w.maximal_sets;
      }
    } else {
      BroadcastCheck b = verify_broadcast(tr, source);
      ok = b.ok;
      if (!b.ok) r["uninformed"] = b.uninformed;
    }
  } catch (const BudgetExceeded& e) {
    ok = false;
    r["budget_exceeded"] = {{"agent", e.agent}, {"time", ctx.num(e.time)}};
  }
  r["ok"] = ok;
  return r;
}

int cmd_line_convergecast(Context& ctx, const std::string& file, bool emit) {
  LineConfig c = need_line(load(ctx, file));
  ConvergecastResult r = compute_optimal_convergecast(c);
  Json body{{"optimal_power", ctx.num(r.power)},
            {"split", r.split},
            {"b", ctx.nums(r.plan.b)},
            {"f", ctx.nums(r.plan.f)},
            {"stack_operations", r.stack_operations}};
  if (emit) body["strategy"] = strategy_json(c, emit_convergecast_strategy(c, r.plan), ctx.fmt);
  return ctx.emit(body, kOk);
}

int cmd_line_broadcast(Context& ctx, const std::string& file, std::optional<int> source, bool emit) {
  LineConfig c = need_line(load(ctx, file));
  std::size_t k = pick_source(source, c.source, c.size());
  BroadcastResult r = compute_optimal_broadcast(c, k);
  Json body{{"optimal_power", ctx.num(r.power)},
            {"source", k},
            {"b", ctx.nums(r.plan.b)},
            {"f", ctx.nums(r.plan.f)},
            {"source_turn", r.plan.turn == Turn::FirstLeft ? "left-first" : "right-first"},
            {"source_route", ctx.nums({r.plan.first, r.plan.second})}};
  if (emit) body["strategy"] = strategy_json(c, emit_broadcast_strategy(c, r.plan), ctx.fmt);
  return ctx.emit(body, kOk);
}

int cmd_decide(Context& ctx, const std::string& file, const std::string& mode, const std::string& power,
               std::optional<int> source) {
  LineConfig c = need_line(load(ctx, file));
  Scalar P = parse_power(power);
  Json body{{"mode", mode}, {"power", ctx.num(P)}};
  bool ok = false;
  if (mode == "conv") {
    auto split = decide_convergecast(c, P);
    ok = split.has_value();
    if (split) body["split"] = *split;
  } else {
    std::size_t k = pick_source(source, c.source, c.size());
    body["source"] = k;
    ok = decide_broadcast(c, k, P);
  }
  body["feasible"] = ok;
  return ctx.emit(body, ok ? kOk : kFailed);
}

int cmd_graph_approx(Context& ctx, const std::string& file, const std::string& mode, std::optional<int> source) {
  Configuration cfg = load(ctx, file);
  Network g = need_network(cfg);
  const Configuration arena{g};
  DistanceMatrix d = apsp(g);
  Json body{{"mode", mode}};
  if (g.agent_count() >= 2) body["separation"] = ctx.num(separation(g, d));
  Strategy s;
  bool conv = mode == "conv";
  int src = 1;
  if (conv) {
    KnownGraphResult r = known_graph_convergecast(g, d);
    s = r.strategy;
    Json links = Json::array();
    for (const auto& l : r.links) links.push_back({{"mover", l.mover}, {"receiver", l.receiver}, {"distance", ctx.num(l.distance)}});
    body["links"] = links;
  } else {
    src = static_cast<int>(pick_source(source, g.source(), g.agent_count()));
    s = graph_broadcast_4approx(g, src);
    body["source"] = src;
  }
  bool ok = false;
  body["check"] = check_strategy(ctx, arena, s, Scalar(1) << 62, conv, src, ok);
  body["strategy"] = strategy_json(arena, s, ctx.fmt);
  return ctx.emit(body, ok ? kOk : kFailed);
}

int cmd_simulate(Context& ctx, const std::string& file, const std::string& algorithm, const std::string& budget,
                 std::optional<int> source, bool trace) {
  Network t = need_network(load(ctx, file));
  const Configuration arena{t};
  Scalar B = parse_power(budget);
  DistOutcome o;
  if (algorithm == "unknown-tree") {
    o = run_unknown_tree(t, B);
  } else {
    int src = static_cast<int>(pick_source(source, t.source(), t.agent_count()));
    o = run_distributed_broadcast(t, src, B);
  }
  Json body{{"algorithm", algorithm}, {"budget", ctx.num(B)}};
  Json result = outcome_json(arena, o, trace, ctx.fmt);
  for (auto& [k, v] : result.items()) body[k] = v;
  if (t.agent_count() >= 2) body["separation"] = ctx.num(separation(t));
  return ctx.emit(body, o.achieved ? kOk : kFailed);
}

int cmd_verify(Context& ctx, const std::string& file, const std::string& strategy_file, const std::string& budget,
               const std::string& mode, std::optional<int> source, bool trace) {
  Configuration arena = load(ctx, file);
  ctx.inputs.push_back(strategy_file);
  Strategy s = load_strategy_file(arena, strategy_file);
  Scalar B = parse_power(budget);
  bool conv = mode == "conv";
  int src = 1;
  if (!conv) {
    std::optional<int> in_file = std::holds_alternative<LineConfig>(arena) ? std::get<LineConfig>(arena).source
                                                                           : std::get<Network>(arena).source();
    src = static_cast<int>(pick_source(source, in_file, agent_count(arena)));
  }
  bool ok = false;
  Json body = check_strategy(ctx, arena, s, B, conv, src, ok);
  body["mode"] = mode;
  body["budget"] = ctx.num(B);
  if (trace && !body.contains("budget_exceeded")) body["trace"] = trace_json(arena, simulate(arena, s, B), ctx.fmt);
  return ctx.emit(body, ok ? kOk : kFailed);
}

int emit_config(Context& ctx, const Configuration& c, Json extra = Json::object()) {
  Json doc = Json::parse(serialize_configuration(c));
  Json out;
  out["header"] = ctx.header();
  for (auto& [k, v] : doc.items()) out[k] = v;
  for (auto& [k, v] : extra.items()) out[k] = v;
  std::cout << out.dump(2) << "\n";
  return kOk;
}

std::vector<long> parse_multiset(const std::string& text) {
  std::vector<long> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      xs.push_back(std::stol(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad multiset entry '" + item + "'");
    }
  }
  return xs;
}

// Bench suites: rows computed in parallel workers, reported in index order.
struct Row {
  Json data;
  bool ok = true;
};

std::vector<Row> run_parallel(std::size_t count, unsigned jobs, const std::function<Row(std::size_t)>& work) {
  std::vector<Row> rows(count);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < std::max(1u, jobs); ++j) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          rows[i] = work(i);
        } catch (const std::exception& e) {
          rows[i] = {Json{{"index", i}, {"error", e.what()}}, false};
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  return rows;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_bench(Context& ctx, const std::string& suite, std::size_t seeds, unsigned jobs, bool csv) {
  std::vector<Row> rows;
  if (suite == "oracle-equivalence") {
    rows = run_parallel(seeds, jobs, [](std::size_t i) {
      std::size_t n = 2 + i % 99;
      LineConfig c = gen_random_line(n, i);
      auto t0 = std::chrono::steady_clock::now();
      Scalar fast = compute_optimal_convergecast(c).power;
      double ms = ms_since(t0);
      bool ok = fast == quadratic_oracle_convergecast(c);
      if (n <= 60) {
        std::size_t k = 1 + i % n;
        Scalar b = compute_optimal_broadcast(c, k).power;
        auto [lo, hi] = bisection_oracle_broadcast(c, k, Scalar(1, 1000000000));
        ok = ok && lo <= b && b <= hi;
      }
      return Row{Json{{"index", i}, {"n", n}, {"ms", ms}, {"ok", ok}}, ok};
    });
  } else if (suite == "distributed-bounds") {
    rows = run_parallel(seeds, jobs, [](std::size_t i) {
      std::size_t n = 2 + i % 199;
      Network t = gen_random_tree(n, i);
      Scalar D = separation(t);
      auto t0 = std::chrono::steady_clock::now();
      DistOutcome conv = run_unknown_tree(t, D);
      double ms = ms_since(t0);
      DistOutcome bc = run_distributed_broadcast(t, 1, 2 * D);
      Scalar m1(0), m2(0);
      for (const auto& p : conv.power) m1 = max(m1, p);
      for (const auto& p : bc.power) m2 = max(m2, p);
      bool ok = conv.achieved && m1 <= D && bc.achieved && m2 <= 2 * D;
      return Row{Json{{"index", i}, {"n", n}, {"ms", ms}, {"ok", ok}}, ok};
    });
  } else if (suite == "scaling") {
    const std::vector<std::size_t> sizes{100, 1000, 5000};
    rows = run_parallel(sizes.size() * std::max<std::size_t>(seeds, 1), 1, [&](std::size_t i) {
      std::size_t n = sizes[i % sizes.size()];
      LineConfig c = gen_random_line(n, i);
      auto t0 = std::chrono::steady_clock::now();
      ConvergecastResult r = compute_optimal_convergecast(c);
      double ms = ms_since(t0);
      bool ok = r.stack_operations <= 6 * n;
      return Row{Json{{"index", i}, {"n", n}, {"ms", ms}, {"stack_operations", r.stack_operations}, {"ok", ok}}, ok};
    });
  } else {
    throw UsageError("unknown suite '" + suite + "'");
  }
  std::size_t failures = 0;
  for (const Row& r : rows) failures += r.ok ? 0 : 1;
  if (csv) {
    std::cout << "index,n,ms,ok\n";
    for (const Row& r : rows) {
      std::cout << r.data.value("index", 0) << "," << r.data.value("n", 0) << "," << r.data.value("ms", 0.0) << ","
                << (r.ok ? "true" : "false") << "\n";
    }
    return failures == 0 ? kOk : kFailed;
  }
  Json list = Json::array();
  for (const Row& r : rows) list.push_back(r.data);
  return ctx.emit(Json{{"suite", suite}, {"rows", list}, {"failures", failures}}, failures == 0 ? kOk : kFailed);
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  for (int i = 0; i < argc; ++i) ctx.argv.emplace_back(argv[i]);

  CLI::App app{"Power-minimal convergecast and broadcast by mobile agents"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<int> decimal;
  app.add_option("--decimal", decimal, "Print scalars as decimals with this many digits")->check(CLI::Range(0, 60));

  std::string file, mode = "conv", power, budget, algorithm, strategy_file, suite;
  std::optional<int> source;
  bool emit = false, trace = false, csv = false;
  std::size_t seeds = 100, n = 10, extra = 0, agents = 0;
  unsigned jobs = 1;
  std::uint64_t seed = 0;

  auto* lc = app.add_subcommand("line-convergecast", "Optimal convergecast power on a line");
  lc->add_option("file", file, "Instance file")->required();
  lc->add_flag("--emit-strategy", emit, "Include the timed moves");

  auto* lb = app.add_subcommand("line-broadcast", "Optimal broadcast power on a line");
  lb->add_option("file", file, "Instance file")->required();
  lb->add_option("--source", source, "Source agent");
  lb->add_flag("--emit-strategy", emit, "Include the timed moves");

  auto* dc = app.add_subcommand("decide", "Feasibility at a given power on a line");
  dc->add_option("file", file, "Instance file")->required();
  dc->add_option("--mode", mode)->check(CLI::IsMember({"conv", "bcast"}));
  dc->add_option("--power", power)->required();
  dc->add_option("--source", source);

  auto* ga = app.add_subcommand("graph-approx", "Centralized approximation on a graph");
  ga->add_option("file", file, "Instance file")->required();
  ga->add_option("--mode", mode)->check(CLI::IsMember({"conv", "bcast"}));
  ga->add_option("--source", source);

  auto* sm = app.add_subcommand("simulate", "Run a distributed algorithm on a tree");
  auto* pos_file = sm->add_option("file", file, "Instance file");
  auto* tree_file = sm->add_option("--tree", file, "Instance file");
  pos_file->excludes(tree_file);
  sm->add_option("--algorithm", algorithm)->required()->check(CLI::IsMember({"unknown-tree", "dist-broadcast"}));
  sm->add_option("--budget", budget)->required();
  sm->add_option("--source", source);
  sm->add_flag("--trace", trace, "Include the event log and moves");

  auto* vf = app.add_subcommand("verify", "Simulate a strategy file and check the goal");
  vf->add_option("file", file, "Instance file")->required();
  vf->add_option("--strategy", strategy_file)->required();
  vf->add_option("--budget", budget)->required();
  vf->add_option("--mode", mode)->check(CLI::IsMember({"conv", "bcast"}));
  vf->add_option("--source", source);
  vf->add_flag("--trace", trace, "Include the full trace");

  auto* gen = app.add_subcommand("gen", "Instance generators");
  gen->require_subcommand(1);
  std::string gen_mode = "convergecast", multiset, delta;
  auto* g3 = gen->add_subcommand("3p-star", "Star built from a 3-partition multiset");
  g3->add_option("--mode", gen_mode)->check(CLI::IsMember({"convergecast", "broadcast"}));
  g3->add_option("--multiset", multiset)->required();
  auto* glb = gen->add_subcommand("lowerbound", "Line family from the distributed lower bound");
  glb->add_option("--delta", delta)->required();
  glb->add_option("--power", power)->required();
  auto* grl = gen->add_subcommand("random-line", "Random line");
  auto* grt = gen->add_subcommand("random-tree", "Random tree with agents at the leaves");
  auto* grg = gen->add_subcommand("random-graph", "Random connected graph");
  for (auto* s : {grl, grt, grg}) {
    s->add_option("-n", n)->check(CLI::PositiveNumber);
    s->add_option("--seed", seed);
  }
  grg->add_option("--extra", extra, "Edges beyond a spanning tree");
  grg->add_option("--agents", agents, "Number of agents (default n)");

  auto* bn = app.add_subcommand("bench", "Property and timing sweeps");
  bn->add_option("--suite", suite)->required()->check(CLI::IsMember({"oracle-equivalence", "distributed-bounds", "scaling"}));
  bn->add_option("--seeds", seeds);
  bn->add_option("--jobs", jobs);
  bn->add_flag("--csv", csv, "CSV instead of JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (decimal) ctx.fmt.decimal = *decimal;

  try {
    if (*lc) return cmd_line_convergecast(ctx, file, emit);
    if (*lb) return cmd_line_broadcast(ctx, file, source, emit);
    if (*dc) return cmd_decide(ctx, file, mode, power, source);
    if (*ga) return cmd_graph_approx(ctx, file, mode, source);
    if (*sm) {
      if (file.empty()) throw UsageError("simulate needs an instance file");
      return cmd_simulate(ctx, file, algorithm, budget, source, trace);
    }
    if (*vf) return cmd_verify(ctx, file, strategy_file, budget, mode, source, trace);
    if (*bn) return cmd_bench(ctx, suite, seeds, jobs, csv);
    if (*g3) {
      ThreePartitionInstance inst = make_three_partition(parse_multiset(multiset));
      StarInstance s = gen_mode == "convergecast" ? gen_3p_convergecast_star(inst) : gen_3p_broadcast_star(inst);
      return emit_config(ctx, s.star, Json{{"power", ctx.num(s.power)}, {"R", inst.R}});
    }
    if (*glb) {
      LowerBoundFamily f = gen_lower_bound_line(parse_power(delta), parse_power(power));
      Json extra_fields{{"delta", ctx.num(f.delta)}, {"power", ctx.num(f.power)}, {"epsilon", ctx.num(f.epsilon)},
                        {"sigma", ctx.num(f.sigma)}, {"l", f.l}, {"k", f.k}, {"n", f.n}};
      return emit_config(ctx, f.line, extra_fields);
    }
    ctx.seed = seed;
    if (*grl) return emit_config(ctx, gen_random_line(n, seed));
    if (*grt) return emit_config(ctx, gen_random_tree(n, seed));
    if (*grg) return emit_config(ctx, gen_random_graph(n, extra, agents == 0 ? n : agents, seed));
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
