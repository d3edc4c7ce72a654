// Command-line front end: factorize, verify, analyze, pathsys, subdivide,
// oracle, bench. Exit codes: 0 success, 1 verification failure, 2 bad input.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sepfactor/sepfactor.hpp"

namespace fs = std::filesystem;
using namespace sepfactor;
using nlohmann::json;

namespace {

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct run_config {
  std::string verify = "full";
  std::uint64_t seed = 1;
  int threads = 1;
  double cap = default_minor_cap;
  bool json_out = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Output files are written to a temporary name first and renamed into place.
void write_file(const std::string& path, const std::string& text) {
  auto tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw input_error("cannot write " + path);
    out << text;
  }
  fs::rename(tmp, path);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file(path, text);
}

std::vector<std::string> content_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(line);
  return out;
}

// One line: a permutation. Two lines: a biorder (each line lists the elements
// in increasing order of that order).
permutation read_permutation(const std::string& path) {
  auto lines = content_lines(read_file(path));
  if (lines.empty()) throw input_error(path + ": empty input");
  if (lines.size() == 1) return parse_permutation(lines[0], 1);
  if (lines.size() == 2) {
    auto a = parse_permutation(lines[0], 1), b = parse_permutation(lines[1], 2);
    if (a.size() != b.size()) throw input_error(path + ": biorder lines differ in length");
    return biorder{a.images(), b.images()}.to_permutation();
  }
  throw input_error(path + ": expected one permutation line or two biorder lines");
}

certificate read_certificate(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw input_error(path + ": malformed JSON: " + e.what());
  }
  try {
    return certificate_from_json(j);
  } catch (const error& e) {
    throw input_error(path + ": " + e.what());
  }
}

verification_report check(const certificate& c, const std::string& level) {
  auto r = verify_certificate(c);
  if (level == "off") return {true, true, true};
  if (level == "spot") {
    // product only; separability checked on the first and last factor
    r.all_separable = true;
    for (std::size_t i : {std::size_t{0}, c.factors.size() - 1})
      if (i < c.factors.size() && !is_separable(c.factors[i])) r.all_separable = false;
    r.within_bound = true;
  }
  return r;
}

void print_report(const verification_report& r, bool as_json) {
  if (as_json) {
    std::cout << report_json(r).dump(2) << '\n';
    return;
  }
  std::cout << "product matches: " << (r.product_matches ? "yes" : "no") << '\n'
            << "all separable:   " << (r.all_separable ? "yes" : "no") << '\n'
            << "within bound:    " << (r.within_bound ? "yes" : "no") << '\n'
            << "result:          " << (r.pass() ? "PASS" : "FAIL") << '\n';
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

// ---------------------------------------------------------------- commands

int cmd_factorize(const run_config& cfg, const std::string& input, const std::string& avoid, int k,
                  const std::string& out) {
  auto s = read_permutation(input);
  factorize_options opt;
  opt.cap = cfg.cap;
  certificate c;
  if (!avoid.empty()) {
    auto pat = parse_permutation(avoid, 1);
    try {
      c = factor_avoiding(s, pat, opt);
    } catch (const pattern_contained& e) {
      std::cerr << "pattern " << pat.str() << " is contained; witness positions: " << join(e.witness) << '\n';
      return 2;
    }
  } else if (k > 0) {
    try {
      c = factor_almost_mixed_free(s, k, opt);
    } catch (const not_almost_mixed_free& e) {
      std::cerr << e.what() << '\n';
      return 2;
    }
  } else {
    throw input_error("factorize: give --avoid PATTERN or --k K");
  }
  emit(out, to_json(c).dump(2) + "\n");
  auto r = check(c, cfg.verify);
  if (!out.empty() && out != "-") print_report(r, cfg.json_out);
  return r.pass() ? 0 : 1;
}

int cmd_verify(const run_config& cfg, const std::string& path) {
  auto c = read_certificate(path);
  auto r = verify_certificate(c);
  print_report(r, cfg.json_out);
  return r.pass() ? 0 : 1;
}

json capped(const std::function<json()>& f) {
  try {
    return f();
  } catch (const error&) {
    return "cap-exceeded";
  }
}

int largest_minor(const matrix01& m, minor_kind kind, double cap, bool& hit_cap) {
  int best = 0;
  hit_cap = false;
  for (int k = 1; k <= m.rows(); ++k) {
    try {
      if (!find_minor(m, k, kind, cap)) break;
    } catch (const error&) {
      hit_cap = true;
      break;
    }
    best = k;
  }
  return best;
}

int cmd_analyze(const run_config& cfg, const std::string& input) {
  auto s = read_permutation(input);
  auto m = adjacency_matrix(s);
  json j;
  j["input"] = s.images();
  auto tree = is_separable(s);
  j["separable"] = tree.has_value();
  j["tree"] = tree ? json(tree->str()) : json(nullptr);
  j["almost_mixed_number"] = capped([&] { return json(almost_mixed_number(s, cfg.cap)); });
  j["mixed_minor_2"] = capped([&] {
    auto w = find_minor(m, 2, minor_kind::mixed, cfg.cap);
    return w ? witness_json(*w) : json(nullptr);
  });
  bool cap_mixed = false, cap_grid = false;
  int lm = largest_minor(m, minor_kind::mixed, cfg.cap, cap_mixed);
  int lg = largest_minor(m, minor_kind::grid, cfg.cap, cap_grid);
  j["largest_mixed_minor"] = lm;
  j["largest_mixed_minor_capped"] = cap_mixed;
  j["largest_grid"] = lg;
  j["largest_grid_capped"] = cap_grid;
  auto mf = mixed_free_order(s, cfg.cap);
  std::vector<int> order;
  for (int x : mf.order) order.push_back(x + 1);
  j["third_order"] = {{"order", order}, {"k", mf.k}, {"verified", mf.verified}, {"width", mf.width}};
  if (cfg.json_out) {
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::cout << "permutation:          " << s.str() << '\n'
            << "separable:            " << (tree ? "yes " + tree->str() : std::string("no")) << '\n'
            << "almost-mixed number:  " << (j["almost_mixed_number"].is_string() ? "cap-exceeded" : j["almost_mixed_number"].dump()) << '\n'
            << "largest mixed minor:  " << lm << (cap_mixed ? " (cap reached)" : "") << '\n'
            << "largest grid:         " << lg << (cap_grid ? " (cap reached)" : "") << '\n'
            << "third order:          " << join(order) << " (k = " << mf.k << (mf.verified ? ", verified" : ", heuristic")
            << ", width " << mf.width << ")\n";
  if (!j["mixed_minor_2"].is_null() && !j["mixed_minor_2"].is_string())
    std::cout << "2-mixed minor:        " << j["mixed_minor_2"].dump() << '\n';
  std::cout << "adjacency matrix:\n" << m.str();
  return 0;
}

int cmd_pathsys(const run_config& cfg, const std::string& path, const std::string& out, const std::string& dot, int r) {
  auto c = read_certificate(path);
  auto factors = c.factors;
  if (factors.empty()) factors.push_back(permutation::identity(c.input.size()));
  auto g = build_path_system(factors);
  emit(out, g.text());
  if (!dot.empty()) write_file(dot, g.dot());
  json rep;
  rep["layers"] = g.layers();
  rep["vertices"] = g.vertex_count();
  rep["edges"] = g.edges().size();
  rep["follows_input"] = g.follow() == c.input;
  rep["target"] = 3 * r + 2;
  rep["target_grid_found"] = capped([&] {
    return json(find_minor(path_system_matrix(g), 3 * r + 2, minor_kind::grid, cfg.cap).has_value());
  });
  bool hit = false;
  rep["largest_grid"] = largest_minor(path_system_matrix(g), minor_kind::grid, cfg.cap, hit);
  rep["largest_grid_capped"] = hit;
  (out.empty() || out == "-" ? std::cerr : std::cout) << rep.dump(cfg.json_out ? 2 : -1) << '\n';
  return 0;
}

int cmd_subdivide(const run_config& cfg, const std::string& path, const std::string& out, const std::string& dot) {
  auto g = parse_ordered_graph(read_file(path));
  factorize_options opt;
  opt.cap = cfg.cap;
  auto r = build_subdivision(g, opt);
  emit(out, r.graph.text());
  if (!dot.empty()) write_file(dot, r.graph.dot());
  json rep;
  rep["m"] = r.m;
  rep["vertices"] = r.graph.n;
  rep["edges"] = r.graph.edges.size();
  rep["pattern"] = r.pattern.images();
  rep["factors"] = r.cert.factors.size();
  rep["certificate_pass"] = g.edges.empty() || verify_certificate(r.cert).pass();
  if (r.graph.n <= 40) {
    bool hit = false;
    rep["largest_grid"] = largest_minor(
        [&] {
          matrix01 m(r.graph.n, r.graph.n);
          for (auto [u, v] : r.graph.edges) {
            m.set(u, v, 1);
            m.set(v, u, 1);
          }
          return m;
        }(),
        minor_kind::grid, cfg.cap, hit);
    rep["largest_grid_capped"] = hit;
  }
  (out.empty() || out == "-" ? std::cerr : std::cout) << rep.dump(cfg.json_out ? 2 : -1) << '\n';
  return 0;
}

json oracle_suite(const std::string& suite, const run_config& cfg) {
  json j;
  if (suite == "sep-index-s4") {
    for (const auto& p : all_permutations(4)) j[p.str()] = *separable_index_oracle(p, 4);
  } else if (suite == "schroeder") {
    auto a = permutation({2, 4, 1, 3}), b = permutation({3, 1, 4, 2});
    json counts = json::array();
    for (int n = 1; n <= 5; ++n) {
      int c = 0;
      for (const auto& p : all_permutations(n)) c += !contains_pattern(p, a) && !contains_pattern(p, b);
      counts.push_back(c);
    }
    j["counts"] = counts;
  } else if (suite == "minors-s5") {
    for (const auto& p : all_permutations(5)) {
      auto m = adjacency_matrix(p);
      json e;
      e["almost_mixed_number"] = almost_mixed_number(p, cfg.cap);
      bool hit = false;
      e["largest_mixed"] = largest_minor(m, minor_kind::mixed, cfg.cap, hit);
      e["largest_grid"] = largest_minor(m, minor_kind::grid, cfg.cap, hit);
      j[p.str()] = e;
    }
  } else if (suite == "shuffle") {
    rng_t rng(cfg.seed);
    json rows = json::array();
    for (int i = 0; i < 20; ++i) {
      int jexp = uniform_int(rng, 0, 3);
      int n = uniform_int(rng, 1 << jexp, 96);
      auto inst = random_identity_shuffle(n, 1 << jexp, rng);
      auto f = factor_shuffle(inst.sigma, inst.classes);
      rows.push_back({{"j", jexp},
                      {"n", n},
                      {"left", f.left.size()},
                      {"right", f.right.size()},
                      {"core_identity", f.core.is_identity()}});
    }
    j["seed"] = cfg.seed;
    j["instances"] = rows;
  } else if (suite == "bounds") {
    for (int k = 2; k <= 8; ++k) j[std::to_string(k)] = bound_f(k);
  } else {
    throw input_error("unknown oracle suite '" + suite + "' (sep-index-s4, minors-s5, schroeder, shuffle, bounds)");
  }
  return j;
}

int cmd_oracle(const run_config& cfg, const std::string& suite, const std::string& out) {
  auto j = oracle_suite(suite, cfg);
  std::string path = out.empty() ? suite + ".json" : out;
  emit(path, j.dump(2) + "\n");
  if (path != "-") std::cout << "wrote " << path << '\n';
  return 0;
}

int cmd_bench(const run_config& cfg, std::vector<int> sizes, int fact_n, int fact_count) {
  rng_t rng(cfg.seed);
  if (sizes.empty()) sizes = {100000, 1000000};
  std::cout << "delayed tree build\n";
  for (int n : sizes) {
    auto p = random_permutation(n, rng);
    auto t0 = std::chrono::steady_clock::now();
    auto t = build_delayed_tree(p);
    auto t1 = std::chrono::steady_clock::now();
    std::cout << "  n=" << n << " nodes=" << t.nodes.size()
              << " ms=" << std::chrono::duration<double, std::milli>(t1 - t0).count() << '\n';
  }
  std::cout << "factor_avoiding on 321-avoiders\n";
  auto pat = permutation({3, 2, 1});
  for (int i = 0; i < fact_count; ++i) {
    auto s = random_321_avoider(fact_n, rng);
    factorize_options opt;
    opt.cap = cfg.cap;
    auto t0 = std::chrono::steady_clock::now();
    auto c = factor_avoiding(s, pat, opt);
    auto t1 = std::chrono::steady_clock::now();
    std::cout << "  n=" << fact_n << " k=" << c.k << " factors=" << c.factors.size()
              << " pass=" << verify_certificate(c).pass()
              << " ms=" << std::chrono::duration<double, std::milli>(t1 - t0).count() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factor pattern-avoiding permutations into separable permutations"};
  app.require_subcommand(1);
  app.fallthrough();
  run_config cfg;
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--threads", cfg.threads, "worker threads (runs are sequential and deterministic)");
  app.add_option("--caps", cfg.cap, "feasibility cap on candidate divisions for minor searches");
  app.add_option("--verify", cfg.verify, "verification level")->check(CLI::IsMember({"off", "spot", "full"}));
  app.add_flag("--json", cfg.json_out, "machine-readable output");

  std::string input, out, dot, avoid, suite;
  int k = 0, r = 3, fact_n = 200, fact_count = 3;
  std::vector<int> sizes;

  auto* fz = app.add_subcommand("factorize", "write a factorization certificate");
  fz->add_option("input", input, "permutation file")->required();
  fz->add_option("--avoid", avoid, "avoided pattern, e.g. \"2 4 1 3\"");
  fz->add_option("--k", k, "almost-mixed-free parameter");
  fz->add_option("-o,--output", out, "certificate path (default stdout)");

  auto* vf = app.add_subcommand("verify", "check a certificate");
  vf->add_option("certificate", input)->required();

  auto* an = app.add_subcommand("analyze", "separability and minor measurements");
  an->add_option("input", input)->required();

  auto* ps = app.add_subcommand("pathsys", "path system of a certificate");
  ps->add_option("certificate", input)->required();
  ps->add_option("-o,--output", out, "graph text path (default stdout)");
  ps->add_option("--dot", dot, "DOT output path");
  ps->add_option("--r", r, "grid target is 3r+2");

  auto* sd = app.add_subcommand("subdivide", "ordered subdivision of a graph");
  sd->add_option("graph", input)->required();
  sd->add_option("-o,--output", out, "graph text path (default stdout)");
  sd->add_option("--dot", dot, "DOT output path");

  auto* orc = app.add_subcommand("oracle", "recompute an oracle fixture");
  orc->add_option("suite", suite)->required();
  orc->add_option("-o,--output", out, "fixture path (default <suite>.json)");

  auto* bn = app.add_subcommand("bench", "timing runs");
  bn->add_option("--sizes", sizes, "tree build sizes");
  bn->add_option("--n", fact_n, "factorization size");
  bn->add_option("--count", fact_count, "factorization runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (const char* env = std::getenv("SEPFACTOR_CAPS")) {
    try {
      cfg.cap = std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "SEPFACTOR_CAPS is not a number\n";
      return 2;
    }
  }

  try {
    if (*fz) return cmd_factorize(cfg, input, avoid, k, out);
    if (*vf) return cmd_verify(cfg, input);
    if (*an) return cmd_analyze(cfg, input);
    if (*ps) return cmd_pathsys(cfg, input, out, dot, r);
    if (*sd) return cmd_subdivide(cfg, input, out, dot);
    if (*orc) return cmd_oracle(cfg, suite, out);
    if (*bn) return cmd_bench(cfg, sizes, fact_n, fact_count);
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
