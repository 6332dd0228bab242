// Command-line front end; talks to the toolkit exclusively through the C
// API in liesys.h. Exit codes: 0 success, 1 usage/configuration error,
// 2 numerical or library failure (the library message goes to stderr).
#include <liesys.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

const char* kUsage =
    "usage: liesys <command> [<system>] [--key value]... [--config file]\n"
    "\n"
    "commands\n"
    "  solve riccati        --b0 --b1 --b2 --x0 --t0 --t1 --samples\n"
    "  solve oscillator     --omega [--mass] --state x,v[,x,v...] --t0 --t1 --samples\n"
    "  solve pinney         --omega --k --state x,v --t0 --t1 --samples\n"
    "                       (--joint 1 --c C --state x,y,z,vx,vy,vz for the\n"
    "                        equation driven alongside two oscillator copies)\n"
    "  solve ermakov        --omega --f --g --state x,y,vx,vy --t0 --t1 --samples\n"
    "  solve group          --b0 --b1 --b2 --t0 --t1 --samples [--x0]\n"
    "  superpose riccati    --b0 --b1 --b2 --x1 --x2 --x3 --k --t0 --t1 --samples\n"
    "  superpose oscillator --omega --state x,v --k --kprime --t0 --t1 --samples\n"
    "  superpose pinney     --omega --c --state x,y,z,vx,vy,vz --t0 --t1 --samples\n"
    "                       [--branch plus|minus|auto]\n"
    "  invariant oscillator --state x,vx,z,vz\n"
    "  invariant pinney     --c --state x,y,z,vx,vy,vz\n"
    "  invariant ermakov    --k --state x,y,vx,vy   (or --f --g for the\n"
    "                        generalized first integral)\n"
    "  transform            --b0 --b1 --b2 --alpha --beta --gamma --delta\n"
    "                       --t0 --t1 --samples [--route explicit|closure]\n"
    "  reduce               --b0 --b1 --b2 --x1 --t0 --t1 --samples\n"
    "  check-integrability  --b0 --b1 --b2 --c0 --c2 --t0 --t1 --samples [--tol]\n"
    "  verify-algebra       --system riccati|pinney|ermakov [--f --g --k]\n"
    "                       [--points] [--seed] [--h]\n"
    "\n"
    "common keys: --output FILE, --config FILE (key = value lines, # comments;\n"
    "command-line flags win), integrator controls --method rk45|rk4 --step\n"
    "--abs-tol --rel-tol --max-steps --blow-up, quadrature control --quad-tol.\n"
    "Coefficients and frequencies are expressions in t; projective values\n"
    "accept the token inf.\n";

[[noreturn]] void die_usage(const std::string& msg) {
  std::fprintf(stderr, "usage error: %s\n", msg.c_str());
  std::fprintf(stderr, "%s", kUsage);
  std::exit(1);
}

[[noreturn]] void die_lib() {
  std::fprintf(stderr, "%s\n", liesys_last_error());
  std::exit(2);
}

void ck(liesys_status s) {
  if (s != LIESYS_OK) die_lib();
}

using KV = std::map<std::string, std::string>;

struct Cli {
  std::string command, system;
  std::vector<std::pair<std::string, std::string>> flags;
};

Cli parse_argv(int argc, char** argv) {
  Cli cli;
  if (argc < 2) die_usage("missing command");
  cli.command = argv[1];
  if (cli.command == "help" || cli.command == "--help" || cli.command == "-h") {
    std::printf("%s", kUsage);
    std::exit(0);
  }
  int i = 2;
  bool wants_system = cli.command == "solve" || cli.command == "superpose" ||
                      cli.command == "invariant";
  if (wants_system) {
    if (i >= argc || std::strncmp(argv[i], "--", 2) == 0)
      die_usage("command '" + cli.command + "' needs a system name");
    cli.system = argv[i++];
  }
  for (; i < argc; ++i) {
    std::string tok = argv[i];
    if (tok.size() < 3 || tok.compare(0, 2, "--") != 0)
      die_usage("unexpected argument '" + tok + "'");
    std::string key = tok.substr(2), value;
    size_t eq = key.find('=');
    if (eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= argc) die_usage("option --" + key + " needs a value");
      value = argv[++i];
    }
    cli.flags.emplace_back(key, value);
  }
  return cli;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

void load_config(const std::string& path, const std::set<std::string>& allowed,
                 KV& kv) {
  std::ifstream in(path);
  if (!in) die_usage("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      die_usage(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      die_usage(path + ":" + std::to_string(lineno) + ": empty key");
    if (!allowed.count(key))
      die_usage(path + ":" + std::to_string(lineno) + ": unknown key '" + key +
                "'");
    kv[key] = value;
  }
}

// Config file first, then flags on top.
KV finalize(const Cli& cli, std::set<std::string> allowed) {
  allowed.insert("output");
  std::string config_path;
  for (const auto& [key, value] : cli.flags) {
    if (key == "config") {
      config_path = value;
      continue;
    }
    if (!allowed.count(key)) die_usage("unknown option --" + key);
  }
  KV kv;
  if (!config_path.empty()) load_config(config_path, allowed, kv);
  for (const auto& [key, value] : cli.flags)
    if (key != "config") kv[key] = value;
  return kv;
}

bool has(const KV& kv, const std::string& key) { return kv.count(key) != 0; }

std::string require(const KV& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) die_usage("missing required key '" + key + "'");
  return it->second;
}

double to_number(const std::string& key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v))
    die_usage("key '" + key + "' expects a finite number, got '" + text + "'");
  return v;
}

double num(const KV& kv, const std::string& key) {
  return to_number(key, require(kv, key));
}

double num_or(const KV& kv, const std::string& key, double fallback) {
  return has(kv, key) ? to_number(key, kv.at(key)) : fallback;
}

long integer(const KV& kv, const std::string& key, long fallback) {
  if (!has(kv, key)) return fallback;
  double v = to_number(key, kv.at(key));
  long n = static_cast<long>(v);
  if (static_cast<double>(n) != v)
    die_usage("key '" + key + "' expects an integer");
  return n;
}

liesys_pvalue pvalue(const KV& kv, const std::string& key) {
  std::string text = require(kv, key);
  liesys_pvalue v;
  if (text == "inf" || text == "+inf" || text == "-inf") {
    v.is_inf = 1;
    v.x = 0.0;
    return v;
  }
  v.is_inf = 0;
  v.x = to_number(key, text);
  return v;
}

std::vector<double> numbers(const KV& kv, const std::string& key,
                            size_t expected) {
  std::string text = require(kv, key);
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(to_number(key, trim(item)));
  if (expected != 0 && out.size() != expected)
    die_usage("key '" + key + "' expects " + std::to_string(expected) +
              " comma-separated numbers");
  return out;
}

std::vector<double> make_grid(const KV& kv) {
  double t0 = num(kv, "t0"), t1 = num(kv, "t1");
  long n = integer(kv, "samples", -1);
  if (n < 2) die_usage("key 'samples' must be an integer >= 2");
  if (!(t1 > t0)) die_usage("need t1 > t0");
  std::vector<double> grid(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i)
    grid[static_cast<size_t>(i)] =
        t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
  grid.back() = t1;
  return grid;
}

liesys_integrator_opts integrator(const KV& kv) {
  liesys_integrator_opts o;
  liesys_integrator_opts_default(&o);
  if (has(kv, "method")) {
    std::string m = kv.at("method");
    if (m == "rk4")
      o.fixed_step = 1;
    else if (m != "rk45")
      die_usage("key 'method' must be rk45 or rk4");
  }
  o.step = num_or(kv, "step", o.step);
  o.abs_tol = num_or(kv, "abs-tol", o.abs_tol);
  o.rel_tol = num_or(kv, "rel-tol", o.rel_tol);
  o.max_steps = integer(kv, "max-steps", o.max_steps);
  o.blow_up = num_or(kv, "blow-up", o.blow_up);
  return o;
}

const std::set<std::string> kIntegratorKeys = {
    "method", "step", "abs-tol", "rel-tol", "max-steps", "blow-up"};
const std::set<std::string> kGridKeys = {"t0", "t1", "samples"};

std::set<std::string> keyset(std::initializer_list<const char*> extra,
                             bool grid = true, bool ode = true) {
  std::set<std::string> s;
  for (const char* k : extra) s.insert(k);
  if (grid) s.insert(kGridKeys.begin(), kGridKeys.end());
  if (ode) s.insert(kIntegratorKeys.begin(), kIntegratorKeys.end());
  return s;
}

struct Output {
  FILE* f = stdout;
  bool owned = false;

  explicit Output(const KV& kv) {
    if (has(kv, "output")) {
      f = std::fopen(kv.at("output").c_str(), "w");
      if (!f) die_usage("cannot open output file: " + kv.at("output"));
      owned = true;
    }
  }
  ~Output() {
    if (owned) std::fclose(f);
  }
};

void print_number(FILE* f, double v) { std::fprintf(f, "%.12g", v); }

void print_pvalue(FILE* f, liesys_pvalue v) {
  if (v.is_inf)
    std::fprintf(f, "inf");
  else
    print_number(f, v.x);
}

void write_ptraj_csv(FILE* f, const liesys_ptraj* tr, const char* col) {
  std::fprintf(f, "t,%s\n", col);
  for (size_t i = 0; i < liesys_ptraj_size(tr); ++i) {
    double t;
    liesys_pvalue v;
    ck(liesys_ptraj_node(tr, i, &t, &v));
    print_number(f, t);
    std::fputc(',', f);
    print_pvalue(f, v);
    std::fputc('\n', f);
  }
}

void write_traj_csv(FILE* f, const liesys_traj* tr,
                    const std::vector<std::string>& cols) {
  std::fprintf(f, "t");
  for (const std::string& c : cols) std::fprintf(f, ",%s", c.c_str());
  std::fputc('\n', f);
  int dim = liesys_traj_dim(tr);
  std::vector<double> state(static_cast<size_t>(dim));
  for (size_t i = 0; i < liesys_traj_size(tr); ++i) {
    double t;
    ck(liesys_traj_node(tr, i, &t, state.data()));
    print_number(f, t);
    for (double v : state) {
      std::fputc(',', f);
      print_number(f, v);
    }
    std::fputc('\n', f);
  }
}

liesys_coeffs* parse_coeffs(const KV& kv) {
  liesys_coeffs* b = nullptr;
  ck(liesys_coeffs_parse(require(kv, "b0").c_str(), require(kv, "b1").c_str(),
                         require(kv, "b2").c_str(), &b));
  return b;
}

liesys_curve* parse_curve(const KV& kv, const std::string& key) {
  liesys_expr* e = nullptr;
  ck(liesys_expr_parse(require(kv, key).c_str(), &e));
  liesys_curve* c = nullptr;
  ck(liesys_curve_from_expr(e, &c));
  liesys_expr_free(e);
  return c;
}

// ----------------------------------------------------------------- solve

int cmd_solve_riccati(const KV& kv) {
  liesys_coeffs* b = parse_coeffs(kv);
  std::vector<double> grid = make_grid(kv);
  liesys_integrator_opts opts = integrator(kv);
  liesys_ptraj* tr = nullptr;
  ck(liesys_riccati_solve(b, pvalue(kv, "x0"), grid.front(), grid.back(), &opts,
                          grid.data(), grid.size(), &tr));
  Output out(kv);
  write_ptraj_csv(out.f, tr, "x");
  liesys_ptraj_free(tr);
  liesys_coeffs_free(b);
  return 0;
}

int cmd_solve_oscillator(const KV& kv) {
  std::vector<double> state = numbers(kv, "state", 0);
  if (state.size() < 2 || state.size() % 2 != 0)
    die_usage("key 'state' expects interleaved pairs x,v");
  int copies = static_cast<int>(state.size() / 2);
  liesys_curve* omega = parse_curve(kv, "omega");
  liesys_curve* mass = nullptr;
  if (has(kv, "mass")) mass = parse_curve(kv, "mass");
  std::vector<double> grid = make_grid(kv);
  liesys_integrator_opts opts = integrator(kv);
  liesys_traj* tr = nullptr;
  ck(liesys_oscillator_solve(omega, mass, state.data(), copies, grid.front(),
                             grid.back(), &opts, grid.data(), grid.size(), &tr));
  std::vector<std::string> cols;
  for (int i = 1; i <= copies; ++i) {
    cols.push_back("x" + std::to_string(i));
    cols.push_back("v" + std::to_string(i));
  }
  Output out(kv);
  write_traj_csv(out.f, tr, cols);
  liesys_traj_free(tr);
  liesys_curve_free(mass);
  liesys_curve_free(omega);
  return 0;
}

int cmd_solve_pinney(const KV& kv) {
  liesys_curve* omega = parse_curve(kv, "omega");
  std::vector<double> grid = make_grid(kv);
  liesys_integrator_opts opts = integrator(kv);
  liesys_traj* tr = nullptr;
  Output out(kv);
  if (integer(kv, "joint", 0) != 0) {
    std::vector<double> state = numbers(kv, "state", 6);
    ck(liesys_pinney_joint_solve(omega, num(kv, "c"), state.data(), grid.front(),
                                 grid.back(), &opts, grid.data(), grid.size(),
                                 &tr));
    write_traj_csv(out.f, tr, {"x", "y", "z", "vx", "vy", "vz"});
  } else {
    std::vector<double> state = numbers(kv, "state", 2);
    ck(liesys_pinney_solve(omega, num(kv, "k"), state[0], state[1], grid.front(),
                           grid.back(), &opts, grid.data(), grid.size(), &tr));
    write_traj_csv(out.f, tr, {"x", "v"});
  }
  liesys_traj_free(tr);
  liesys_curve_free(omega);
  return 0;
}

int cmd_solve_ermakov(const KV& kv) {
  liesys_curve* omega = parse_curve(kv, "omega");
  liesys_expr* f = nullptr;
  liesys_expr* g = nullptr;
  ck(liesys_expr_parse(require(kv, "f").c_str(), &f));
  ck(liesys_expr_parse(require(kv, "g").c_str(), &g));
  std::vector<double> state = numbers(kv, "state", 4);
  std::vector<double> grid = make_grid(kv);
  liesys_integrator_opts opts = integrator(kv);
  liesys_traj* tr = nullptr;
  ck(liesys_ermakov_solve(omega, f, g, state.data(), grid.front(), grid.back(),
                          &opts, grid.data(), grid.size(), &tr));
  Output out(kv);
  write_traj_csv(out.f, tr, {"x", "y", "vx", "vy"});
  liesys_traj_free(tr);
  liesys_expr_free(g);
  liesys_expr_free(f);
  liesys_curve_free(omega);
  return 0;
}

int cmd_solve_group(const KV& kv) {
  liesys_coeffs* b = parse_coeffs(kv);
  std::vector<double> grid = make_grid(kv);
  liesys_integrator_opts opts = integrator(kv);
  liesys_slcurve* g = nullptr;
  ck(liesys_group_solve(b, grid.front(), grid.back(), &opts, grid.data(),
                        grid.size(), &g));
  Output out(kv);
  if (has(kv, "x0")) {
    liesys_ptraj* tr = nullptr;
    ck(liesys_group_transport(g, pvalue(kv, "x0"), &tr));
    write_ptraj_csv(out.f, tr, "x");
    liesys_ptraj_free(tr);
  } else {
    std::fprintf(out.f, "t,g11,g12,g21,g22\n");
    for (size_t i = 0; i < liesys_slcurve_size(g); ++i) {
      double t, m[4];
      ck(liesys_slcurve_node(g, i, &t, m));
      print_number(out.f, t);
      for (double v : m) {
        std::fputc(',', out.f);
        print_number(out.f, v);
      }
      std::fputc('\n', out.f);
    }
  }
  liesys_slcurve_free(g);
  liesys_coeffs_free(b);
  return 0;
}

// ------------------------------------------------------------- superpose

int cmd_superpose_riccati(const KV& kv) {
  liesys_coeffs* b = parse_coeffs(kv);
  std::vector<double> grid = make_grid(kv);
  liesys_integrator_opts opts = integrator(kv);
  liesys_ptraj* tr[3] = {nullptr, nullptr, nullptr};
  const char* keys[3] = {"x1", "x2", "x3"};
  for (int i = 0; i < 3; ++i)
    ck(liesys_riccati_solve(b, pvalue(kv, keys[i]), grid.front(), grid.back(),
                            &opts, grid.data(), grid.size(), &tr[i]));
  liesys_ptraj* mixed = nullptr;
  ck(liesys_riccati_superpose(tr[0], tr[1], tr[2], num(kv, "k"), &mixed));
  Output out(kv);
  write_ptraj_csv(out.f, mixed, "x");
  liesys_ptraj_free(mixed);
  for (liesys_ptraj* p : tr) liesys_ptraj_free(p);
  liesys_coeffs_free(b);
  return 0;
}

int cmd_superpose_oscillator(const KV& kv) {
  liesys_curve* omega = parse_curve(kv, "omega");
  std::vector<double> state = numbers(kv, "state", 2);
  std::vector<double> grid = make_grid(kv);
  liesys_integrator_opts opts = integrator(kv);
  liesys_traj* base = nullptr;
  ck(liesys_oscillator_solve(omega, nullptr, state.data(), 1, grid.front(),
                             grid.back(), &opts, grid.data(), grid.size(),
                             &base));
  liesys_traj* tr = nullptr;
  ck(liesys_partial_superpose(base, num(kv, "k"), num(kv, "kprime"),
                              num_or(kv, "quad-tol", 1e-10), &tr));
  Output out(kv);
  write_traj_csv(out.f, tr, {"x", "v"});
  liesys_traj_free(tr);
  liesys_traj_free(base);
  liesys_curve_free(omega);
  return 0;
}

int cmd_superpose_pinney(const KV& kv) {
  liesys_curve* omega = parse_curve(kv, "omega");
  double c = num(kv, "c");
  std::vector<double> state = numbers(kv, "state", 6);
  double inv[3];
  ck(liesys_pinney_invariants(state.data(), c, inv));

  std::string branch = has(kv, "branch") ? kv.at("branch") : "auto";
  int minus = 0;
  if (branch == "minus") {
    minus = 1;
  } else if (branch == "auto") {
    // Pick the sign that reproduces the given state at t0.
    double best = HUGE_VAL;
    for (int m = 0; m <= 1; ++m) {
      double y, vy;
      if (liesys_pinney_superpose(state[0], state[3], state[2], state[5], inv[0],
                                  inv[1], inv[2], c, m, &y, &vy) != LIESYS_OK)
        continue;
      double err = std::fabs(y - state[1]) + std::fabs(vy - state[4]);
      if (err < best) {
        best = err;
        minus = m;
      }
    }
  } else if (branch != "plus") {
    die_usage("key 'branch' must be plus, minus or auto");
  }

  const double pair0[4] = {state[0], state[3], state[2], state[5]};
  std::vector<double> grid = make_grid(kv);
  liesys_integrator_opts opts = integrator(kv);
  liesys_traj* osc = nullptr;
  ck(liesys_oscillator_solve(omega, nullptr, pair0, 2, grid.front(), grid.back(),
                             &opts, grid.data(), grid.size(), &osc));
  Output out(kv);
  std::fprintf(out.f, "t,y,vy\n");
  double node[4];
  for (size_t i = 0; i < liesys_traj_size(osc); ++i) {
    double t, y, vy;
    ck(liesys_traj_node(osc, i, &t, node));
    ck(liesys_pinney_superpose(node[0], node[1], node[2], node[3], inv[0],
                               inv[1], inv[2], c, minus, &y, &vy));
    print_number(out.f, t);
    std::fputc(',', out.f);
    print_number(out.f, y);
    std::fputc(',', out.f);
    print_number(out.f, vy);
    std::fputc('\n', out.f);
  }
  liesys_traj_free(osc);
  liesys_curve_free(omega);
  return 0;
}

// ------------------------------------------------------------- invariant

int cmd_invariant(const KV& kv, const std::string& system) {
  Output out(kv);
  if (system == "oscillator") {
    std::vector<double> s = numbers(kv, "state", 4);
    std::fprintf(out.f, "W: ");
    print_number(out.f, liesys_wronskian(s[0], s[1], s[2], s[3]));
    std::fputc('\n', out.f);
  } else if (system == "pinney") {
    std::vector<double> s = numbers(kv, "state", 6);
    double inv[3];
    ck(liesys_pinney_invariants(s.data(), num(kv, "c"), inv));
    const char* names[3] = {"I1", "I2", "W"};
    for (int i = 0; i < 3; ++i) {
      std::fprintf(out.f, "%s: ", names[i]);
      print_number(out.f, inv[i]);
      std::fputc('\n', out.f);
    }
  } else if (system == "ermakov") {
    std::vector<double> s = numbers(kv, "state", 4);
    double F;
    if (has(kv, "f") || has(kv, "g")) {
      liesys_expr* f = nullptr;
      liesys_expr* g = nullptr;
      ck(liesys_expr_parse(require(kv, "f").c_str(), &f));
      ck(liesys_expr_parse(require(kv, "g").c_str(), &g));
      ck(liesys_generalized_invariant(f, g, s.data(),
                                      num_or(kv, "quad-tol", 1e-10), &F));
      liesys_expr_free(g);
      liesys_expr_free(f);
    } else {
      ck(liesys_ermakov_invariant(num(kv, "k"), s.data(), &F));
    }
    std::fprintf(out.f, "F: ");
    print_number(out.f, F);
    std::fputc('\n', out.f);
  } else {
    die_usage("invariant expects system oscillator, pinney or ermakov");
  }
  return 0;
}

// ----------------------------------------------- coefficient manipulation

void write_coeffs_csv(const KV& kv, liesys_coeffs* b) {
  std::vector<double> grid = make_grid(kv);
  Output out(kv);
  std::fprintf(out.f, "t,b0,b1,b2\n");
  for (double t : grid) {
    double v[3];
    ck(liesys_coeffs_eval(b, t, v));
    print_number(out.f, t);
    for (double x : v) {
      std::fputc(',', out.f);
      print_number(out.f, x);
    }
    std::fputc('\n', out.f);
  }
}

int cmd_transform(const KV& kv) {
  liesys_coeffs* b = parse_coeffs(kv);
  liesys_expr* entry[4] = {nullptr, nullptr, nullptr, nullptr};
  const char* keys[4] = {"alpha", "beta", "gamma", "delta"};
  for (int i = 0; i < 4; ++i)
    ck(liesys_expr_parse(require(kv, keys[i]).c_str(), &entry[i]));
  int closure = 0;
  if (has(kv, "route")) {
    std::string r = kv.at("route");
    if (r == "closure")
      closure = 1;
    else if (r != "explicit")
      die_usage("key 'route' must be explicit or closure");
  }
  liesys_coeffs* nb = nullptr;
  ck(liesys_riccati_transform(b, entry[0], entry[1], entry[2], entry[3], closure,
                              &nb));
  write_coeffs_csv(kv, nb);
  liesys_coeffs_free(nb);
  for (liesys_expr* e : entry) liesys_expr_free(e);
  liesys_coeffs_free(b);
  return 0;
}

int cmd_reduce(const KV& kv) {
  liesys_coeffs* b = parse_coeffs(kv);
  liesys_expr* x1 = nullptr;
  ck(liesys_expr_parse(require(kv, "x1").c_str(), &x1));
  std::vector<double> grid = make_grid(kv);
  liesys_coeffs* nb = nullptr;
  ck(liesys_riccati_reduce(b, x1, grid.data(), grid.size(), &nb));
  write_coeffs_csv(kv, nb);
  liesys_coeffs_free(nb);
  liesys_expr_free(x1);
  liesys_coeffs_free(b);
  return 0;
}

int cmd_check_integrability(const KV& kv) {
  liesys_coeffs* b = parse_coeffs(kv);
  std::vector<double> grid = make_grid(kv);
  liesys_criterion_report report;
  ck(liesys_riccati_check_integrability(b, num(kv, "c0"), num(kv, "c2"),
                                        grid.data(), grid.size(),
                                        num_or(kv, "tol", 1e-8), &report));
  Output out(kv);
  std::fprintf(out.f, "holds: %s\n", report.holds ? "yes" : "no");
  std::fprintf(out.f, "K: ");
  print_number(out.f, report.K);
  std::fprintf(out.f, "\nL: ");
  print_number(out.f, report.L);
  std::fprintf(out.f, "\nmax deviation: ");
  print_number(out.f, report.max_deviation);
  std::fputc('\n', out.f);
  if (report.D_text) std::fprintf(out.f, "D: %s\n", report.D_text);
  if (report.scale_text) std::fprintf(out.f, "scale: %s\n", report.scale_text);
  liesys_criterion_report_clear(&report);
  liesys_coeffs_free(b);
  return 0;
}

int cmd_verify_algebra(const KV& kv) {
  std::string system = require(kv, "system");
  double residual = 0.0;
  ck(liesys_verify_algebra(
      system.c_str(), has(kv, "f") ? kv.at("f").c_str() : nullptr,
      has(kv, "g") ? kv.at("g").c_str() : nullptr, num_or(kv, "k", 1.0),
      static_cast<int>(integer(kv, "points", 20)),
      static_cast<unsigned>(integer(kv, "seed", 1)), num_or(kv, "h", 1e-5),
      &residual));
  Output out(kv);
  std::fprintf(out.f, "max residual: %.3e\n", residual);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Cli cli = parse_argv(argc, argv);

  if (cli.command == "solve") {
    if (cli.system == "riccati")
      return cmd_solve_riccati(
          finalize(cli, keyset({"b0", "b1", "b2", "x0"})));
    if (cli.system == "oscillator")
      return cmd_solve_oscillator(
          finalize(cli, keyset({"omega", "mass", "state"})));
    if (cli.system == "pinney")
      return cmd_solve_pinney(
          finalize(cli, keyset({"omega", "k", "c", "joint", "state"})));
    if (cli.system == "ermakov")
      return cmd_solve_ermakov(
          finalize(cli, keyset({"omega", "f", "g", "state"})));
    if (cli.system == "group")
      return cmd_solve_group(
          finalize(cli, keyset({"b0", "b1", "b2", "x0"})));
    die_usage("unknown system '" + cli.system + "' for solve");
  }
  if (cli.command == "superpose") {
    if (cli.system == "riccati")
      return cmd_superpose_riccati(
          finalize(cli, keyset({"b0", "b1", "b2", "x1", "x2", "x3", "k"})));
    if (cli.system == "oscillator")
      return cmd_superpose_oscillator(finalize(
          cli, keyset({"omega", "state", "k", "kprime", "quad-tol"})));
    if (cli.system == "pinney")
      return cmd_superpose_pinney(
          finalize(cli, keyset({"omega", "c", "state", "branch"})));
    die_usage("unknown system '" + cli.system + "' for superpose");
  }
  if (cli.command == "invariant") {
    KV kv = finalize(cli, keyset({"state", "c", "k", "f", "g", "quad-tol"},
                                 /*grid=*/false, /*ode=*/false));
    return cmd_invariant(kv, cli.system);
  }
  if (cli.command == "transform")
    return cmd_transform(finalize(
        cli, keyset({"b0", "b1", "b2", "alpha", "beta", "gamma", "delta",
                     "route"},
                    /*grid=*/true, /*ode=*/false)));
  if (cli.command == "reduce")
    return cmd_reduce(finalize(cli, keyset({"b0", "b1", "b2", "x1"},
                                           /*grid=*/true, /*ode=*/false)));
  if (cli.command == "check-integrability")
    return cmd_check_integrability(
        finalize(cli, keyset({"b0", "b1", "b2", "c0", "c2", "tol"},
                             /*grid=*/true, /*ode=*/false)));
  if (cli.command == "verify-algebra")
    return cmd_verify_algebra(
        finalize(cli, keyset({"system", "f", "g", "k", "points", "seed", "h"},
                             /*grid=*/false, /*ode=*/false)));
  die_usage("unknown command '" + cli.command + "'");
}
