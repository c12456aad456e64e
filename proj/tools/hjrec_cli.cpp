// hjrec: forward/backward viscosity solutions of  d_t u + H(x, d_x u) = 0
// on truncated grids, initial-condition reconstruction certificates, and the
// exact discrete-time finite-state analog.
//
// Exit codes: 0 success / verdict true, 3 verdict false, 1 runtime error,
// 2 bad configuration or unknown command.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hjrec/hamiltonian.hpp"
#include "hjrec/io.hpp"
#include "hjrec/oracles.hpp"

namespace {

using namespace hjrec;

// configuration problems exit with code 2; runtime failures with 1
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridOpts {
  double xmin = -3, xmax = 3, h = 0.01;
};

struct ParamOpts {
  double cfl = 0.9, margin = 1.0;
  std::string boundary = "extrapolate";
  std::string keep;  // empty = per-command default
  int stride = 1;
};

const char* bstr(bool b) { return b ? "true" : "false"; }

HamiltonianSpec make_ham(const std::string& name, int dim) {
  try {
    return make_hamiltonian(name, dim);
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
}

SolveParams build_params(const ParamOpts& po, const char* default_keep) {
  SolveParams p;
  p.cfl = po.cfl;
  p.margin = po.margin;
  p.boundary = po.boundary == "clamp" ? SolveParams::Boundary::clamp
                                      : SolveParams::Boundary::extrapolate;
  const std::string keep = po.keep.empty() ? default_keep : po.keep;
  p.keep = keep == "all"         ? SolveParams::Keep::all
           : keep == "endpoints" ? SolveParams::Keep::endpoints
                                 : SolveParams::Keep::stride;
  p.stride = po.stride;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  return p;
}

void require_horizon(double T) {
  if (!(T > 0)) throw config_error("T must be positive");
}

// initial/terminal data: a builtin formula sampled on the flag grid, or a
// path to a grid-function CSV (which then carries its own grid)
GridFunction load_grid_data(const std::string& spec, const GridOpts& go, const char* flag) {
  const size_t colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const bool builtin =
      name == "zero" || name == "abs" || name == "ramp" || name == "min0" || name == "vee";
  if (builtin) {
    double a = 1.0;
    if (colon != std::string::npos) {
      try {
        a = parse_double(std::string_view(spec).substr(colon + 1));
      } catch (const std::invalid_argument&) {
        throw config_error(std::string(flag) + ": bad parameter in '" + spec + "'");
      }
    }
    Grid grid;
    try {
      grid = Grid::make_1d(go.xmin, go.xmax, go.h);
    } catch (const std::exception& e) {
      throw config_error(std::string("grid: ") + e.what());
    }
    return GridFunction::sample(grid, [&](std::span<const double> x) {
      double r = std::abs(x[0]);
      if (name == "zero") return 0.0;
      if (name == "abs") return r;
      if (name == "ramp") return std::max(0.0, a - r);
      if (name == "min0") return std::min(0.0, a - r);
      return std::max(0.0, r - a);  // vee
    });
  }
  std::ifstream f(spec);
  if (!f)
    throw config_error(std::string(flag) + ": '" + spec +
                       "' is neither a builtin (zero, abs, ramp:a, min0:a, vee:a) nor a "
                       "readable CSV file");
  return read_grid_function_csv(f);
}

void print_solve_summary(const SpaceTimeSolution& sol) {
  std::cout << "steps: " << sol.steps << '\n'
            << "dt: " << format_double(sol.dt) << '\n'
            << "slices: " << sol.times.size() << '\n'
            << "nodes: " << sol.grid.node_count() << '\n';
  if (!sol.warning.empty()) std::cout << "warning: " << sol.warning << '\n';
}

int run_solve(TimeDirection dir, const std::string& ham, const std::string& data_spec,
              double T, const GridOpts& go, const ParamOpts& po, const std::string& out) {
  require_horizon(T);
  GridFunction data = load_grid_data(data_spec, go, dir == TimeDirection::forward ? "--g0" : "--gT");
  HamiltonianSpec H = make_ham(ham, data.grid.dim);
  SolveParams params = build_params(po, "endpoints");
  SpaceTimeSolution sol = dir == TimeDirection::forward ? solve_forward(H, data, T, params)
                                                        : solve_backward(H, data, T, params);
  if (out.empty()) {
    write_solution_csv(std::cout, sol);
  } else {
    write_file(out, [&](std::ostream& os) { write_solution_csv(os, sol); });
    print_solve_summary(sol);
  }
  return 0;
}

int run_reconstruct(const std::string& ham, const std::string& g0_spec, double T,
                    const GridOpts& go, const ParamOpts& po, double tol,
                    std::vector<double> probes, const std::string& out) {
  require_horizon(T);
  if (!(tol >= 0)) throw config_error("tol must be >= 0");
  GridFunction g0 = load_grid_data(g0_spec, go, "--g0");
  HamiltonianSpec H = make_ham(ham, g0.grid.dim);
  SolveParams params = build_params(po, "all");
  if (probes.empty()) probes = default_probe_times(T);
  ReconstructionReport rep = reconstruct(H, g0, T, params, tol, probes);
  write_report(std::cout, rep);
  if (!out.empty()) {
    write_file(out + "g0.csv", [&](std::ostream& os) { write_grid_function_csv(os, rep.g0); });
    write_file(out + "gT.csv", [&](std::ostream& os) { write_grid_function_csv(os, rep.gT); });
    write_file(out + "w0.csv", [&](std::ostream& os) { write_grid_function_csv(os, rep.w0); });
    write_file(out + "probes.csv", [&](std::ostream& os) {
      os << "t,max_gap\n";
      for (const ProbeSlice& ps : rep.probe_slices)
        os << format_double(ps.t) << ',' << format_double(ps.max_gap) << '\n';
    });
  }
  return rep.verdict ? 0 : 3;
}

int run_make_reconstructible(const std::string& ham, const std::string& g_spec, double T,
                             const GridOpts& go, const ParamOpts& po, const std::string& out) {
  require_horizon(T);
  GridFunction g = load_grid_data(g_spec, go, "--gT");
  HamiltonianSpec H = make_ham(ham, g.grid.dim);
  SolveParams params = build_params(po, "endpoints");
  ReconstructibleResult mr = make_reconstructible(H, g, T, params);
  if (out.empty()) {
    write_grid_function_csv(std::cout, mr.g0);
  } else {
    write_file(out, [&](std::ostream& os) { write_grid_function_csv(os, mr.g0); });
    print_solve_summary(mr.v);
  }
  return 0;
}

int run_sandwich(const std::string& ham, const std::string& g_spec, double T,
                 const GridOpts& go, const ParamOpts& po, double tol) {
  require_horizon(T);
  if (!(tol >= 0)) throw config_error("tol must be >= 0");
  GridFunction g = load_grid_data(g_spec, go, "--gT");
  HamiltonianSpec H = make_ham(ham, g.grid.dim);
  SolveParams params = build_params(po, "all");
  SandwichResult res = sandwich_check(H, g, T, params, tol);
  std::cout << "worst_wu: " << format_double(res.worst_wu) << '\n'
            << "worst_vw: " << format_double(res.worst_vw) << '\n'
            << "ok: " << bstr(res.ok) << '\n';
  return res.ok ? 0 : 3;
}

int run_bilateral_probe(const std::string& ham, const std::string& g0_spec, double T,
                        const GridOpts& go, const ParamOpts& po, double tol,
                        std::vector<double> probes) {
  require_horizon(T);
  if (!(tol >= 0)) throw config_error("tol must be >= 0");
  GridFunction g0 = load_grid_data(g0_spec, go, "--g0");
  if (g0.grid.dim != 1) throw refusal_error("bilateral-probe: needs a one-dimensional grid");
  HamiltonianSpec H = make_ham(ham, g0.grid.dim);
  if (!H.positively_homogeneous)
    throw refusal_error("bilateral-probe: needs a positively homogeneous hamiltonian");
  SolveParams params = build_params(po, "all");
  if (probes.empty()) probes = default_probe_times(T);
  ReconstructionReport rep = reconstruct(H, g0, T, params, tol, probes);
  if (!rep.verdict)
    throw refusal_error("bilateral-probe: instance is not reconstructible at tolerance " +
                        format_double(tol) + " (sup gap " + format_double(rep.sup_gap) + ")");
  double worst = 0;
  for (const ProbeSlice& ps : rep.probe_slices) {
    worst = std::max(worst, ps.max_gap);
    std::cout << "probe t=" << format_double(ps.t) << ": max|u-w| = " << format_double(ps.max_gap)
              << '\n';
  }
  bool ok = worst <= tol;
  std::cout << "max_gap: " << format_double(worst) << '\n' << "ok: " << bstr(ok) << '\n';
  return ok ? 0 : 3;
}

void print_value_row(std::ostream& os, const char* tag, int k, const ValueVector& row) {
  os << tag << '(' << k << ",.) =";
  for (std::int64_t v : row) os << ' ' << v;
  os << '\n';
}

int run_discrete(const std::string& path, const std::string& out) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open instance file '" + path + "'");
  int T = 0;
  auto [phi, g] = read_discrete_instance(f, &T);

  ValueTable V = backward_table(phi, g, T);
  DiscreteReconstruction rec = reconstruct_discrete(phi, g, T);

  std::cout << "phi:\n";
  for (int i = 0; i < phi.n; ++i) {
    for (int j = 0; j < phi.n; ++j) std::cout << (phi.adj[i][j] ? '1' : '0');
    std::cout << '\n';
  }
  std::cout << "g:";
  for (std::int64_t v : g) std::cout << ' ' << v;
  std::cout << '\n' << "T: " << T << "\n\n";

  for (int k = T; k >= 0; --k) print_value_row(std::cout, "V", k, V.rows[k]);
  std::cout << '\n';
  for (int k = 0; k <= T; ++k) print_value_row(std::cout, "U", k, rec.U.rows[k]);
  std::cout << '\n';
  for (int k = T; k >= 0; --k) print_value_row(std::cout, "W", k, rec.W.rows[k]);
  std::cout << '\n';

  std::cout << "reconstructible: " << bstr(rec.verdict) << '\n';
  std::vector<int> ks = rec.interior_gap_times();
  if (ks.empty()) {
    std::cout << "interior gap times: none\n";
  } else {
    std::cout << "interior gap times:";
    for (int k : ks) std::cout << ' ' << k;
    std::cout << '\n';
    for (int k : ks)
      for (size_t s = 0; s < rec.U.rows[k].size(); ++s)
        if (rec.U.rows[k][s] != rec.W.rows[k][s])
          std::cout << "U(" << k << ',' << s + 1 << ") = " << rec.U.rows[k][s] << " != W(" << k
                    << ',' << s + 1 << ") = " << rec.W.rows[k][s] << '\n';
  }
  if (!out.empty())
    write_file(out, [&](std::ostream& os) { write_tables_csv(os, V, rec.U, rec.W); });
  return rec.verdict ? 0 : 3;
}

int run_search_gap(int n, int T, const std::string& range, int budget, std::uint64_t seed,
                   const std::string& out) {
  if (n < 2) throw config_error("search-gap: need --n >= 2");
  if (T < 2) throw config_error("search-gap: need --T >= 2");
  if (budget < 1) throw config_error("search-gap: need --budget >= 1");
  const size_t colon = range.find(':');
  if (colon == std::string::npos)
    throw config_error("search-gap: --range must look like lo:hi, e.g. 1:3");
  std::int64_t lo = 0, hi = 0;
  try {
    lo = static_cast<std::int64_t>(std::stoll(range.substr(0, colon)));
    hi = static_cast<std::int64_t>(std::stoll(range.substr(colon + 1)));
  } catch (const std::exception&) {
    throw config_error("search-gap: bad --range '" + range + "'");
  }
  if (lo > hi) throw config_error("search-gap: empty --range");

  std::vector<GapInstance> found = search_uv_gap(n, T, lo, hi, budget, seed);
  std::cout << "found: " << found.size() << '\n';
  int idx = 1;
  for (const GapInstance& inst : found) {
    DiscreteReconstruction rec = reconstruct_discrete(inst.phi, inst.g, T);
    std::cout << "\ninstance " << idx << ":\n";
    write_discrete_instance(std::cout, inst.phi, inst.g, T);
    std::cout << "interior gap times:";
    for (int k : rec.interior_gap_times()) std::cout << ' ' << k;
    std::cout << '\n';
    if (!out.empty())
      write_file(out + std::to_string(idx) + ".txt",
                 [&](std::ostream& os) { write_discrete_instance(os, inst.phi, inst.g, T); });
    ++idx;
  }
  return 0;
}

int run_characteristics(const std::string& ham, std::vector<double> x0, std::vector<double> p0,
                        double T, double step, const std::string& out) {
  require_horizon(T);
  if (!(step > 0)) throw config_error("step must be positive");
  if (x0.empty() || x0.size() > 2 || x0.size() != p0.size())
    throw config_error("--x0 and --p0 need the same dimension (1 or 2 entries)");
  HamiltonianSpec H = make_ham(ham, static_cast<int>(x0.size()));
  SubgradientSelection sel;
  try {
    sel = selection_for(H);
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  CharacteristicArc arc = integrate_characteristic(
      sel, std::span<const double>(x0.data(), x0.size()),
      std::span<const double>(p0.data(), p0.size()), T, step);
  if (out.empty()) {
    write_arc_csv(std::cout, arc, H);
  } else {
    write_file(out, [&](std::ostream& os) { write_arc_csv(os, arc, H); });
    const ArcPoint& last = arc.points.back();
    std::cout << "points: " << arc.points.size() << '\n';
    std::cout << "final x:";
    for (int a = 0; a < arc.dim; ++a) std::cout << ' ' << format_double(last.x[a]);
    std::cout << '\n' << "final p:";
    for (int a = 0; a < arc.dim; ++a) std::cout << ' ' << format_double(last.p[a]);
    std::cout << '\n'
              << "H drift: " << format_double(max_hamiltonian_drift(arc, H)) << '\n';
  }
  return 0;
}

int run_oracle_check(double T, double h, double tol, const std::string& only,
                     const std::string& out) {
  require_horizon(T);
  if (!(h > 0)) throw config_error("h must be positive");
  if (!(tol >= 0)) throw config_error("tol must be >= 0");
  std::vector<std::string> names = oracle_names();
  if (!only.empty()) {
    if (std::find(names.begin(), names.end(), only) == names.end())
      throw config_error("unknown instance '" + only + "'");
    names = {only};
  }

  std::ostringstream csv;
  csv << "instance,hamiltonian,T,h,forward_error,backward_error,sup_gap,verdict,expected,match\n";
  bool all_match = true;
  for (const std::string& name : names) {
    OracleInstance inst = make_oracle(name, T);
    Grid grid = Grid::make_1d(-3, 3, h);
    HamiltonianSpec H = make_ham(inst.hamiltonian, 1);
    SolveParams params;
    params.keep = SolveParams::Keep::endpoints;

    GridFunction g0 =
        GridFunction::sample(grid, [&](std::span<const double> x) { return inst.g0(x[0]); });
    GridFunction wT =
        GridFunction::sample(grid, [&](std::span<const double> x) { return inst.w(T, x[0]); });
    SpaceTimeSolution u = solve_forward(H, g0, T, params);
    SpaceTimeSolution w = solve_backward(H, wT, T, params);

    std::vector<std::uint8_t> mask = interior_mask(grid, T, H.lipschitz_M);
    double fwd_err = 0, bwd_err = 0;
    std::array<double, 2> xy{0, 0};
    for (int i = 0; i < grid.node_count(); ++i) {
      if (!mask[static_cast<size_t>(i)]) continue;
      grid.node_coords(i, xy);
      fwd_err = std::max(fwd_err, std::abs(u.final_slice()[static_cast<size_t>(i)] -
                                           inst.u(T, xy[0])));
      bwd_err = std::max(bwd_err, std::abs(w.initial()[static_cast<size_t>(i)] -
                                           inst.w(0, xy[0])));
    }

    ReconstructionReport rep = reconstruct(H, g0, T, params, tol);
    bool match = rep.verdict == inst.reconstructible;
    all_match = all_match && match;
    csv << name << ',' << inst.hamiltonian << ',' << format_double(T) << ',' << format_double(h)
        << ',' << format_double(fwd_err) << ',' << format_double(bwd_err) << ','
        << format_double(rep.sup_gap) << ',' << bstr(rep.verdict) << ','
        << bstr(inst.reconstructible) << ',' << bstr(match) << '\n';
  }
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    write_file(out, [&](std::ostream& os) { os << csv.str(); });
    std::cout << "all verdicts match: " << bstr(all_match) << '\n';
  }
  return all_match ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "hjrec: viscosity solutions of  d_t u + H(x, d_x u) = 0  on truncated grids,\n"
      "initial-condition reconstruction certificates, characteristic arcs, and the\n"
      "exact discrete-time finite-state analog."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hjrec 1.0.0");
  // one config file for the whole tool: keys live in a [subcommand] section;
  // values only fill in options not given on the command line, so flags win
  app.set_config("--config", "",
                 "key=value file with a [subcommand] section; command-line flags win on conflict");
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::string ham = "eikonal";
  std::string g0_spec = "abs", gT_spec = "zero";
  double T = 1.0, tol = 0.0, oracle_tol = 0.3, step = 1e-3;
  GridOpts go;
  ParamOpts po;
  std::string out;
  std::vector<double> probes;
  std::vector<double> x0, p0;
  std::string instance_path, only_instance, range = "1:3";
  int n_states = 3, T_int = 3, budget = 10;
  std::uint64_t seed = 0;

  const char* ham_help =
      "hamiltonian: eikonal (|p|), xeikonal (|x||p|), drift:c (c*p), shifted-eikonal:a,b "
      "(a|p| - b|x|)";
  const char* data_help =
      "builtin (zero, abs, ramp:a, min0:a, vee:a) sampled on the flag grid, or a CSV "
      "grid-function file";

  auto add_grid_flags = [&](CLI::App* cmd) {
    // --h is the grid spacing here, so the help flag keeps only its long form
    cmd->set_help_flag("--help", "print this help and exit");
    cmd->add_option("--xmin", go.xmin, "grid lower bound (builtin data only)")
        ->capture_default_str();
    cmd->add_option("--xmax", go.xmax, "grid upper bound (builtin data only)")
        ->capture_default_str();
    cmd->add_option("--h", go.h, "grid spacing (builtin data only)")->capture_default_str();
  };
  auto add_param_flags = [&](CLI::App* cmd, const char* keep_default) {
    cmd->add_option("--cfl", po.cfl, "time-step safety fraction in (0,1]")->capture_default_str();
    cmd->add_option("--margin", po.margin, "dissipation speed multiplier, >= 1")
        ->capture_default_str();
    cmd->add_option("--boundary", po.boundary, "ghost-node policy")
        ->check(CLI::IsMember({"extrapolate", "clamp"}))
        ->capture_default_str();
    cmd->add_option("--keep", po.keep,
                    std::string("time slices to store (default: ") + keep_default + ")")
        ->check(CLI::IsMember({"all", "endpoints", "stride"}));
    cmd->add_option("--stride", po.stride, "slice stride when --keep stride")
        ->capture_default_str();
  };
  auto add_common = [&](CLI::App* cmd) {
    cmd->fallthrough();  // lets --config appear after the subcommand name
    cmd->add_option("--out", out, "output path (or prefix, where noted); stdout when absent");
  };

  CLI::App* c_fwd = app.add_subcommand(
      "solve-forward", "march the initial datum g0 forward to time T; emits a solution CSV");
  c_fwd->add_option("--hamiltonian", ham, ham_help)->capture_default_str();
  c_fwd->add_option("--g0", g0_spec, data_help)->capture_default_str();
  c_fwd->add_option("--T", T, "horizon")->capture_default_str();
  add_grid_flags(c_fwd);
  add_param_flags(c_fwd, "endpoints");
  add_common(c_fwd);

  CLI::App* c_bwd = app.add_subcommand(
      "solve-backward",
      "solve backward from the terminal datum gT to time 0 via time reversal; emits a solution "
      "CSV");
  c_bwd->add_option("--hamiltonian", ham, ham_help)->capture_default_str();
  c_bwd->add_option("--gT", gT_spec, data_help)->capture_default_str();
  c_bwd->add_option("--T", T, "horizon")->capture_default_str();
  add_grid_flags(c_bwd);
  add_param_flags(c_bwd, "endpoints");
  add_common(c_bwd);

  CLI::App* c_rec = app.add_subcommand(
      "reconstruct",
      "forward-then-backward round trip from g0; verdict true iff the time-0 slice returns to g0 "
      "within --tol on the usable interior (exit 0 true / 3 false); --out is a prefix for "
      "g0/gT/w0/probes CSVs");
  c_rec->add_option("--hamiltonian", ham, ham_help)->capture_default_str();
  c_rec->add_option("--g0", g0_spec, data_help)->capture_default_str();
  c_rec->add_option("--T", T, "horizon")->capture_default_str();
  c_rec->add_option("--tol", tol, "verdict tolerance on the time-0 gap")->required();
  c_rec->add_option("--probes", probes, "interior probe times (default T/4,T/2,3T/4)")
      ->delimiter(',');
  add_grid_flags(c_rec);
  add_param_flags(c_rec, "all");
  add_common(c_rec);

  CLI::App* c_mk = app.add_subcommand(
      "make-reconstructible",
      "backward solve from terminal data g; the time-0 slice is a reconstructible initial "
      "function; emits it as a grid-function CSV");
  c_mk->add_option("--hamiltonian", ham, ham_help)->capture_default_str();
  c_mk->add_option("--gT", gT_spec, "terminal data; " + std::string(data_help))
      ->capture_default_str();
  c_mk->add_option("--T", T, "horizon")->capture_default_str();
  add_grid_flags(c_mk);
  add_param_flags(c_mk, "endpoints");
  add_common(c_mk);

  CLI::App* c_sand = app.add_subcommand(
      "sandwich",
      "check the three-layer ordering u >= w >= v built from terminal data g (exit 0 ok / 3 "
      "violated beyond --tol)");
  c_sand->add_option("--hamiltonian", ham, ham_help)->capture_default_str();
  c_sand->add_option("--gT", gT_spec, "terminal data; " + std::string(data_help))
      ->capture_default_str();
  c_sand->add_option("--T", T, "horizon")->capture_default_str();
  c_sand->add_option("--tol", tol, "largest tolerated ordering violation")->required();
  add_grid_flags(c_sand);
  add_param_flags(c_sand, "all");
  c_sand->fallthrough();

  CLI::App* c_probe = app.add_subcommand(
      "bilateral-probe",
      "for 1D positively homogeneous hamiltonians and reconstructible g0: max |u-w| at interior "
      "probe times (exit 0 within --tol / 3 above it / 1 when the contract is refused)");
  c_probe->add_option("--hamiltonian", ham, ham_help)->capture_default_str();
  c_probe->add_option("--g0", g0_spec, data_help)->capture_default_str();
  c_probe->add_option("--T", T, "horizon")->capture_default_str();
  c_probe->add_option("--tol", tol, "gap tolerance (also the reconstruction verdict tolerance)")
      ->required();
  c_probe->add_option("--probes", probes, "probe times (default T/4,T/2,3T/4)")->delimiter(',');
  add_grid_flags(c_probe);
  add_param_flags(c_probe, "all");
  c_probe->fallthrough();

  CLI::App* c_disc = app.add_subcommand(
      "discrete",
      "exact finite-state round trip: reads an instance file (line 1 'n T', then n 0/1 adjacency "
      "rows, then n terminal values) and prints the transition matrix and the V, U, W tables; "
      "--out writes them as CSV");
  c_disc->add_option("instance", instance_path, "instance file")
      ->required()
      ->check(CLI::ExistingFile);
  c_disc->add_option("--out", out, "tables CSV path (k,state,value,table)");
  c_disc->fallthrough();

  CLI::App* c_gap = app.add_subcommand(
      "search-gap",
      "search for finite-state instances whose round trip succeeds at the endpoints yet has "
      "U != W at an interior time; --out is a filename prefix for the found instances");
  c_gap->add_option("--n", n_states, "number of states")->capture_default_str();
  c_gap->add_option("--T", T_int, "horizon (integer steps)")->capture_default_str();
  c_gap->add_option("--range", range, "terminal value range lo:hi")->capture_default_str();
  c_gap->add_option("--budget", budget, "maximum instances to return")->capture_default_str();
  c_gap->add_option("--seed", seed, "random seed for the sampled regime")->capture_default_str();
  c_gap->add_option("--out", out, "instance file prefix (writes <prefix>1.txt, ...)");
  c_gap->fallthrough();

  CLI::App* c_char = app.add_subcommand(
      "characteristics",
      "integrate one characteristic arc (dx,dp) = (H_p, -H_x) from (x0,p0); emits a CSV "
      "t,x...,p...,H; refuses arcs that reach a non-smooth point of H (exit 1)");
  c_char->add_option("--hamiltonian", ham, ham_help)->capture_default_str();
  c_char->add_option("--x0", x0, "initial position (1 or 2 comma-separated entries)")
      ->required()
      ->delimiter(',');
  c_char->add_option("--p0", p0, "initial momentum (same dimension as --x0)")
      ->required()
      ->delimiter(',');
  c_char->add_option("--T", T, "horizon")->capture_default_str();
  c_char->add_option("--step", step, "integration step")->capture_default_str();
  c_char->add_option("--out", out, "arc CSV path; stdout when absent");
  c_char->fallthrough();

  CLI::App* c_orc = app.add_subcommand(
      "oracle-check",
      "solve every closed-form instance numerically and tabulate the errors and verdicts as CSV "
      "(exit 0 when every verdict matches the expected one, 3 otherwise)");
  c_orc->add_option("--instance", only_instance,
                    "run one instance only (ramp-collapse, vee-spread, xeik-bilateral, valpha, "
                    "horizon-limit)");
  c_orc->set_help_flag("--help", "print this help and exit");
  c_orc->add_option("--T", T, "horizon")->capture_default_str();
  c_orc->add_option("--h", go.h, "grid spacing on [-3,3]")->capture_default_str();
  c_orc->add_option("--tol", oracle_tol, "uniform verdict tolerance")->capture_default_str();
  c_orc->add_option("--out", out, "CSV path; stdout when absent");
  c_orc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  }

  try {
    if (c_fwd->parsed())
      return run_solve(TimeDirection::forward, ham, g0_spec, T, go, po, out);
    if (c_bwd->parsed())
      return run_solve(TimeDirection::backward, ham, gT_spec, T, go, po, out);
    if (c_rec->parsed()) return run_reconstruct(ham, g0_spec, T, go, po, tol, probes, out);
    if (c_mk->parsed()) return run_make_reconstructible(ham, gT_spec, T, go, po, out);
    if (c_sand->parsed()) return run_sandwich(ham, gT_spec, T, go, po, tol);
    if (c_probe->parsed()) return run_bilateral_probe(ham, g0_spec, T, go, po, tol, probes);
    if (c_disc->parsed()) return run_discrete(instance_path, out);
    if (c_gap->parsed()) return run_search_gap(n_states, T_int, range, budget, seed, out);
    if (c_char->parsed()) return run_characteristics(ham, x0, p0, T, step, out);
    if (c_orc->parsed()) return run_oracle_check(T, go.h, oracle_tol, only_instance, out);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;  // unreachable with require_subcommand(1)
}
