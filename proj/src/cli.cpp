#include "graphlogm/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "graphlogm/analysis.hpp"
#include "graphlogm/bench.hpp"
#include "graphlogm/driver.hpp"
#include "graphlogm/errors.hpp"
#include "graphlogm/fit.hpp"
#include "graphlogm/matio.hpp"
#include "graphlogm/scheme.hpp"

namespace graphlogm {

namespace {

namespace fs = std::filesystem;

struct Globals {
  std::uint64_t seed = 1;
  int digits = kDefaultDigits;
  std::string out_dir = ".";
  std::string format = "csv";
};

fs::path out_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return fs::path(g.out_dir) / name;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw InputError("cannot write " + p.string());
  return f;
}

void write_text(const fs::path& p, const std::string& text) {
  auto f = open_out(p);
  f << text;
}

char family_tag(const std::string& s) {
  if (s.size() != 1 || s[0] < 'a' || s[0] > 'd') throw ArgumentError("family must be one of a, b, c, d");
  return s[0];
}

// ---- logm ----

struct LogmArgs {
  std::string input;
  std::string output;
  std::string ref;
  std::string method = "graph";
  int max_k = 9;
  int maxiter = 40;
  bool no_balance = false;
};

template <Scalar T>
int do_logm(const Matrix<T>& a, const LogmArgs& args, const Globals& g, std::ostream& out) {
  LogmOptions opts;
  opts.max_k = args.max_k;
  opts.maxiter = args.maxiter;
  opts.balance = !args.no_balance;
  if (args.method == "ps") {
    opts.evaluator = Evaluator::paterson_stockmeyer;
    opts.theta_table = taylor_theta_table(shipped_theta_table());
  } else if (args.method != "graph") {
    throw ArgumentError("method must be graph or ps");
  }
  LogmReport rep;
  const Matrix<T> l = logm(a, opts, &rep);
  const std::string dest = args.output.empty() ? out_path(g, "logm.txt").string() : args.output;
  write_matrix_file(dest, l);
  out << "output " << dest << '\n'
      << "s " << rep.s << '\n'
      << "k " << rep.k_selected << '\n'
      << "m " << rep.m_selected << '\n'
      << "alpha " << format_double(rep.alpha_used) << '\n'
      << "theta " << format_double(rep.theta_selected) << '\n'
      << "products " << rep.counter.products << '\n'
      << "divisions " << rep.counter.divisions << '\n'
      << "equivalent_m " << format_double(rep.counter.equivalent_m()) << '\n'
      << "norm_estimations " << rep.norm_estimations << '\n'
      << "balanced " << (rep.balanced ? 1 : 0) << '\n';
  if (!args.ref.empty()) {
    const AnyMatrix r = read_matrix_file(args.ref);
    double er;
    if constexpr (std::is_same_v<T, double>) {
      er = std::holds_alternative<Matrix<double>>(r) ? relative_error(l, std::get<Matrix<double>>(r))
                                                     : relative_error(to_complex(l), std::get<Matrix<cplx>>(r));
    } else {
      er = std::holds_alternative<Matrix<cplx>>(r) ? relative_error(l, std::get<Matrix<cplx>>(r))
                                                   : relative_error(l, to_complex(std::get<Matrix<double>>(r)));
    }
    out << "er " << format_double(er) << '\n';
  }
  return kExitOk;
}

int cmd_logm(const LogmArgs& args, const Globals& g, std::ostream& out) {
  const AnyMatrix a = read_matrix_file(args.input);
  return std::visit([&](const auto& m) { return do_logm(m, args, g, out); }, a);
}

// ---- gen ----

struct SetArgs {
  std::string family = "b";
  int count = 20;
  std::size_t n = 32;
  double kappa = 10.0;
  double superdiag = 5.0;
};

FamilyOptions family_options(const SetArgs& a) {
  FamilyOptions o;
  o.n = a.n;
  o.kappa = a.kappa;
  o.superdiag = a.superdiag;
  return o;
}

int cmd_gen(const SetArgs& args, const Globals& g, std::ostream& out) {
  const auto set = gen_test_matrices(family_tag(args.family), g.seed, args.count, family_options(args));
  for (const TestMatrix& t : set) {
    const fs::path mp = out_path(g, t.id + ".mat");
    const fs::path lp = out_path(g, t.id + ".log.mat");
    write_matrix_file(mp.string(), t.a);
    write_matrix_file(lp.string(), t.log_ref);
    out << mp.string() << ' ' << lp.string() << '\n';
  }
  return kExitOk;
}

// ---- bench ----

std::vector<TestMatrix> load_set(const std::string& dir) {
  std::vector<TestMatrix> set;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    const bool is_log = name.size() > 8 && name.substr(name.size() - 8) == ".log.mat";
    if (!is_log && e.path().extension() == ".mat") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& p : files) {
    fs::path lp = p;
    lp.replace_extension(".log.mat");
    if (!fs::exists(lp)) throw InputError("missing reference " + lp.string());
    const AnyMatrix a = read_matrix_file(p.string());
    const AnyMatrix l = read_matrix_file(lp.string());
    if (!std::holds_alternative<Matrix<double>>(a) || !std::holds_alternative<Matrix<double>>(l))
      throw InputError("bench: only real matrices are supported in " + p.string());
    TestMatrix t;
    t.id = p.stem().string();
    t.family = t.id.empty() ? '?' : t.id[0];
    t.a = std::get<Matrix<double>>(a);
    t.log_ref = std::get<Matrix<double>>(l);
    set.push_back(std::move(t));
  }
  if (set.empty()) throw InputError("bench: no .mat files in " + dir);
  return set;
}

struct BenchArgs {
  SetArgs set;
  std::string dir;
  std::vector<std::string> methods{"graph", "ps"};
};

int cmd_bench(const BenchArgs& args, const Globals& g, std::ostream& out) {
  const auto set = args.dir.empty()
                       ? gen_test_matrices(family_tag(args.set.family), g.seed, args.set.count, family_options(args.set))
                       : load_set(args.dir);
  const auto records = run_bench(set, args.methods);
  const fs::path csv = out_path(g, "bench.csv");
  {
    auto f = open_out(csv);
    write_bench_csv(f, records);
  }
  if (g.format == "svg") write_text(out_path(g, "errors.svg"), error_svg(records));

  std::map<std::string, double> worst;
  int alpha_violations = 0, product_violations = 0, cost_violations = 0;
  std::map<std::string, std::map<std::string, const BenchRecord*>> by_matrix;
  for (const BenchRecord& r : records) {
    worst[r.method] = std::max(worst[r.method], r.er);
    if (r.alpha > r.theta) ++alpha_violations;
    if (r.method == "graph" && r.s >= 1 && r.eval_products != r.k - 1) ++product_violations;
    by_matrix[r.matrix_id][r.method] = &r;
  }
  for (const auto& [id, row] : by_matrix) {
    const auto gi = row.find("graph"), pi = row.find("ps");
    if (gi == row.end() || pi == row.end()) continue;
    if (gi->second->k >= 3 && gi->second->k <= 5 && gi->second->products > pi->second->products) ++cost_violations;
  }
  out << "records " << records.size() << '\n';
  for (const auto& [m, e] : worst) out << "max_er " << m << ' ' << format_double(e) << '\n';
  out << "alpha_violations " << alpha_violations << '\n'
      << "product_violations " << product_violations << '\n'
      << "cost_violations " << cost_violations << '\n'
      << "output " << csv.string() << '\n';
  return kExitOk;
}

// ---- profile ----

int cmd_profile(const std::string& input, const Globals& g, std::ostream& out) {
  std::ifstream f(input);
  if (!f) throw InputError("cannot read " + input);
  const auto curves = performance_profile(read_bench_csv(f));
  const fs::path csv = out_path(g, "profile.csv");
  {
    auto o = open_out(csv);
    write_profile_csv(o, curves);
  }
  if (g.format == "svg") write_text(out_path(g, "profile.svg"), profile_svg(curves));
  for (const ProfileCurve& c : curves)
    out << "p(1) " << c.method << ' ' << format_double(c.points.front().p) << '\n';
  out << "output " << csv.string() << '\n';
  return kExitOk;
}

// ---- theta ----

int cmd_theta(const std::string& k5, const Globals& g, std::ostream& out) {
  if (k5 != "published" && k5 != "shipped") throw ArgumentError("--k5 must be published or shipped");
  const ThetaTable pub = published_theta_table();
  std::ostringstream csv;
  csv << "k,m,degree,theta,published,rel_diff\n";
  for (int k = 1; k <= builtin_max_k(); ++k) {
    const GraphScheme& s = (k == 5 && k5 == "published") ? published_k5_scheme() : builtin_scheme(k);
    const double th = scheme_theta(s, s.meta.m_order, g.digits).theta;
    const double p = k <= pub.max_k() ? pub.row(k).theta : NAN;
    csv << k << ',' << s.meta.m_order << (s.meta.order_plus ? "+" : "") << ',' << s.meta.degree << ','
        << format_double(th) << ',' << format_double(p) << ',' << format_double(std::abs(th - p) / p) << '\n';
  }
  write_text(out_path(g, "theta.csv"), csv.str());
  out << csv.str();
  return kExitOk;
}

// ---- stability ----

struct StabilityArgs {
  std::vector<int> ks;
  bool published = false;
  std::vector<std::string> files;
};

int cmd_stability(const StabilityArgs& args, const Globals& g, std::ostream& out) {
  std::vector<std::pair<std::string, GraphScheme>> list;
  for (int k : args.ks) list.emplace_back("k" + std::to_string(k), builtin_scheme(k));
  if (args.published) list.emplace_back("published_k5", published_k5_scheme());
  for (const std::string& f : args.files) list.emplace_back(fs::path(f).stem().string(), load_scheme_file(f));
  if (list.empty()) {
    for (int k = 1; k <= builtin_max_k(); ++k) list.emplace_back("k" + std::to_string(k), builtin_scheme(k));
    list.emplace_back("published_k5", published_k5_scheme());
  }
  std::ostringstream csv;
  csv << "scheme,k,m_k,degree,theta,max_stability_indicator_in_u,tail_check\n";
  for (const auto& [name, s] : list) {
    const StabilityReport st = stability_indicator(s, g.digits);
    const TailReport tail = tail_coeff_check(s, s.meta.m_order, g.digits);
    csv << name << ',' << s.k << ',' << s.meta.m_order << (s.meta.order_plus ? "+" : "") << ',' << (1 << s.k) << ','
        << format_double(s.meta.theta) << ',' << format_double(st.max_in_u()) << ',' << (tail.pass ? "pass" : "fail")
        << '\n';
  }
  write_text(out_path(g, "stability.csv"), csv.str());
  out << csv.str();
  return kExitOk;
}

// ---- fit ----

struct FitArgs {
  int k = 5;
  double radius = 0.25;
  int restarts = 8;
  int samples = 256;
  int max_iterations = 4000;
  int moment = 0;
  bool generate = false;
  int candidates = 3;
  std::string output;
  std::string init;
  bool verbose = false;
};

int cmd_fit(const FitArgs& a, const Globals& g, std::ostream& out) {
  GraphScheme s;
  if (a.generate) {
    GenerateOptions o;
    o.seed = g.seed;
    o.digits = g.digits;
    o.candidates = a.candidates;
    if (a.verbose) o.log = &out;
    s = generate_scheme(a.k, o);
    out << "order " << s.meta.m_order << (s.meta.order_plus ? "+" : "") << '\n'
        << "theta " << format_double(s.meta.theta) << '\n';
  } else if (a.moment > 0) {
    MomentOptions o;
    o.seed = g.seed;
    if (!a.init.empty()) o.init = load_scheme_file(a.init);
    s = fit_moment_match(a.k, a.moment, o);
    s.meta.theta = scheme_theta(s, s.meta.m_order, g.digits).theta;
    out << "theta " << format_double(s.meta.theta) << '\n';
  } else {
    FitProblem p;
    p.k = a.k;
    p.radius = a.radius;
    p.samples = a.samples;
    FitOptions o;
    o.restarts = a.restarts;
    o.seed = g.seed;
    o.max_iterations = a.max_iterations;
    o.verbose = a.verbose;
    if (!a.init.empty()) o.init = load_scheme_file(a.init);
    const FitResult r = fit_minmax(p, o);
    s = r.scheme;
    out << "achieved_max_error " << format_double(r.achieved_max_error) << '\n'
        << "certified_max_error " << format_double(r.certified_max_error) << '\n'
        << "iterations " << r.iterations << '\n'
        << "restarts_used " << r.restarts_used << '\n'
        << "converged " << (r.converged ? 1 : 0) << '\n';
  }
  const std::string dest = a.output.empty() ? out_path(g, "fit_k" + std::to_string(a.k) + ".scheme").string() : a.output;
  save_scheme_file(dest, s);
  out << "output " << dest << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matrix logarithm by degree-optimal polynomial schemes", "graphlogm"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--digits", g.digits, "Decimal digits of big-float arithmetic")
      ->check(CLI::Range(kMinDigits, 100000))
      ->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Directory for output files")->capture_default_str();
  app.add_option("--format", g.format, "Plot format")->check(CLI::IsMember({"csv", "svg"}))->capture_default_str();

  LogmArgs la;
  auto* logm_cmd = app.add_subcommand("logm", "Logarithm of a matrix file");
  logm_cmd->add_option("input", la.input, "Matrix file")->required();
  logm_cmd->add_option("-o,--out", la.output, "Output matrix file");
  logm_cmd->add_option("--ref", la.ref, "Reference logarithm; prints the relative error");
  logm_cmd->add_option("--method", la.method, "graph or ps")->check(CLI::IsMember({"graph", "ps"}));
  logm_cmd->add_option("--max-k", la.max_k, "Largest scheme index")->check(CLI::Range(1, 9));
  logm_cmd->add_option("--maxiter", la.maxiter, "Square root limit")->check(CLI::NonNegativeNumber);
  logm_cmd->add_flag("--no-balance", la.no_balance, "Skip balancing");

  auto add_set_options = [](CLI::App* c, SetArgs& s) {
    c->add_option("--family", s.family, "Test family a, b, c or d")->capture_default_str();
    c->add_option("--count", s.count, "Number of matrices")->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("-n,--n", s.n, "Dimension")->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--kappa", s.kappa, "Condition number of V for family b")->capture_default_str();
    c->add_option("--superdiag", s.superdiag, "Superdiagonal scale for family c")->capture_default_str();
  };
  SetArgs ga;
  auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic test set with reference logarithms");
  add_set_options(gen_cmd, ga);

  BenchArgs ba;
  auto* bench_cmd = app.add_subcommand("bench", "Run logm variants over a test set and write bench.csv");
  add_set_options(bench_cmd, ba.set);
  bench_cmd->add_option("--dir", ba.dir, "Directory written by gen, instead of a generated set");
  bench_cmd->add_option("--methods", ba.methods, "Methods: graph, ps")->delimiter(',')->check(CLI::IsMember({"graph", "ps"}));

  std::string profile_in;
  auto* profile_cmd = app.add_subcommand("profile", "Performance profile of a bench CSV");
  profile_cmd->add_option("input", profile_in, "bench.csv")->required();

  std::string k5 = "published";
  auto* theta_cmd = app.add_subcommand("theta", "Recompute the threshold table");
  theta_cmd->add_option("--k5", k5, "Coefficients for k=5: published or shipped")->capture_default_str();

  StabilityArgs sa;
  auto* stab_cmd = app.add_subcommand("stability", "Rounding stability and tail report per scheme");
  stab_cmd->add_option("--k", sa.ks, "Bundled scheme index")->check(CLI::Range(1, 9));
  stab_cmd->add_flag("--published", sa.published, "Include the published k=5 coefficients");
  stab_cmd->add_option("--scheme", sa.files, "Scheme file");

  FitArgs fa;
  auto* fit_cmd = app.add_subcommand("fit", "Fit scheme coefficients");
  fit_cmd->add_option("--k", fa.k, "Products")->check(CLI::Range(1, 9))->capture_default_str();
  fit_cmd->add_option("--radius", fa.radius, "Disk radius")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  fit_cmd->add_option("--restarts", fa.restarts, "Restarts")->check(CLI::NonNegativeNumber)->capture_default_str();
  fit_cmd->add_option("--samples", fa.samples, "Boundary samples")->check(CLI::PositiveNumber)->capture_default_str();
  fit_cmd->add_option("--max-iterations", fa.max_iterations, "Iterations per restart")->capture_default_str();
  fit_cmd->add_option("--moment", fa.moment, "Match Taylor coefficients through this order instead");
  fit_cmd->add_flag("--generate", fa.generate, "Build the bundled scheme for k");
  fit_cmd->add_option("--candidates", fa.candidates, "Seeds tried by --generate for k >= 6")->capture_default_str();
  fit_cmd->add_option("--init", fa.init, "Starting scheme file");
  fit_cmd->add_option("-o,--out", fa.output, "Output scheme file");
  fit_cmd->add_flag("-v,--verbose", fa.verbose, "Progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*logm_cmd) return cmd_logm(la, g, out);
    if (*gen_cmd) return cmd_gen(ga, g, out);
    if (*bench_cmd) return cmd_bench(ba, g, out);
    if (*profile_cmd) return cmd_profile(profile_in, g, out);
    if (*theta_cmd) return cmd_theta(k5, g, out);
    if (*stab_cmd) return cmd_stability(sa, g, out);
    if (*fit_cmd) return cmd_fit(fa, g, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitInput;
}

}  // namespace graphlogm
