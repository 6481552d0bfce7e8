#include "germlab/cli.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "germlab/analysis.hpp"
#include "germlab/dsl.hpp"
#include "germlab/order.hpp"

namespace germlab::cli {

namespace {

struct Args {
  std::vector<std::string> positional;
  std::map<std::string, std::string> flags;

  bool has(const std::string& f) const { return flags.count(f) > 0; }
  std::string get(const std::string& f, const std::string& dflt) const {
    auto it = flags.find(f);
    return it == flags.end() ? dflt : it->second;
  }
  long get_long(const std::string& f, long dflt) const {
    auto it = flags.find(f);
    return it == flags.end() ? dflt : std::stol(it->second);
  }
};

Args split_args(const std::vector<std::string>& argv, std::size_t from) {
  Args a;
  for (std::size_t i = from; i < argv.size(); ++i) {
    const std::string& s = argv[i];
    if (s.rfind("--", 0) == 0) {
      std::string key = s.substr(2);
      std::string val = "true";
      auto eq = key.find('=');
      if (eq != std::string::npos) {
        val = key.substr(eq + 1);
        key = key.substr(0, eq);
      } else if (i + 1 < argv.size() && argv[i + 1].rfind("--", 0) != 0) {
        val = argv[++i];
      }
      a.flags[key] = val;
    } else {
      a.positional.push_back(s);
    }
  }
  return a;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::pair<long, long> parse_range(const std::string& s) {
  auto dots = s.find("..");
  if (dots == std::string::npos) throw error("range must look like 'a..b'");
  return {std::stol(s.substr(0, dots)), std::stol(s.substr(dots + 2))};
}

dsl::Env load_env(const std::string& path, long horizon) {
  return dsl::Env(dsl::parse_germ_file(read_file(path)), dsl::CompileContext{horizon});
}

FuncSample load_sample_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw error("empty sample file");
  // header: x_num,x_den,f_num,f_den
  std::vector<std::pair<Rat, Rat>> pts;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 4)
      throw error("sample row " + std::to_string(lineno) + " needs 4 fields");
    pts.emplace_back(Rat(Int(cells[0]), Int(cells[1])), Rat(Int(cells[2]), Int(cells[3])));
  }
  return FuncSample::from_points(std::move(pts));
}

void print_profile_csv(std::ostream& out, long from, long to,
                       const std::function<Rat(long)>& at) {
  out << "j,num,den\n";
  for (long j = from; j <= to; ++j) {
    Rat v = at(j);
    out << j << "," << v.num().get_str() << "," << v.den().get_str() << "\n";
  }
}

std::string verdict_line(const OrderVerdict& v, const std::string& lhs,
                         const std::string& rhs) {
  std::string s = "VERDICT kind=" + verdict_kind_name(v.kind) +
                  " witness=" + std::to_string(v.witness_index) +
                  " horizon=" + std::to_string(v.horizon) + " lhs=" + lhs +
                  " rhs=" + rhs;
  if (v.certificate) s += " cert=" + *v.certificate;
  return s;
}

int cmd_eval(const Args& a, std::ostream& out) {
  if (a.positional.size() != 2) throw error("usage: eval <file> <name> --range a..b");
  long horizon = a.get_long("horizon", 10000);
  dsl::Env env = load_env(a.positional[0], horizon);
  GridFn g = dsl::as_grid_fn(env.lookup(a.positional[1]));
  auto [from, to] = a.has("range") ? parse_range(a.get("range", ""))
                                   : std::pair<long, long>{g.from, g.from + 9};
  if (from < g.from) throw index_before_start(from, g.from);
  if (g.to && to > *g.to) throw window_mismatch("range runs past the germ's domain");
  if (a.get("format", "csv") == "csv") {
    print_profile_csv(out, from, to, g.at);
  } else {
    for (long j = from; j <= to; ++j)
      out << "j=" << j << " value=" << g.at(j).str() << "\n";
  }
  return 0;
}

int cmd_print(const Args& a, std::ostream& out) {
  if (a.positional.size() != 1) throw error("usage: print <file>");
  auto defs = dsl::parse_germ_file(read_file(a.positional[0]));
  out << dsl::format_defs(defs);
  return 0;
}

int cmd_validate(const Args& a, std::ostream& out) {
  if (a.positional.size() != 2) throw error("usage: validate <file> <name>");
  long horizon = a.get_long("horizon", 10000);
  dsl::Env env = load_env(a.positional[0], horizon);
  const auto& c = env.lookup(a.positional[1]);

  ValidationReport rep = [&] {
    if (const auto* p = std::get_if<PLGerm>(&c)) {
      long from = a.has("window") ? parse_range(a.get("window", "")).first : p->start();
      long to = a.has("window") ? parse_range(a.get("window", "")).second : horizon;
      return validate(*p, GridWindow(from, to));
    }
    const auto& r = std::get<RatGerm>(c);
    long from = a.has("window") ? parse_range(a.get("window", "")).first : r.start();
    long to = a.has("window") ? parse_range(a.get("window", "")).second : horizon;
    if (r.end()) to = std::min(to, *r.end());
    return validate(r, GridWindow(from, to));
  }();

  for (const auto& ch : rep.checks) {
    out << "CHECK name=" << ch.name << " ok=" << (ch.ok ? "yes" : "no")
        << " first_violation="
        << (ch.first_violation ? std::to_string(*ch.first_violation) : "-") << "\n";
  }
  out << "LIMIT dropped_below="
      << (rep.drop_threshold ? "1/" + rep.drop_threshold->get_str() : "-")
      << " at=" << (rep.drop_index ? std::to_string(*rep.drop_index) : "-") << "\n";
  out << "RESULT ok=" << (rep.ok() ? "yes" : "no") << " tier="
      << (rep.observed_tier ? tier_name(*rep.observed_tier) : "-")
      << " window=" << rep.window.from << ".." << rep.window.to << "\n";
  return rep.ok() ? 0 : 1;
}

int cmd_compare(const Args& a, std::ostream& out) {
  if (a.positional.size() != 3) throw error("usage: compare <file> <a> <b>");
  long horizon = a.get_long("horizon", 10000);
  dsl::Env env = load_env(a.positional[0], horizon);
  const auto& ca = env.lookup(a.positional[1]);
  const auto& cb = env.lookup(a.positional[2]);

  std::string mode_s = a.get("mode", "auto");
  CompareMode mode = mode_s == "certified"  ? CompareMode::certified_only
                     : mode_s == "horizon"  ? CompareMode::horizon_only
                                            : CompareMode::automatic;

  GridFn fa = dsl::as_grid_fn(ca);
  GridFn fb = dsl::as_grid_fn(cb);
  long from = a.get_long("start", std::max(fa.from, fb.from));
  GridWindow w(from, horizon);

  const auto* pa = std::get_if<PLGerm>(&ca);
  const auto* pb = std::get_if<PLGerm>(&cb);
  OrderVerdict v = (pa && pb) ? compare_germwise(*pa, *pb, w, mode)
                              : compare_germwise(fa, fb, w, mode);
  out << verdict_line(v, a.positional[1], a.positional[2]) << "\n";
  return 0;
}

int cmd_class(const Args& a, std::ostream& out) {
  if (a.positional.size() != 3) throw error("usage: class <file> <a> <b>");
  long horizon = a.get_long("horizon", 10000);
  long nmax = a.get_long("nmax", 1024);
  dsl::Env env = load_env(a.positional[0], horizon);
  GridFn fa = dsl::as_grid_fn(env.lookup(a.positional[1]));
  GridFn fb = dsl::as_grid_fn(env.lookup(a.positional[2]));
  long from = a.get_long("start", std::max(fa.from, fb.from));
  ArchClassVerdict v = arch_class_compare(fa, fb, GridWindow(from, horizon), nmax);
  out << "ARCHCLASS kind=" << arch_kind_name(v.kind)
      << " n=" << (v.kind == ArchKind::same_class ? std::to_string(v.n) : "-")
      << " ncap=" << v.n_cap << " horizon=" << v.horizon << " lhs=" << a.positional[1]
      << " rhs=" << a.positional[2] << "\n";
  return 0;
}

int cmd_triage(const Args& a, std::ostream& out) {
  if (a.positional.size() != 3) throw error("usage: triage <file> <a> <b>");
  long prefix = a.get_long("prefix", 512);
  dsl::Env env = load_env(a.positional[0], a.get_long("horizon", 10000));
  // Grid profiles read as sequences: r(i) = v(i).
  GridFn fa = dsl::as_grid_fn(env.lookup(a.positional[1]));
  GridFn fb = dsl::as_grid_fn(env.lookup(a.positional[2]));
  SeqGerm sa(fa.from, fa.at), sb(fb.from, fb.at);
  TriageVerdict v = frechet_triage(sa, sb, prefix);
  out << "TRIAGE kind=" << triage_kind_name(v.kind) << " cofinite_from="
      << (v.cofinite_from ? std::to_string(*v.cofinite_from) : "-")
      << " below=" << v.below_count << " other=" << v.other_count
      << " prefix=" << v.prefix_from << ".." << v.prefix_to
      << " lhs=" << a.positional[1] << " rhs=" << a.positional[2] << "\n";
  return 0;
}

int cmd_converge(const Args& a, std::ostream& out) {
  if (a.positional.size() != 1) throw error("usage: converge <netfile>");
  long horizon = a.get_long("horizon", 10000);
  dsl::NetFile nf = dsl::parse_net_file(read_file(a.positional[0]));

  dsl::Defs defs = nf.defs;
  if (a.has("germs")) {
    auto extra = dsl::parse_germ_file(read_file(a.get("germs", "")));
    defs.insert(defs.end(), extra.begin(), extra.end());
  }
  dsl::Env env(defs, dsl::CompileContext{horizon});

  NetSpec net;
  net.node_names = nf.nodes;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < nf.nodes.size(); ++i) index[nf.nodes[i]] = i;
  for (const auto& [x, y] : nf.edges) net.edges.emplace_back(index.at(x), index.at(y));

  auto as_value = [&](const std::string& name) -> NetSpec::NodeValue {
    if (name == "0") return ZeroGerm{};
    return dsl::as_rat_germ(env.lookup(name));
  };
  for (const auto& n : nf.nodes) {
    auto it = nf.assignment.find(n);
    if (it == nf.assignment.end()) throw error("node '" + n + "' has no germ");
    net.assignment.push_back(as_value(it->second));
  }
  if (nf.target.empty()) throw error("net file names no target");
  net.target = as_value(nf.target);
  for (const auto& t : nf.tests) {
    const auto& c = env.lookup(t);
    const auto* p = std::get_if<PLGerm>(&c);
    if (!p) throw error("test '" + t + "' must be a pl germ");
    net.battery.push_back(*p);
    net.battery_names.push_back(t);
  }
  if (net.battery.empty()) throw error("net file names no tests");

  ConvergenceReport rep = converge_check(net, horizon);
  for (const auto& t : rep.tests) {
    if (t.converges) {
      out << "TEST name=" << t.test_name << " verdict=CONVERGES d0="
          << net.node_names[*t.d0] << " j1=" << *t.j1 << " horizon=" << t.horizon
          << "\n";
    } else {
      out << "TEST name=" << t.test_name << " verdict=FAILS witnesses=";
      for (std::size_t i = 0; i < t.witnesses.size(); ++i) {
        if (i) out << ",";
        out << net.node_names[t.witnesses[i].first] << "@" << t.witnesses[i].second;
      }
      if (t.witnesses.empty()) out << "-";
      out << " horizon=" << t.horizon << "\n";
    }
  }
  out << "OVERALL verdict=" << (rep.overall() ? "CONVERGES" : "FAILS")
      << " tests=" << rep.tests.size() << "\n";
  return 0;
}

int cmd_profile(const Args& a, std::ostream& out) {
  if (a.positional.size() != 1) throw error("usage: profile <samples.csv>");
  NormProfile np = norm_profile(load_sample_csv(a.positional[0]));
  if (np.zero) {
    out << "ZERO germ=yes note=not_pseudomonotone\n";
    return 0;
  }
  GridFn g = view(*np.profile);
  long to = std::min(a.get_long("horizon", *g.to), *g.to);
  print_profile_csv(out, g.from, to, g.at);
  return 0;
}

int cmd_oscillation(const Args& a, std::ostream& out) {
  if (a.positional.size() != 3)
    throw error("usage: oscillation <samples.csv> <germfile> <sigma>");
  FuncSample f = load_sample_csv(a.positional[0]);
  dsl::Env env = load_env(a.positional[1], a.get_long("horizon", 10000));
  GridFn sigma = dsl::as_grid_fn(env.lookup(a.positional[2]));
  auto [from, to] = a.has("window") ? parse_range(a.get("window", ""))
                                    : std::pair<long, long>{sigma.from, 64L};
  Profile p = oscillation_profile(f, sigma, GridWindow(from, to));
  print_profile_csv(out, p.from, p.to, [&](long j) { return p.at(j); });
  return 0;
}

int cmd_continuity(const Args& a, std::ostream& out) {
  if (a.positional.size() != 1) throw error("usage: continuity <samples.csv>");
  FuncSample f = load_sample_csv(a.positional[0]);
  int degree = static_cast<int>(a.get_long("degree", 3));
  int coeff = static_cast<int>(a.get_long("coeff", 2));
  auto battery = default_battery(degree, coeff);
  auto names = default_battery_names(degree, coeff);
  auto [from, to] = a.has("window") ? parse_range(a.get("window", ""))
                                    : std::pair<long, long>{2L, 24L};
  ContinuityVerdict v = continuity_verdict(f, battery, names, GridWindow(from, to));
  for (std::size_t i = 0; i < battery.size(); ++i) {
    const std::string& sig = i < v.sigma_for_rho.size() ? v.sigma_for_rho[i] : "";
    out << "RHO name=" << names[i] << " sigma=" << (sig.empty() ? "-" : sig)
        << " ok=" << (sig.empty() ? "no" : "yes") << "\n";
    if (i == v.witness_rho && v.kind != ContinuityKind::continuous_at_horizon) break;
  }
  out << "CONTINUITY verdict=" << continuity_kind_name(v.kind);
  if (v.witness_rho) out << " rho=" << names[*v.witness_rho];
  if (v.pinned_oscillation) out << " pinned=" << v.pinned_oscillation->str();
  out << " window=" << from << ".." << to << "\n";
  return 0;
}

int cmd_ultra(const Args& a, std::ostream& out) {
  if (a.positional.size() != 4) throw error("usage: ultra <file> <f> <g> <h>");
  long horizon = a.get_long("horizon", 10000);
  long nmax = a.get_long("nmax", 1024);
  dsl::Env env = load_env(a.positional[0], horizon);
  GridFn f = dsl::as_grid_fn(env.lookup(a.positional[1]));
  GridFn g = dsl::as_grid_fn(env.lookup(a.positional[2]));
  GridFn h = dsl::as_grid_fn(env.lookup(a.positional[3]));
  long from = a.get_long("start", std::max({f.from, g.from, h.from}));
  UltraVerdict v = ultradist_triangle(f, g, h, GridWindow(from, horizon), nmax);
  out << "ULTRA kind=" << ultra_kind_name(v.kind)
      << " witness=" << (v.witness ? std::to_string(*v.witness) : "-")
      << " ncap=" << nmax << " horizon=" << horizon << " f=" << a.positional[1]
      << " g=" << a.positional[2] << " h=" << a.positional[3] << "\n";
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  if (args.empty()) {
    err << "usage: germlab <command> [args]\n"
        << "commands: eval print validate compare class triage converge\n"
        << "          profile oscillation continuity ultra\n";
    return 1;
  }
  try {
    const std::string& cmd = args[0];
    Args a = split_args(args, 1);
    if (cmd == "eval") return cmd_eval(a, out);
    if (cmd == "print") return cmd_print(a, out);
    if (cmd == "validate") return cmd_validate(a, out);
    if (cmd == "compare") return cmd_compare(a, out);
    if (cmd == "class") return cmd_class(a, out);
    if (cmd == "triage") return cmd_triage(a, out);
    if (cmd == "converge") return cmd_converge(a, out);
    if (cmd == "profile") return cmd_profile(a, out);
    if (cmd == "oscillation") return cmd_oscillation(a, out);
    if (cmd == "continuity") return cmd_continuity(a, out);
    if (cmd == "ultra") return cmd_ultra(a, out);
    err << "unknown command '" << cmd << "'\n";
    return 1;
  } catch (const parse_error& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace germlab::cli
