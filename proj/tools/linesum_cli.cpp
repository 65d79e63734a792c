// linesum: exact switching-module bases, dependency decompositions and
// line-sum consistency decisions on finite lattice regions.
//
// Exit codes: 0 success (and "consistent" for check), 1 inconsistent
// (check only), 2 malformed input or violated preconditions.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "linesum/json_io.hpp"
#include "linesum/linesum.hpp"

namespace {

using linesum::Json;

void emit(const Json& out) {
  std::string body = out.dump(2);
  body.push_back('\n');
  std::fwrite(body.data(), 1, body.size(), stdout);
  std::fflush(stdout);
}

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw linesum::ValidationError("input: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

linesum::Instance load_instance(const std::string& path) {
  Json j;
  try {
    j = Json::parse(slurp(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw linesum::ValidationError(std::string("input: ") + e.what());
  }
  return linesum::parse_instance(j);
}

linesum::ConvexLatticeSet convex_region(const linesum::Instance& inst) {
  std::vector<linesum::Point> pts = inst.region.realize();
  if (!linesum::is_convex_point_set(pts))
    throw linesum::ValidationError("region: this command needs a convex region");
  return linesum::ConvexLatticeSet::from_exact_points(std::move(pts));
}

int cmd_deps(const std::string& input) {
  linesum::Instance inst = load_instance(input);
  std::vector<linesum::Point> pts = inst.region.realize();
  linesum::RingSpec basis_ring =
      inst.ring.is_field() ? inst.ring : linesum::RingSpec::rationals();
  std::vector<linesum::Dependency> basis = linesum::dependency_basis(pts, inst.directions, basis_ring);
  bool convex = linesum::is_convex_point_set(pts);

  Json out = Json::object();
  out["command"] = "deps";
  out["ring"] = inst.ring.token();
  out["basis_ring"] = basis_ring.token();
  out["convex"] = convex;
  out["region_size"] = static_cast<std::int64_t>(pts.size());
  Json ds = Json::array();
  for (const auto& d : inst.directions) ds.push_back(linesum::direction_to_json(d));
  out["directions"] = std::move(ds);
  out["dependency_count"] = static_cast<std::int64_t>(basis.size());

  Json dec = Json::object();
  dec["available"] = false;
  if (convex) {
    auto region = linesum::ConvexLatticeSet::from_exact_points(pts);
    auto split = linesum::split_dependencies(region, inst.directions, basis_ring);
    if (split.available()) {
      dec["available"] = true;
      dec["global"] = static_cast<std::int64_t>(*split.global_dim);
      dec["local"] = static_cast<std::int64_t>(*split.local_dim);
      dec["rounded_size"] = static_cast<std::int64_t>(split.rounded->size());
    }
  }
  out["decomposition"] = std::move(dec);

  Json deps = Json::array();
  for (const auto& dep : basis) {
    Json e = Json::object();
    e["weights"] = linesum::weights_to_json(dep.weights());
    deps.push_back(std::move(e));
  }
  out["dependencies"] = std::move(deps);
  emit(out);
  return 0;
}

int cmd_check(const std::string& input) {
  linesum::Instance inst = load_instance(input);
  if (!inst.line_sums)
    throw linesum::ValidationError("instance: check needs line_sums");
  std::vector<linesum::Point> pts = inst.region.realize();
  linesum::ConsistencyVerdict v =
      linesum::check_consistency(pts, inst.directions, *inst.line_sums, inst.ring);
  emit(linesum::verdict_to_json(v));
  return v.status == linesum::VerdictStatus::Consistent ? 0 : 1;
}

int cmd_kernel(const std::string& input) {
  linesum::Instance inst = load_instance(input);
  auto region = convex_region(inst);
  std::vector<linesum::Table> basis = linesum::kernel_basis(region, inst.directions, inst.ring);
  Json out = Json::object();
  out["command"] = "kernel";
  out["count"] = static_cast<std::int64_t>(basis.size());
  Json tables = Json::array();
  for (const auto& t : basis) tables.push_back(linesum::table_to_json(t));
  out["basis"] = std::move(tables);
  emit(out);
  return 0;
}

int cmd_rounded(const std::string& input) {
  linesum::Instance inst = load_instance(input);
  auto region = convex_region(inst);
  auto rp = linesum::rounded_part(region, inst.directions);
  Json out = Json::object();
  out["command"] = "rounded";
  if (rp) {
    Json r = Json::object();
    Json pts = Json::array();
    for (const auto& p : rp->points()) pts.push_back(linesum::point_to_json(p));
    r["points"] = std::move(pts);
    Json hull = Json::array();
    for (const auto& c : rp->hull().corners()) hull.push_back(linesum::rpoint_to_json(c));
    r["hull"] = std::move(hull);
    out["rounded"] = std::move(r);
  } else {
    out["rounded"] = nullptr;
  }
  emit(out);
  return 0;
}

int cmd_ranks(const std::string& input, const std::string& primes_arg) {
  linesum::Instance inst = load_instance(input);
  auto region = convex_region(inst);
  std::vector<linesum::Int> primes;
  std::stringstream ss(primes_arg);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    if (tok.find_first_not_of("0123456789") != std::string::npos)
      throw linesum::ValidationError("--primes: '" + tok + "' is not a number");
    primes.emplace_back(tok);
  }
  if (primes.empty()) throw linesum::ValidationError("--primes: at least one prime is required");
  for (const auto& p : primes)
    if (!linesum::detail::is_prime(p))
      throw linesum::ValidationError("--primes: " + p.str() + " is not prime");
  auto rep = linesum::rank_invariance_report(region, inst.directions, primes);
  emit(linesum::rank_report_to_json(rep));
  return 0;
}

int cmd_verify_example(std::size_t m, std::size_t n, std::size_t trials, std::uint64_t seed) {
  auto rep = linesum::verify_hajdu_example(m, n, trials, seed);
  emit(linesum::hajdu_report_to_json(rep));
  return 0;
}

std::vector<linesum::Point> parse_point_list(const std::string& arg, const char* what) {
  std::vector<linesum::Point> pts;
  std::stringstream ss(arg);
  std::string pair;
  while (std::getline(ss, pair, ';')) {
    if (pair.empty()) continue;
    auto comma = pair.find(',');
    if (comma == std::string::npos)
      throw linesum::ValidationError(std::string(what) + ": expected 'x,y;x,y;...' entries");
    auto a = linesum::rat_from_string(pair.substr(0, comma));
    auto b = linesum::rat_from_string(pair.substr(comma + 1));
    if (!a || !b || !linesum::is_integral(*a) || !linesum::is_integral(*b))
      throw linesum::ValidationError(std::string(what) + ": '" + pair + "' is not an integer pair");
    pts.push_back(linesum::Point{numerator(*a), numerator(*b)});
  }
  if (pts.empty()) throw linesum::ValidationError(std::string(what) + ": empty point list");
  return pts;
}

int cmd_gen(std::uint64_t seed, const std::string& mode_arg, const std::string& ring_arg,
            const std::string& dirs_arg, const std::string& rect_arg, const std::string& hull_arg,
            const std::string& points_arg) {
  linesum::InstanceMode mode;
  if (mode_arg == "image")
    mode = linesum::InstanceMode::Image;
  else if (mode_arg == "perturbed")
    mode = linesum::InstanceMode::Perturbed;
  else if (mode_arg == "uniform")
    mode = linesum::InstanceMode::Uniform;
  else
    throw linesum::ValidationError("--mode: expected image, perturbed or uniform");

  linesum::RingSpec ring = linesum::RingSpec::from_token(ring_arg);

  std::vector<linesum::Direction> dirs;
  for (const auto& p : parse_point_list(dirs_arg, "--dirs")) {
    linesum::Direction d(p.x, p.y);
    if (!d.is_primitive()) throw linesum::ValidationError("--dirs: directions must be primitive");
    dirs.push_back(d);
  }
  linesum::require_pairwise_independent(dirs);

  int regions = (!rect_arg.empty()) + (!hull_arg.empty()) + (!points_arg.empty());
  if (regions != 1)
    throw linesum::ValidationError("gen: exactly one of --rect, --hull, --points is required");
  linesum::RegionSpec spec;
  if (!rect_arg.empty()) {
    auto x = rect_arg.find('x');
    if (x == std::string::npos) throw linesum::ValidationError("--rect: expected WxH, e.g. 6x6");
    auto w = linesum::rat_from_string(rect_arg.substr(0, x));
    auto h = linesum::rat_from_string(rect_arg.substr(x + 1));
    if (!w || !h || !linesum::is_integral(*w) || !linesum::is_integral(*h))
      throw linesum::ValidationError("--rect: expected WxH with integer sides");
    spec.kind = linesum::RegionSpec::Kind::Rect;
    spec.width = numerator(*w);
    spec.height = numerator(*h);
  } else if (!hull_arg.empty()) {
    spec.kind = linesum::RegionSpec::Kind::HullOf;
    spec.pts = parse_point_list(hull_arg, "--hull");
  } else {
    spec.kind = linesum::RegionSpec::Kind::Explicit;
    spec.pts = parse_point_list(points_arg, "--points");
  }

  linesum::RandomInstance inst = linesum::random_instance(seed, spec, dirs, mode, ring);
  linesum::Instance file;
  file.directions = dirs;
  file.region = spec;
  file.ring = ring;
  file.table = inst.table;
  file.line_sums = inst.line_sums;
  emit(linesum::instance_to_json(file));
  return 0;
}

int print_schemas() {
  Json out = Json::object();
  for (const auto& [name, text] : linesum::output_schemas()) out[name] = Json::parse(text);
  emit(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact line-sum algebra on finite lattice regions"};
  app.require_subcommand(0, 1);
  bool schema = false;
  app.add_flag("--schema", schema, "print the JSON schemas of instance files and command outputs");

  std::string deps_in, check_in, kernel_in, rounded_in, ranks_in;
  std::string primes = "2,3,5";

  CLI::App* deps = app.add_subcommand("deps", "dependency basis and its global/local decomposition");
  deps->add_option("input", deps_in, "instance file, or - for stdin")->required();

  CLI::App* check = app.add_subcommand("check", "decide line-sum consistency; exit 0/1/2");
  check->add_option("input", check_in, "instance file, or - for stdin")->required();

  CLI::App* kernel = app.add_subcommand("kernel", "switching-module basis of a convex region");
  kernel->add_option("input", kernel_in, "instance file, or - for stdin")->required();

  CLI::App* rounded = app.add_subcommand("rounded", "rounded part of a convex region");
  rounded->add_option("input", rounded_in, "instance file, or - for stdin")->required();

  CLI::App* ranks = app.add_subcommand("ranks", "rank invariance across Q and prime fields, plus invariant factors");
  ranks->add_option("input", ranks_in, "instance file, or - for stdin")->required();
  ranks->add_option("--primes", primes, "comma-separated primes (default 2,3,5)");

  std::size_t vm = 6, vn = 6, vtrials = 200;
  std::uint64_t vseed = 1;
  CLI::App* verify = app.add_subcommand("verify-example", "check the classical four-direction grid relations");
  verify->add_option("--m", vm, "grid width (default 6)");
  verify->add_option("--n", vn, "grid height (default 6)");
  verify->add_option("--trials", vtrials, "random tables per relation family (default 200)");
  verify->add_option("--seed", vseed, "sample seed (default 1)");

  std::uint64_t gseed = 0;
  std::string gmode = "image", gring = "Z", gdirs, grect, ghull, gpoints;
  CLI::App* gen = app.add_subcommand("gen", "generate a seeded instance file on stdout");
  gen->add_option("--seed", gseed, "instance seed")->required();
  gen->add_option("--mode", gmode, "image | perturbed | uniform (default image)");
  gen->add_option("--ring", gring, "Z | Q | F<p> (default Z)");
  gen->add_option("--dirs", gdirs, "directions as 'a,b;c,d;...'")->required();
  gen->add_option("--rect", grect, "rectangle region WxH anchored at the origin");
  gen->add_option("--hull", ghull, "region as hull of 'x,y;x,y;...'");
  gen->add_option("--points", gpoints, "explicit region points 'x,y;x,y;...'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (schema) return print_schemas();
    if (deps->parsed()) return cmd_deps(deps_in);
    if (check->parsed()) return cmd_check(check_in);
    if (kernel->parsed()) return cmd_kernel(kernel_in);
    if (rounded->parsed()) return cmd_rounded(rounded_in);
    if (ranks->parsed()) return cmd_ranks(ranks_in, primes);
    if (verify->parsed()) return cmd_verify_example(vm, vn, vtrials, vseed);
    if (gen->parsed()) return cmd_gen(gseed, gmode, gring, gdirs, grect, ghull, gpoints);
    std::cerr << app.help() << std::flush;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
}
