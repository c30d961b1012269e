#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "renyi/renyi.hpp"

using namespace renyi;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

CondSource load_source(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  return CondSource::read_csv(in);
}

/// The --masses / --source input shared by several commands, seen as a
/// conditional source (a plain distribution has a single y).
struct SourceInput {
  std::string masses;
  std::string source;

  bool given() const { return !masses.empty() || !source.empty(); }

  CondSource load() const {
    if (!masses.empty() && !source.empty()) throw DomainError("give either --masses or --source, not both");
    if (!masses.empty()) return CondSource(ProbVec::parse_list(masses));
    if (!source.empty()) return load_source(source);
    throw DomainError("need --masses or --source");
  }
};

void add_source_options(CLI::App* cmd, SourceInput& in) {
  cmd->add_option("--masses", in.masses, "comma-separated probability masses");
  cmd->add_option("--source", in.source, "CSV rows: P_Y(y), P(x_1|y), ..., P(x_n|y)");
}

// ---------------------------------------------------------------------------

struct EntropyArgs {
  SourceInput in;
  std::string order = "1";
  std::string quantity = "renyi";
};

int cmd_entropy(const EntropyArgs& args) {
  const CondSource src = args.in.load();
  const Order a = Order::parse(args.order);
  double v;
  if (args.quantity == "renyi")
    v = cond_renyi(src, a);
  else if (args.quantity == "norm")
    v = expected_norm(src, a);
  else if (args.quantity == "pe")
    v = min_error(src);
  else if (args.quantity == "z")
    v = bhattacharyya(src);
  else
    throw DomainError("unknown quantity '" + args.quantity + "'");
  std::cout << format_number(v) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct BoundArgs {
  std::string theorem;
  std::string order;
  std::string order_b;
  std::optional<double> value;
  std::optional<double> eps;
  std::optional<int> n;
  std::string side = "both";
  bool json = false;
  SourceInput in;
};

int cmd_bound(const BoundArgs& args) {
  std::string side = args.side;
  TheoremId id;
  if (args.theorem == "fano-lower" || args.theorem == "fano-upper") {
    id = TheoremId::FanoUncond;
    side = args.theorem == "fano-lower" ? "lower" : "upper";
  } else if (args.theorem == "reverse-fano") {
    id = TheoremId::FanoCond;
    side = "lower";
  } else {
    id = parse_theorem(args.theorem);
  }
  if (side != "lower" && side != "upper" && side != "both") throw DomainError("--side must be lower, upper or both");

  std::optional<CondSource> src;
  if (args.in.given()) src = args.in.load();
  auto order = [&](const std::string& text, const char* flag) {
    if (text.empty()) throw DomainError(std::string("need ") + flag);
    return Order::parse(text);
  };
  auto alpha_entropy = [&](Order a) {
    if (args.value) return *args.value;
    if (src) return cond_renyi(*src, a);
    throw DomainError("need --value or a source");
  };
  auto support_n = [&]() -> std::optional<int> {
    if (args.n) return *args.n;
    if (src) return detail::effective_n(src->support_x());
    return std::nullopt;
  };
  auto required_n = [&] {
    auto n = support_n();
    if (!n) throw DomainError("need --n or a source");
    return *n;
  };
  auto error_prob = [&] {
    if (args.eps) return *args.eps;
    if (src) return min_error(*src);
    throw DomainError("need --eps or a source");
  };

  std::vector<BoundResult> results;
  auto push_pair = [&](const BoundPair& p) {
    results.push_back(p.lower);
    results.push_back(p.upper);
  };
  switch (id) {
    case TheoremId::NormVW: {
      if (!src || src->y_size() != 1) throw DomainError("norm-v-w needs --masses");
      push_pair(uncond_norm_bounds(src->channel(0), order(args.order, "--order"), order(args.order_b, "--order-b")));
      break;
    }
    case TheoremId::EntropyVW: {
      const Order a = order(args.order, "--order"), b = order(args.order_b, "--order-b");
      if (src && src->y_size() != 1) throw DomainError("entropy-v-w takes a distribution, not a conditional source");
      push_pair(uncond_bounds(required_n(), alpha_entropy(a), a, b));
      break;
    }
    case TheoremId::VsInfinity: {
      const Order a = order(args.order, "--order"), b = order(args.order_b, "--order-b");
      if (a.is_infinity() == b.is_infinity()) throw DomainError("vs-infinity needs exactly one order equal to inf");
      results.push_back(a.is_infinity() ? bound_given_infinity(required_n(), alpha_entropy(a), b)
                                        : infinity_given_bound(required_n(), alpha_entropy(a), a));
      break;
    }
    case TheoremId::Binary: {
      const Order a = order(args.order, "--order"), b = order(args.order_b, "--order-b");
      results.push_back(cond_bound_binary(alpha_entropy(a), a, b));
      break;
    }
    case TheoremId::ST: {
      const Order a = order(args.order, "--order"), b = order(args.order_b, "--order-b");
      results.push_back(cond_bound_st(required_n(), alpha_entropy(a), a, b));
      break;
    }
    case TheoremId::UV: {
      const Order a = order(args.order, "--order"), b = order(args.order_b, "--order-b");
      results.push_back(cond_bound_uv(alpha_entropy(a), a, b));
      break;
    }
    case TheoremId::FanoUncond:
    case TheoremId::FanoCond: {
      const auto kind = id == TheoremId::FanoCond ? FanoKind::Conditional : FanoKind::Unconditional;
      const auto f = fano_renyi(kind, order(args.order, "--order"), error_prob(), support_n());
      results.push_back(f.lower);
      if (f.upper) results.push_back(*f.upper);
      if (side == "upper" && !f.upper) throw DomainError("the upper bound needs --n or a source");
      break;
    }
    case TheoremId::PeFromH: {
      const Order a = order(args.order, "--order");
      const auto p = pe_bounds(a, alpha_entropy(a), support_n());
      if (p.lower) results.push_back(*p.lower);
      results.push_back(p.upper);
      if (side == "lower" && !p.lower) throw DomainError("the lower bound needs --n or a source");
      break;
    }
    case TheoremId::ZFromPe: {
      const int n = args.n ? *args.n : src ? int(src->x_size()) : throw DomainError("need --n or a source");
      push_pair(bhattacharyya_bounds(BhattDirection::ZFromPe, error_prob(), n));
      break;
    }
    case TheoremId::PeFromZ: {
      const int n = args.n ? *args.n : src ? int(src->x_size()) : throw DomainError("need --n or a source");
      double z;
      if (args.value)
        z = *args.value;
      else if (src)
        z = bhattacharyya(*src);
      else
        throw DomainError("need --value or a source");
      push_pair(bhattacharyya_bounds(BhattDirection::PeFromZ, z, n));
      break;
    }
    case TheoremId::H2VsHhalf: {
      push_pair(h2_vs_hhalf(alpha_entropy(Order::finite(0.5)), required_n()));
      break;
    }
  }

  std::vector<BoundResult> shown;
  for (const auto& r : results)
    if (side == "both" || to_string(r.kind) == side) shown.push_back(r);

  if (args.json) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : shown) {
      nlohmann::json j = {{"theorem", to_string(r.theorem)}, {"kind", to_string(r.kind)}, {"value", r.value}};
      if (r.witness) j["witness"] = nlohmann::json::parse(describe(*r.witness));
      out.push_back(j);
    }
    std::cout << out.dump(2) << "\n";
  } else if (shown.size() == 1) {
    std::cout << format_number(shown[0].value) << "\n";
  } else {
    for (const auto& r : shown) std::cout << to_string(r.kind) << " " << format_number(r.value) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CurveArgs {
  std::string region;
  int n = 2;
  size_t points = 101;
  std::string order = "0.5";
  std::string order_b = "2";
  bool unconditional = false;
  std::string out;
  std::string format;
};

void write_csv(std::ostream& os, const BoundCurve& c) {
  os << "x,y_lower,y_upper\n";
  for (const auto& p : c.points)
    os << format_number(p.x) << "," << format_number(p.y_lower) << "," << format_number(p.y_upper) << "\n";
}

void write_json(std::ostream& os, const BoundCurve& c) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : c.points) pts.push_back({{"x", p.x}, {"y_lower", p.y_lower}, {"y_upper", p.y_upper}});
  os << nlohmann::json{{"x_label", c.x_label}, {"y_label", c.y_label}, {"points", pts}}.dump(2) << "\n";
}

int cmd_curve(const CurveArgs& args) {
  CurveParams p;
  p.n = args.n;
  p.points = args.points;
  p.a = Order::parse(args.order);
  p.b = Order::parse(args.order_b);
  p.conditional = !args.unconditional;
  const BoundCurve curve = sample_curve(parse_region(args.region), p);
  std::string format = args.format;
  if (format.empty())
    format = args.out.size() >= 5 && args.out.substr(args.out.size() - 5) == ".json" ? "json" : "csv";
  if (format != "csv" && format != "json") throw DomainError("--format must be csv or json");
  auto emit = [&](std::ostream& os) { format == "csv" ? write_csv(os, curve) : write_json(os, curve); };
  if (args.out.empty()) {
    emit(std::cout);
  } else {
    std::ofstream os(args.out);
    if (!os) throw DomainError("cannot write '" + args.out + "'");
    emit(os);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string theorem = "all";
  std::string seed = "0x5EED";
  size_t budget = 10000;
  int grid_n = 4;
  int grid_k = 3;
  double step = 0.05;
  int random_n = 6;
  int random_k = 6;
  unsigned threads = 0;
  std::optional<double> deadline;
};

int cmd_verify(const VerifyArgs& args) {
  VerifyConfig cfg;
  try {
    cfg.seed = std::stoull(args.seed, nullptr, 0);
  } catch (const std::exception&) {
    throw DomainError("bad --seed '" + args.seed + "'");
  }
  cfg.random_budget = args.budget;
  cfg.grid_n_max = args.grid_n;
  cfg.grid_k_max = args.grid_k;
  cfg.grid_step = args.step;
  cfg.random_n_max = args.random_n;
  cfg.random_k_max = args.random_k;
  cfg.threads = args.threads;
  cfg.deadline_seconds = args.deadline;
  grid_resolution(cfg.grid_step);

  bool pass;
  if (args.theorem == "all") {
    const std::vector<TheoremId> ids(std::begin(kAllTheorems), std::end(kAllTheorems));
    const auto report = verify_scan(ids, cfg);
    pass = report.pass();
    std::cout << to_json(report).dump(2) << "\n";
  } else {
    const auto report = verify_bound(parse_theorem(args.theorem), cfg);
    pass = report.pass();
    std::cout << to_json(report).dump(2) << "\n";
  }
  return pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sharp bounds between conditional Renyi entropies of distinct orders"};
  app.require_subcommand(1);

  EntropyArgs ea;
  auto* entropy = app.add_subcommand("entropy", "Renyi entropy (conditional for a source file)");
  add_source_options(entropy, ea.in);
  entropy->add_option("--order", ea.order, "0, 1, inf or a positive real");
  entropy->add_option("--quantity", ea.quantity, "renyi, norm, pe or z");

  BoundArgs ba;
  auto* bound = app.add_subcommand("bound", "Evaluate a bound");
  bound->add_option("--theorem", ba.theorem, "bound id, or fano-lower / fano-upper / reverse-fano")->required();
  bound->add_option("--order", ba.order, "order of the given quantity");
  bound->add_option("--order-b", ba.order_b, "order of the bounded quantity");
  bound->add_option("--value", ba.value, "the given entropy (or Z) value");
  bound->add_option("--eps", ba.eps, "the given error probability");
  bound->add_option("--n", ba.n, "alphabet size");
  bound->add_option("--side", ba.side, "lower, upper or both");
  bound->add_flag("--json", ba.json, "JSON output with attaining constructions");
  add_source_options(bound, ba.in);

  CurveArgs ca;
  auto* curve = app.add_subcommand("curve", "Sample a feasible-region boundary");
  curve->add_option("--region", ca.region, "h-vs-pe, pe-vs-h, z-vs-pe, h2-vs-hhalf or hb-vs-ha")->required();
  curve->add_option("--n", ca.n, "alphabet size");
  curve->add_option("--points", ca.points, "uniform grid points (kinks are added)");
  curve->add_option("--order", ca.order, "order a");
  curve->add_option("--order-b", ca.order_b, "order b");
  curve->add_flag("--unconditional", ca.unconditional, "unconditional bounds");
  curve->add_option("--out", ca.out, "output path (stdout when omitted)");
  curve->add_option("--format", ca.format, "csv or json (default from the extension)");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Brute-force check of the bounds");
  verify->add_option("--theorem", va.theorem, "bound id or all");
  verify->add_option("--seed", va.seed, "random seed (decimal or 0x hex)");
  verify->add_option("--budget", va.budget, "number of random sources");
  verify->add_option("--grid-n", va.grid_n, "largest grid X alphabet");
  verify->add_option("--grid-k", va.grid_k, "largest grid Y alphabet");
  verify->add_option("--step", va.step, "grid step 1/M");
  verify->add_option("--random-n", va.random_n, "largest random X alphabet");
  verify->add_option("--random-k", va.random_k, "largest random Y alphabet");
  verify->add_option("--threads", va.threads, "worker threads (0 = auto)");
  verify->add_option("--deadline", va.deadline, "give up after this many seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*entropy) return cmd_entropy(ea);
    if (*bound) return cmd_bound(ba);
    if (*curve) return cmd_curve(ca);
    return cmd_verify(va);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
