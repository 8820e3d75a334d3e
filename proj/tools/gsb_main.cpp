#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gsb/gsb.hpp"

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  for (;;) {
    std::size_t comma = text.find(',', pos);
    std::string tok = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t'))
      tok.erase(tok.begin());
    while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t'))
      tok.pop_back();
    if (tok.empty())
      gsb::fail(gsb::ErrorCode::ParseError, "empty element in list: " + text);
    const char* begin = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + tok.size())
      gsb::fail(gsb::ErrorCode::ParseError, "cannot parse number: " + tok);
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct CommonOpts {
  std::string channel_path;
  std::string out_dir;
  double tol = 1e-9;
  std::uint64_t seed = 12345;
};

void add_common(CLI::App* sub, CommonOpts& opt) {
  sub->add_option("--channel", opt.channel_path, "channel JSON file");
  sub->add_option("--out", opt.out_dir, "output directory");
  sub->add_option("--tol", opt.tol, "membership tolerance");
  sub->add_option("--seed", opt.seed, "random seed");
}

gsb::BroadcastChannel require_channel(const CommonOpts& opt) {
  if (opt.channel_path.empty())
    gsb::fail(gsb::ErrorCode::ParseError,
              "--channel <json-file> is required for this command");
  return gsb::load_channel_file(opt.channel_path);
}

gsb::RegionKind make_region(const std::string& name,
                            const std::string& tau_text, std::size_t users) {
  if (name == "inner") return gsb::RegionKind::inner();
  if (name == "outer-pow2") return gsb::RegionKind::outer_pow2();
  if (name == "outer-k") return gsb::RegionKind::outer_k();
  if (name == "p2p") return gsb::RegionKind::point_to_point();
  if (name == "parametric") {
    if (tau_text.empty()) {
      if (users != 1)
        gsb::fail(gsb::ErrorCode::ParseError,
                  "--tau is required for the parametric region");
      return gsb::RegionKind::parametric(gsb::TauVector({}));
    }
    return gsb::RegionKind::parametric(gsb::TauVector(parse_list(tau_text)));
  }
  gsb::fail(gsb::ErrorCode::ParseError, "unknown region: " + name);
}

std::vector<double> make_grid(const std::string& text) {
  std::vector<double> parts;
  bool logspace = true;
  {
    std::size_t last_comma = text.rfind(',');
    std::string tail =
        last_comma == std::string::npos ? "" : text.substr(last_comma + 1);
    if (tail == "log" || tail == "lin") {
      logspace = tail == "log";
      parts = parse_list(text.substr(0, last_comma));
    } else {
      parts = parse_list(text);
    }
  }
  if (parts.size() != 3)
    gsb::fail(gsb::ErrorCode::ParseError,
              "--grid wants lo,hi,count[,log|lin]: " + text);
  double lo = parts[0], hi = parts[1];
  std::size_t n = static_cast<std::size_t>(parts[2]);
  if (static_cast<double>(n) != parts[2] || n < 2)
    gsb::fail(gsb::ErrorCode::ParseError, "grid count must be an integer >= 2");
  if (!(lo < hi) || !(lo > 0.0) || !(hi <= 1.0))
    gsb::fail(gsb::ErrorCode::ParseError,
              "grid bounds must satisfy 0 < lo < hi <= 1");
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = static_cast<double>(i) / static_cast<double>(n - 1);
    grid[i] = logspace ? std::exp(std::log(lo) * (1.0 - t) + std::log(hi) * t)
                       : lo + (hi - lo) * t;
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

gsb::GapMode parse_gap_mode(const std::string& name) {
  if (name == "pow2") return gsb::GapMode::Pow2;
  if (name == "kfactor") return gsb::GapMode::KFactor;
  if (name == "relaxed") return gsb::GapMode::Relaxed;
  gsb::fail(gsb::ErrorCode::ParseError, "unknown gap mode: " + name);
}

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inner and outer bounds for the distortion region of a "
               "Gaussian source broadcast over a degraded Gaussian channel"};
  app.require_subcommand(1);

  CommonOpts opt;
  int rc = 0;

  // check
  std::string check_region, check_d, check_tau;
  CLI::App* check = app.add_subcommand(
      "check", "membership of a distortion vector in a region bound");
  add_common(check, opt);
  check->add_option("--region", check_region,
                    "inner|outer-pow2|outer-k|parametric|p2p")
      ->required();
  check->add_option("--d", check_d, "distortions, comma separated")->required();
  check->add_option("--tau", check_tau, "tau values for --region parametric");
  check->callback([&] {
    gsb::BroadcastChannel ch = require_channel(opt);
    std::vector<double> d = parse_list(check_d);
    gsb::RegionKind region = make_region(check_region, check_tau, ch.users());
    gsb::MembershipResult res =
        gsb::membership_with_limits(region, ch, d, opt.tol);
    print_json(res);
    rc = res.member ? 0 : 3;
  });

  // boundary
  std::string bnd_region, bnd_d_tau, bnd_grid, bnd_base;
  std::size_t bnd_solve = 1, bnd_free = 2;
  CLI::App* boundary = app.add_subcommand(
      "boundary", "trace one boundary coordinate against a grid of another");
  add_common(boundary, opt);
  boundary->add_option("--region", bnd_region,
                       "inner|outer-pow2|outer-k|parametric|p2p")
      ->required();
  boundary->add_option("--tau", bnd_d_tau, "tau values for --region parametric");
  boundary->add_option("--grid", bnd_grid, "lo,hi,count[,log|lin]")->required();
  boundary->add_option("--solve", bnd_solve, "1-based user to solve for");
  boundary->add_option("--free", bnd_free, "1-based user the grid sweeps");
  boundary->add_option("--base", bnd_base,
                       "fixed distortions for the remaining users (K > 2)");
  boundary->callback([&] {
    gsb::BroadcastChannel ch = require_channel(opt);
    if (bnd_solve < 1 || bnd_free < 1)
      gsb::fail(gsb::ErrorCode::ParseError, "--solve/--free are 1-based");
    gsb::RegionKind region = make_region(bnd_region, bnd_d_tau, ch.users());
    std::vector<double> grid = make_grid(bnd_grid);
    std::vector<double> base;
    if (!bnd_base.empty()) base = parse_list(bnd_base);
    gsb::BoundaryCurve curve =
        gsb::trace_boundary(region, ch, grid, bnd_solve - 1, bnd_free - 1,
                            std::span<const double>(base));
    std::string csv = gsb::boundary_curve_csv(curve);
    if (opt.out_dir.empty()) {
      std::cout << csv;
    } else {
      std::filesystem::create_directories(opt.out_dir);
      gsb::write_text_file(std::filesystem::path(opt.out_dir) / "boundary.csv",
                           csv);
    }
  });

  // fig2
  CLI::App* fig2 = app.add_subcommand(
      "fig2", "write the benchmark curve family (two-user channel)");
  add_common(fig2, opt);
  fig2->callback([&] {
    gsb::run_benchmark_curves(opt.out_dir.empty() ? "." : opt.out_dir);
  });

  // relax
  std::string relax_d;
  CLI::App* relax =
      app.add_subcommand("relax", "relaxed distortion vector and labels");
  add_common(relax, opt);
  relax->add_option("--d", relax_d, "distortions, comma separated")->required();
  relax->callback([&] {
    gsb::DistortionVector d{parse_list(relax_d)};
    gsb::RelaxedVector rv = gsb::relaxed_vector(d);
    gsb::LabelBudget lb = gsb::label_budget(rv.labels, d);
    nlohmann::json j = rv;
    j["label_sum"] = lb.sum;
    j["label_bound"] = lb.bound;
    print_json(j);
  });

  // rates
  std::string rates_d, rates_r;
  CLI::App* rates = app.add_subcommand(
      "rates", "separation-scheme rates from distortions, or the inverse");
  add_common(rates, opt);
  rates->add_option("--d", rates_d, "distortions, comma separated");
  rates->add_option("--rates", rates_r, "rates in nats, comma separated");
  rates->callback([&] {
    gsb::BroadcastChannel ch = require_channel(opt);
    if (rates_d.empty() == rates_r.empty())
      gsb::fail(gsb::ErrorCode::ParseError,
                "exactly one of --d and --rates is required");
    if (!rates_d.empty()) {
      gsb::DistortionVector d{parse_list(rates_d)};
      gsb::RateVector r = gsb::rates_from_distortions(ch.bandwidth(), d);
      std::vector<double> bits;
      for (double v : r.values()) bits.push_back(v / std::numbers::ln2);
      gsb::MembershipResult m = gsb::inner_membership_via_rates(ch, d, opt.tol);
      nlohmann::json j = {
          {"rates_nats", std::vector<double>(r.values().begin(),
                                             r.values().end())},
          {"rates_bits", bits},
          {"capacity_lhs", m.lhs},
          {"budget", m.budget},
          {"member", m.member},
      };
      print_json(j);
      rc = m.member ? 0 : 3;
    } else {
      gsb::RateVector r{parse_list(rates_r)};
      gsb::DistortionVector d = gsb::distortions_from_rates(ch.bandwidth(), r);
      nlohmann::json j = {{"distortions",
                           std::vector<double>(d.values().begin(),
                                               d.values().end())}};
      print_json(j);
    }
  });

  // genie
  CLI::App* genie = app.add_subcommand(
      "genie", "half-bit genie rate allocation and its feasibility");
  add_common(genie, opt);
  genie->callback([&] {
    gsb::BroadcastChannel ch = require_channel(opt);
    gsb::GenieFeasibility g = gsb::genie_feasibility(ch, opt.tol);
    nlohmann::json j = g;
    j["p2p_residuals_bits"] = gsb::genie_p2p_check(ch);
    print_json(j);
  });

  // gap
  std::string gap_mode, gap_d;
  CLI::App* gap = app.add_subcommand(
      "gap", "constant-factor certificate from an outer bound to the inner");
  add_common(gap, opt);
  gap->add_option("--mode", gap_mode, "pow2|kfactor|relaxed")->required();
  gap->add_option("--d", gap_d, "distortions, comma separated")->required();
  gap->callback([&] {
    gsb::BroadcastChannel ch = require_channel(opt);
    gsb::DistortionVector d{parse_list(gap_d)};
    gsb::GapCertificate cert =
        gsb::gap_certificate(ch, d, parse_gap_mode(gap_mode), opt.tol);
    print_json(cert);
  });

  // tau
  std::string tau_mode, tau_d;
  std::size_t tau_k = 0;
  CLI::App* tau =
      app.add_subcommand("tau", "construct tau sequences for the outer bound");
  add_common(tau, opt);
  tau->add_option("--mode", tau_mode, "pow2|kfactor|relaxed")->required();
  tau->add_option("--d", tau_d, "distortions, comma separated")->required();
  tau->add_option("--k", tau_k, "user count (defaults to the length of --d)");
  tau->callback([&] {
    gsb::DistortionVector d{parse_list(tau_d)};
    std::size_t users = tau_k == 0 ? d.size() : tau_k;
    if (tau_mode == "pow2") {
      gsb::TauVector t = gsb::tau_for_pow2(d);
      print_json(nlohmann::json{{"tau", gsb::encode_extended(t.values())}});
    } else if (tau_mode == "kfactor") {
      gsb::KfactorCertificate cert = gsb::tau_for_Kfactor(users, d);
      print_json(cert);
    } else if (tau_mode == "relaxed") {
      gsb::RelaxedVector rv = gsb::relaxed_vector(d);
      gsb::TauVector t = gsb::tau_for_relaxed(d, rv.labels);
      print_json(nlohmann::json{{"tau", gsb::encode_extended(t.values())},
                                {"labels", rv.labels}});
    } else {
      gsb::fail(gsb::ErrorCode::ParseError, "unknown tau mode: " + tau_mode);
    }
  });

  // mi
  double mi_D = 0.5, mi_tau = 0.0, mi_tau_prime = 0.0;
  std::size_t mi_mc = 0;
  CLI::App* mi = app.add_subcommand(
      "mi", "mutual-information bounds for the auxiliary-noise pair");
  add_common(mi, opt);
  mi->add_option("--D", mi_D, "target distortion in (0,1]")->required();
  mi->add_option("--tau", mi_tau, "smaller auxiliary noise")->required();
  mi->add_option("--tau-prime", mi_tau_prime, "larger auxiliary noise")
      ->required();
  mi->add_option("--mc", mi_mc, "Monte Carlo sample count (0 = skip)");
  mi->callback([&] {
    gsb::AuxNoiseParams p(mi_tau, mi_tau_prime, mi_D);
    nlohmann::json j = {
        {"params",
         {{"D", p.D}, {"tau", p.tau}, {"tau_prime", p.tau_prime}}},
        {"mi_lower_bound", gsb::mi_lower_bound(p)},
        {"mi_difference_lower_bound", gsb::mi_difference_lower_bound(p)},
    };
    if (p.D < 1.0) {
      j["oracle"] = gsb::gaussian_oracle_mi(p);
    } else {
      j["oracle"] = nullptr;
    }
    if (mi_mc > 0)
      j["monte_carlo"] = gsb::monte_carlo_mi_estimate(p, mi_mc, opt.seed);
    print_json(j);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const gsb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
