#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tailgame/tailgame.h"

namespace {

constexpr int kExitInput = 1;

// Carries an exit code out of a subcommand.
struct Exit {
  int code;
};

struct Owned {
  char* text = nullptr;
  ~Owned() { tg_string_free(text); }
};

using DensityPtr = std::unique_ptr<tg_density, decltype(&tg_density_free)>;
using TargetPtr = std::unique_ptr<tg_target, decltype(&tg_target_free)>;
using GamePtr = std::unique_ptr<tg_game, decltype(&tg_game_free)>;

void check(tg_status s) {
  if (s == TG_OK) return;
  std::cerr << "error [" << tg_status_name(s) << "]: " << tg_last_error() << "\n";
  throw Exit{tg_exit_code(s)};
}

[[noreturn]] void input_error(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  throw Exit{kExitInput};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) input_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) input_error("cannot write " + path);
  out << text;
}

DensityPtr load_density(const std::string& path) {
  tg_density* d = nullptr;
  check(tg_density_from_json(read_file(path).c_str(), &d));
  return {d, tg_density_free};
}

GamePtr load_game(const std::string& path, const std::vector<double>& cutpoints) {
  tg_game* g = nullptr;
  check(tg_game_from_json(read_file(path).c_str(), &g));
  GamePtr game(g, tg_game_free);
  if (!cutpoints.empty()) {
    tg_game* d = nullptr;
    check(tg_game_discretize(game.get(), cutpoints.data(), cutpoints.size(), &d));
    game.reset(d);
  }
  return game;
}

int certification_grid() {
  const char* env = std::getenv("TAILGAME_GRID");
  if (env == nullptr || *env == '\0') return 0;
  int grid = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), grid);
  if (ec != std::errc() || ptr != s.data() + s.size()) input_error("TAILGAME_GRID must be an integer");
  return grid;
}

bool is_json_path(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

// Two-component Gaussian mixture kept at x >= 1.
std::vector<double> synthetic_samples(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution pick(0.6);
  std::normal_distribution<double> first(1.8, 0.15);
  std::normal_distribution<double> second(2.6, 0.2);
  std::vector<double> out;
  while (static_cast<int>(out.size()) < n) {
    const double x = pick(rng) ? first(rng) : second(rng);
    if (x >= 1.0) out.push_back(x);
  }
  return out;
}

struct ApproxOptions {
  std::string input;
  double epsilon = 0.1;
  std::optional<double> bandwidth;
  int synthetic = 0;
  std::uint64_t seed = 0;
  std::string output;
  std::string table;
};

void run_approx(const ApproxOptions& o) {
  if (o.input.empty() == (o.synthetic == 0)) input_error("give exactly one of an input file or --synthetic N");
  const int grid = certification_grid();

  tg_target* raw = nullptr;
  if (o.synthetic > 0) {
    const std::vector<double> xs = synthetic_samples(o.synthetic, o.seed);
    check(tg_target_from_samples(xs.data(), xs.size(), o.bandwidth ? &*o.bandwidth : nullptr, &raw));
  } else if (is_json_path(o.input)) {
    const DensityPtr f = load_density(o.input);
    check(tg_target_from_density(f.get(), &raw));
  } else {
    double* xs = nullptr;
    std::size_t n = 0;
    check(tg_parse_samples(read_file(o.input).c_str(), &xs, &n));
    const tg_status s = tg_target_from_samples(xs, n, o.bandwidth ? &*o.bandwidth : nullptr, &raw);
    tg_doubles_free(xs);
    check(s);
  }
  const TargetPtr target(raw, tg_target_free);

  tg_density* fit = nullptr;
  Owned json;
  check(tg_degree_search(target.get(), o.epsilon, grid, &fit, &json.text));
  const DensityPtr approx(fit, tg_density_free);

  // Convergence table: stdout when the JSON goes to a file, stderr otherwise.
  std::ostream& table_out = o.output.empty() ? std::cerr : std::cout;
  const auto result = nlohmann::json::parse(json.text);
  char line[128];
  std::snprintf(line, sizeof line, "%-8s %-10s %-24s %s\n", "degree", "phase", "sup_error", "passed");
  table_out << line;
  for (const auto& t : result["trace"]) {
    const std::string err = t["sup_error"].is_null() ? "inf" : std::to_string(t["sup_error"].get<double>());
    std::snprintf(line, sizeof line, "%-8d %-10s %-24s %s\n", t["degree"].get<int>(),
                  t["phase"].get<std::string>().c_str(), err.c_str(), t["passed"].get<bool>() ? "yes" : "no");
    table_out << line;
  }
  write_output(json.text, o.output);

  if (!o.table.empty()) {
    double a = 0.0;
    double b = 0.0;
    check(tg_target_support(target.get(), &a, &b));
    std::ostringstream ss;
    ss.precision(17);
    ss << "# x target approximation\n";
    constexpr int kRows = 400;
    for (int i = 0; i <= kRows; ++i) {
      const double x = a + (b - a) * (static_cast<double>(i) / kRows);
      double fx = 0.0;
      double px = 0.0;
      check(tg_target_eval(target.get(), x, &fx));
      check(tg_density_eval(approx.get(), x, &px));
      ss << x << ' ' << fx << ' ' << px << '\n';
    }
    write_output(ss.str(), o.table);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tail-order comparison of loss densities and lexicographic equilibria of distribution-valued games"};
  app.require_subcommand(1);

  ApproxOptions approx;
  auto* cmd_approx = app.add_subcommand("approx", "Bernstein approximation of a density or a sample");
  cmd_approx->add_option("input", approx.input, "samples CSV or density JSON");
  cmd_approx->add_option("--epsilon", approx.epsilon, "target sup-norm error, in (0, 1)")->capture_default_str();
  cmd_approx->add_option("--bandwidth", approx.bandwidth, "kernel bandwidth for samples");
  cmd_approx->add_option("--synthetic", approx.synthetic, "draw N synthetic samples instead of reading a file")
      ->check(CLI::PositiveNumber);
  cmd_approx->add_option("--seed", approx.seed, "seed for --synthetic")->capture_default_str();
  cmd_approx->add_option("--output", approx.output, "write the result JSON here");
  cmd_approx->add_option("--table", approx.table, "write x, target, approximation columns here");

  std::string f_path;
  std::string g_path;
  int n_moments = 64;
  std::string output;
  auto* cmd_compare = app.add_subcommand("compare", "Tail order of two densities");
  cmd_compare->add_option("f", f_path, "density JSON")->required();
  cmd_compare->add_option("g", g_path, "density JSON")->required();
  cmd_compare->add_option("--moments", n_moments, "moments checked for dominance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd_compare->add_option("--output", output, "write the report here");

  std::vector<double> cutpoints;
  std::vector<double> quantiles;
  auto* cmd_discretize = app.add_subcommand("discretize", "Masses of a density between cutpoints");
  cmd_discretize->add_option("density", f_path, "density JSON")->required();
  auto* cut_opt = cmd_discretize->add_option("--cutpoints", cutpoints, "interior cutpoints")->delimiter(',');
  auto* q_opt = cmd_discretize->add_option("--quantiles", quantiles, "quantile levels in (0, 1)")->delimiter(',');
  cut_opt->excludes(q_opt);
  cmd_discretize->add_option("--output", output, "write the report here");

  std::string game_path;
  auto* cmd_solve = app.add_subcommand("solve", "Lexicographic equilibrium with verification reports");
  cmd_solve->add_option("game", game_path, "game JSON")->required();
  cmd_solve->add_option("--cutpoints", cutpoints, "discretize density payoffs first")->delimiter(',');
  cmd_solve->add_option("--output", output, "write the report here");

  double fp_epsilon = 1e-6;
  long long rounds = 100000;
  auto* cmd_fp = app.add_subcommand("fp", "Fictitious play under the payoff order");
  cmd_fp->add_option("game", game_path, "game JSON")->required();
  cmd_fp->add_option("--epsilon", fp_epsilon, "tie tolerance")->capture_default_str();
  cmd_fp->add_option("--rounds", rounds, "number of rounds")->capture_default_str();
  cmd_fp->add_option("--cutpoints", cutpoints, "discretize density payoffs first")->delimiter(',');
  cmd_fp->add_option("--output", output, "write the report here");

  std::vector<double> x;
  std::vector<double> y;
  auto* cmd_verify = app.add_subcommand("verify", "Nash and lexicographic Nash checks of a profile");
  cmd_verify->add_option("game", game_path, "game JSON")->required();
  cmd_verify->add_option("--x", x, "row strategy")->delimiter(',')->required();
  cmd_verify->add_option("--y", y, "column strategy")->delimiter(',')->required();
  cmd_verify->add_option("--cutpoints", cutpoints, "discretize density payoffs first")->delimiter(',');
  cmd_verify->add_option("--output", output, "write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (cmd_approx->parsed()) {
      run_approx(approx);
    } else if (cmd_compare->parsed()) {
      const DensityPtr f = load_density(f_path);
      const DensityPtr g = load_density(g_path);
      Owned json;
      check(tg_compare_report(f.get(), g.get(), n_moments, &json.text));
      write_output(json.text, output);
    } else if (cmd_discretize->parsed()) {
      const DensityPtr f = load_density(f_path);
      const bool by_quantile = !quantiles.empty();
      const std::vector<double>& values = by_quantile ? quantiles : cutpoints;
      Owned json;
      check(tg_discretize_report(f.get(), values.data(), values.size(), by_quantile ? 1 : 0, &json.text));
      write_output(json.text, output);
    } else if (cmd_solve->parsed()) {
      const GamePtr game = load_game(game_path, cutpoints);
      Owned json;
      check(tg_game_solve(game.get(), &json.text));
      write_output(json.text, output);
    } else if (cmd_fp->parsed()) {
      const GamePtr game = load_game(game_path, cutpoints);
      Owned json;
      check(tg_game_fictitious_play(game.get(), fp_epsilon, rounds, &json.text));
      write_output(json.text, output);
    } else if (cmd_verify->parsed()) {
      const GamePtr game = load_game(game_path, cutpoints);
      Owned json;
      check(tg_game_verify(game.get(), x.data(), x.size(), y.data(), y.size(), &json.text));
      write_output(json.text, output);
    }
  } catch (const Exit& e) {
    return e.code;
  }
  return 0;
}
