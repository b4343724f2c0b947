#include "tailgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "tailgame/errors.hpp"

namespace tailgame {

const char* to_string(PayoffKind kind) noexcept {
  switch (kind) {
    case PayoffKind::Categorical:
      return "categorical";
    case PayoffKind::Density:
      return "density";
    default:
      return "stages";
  }
}

const char* to_string(Player player) noexcept { return player == Player::Row ? "row" : "column"; }

namespace {

void check_shape(std::size_t rows, std::size_t cols, std::size_t cells) {
  if (rows == 0 || cols == 0) fail(ErrorCode::DimensionMismatch, "game needs at least one row and one column");
  if (cells != rows * cols) {
    std::ostringstream os;
    os << "expected " << rows * cols << " payoff cells, got " << cells;
    fail(ErrorCode::DimensionMismatch, os.str());
  }
}

}  // namespace

DistributionGame DistributionGame::categorical(std::size_t rows, std::size_t cols,
                                               std::vector<CategoricalPayoff> cells, Sense row_sense) {
  check_shape(rows, cols, cells.size());
  const std::size_t k = cells.front().size();
  for (const auto& c : cells)
    if (c.size() != k) fail(ErrorCode::DimensionMismatch, "all cells must have the same number of categories");

  DistributionGame g;
  g.kind_ = PayoffKind::Categorical;
  g.rows_ = rows;
  g.cols_ = cols;
  g.row_sense_ = row_sense;
  for (std::size_t s = 0; s < k; ++s) {
    Matrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) a(i, j) = cells[i * cols + j][k - 1 - s];
    g.stages_.push_back(std::move(a));
  }
  g.categorical_ = std::move(cells);
  return g;
}

DistributionGame DistributionGame::densities(std::size_t rows, std::size_t cols,
                                             std::vector<PiecewisePolyDensity> cells, Sense row_sense) {
  check_shape(rows, cols, cells.size());
  for (const auto& c : cells)
    if (!same_support(c, cells.front())) fail(ErrorCode::SupportMismatch, "all cells must share one support");
  DistributionGame g;
  g.kind_ = PayoffKind::Density;
  g.rows_ = rows;
  g.cols_ = cols;
  g.row_sense_ = row_sense;
  g.densities_ = std::move(cells);
  return g;
}

DistributionGame DistributionGame::stages(std::vector<Matrix> stages, Sense row_sense) {
  if (stages.empty()) fail(ErrorCode::DimensionMismatch, "need at least one stage matrix");
  for (const auto& a : stages) {
    if (a.rows() == 0 || a.cols() == 0) fail(ErrorCode::DimensionMismatch, "stage matrix is empty");
    if (a.rows() != stages.front().rows() || a.cols() != stages.front().cols())
      fail(ErrorCode::DimensionMismatch, "stage matrices differ in shape");
  }
  DistributionGame g;
  g.kind_ = PayoffKind::Stages;
  g.rows_ = stages.front().rows();
  g.cols_ = stages.front().cols();
  g.row_sense_ = row_sense;
  g.stages_ = std::move(stages);
  return g;
}

std::size_t DistributionGame::stage_count() const { return stage_matrices().size(); }

const CategoricalPayoff& DistributionGame::categorical_cell(std::size_t i, std::size_t j) const {
  if (kind_ != PayoffKind::Categorical) fail(ErrorCode::RequiresCategorical, "game cells are not categorical");
  if (i >= rows_ || j >= cols_) fail(ErrorCode::DimensionMismatch, "cell index out of range");
  return categorical_[i * cols_ + j];
}

const PiecewisePolyDensity& DistributionGame::density_cell(std::size_t i, std::size_t j) const {
  if (kind_ != PayoffKind::Density) fail(ErrorCode::InvalidInput, "game cells are not densities");
  if (i >= rows_ || j >= cols_) fail(ErrorCode::DimensionMismatch, "cell index out of range");
  return densities_[i * cols_ + j];
}

const std::vector<Matrix>& DistributionGame::stage_matrices() const {
  if (kind_ == PayoffKind::Density)
    fail(ErrorCode::RequiresCategorical, "density-valued game must be discretized first");
  return stages_;
}

// ---------------------------------------------------------------------------

namespace {

void check_simplex(std::span<const double> v, std::size_t n, const char* name) {
  if (v.size() != n) {
    std::ostringstream os;
    os << name << " has length " << v.size() << ", expected " << n;
    fail(ErrorCode::DimensionMismatch, os.str());
  }
  CompensatedSum s;
  for (double p : v) {
    if (!(p >= -kProfileTolerance) || !std::isfinite(p))
      fail(ErrorCode::InvalidInput, std::string(name) + " has a negative or non-finite entry");
    s.add(p);
  }
  if (std::abs(s.value() - 1.0) > kProfileTolerance)
    fail(ErrorCode::InvalidInput, std::string(name) + " does not sum to 1");
}

std::vector<double> cell_weights(const MixedProfile& p) {
  std::vector<double> w;
  w.reserve(p.x.size() * p.y.size());
  for (double xi : p.x)
    for (double yj : p.y) w.push_back(xi * yj);
  return w;
}

// +1 when `player` prefers larger stage values.
double preference(const DistributionGame& game, Player player) {
  const bool row_max = game.row_sense() == Sense::Maximize;
  return (player == Player::Row) == row_max ? 1.0 : -1.0;
}

// Natural coordinates: categories 1..K for categorical games, stages otherwise.
std::vector<double> natural_order(const DistributionGame& game, std::vector<double> stage_vec) {
  if (game.kind() == PayoffKind::Categorical) std::reverse(stage_vec.begin(), stage_vec.end());
  return stage_vec;
}

// Stage-wise payoffs of every pure strategy of `player` against the
// opponent's mixed strategy; result[s][k].
std::vector<std::vector<double>> pure_stage_payoffs(const DistributionGame& game, const MixedProfile& p,
                                                    Player player) {
  const auto& mats = game.stage_matrices();
  const std::size_t count = player == Player::Row ? game.rows() : game.cols();
  std::vector<std::vector<double>> out(count, std::vector<double>(mats.size()));
  for (std::size_t k = 0; k < mats.size(); ++k) {
    const std::vector<double> v = player == Player::Row ? mats[k].col_mix(p.y) : mats[k].row_mix(p.x);
    for (std::size_t s = 0; s < count; ++s) out[s][k] = v[s];
  }
  return out;
}

// Index of the first stage where a and b differ by more than thr, or size.
std::size_t decisive_stage(std::span<const double> a, std::span<const double> b, double thr) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > thr) return k;
  return a.size();
}

}  // namespace

void check_profile(const DistributionGame& game, const MixedProfile& profile) {
  check_simplex(profile.x, game.rows(), "row strategy");
  check_simplex(profile.y, game.cols(), "column strategy");
}

std::vector<double> stage_values(const DistributionGame& game, const MixedProfile& profile) {
  check_profile(game, profile);
  std::vector<double> out;
  for (const auto& a : game.stage_matrices()) out.push_back(a.bilinear(profile.x, profile.y));
  return out;
}

MixedPayoff mixed_payoff(const DistributionGame& game, const MixedProfile& profile) {
  check_profile(game, profile);
  switch (game.kind()) {
    case PayoffKind::Categorical: {
      const std::vector<double> w = cell_weights(profile);
      const std::size_t k = game.categorical_cell(0, 0).size();
      std::vector<double> mass(k);
      for (std::size_t c = 0; c < k; ++c) {
        CompensatedSum s;
        for (std::size_t i = 0; i < game.rows(); ++i)
          for (std::size_t j = 0; j < game.cols(); ++j)
            s.add(w[i * game.cols() + j] * game.categorical_cell(i, j)[c]);
        mass[c] = std::max(0.0, s.value());
      }
      return CategoricalPayoff(std::move(mass));
    }
    case PayoffKind::Density: {
      std::vector<PiecewisePolyDensity> cells;
      for (std::size_t i = 0; i < game.rows(); ++i)
        for (std::size_t j = 0; j < game.cols(); ++j) cells.push_back(game.density_cell(i, j));
      const std::vector<double> w = cell_weights(profile);
      return mix(cells, w);
    }
    default:
      return stage_values(game, profile);
  }
}

std::vector<Matrix> game_sequence(const DistributionGame& game) { return game.stage_matrices(); }

DistributionGame discretize_game(const DistributionGame& game, std::span<const double> cutpoints) {
  if (game.kind() != PayoffKind::Density) return game;
  std::vector<CategoricalPayoff> cells;
  for (std::size_t i = 0; i < game.rows(); ++i)
    for (std::size_t j = 0; j < game.cols(); ++j) cells.push_back(discretize(game.density_cell(i, j), cutpoints));
  return DistributionGame::categorical(game.rows(), game.cols(), std::move(cells), game.row_sense());
}

LexEquilibrium lex_equilibrium(const DistributionGame& game) {
  const auto& mats = game.stage_matrices();
  // Solve with a maximizing row player; flip signs back for reporting.
  const double orient = game.row_sense() == Sense::Maximize ? 1.0 : -1.0;

  LexEquilibrium out;
  std::vector<Guarantee> row_guarantees;
  std::vector<Guarantee> col_guarantees;
  for (std::size_t k = 0; k < mats.size(); ++k) {
    const Matrix a = orient > 0 ? mats[k] : mats[k].negated();
    StageRecord rec{solve_stage({a, row_guarantees, Sense::Maximize}),
                    solve_stage({a, col_guarantees, Sense::Minimize})};
    if (k == 0) certify_saddle(a, rec.row.strategy, rec.column.strategy, rec.row.value);
    row_guarantees.push_back({a, rec.row.value});
    col_guarantees.push_back({a, rec.column.value});
    rec.row.value *= orient;
    rec.column.value *= orient;
    out.profile.x = rec.row.strategy;
    out.profile.y = rec.column.strategy;
    out.stage_log.push_back(std::move(rec));
  }
  out.values = stage_values(game, out.profile);
  return out;
}

FictitiousPlayResult fictitious_play(const DistributionGame& game, double epsilon, long long max_rounds) {
  if (!(epsilon > 0.0)) fail(ErrorCode::PreconditionViolation, "epsilon must be positive");
  if (max_rounds < 1) fail(ErrorCode::PreconditionViolation, "max_rounds must be at least 1");
  const auto& mats = game.stage_matrices();
  const std::size_t n = game.rows();
  const std::size_t m = game.cols();
  const std::size_t d = mats.size();
  const double row_pref = preference(game, Player::Row);
  const double col_pref = preference(game, Player::Column);

  // Accumulated stage payoffs of each pure strategy against the opponent's history.
  std::vector<double> row_acc(n * d, 0.0);
  std::vector<double> col_acc(m * d, 0.0);
  std::vector<long long> row_count(n, 0);
  std::vector<long long> col_count(m, 0);

  auto best_reply = [&](const std::vector<double>& acc, std::size_t count, double pref, long long plays) {
    std::size_t best = 0;
    if (plays == 0) return best;
    const auto scale = static_cast<double>(plays);
    for (std::size_t s = 1; s < count; ++s) {
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = (acc[s * d + k] - acc[best * d + k]) / scale;
        if (std::abs(diff) < epsilon) continue;
        if (pref * diff > 0.0) best = s;
        break;
      }
    }
    return best;
  };

  auto empirical = [&](long long t) {
    MixedProfile p{std::vector<double>(n), std::vector<double>(m)};
    for (std::size_t i = 0; i < n; ++i) p.x[i] = static_cast<double>(row_count[i]) / static_cast<double>(t);
    for (std::size_t j = 0; j < m; ++j) p.y[j] = static_cast<double>(col_count[j]) / static_cast<double>(t);
    return p;
  };

  const auto window = static_cast<long long>(std::floor(kFictitiousWindowShare * static_cast<double>(max_rounds)));
  std::deque<MixedProfile> trail;
  for (long long t = 1; t <= max_rounds; ++t) {
    const std::size_t i = best_reply(row_acc, n, row_pref, t - 1);
    ++row_count[i];
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < d; ++k) col_acc[j * d + k] += mats[k](i, j);

    const std::size_t j = best_reply(col_acc, m, col_pref, t);
    ++col_count[j];
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < d; ++k) row_acc[r * d + k] += mats[k](r, j);

    if (window > 0 && t >= max_rounds - window) trail.push_back(empirical(t));
  }

  FictitiousPlayResult out{empirical(max_rounds), max_rounds, false};
  if (window > 0) {
    double drift = 0.0;
    for (const auto& p : trail) {
      for (std::size_t i = 0; i < n; ++i) drift = std::max(drift, std::abs(p.x[i] - out.profile.x[i]));
      for (std::size_t j = 0; j < m; ++j) drift = std::max(drift, std::abs(p.y[j] - out.profile.y[j]));
    }
    out.converged = drift < kFictitiousDrift;
  }
  return out;
}

NashReport verify_nash(const DistributionGame& game, const MixedProfile& profile) {
  const std::vector<double> base = stage_values(game, profile);
  NashReport report;
  for (Player player : {Player::Row, Player::Column}) {
    const double pref = preference(game, player);
    const auto payoffs = pure_stage_payoffs(game, profile, player);
    for (std::size_t s = 0; s < payoffs.size(); ++s) {
      const std::size_t k = decisive_stage(payoffs[s], base, kDeviationThreshold);
      if (k == base.size() || !(pref * (payoffs[s][k] - base[k]) > 0.0)) continue;
      report.improving.push_back(
          {player, s, natural_order(game, base), natural_order(game, payoffs[s]), k + 1});
    }
  }
  report.is_nash = report.improving.empty();
  if (!report.is_nash) report.witness = report.improving.front();
  return report;
}

LexNashReport verify_lex_nash(const DistributionGame& game, const MixedProfile& profile) {
  const std::vector<double> base = stage_values(game, profile);
  const auto& mats = game.stage_matrices();
  LexNashReport report;
  for (Player player : {Player::Row, Player::Column}) {
    const double pref = preference(game, player);
    const auto payoffs = pure_stage_payoffs(game, profile, player);
    const std::vector<double>& opponent = player == Player::Row ? profile.y : profile.x;
    for (std::size_t s = 0; s < payoffs.size(); ++s) {
      for (std::size_t k = 0; k < base.size(); ++k) {
        if (!(pref * (payoffs[s][k] - base[k]) > kDeviationThreshold)) continue;
        DeviationCheck check{player, s, k + 1, base[k], payoffs[s][k], std::nullopt};
        for (std::size_t kk = 0; kk < k && !check.punishment; ++kk) {
          for (std::size_t o = 0; o < opponent.size(); ++o) {
            if (opponent[o] >= 1.0 - kProfileTolerance) continue;  // already the equilibrium
            const double v = player == Player::Row ? mats[kk](s, o) : mats[kk](o, s);
            if (pref * (v - base[kk]) < -kDeviationThreshold) {
              check.punishment = Punishment{o, kk + 1, base[kk], v};
              break;
            }
          }
        }
        if (!check.punishment) report.is_lex_nash = false;
        report.deviations.push_back(std::move(check));
      }
    }
  }
  return report;
}

}  // namespace tailgame
