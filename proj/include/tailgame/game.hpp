#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "tailgame/density.hpp"
#include "tailgame/lp.hpp"
#include "tailgame/tailorder.hpp"

namespace tailgame {

/// Strict-improvement threshold used by the Nash checks.
inline constexpr double kDeviationThreshold = 1e-9;
inline constexpr double kProfileTolerance = 1e-9;
inline constexpr double kFictitiousWindowShare = 0.1;
inline constexpr double kFictitiousDrift = 1e-3;

enum class PayoffKind { Categorical, Density, Stages };
enum class Player { Row, Column };

const char* to_string(PayoffKind kind) noexcept;
const char* to_string(Player player) noexcept;

/// Zero-sum n x m game whose cells are distributions. The row player
/// maximizes (or minimizes) the payoff order, the column player does the
/// opposite. The Stages kind holds real matrices A_1..A_d directly, most
/// significant first.
class DistributionGame {
 public:
  /// Cells are listed row by row.
  static DistributionGame categorical(std::size_t rows, std::size_t cols,
                                      std::vector<CategoricalPayoff> cells,
                                      Sense row_sense = Sense::Maximize);
  static DistributionGame densities(std::size_t rows, std::size_t cols,
                                    std::vector<PiecewisePolyDensity> cells,
                                    Sense row_sense = Sense::Maximize);
  static DistributionGame stages(std::vector<Matrix> stages, Sense row_sense = Sense::Maximize);

  PayoffKind kind() const noexcept { return kind_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Sense row_sense() const noexcept { return row_sense_; }
  /// Number of lexicographic stages d (K for categorical games).
  std::size_t stage_count() const;

  const CategoricalPayoff& categorical_cell(std::size_t i, std::size_t j) const;
  const PiecewisePolyDensity& density_cell(std::size_t i, std::size_t j) const;
  /// A_1..A_d. Throws RequiresCategorical for density games.
  const std::vector<Matrix>& stage_matrices() const;

 private:
  DistributionGame() = default;

  PayoffKind kind_ = PayoffKind::Stages;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Sense row_sense_ = Sense::Maximize;
  std::vector<CategoricalPayoff> categorical_;
  std::vector<PiecewisePolyDensity> densities_;
  std::vector<Matrix> stages_;
};

struct MixedProfile {
  std::vector<double> x;
  std::vector<double> y;
};

/// Throws DimensionMismatch on wrong lengths, InvalidInput off the simplex.
void check_profile(const DistributionGame& game, const MixedProfile& profile);

/// Stage values for Stages games (most significant first).
using MixedPayoff = std::variant<CategoricalPayoff, PiecewisePolyDensity, std::vector<double>>;

MixedPayoff mixed_payoff(const DistributionGame& game, const MixedProfile& profile);

/// A_1 = coordinate K masses, ..., A_K = coordinate 1 masses.
std::vector<Matrix> game_sequence(const DistributionGame& game);

/// Replaces every density cell by its masses on the given cells.
DistributionGame discretize_game(const DistributionGame& game, std::span<const double> cutpoints);

/// Player payoff values x^T A_k y for every stage.
std::vector<double> stage_values(const DistributionGame& game, const MixedProfile& profile);

struct StageRecord {
  LPSolution row;
  LPSolution column;
};

struct LexEquilibrium {
  MixedProfile profile;
  std::vector<double> values;
  std::vector<StageRecord> stage_log;
};

LexEquilibrium lex_equilibrium(const DistributionGame& game);

struct FictitiousPlayResult {
  MixedProfile profile;
  long long rounds = 0;
  bool converged = false;
};

FictitiousPlayResult fictitious_play(const DistributionGame& game, double epsilon, long long max_rounds);

struct Deviation {
  Player player = Player::Row;
  std::size_t strategy = 0;
  /// Payoffs in the game's natural coordinates (categories 1..K, or stages).
  std::vector<double> baseline;
  std::vector<double> deviated;
  /// First stage (1 = most significant) where the two payoffs differ.
  std::size_t decisive_stage = 0;
};

struct NashReport {
  bool is_nash = true;
  std::optional<Deviation> witness;
  std::vector<Deviation> improving;
};

NashReport verify_nash(const DistributionGame& game, const MixedProfile& profile);

struct Punishment {
  std::size_t opponent_strategy = 0;
  std::size_t stage = 0;
  double baseline = 0.0;
  double punished = 0.0;
};

/// A pure deviation that strictly improves `player` in stage `improved_stage`.
struct DeviationCheck {
  Player player = Player::Row;
  std::size_t strategy = 0;
  std::size_t improved_stage = 0;
  double baseline = 0.0;
  double deviated = 0.0;
  std::optional<Punishment> punishment;
};

struct LexNashReport {
  bool is_lex_nash = true;
  std::vector<DeviationCheck> deviations;
};

LexNashReport verify_lex_nash(const DistributionGame& game, const MixedProfile& profile);

}  // namespace tailgame
