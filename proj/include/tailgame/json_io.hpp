#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tailgame/approx.hpp"
#include "tailgame/density.hpp"
#include "tailgame/game.hpp"
#include "tailgame/tailorder.hpp"

namespace tailgame {

using Json = nlohmann::json;  // std::map-backed, so keys come out sorted

/// Throws ParseError on malformed text.
Json parse_json(std::string_view text);

/// Sorted keys, two-space indent, floats at 17 significant digits, non-finite
/// numbers as null. Deterministic byte-for-byte.
std::string write_json(const Json& value);

/// {"breakpoints":[...], "pieces":[[c0,...],...]} with optional
/// "basis": "monomial" | "bernstein" (per-piece Bernstein coefficients on the
/// piece interval) and "continuous": bool.
PiecewisePolyDensity density_from_json(const Json& j);
Json density_to_json(const PiecewisePolyDensity& f);

/// One real per line; blank lines and '#' comments skipped.
std::vector<double> parse_samples_csv(std::string_view text);

/// Kinds "categorical" (payoffs rows x cols x K), "density" (payoffs rows x
/// cols of density objects) and "stages" (real matrices, most significant
/// first). "row_player" is "maximize" (default) or "minimize".
DistributionGame game_from_json(const Json& j);

Json approximation_to_json(const ApproximationResult& r);
Json ordering_to_json(const Ordering& o);
Json profile_to_json(const MixedProfile& p);
Json lex_equilibrium_to_json(const LexEquilibrium& eq);
Json nash_report_to_json(const NashReport& r);
Json lex_nash_report_to_json(const LexNashReport& r);
Json fictitious_play_to_json(const FictitiousPlayResult& r);

}  // namespace tailgame
