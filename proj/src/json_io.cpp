#include "tailgame/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tailgame/errors.hpp"

namespace tailgame {

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
  }
}

namespace {

void write_value(const Json& v, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (v.type()) {
    case Json::value_t::null:
      out += "null";
      break;
    case Json::value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      break;
    case Json::value_t::number_integer:
      out += std::to_string(v.get<std::int64_t>());
      break;
    case Json::value_t::number_unsigned:
      out += std::to_string(v.get<std::uint64_t>());
      break;
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) {
        out += "null";
        break;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", d);
      out += buf;
      break;
    }
    case Json::value_t::string:
      out += v.dump();
      break;
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        break;
      }
      const bool flat = std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); });
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += flat ? ", " : ",";
        if (!flat) out += "\n" + pad;
        write_value(e, out, indent + 2);
        first = false;
      }
      if (!flat) out += "\n" + close;
      out += ']';
      break;
    }
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        break;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, e] : v.items()) {
        if (!first) out += ',';
        out += "\n" + pad + Json(key).dump() + ": ";
        write_value(e, out, indent + 2);
        first = false;
      }
      out += "\n" + close + '}';
      break;
    }
    default:
      fail(ErrorCode::InvalidInput, "unsupported JSON value");
  }
}

double as_number(const Json& j, const char* what) {
  if (!j.is_number()) fail(ErrorCode::InvalidInput, std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<double> as_numbers(const Json& j, const char* what) {
  if (!j.is_array()) fail(ErrorCode::InvalidInput, std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : j) out.push_back(as_number(e, what));
  return out;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) fail(ErrorCode::InvalidInput, "expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) fail(ErrorCode::InvalidInput, std::string("missing field \"") + key + "\"");
  return *it;
}

std::size_t as_count(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 1)
    fail(ErrorCode::InvalidInput, std::string(what) + " must be a positive integer");
  return static_cast<std::size_t>(j.get<std::int64_t>());
}

Matrix as_matrix(const Json& j, const char* what) {
  if (!j.is_array()) fail(ErrorCode::InvalidInput, std::string(what) + " must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) rows.push_back(as_numbers(r, what));
  return Matrix::from_rows(rows);
}

Json numbers(const std::vector<double>& v) { return Json(v); }

Sense parse_sense(const Json& j) {
  const auto it = j.find("row_player");
  if (it == j.end()) return Sense::Maximize;
  if (*it == "maximize") return Sense::Maximize;
  if (*it == "minimize") return Sense::Minimize;
  fail(ErrorCode::InvalidInput, "row_player must be \"maximize\" or \"minimize\"");
}

}  // namespace

std::string write_json(const Json& value) {
  std::string out;
  write_value(value, out, 0);
  out += '\n';
  return out;
}

PiecewisePolyDensity density_from_json(const Json& j) {
  const std::vector<double> r = as_numbers(field(j, "breakpoints"), "breakpoints");
  const Json& pieces = field(j, "pieces");
  if (!pieces.is_array()) fail(ErrorCode::InvalidInput, "pieces must be an array of coefficient arrays");
  bool bernstein = false;
  if (const auto it = j.find("basis"); it != j.end()) {
    if (*it == "bernstein") {
      bernstein = true;
    } else if (*it != "monomial") {
      fail(ErrorCode::InvalidInput, "basis must be \"monomial\" or \"bernstein\"");
    }
  }
  bool continuous = false;
  if (const auto it = j.find("continuous"); it != j.end()) {
    if (!it->is_boolean()) fail(ErrorCode::InvalidInput, "continuous must be a boolean");
    continuous = it->get<bool>();
  }
  if (r.size() < 2 || pieces.size() + 1 != r.size())
    fail(ErrorCode::InvalidInput, "need one piece per breakpoint interval");
  std::vector<Polynomial> polys;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    std::vector<double> c = as_numbers(pieces[i], "piece coefficients");
    if (c.empty()) fail(ErrorCode::InvalidInput, "piece has no coefficients");
    polys.push_back(bernstein ? Polynomial::bernstein(std::move(c), r[i], r[i + 1]) : Polynomial(std::move(c)));
  }
  return PiecewisePolyDensity(r, std::move(polys), continuous);
}

Json density_to_json(const PiecewisePolyDensity& f) {
  const auto& r = f.breakpoints();
  const bool bernstein =
      std::any_of(f.pieces().begin(), f.pieces().end(), [](const Polynomial& p) { return p.is_bernstein(); });
  Json pieces = Json::array();
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    const Polynomial p = bernstein ? f.pieces()[i].to_bernstein(r[i], r[i + 1]) : f.pieces()[i];
    pieces.push_back(std::vector<double>(p.coeffs().begin(), p.coeffs().end()));
  }
  return Json{{"basis", bernstein ? "bernstein" : "monomial"},
              {"breakpoints", r},
              {"continuous", f.continuous()},
              {"pieces", pieces}};
}

std::vector<double> parse_samples_csv(std::string_view text) {
  std::vector<double> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r,");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r,");
    line = line.substr(first, last - first + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != line.size())
      fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": not a number: " + line);
    out.push_back(v);
  }
  return out;
}

DistributionGame game_from_json(const Json& j) {
  const Json& kind = field(j, "kind");
  const Sense sense = parse_sense(j);
  if (kind == "stages") {
    const Json& stages = field(j, "stages");
    if (!stages.is_array() || stages.empty()) fail(ErrorCode::InvalidInput, "stages must be a nonempty array");
    std::vector<Matrix> mats;
    for (const auto& s : stages) mats.push_back(as_matrix(s, "stage matrix"));
    DistributionGame g = DistributionGame::stages(std::move(mats), sense);
    if (j.contains("rows") && as_count(j["rows"], "rows") != g.rows())
      fail(ErrorCode::DimensionMismatch, "rows does not match the stage matrices");
    if (j.contains("cols") && as_count(j["cols"], "cols") != g.cols())
      fail(ErrorCode::DimensionMismatch, "cols does not match the stage matrices");
    return g;
  }

  const std::size_t rows = as_count(field(j, "rows"), "rows");
  const std::size_t cols = as_count(field(j, "cols"), "cols");
  const Json& payoffs = field(j, "payoffs");
  if (!payoffs.is_array() || payoffs.size() != rows)
    fail(ErrorCode::DimensionMismatch, "payoffs must have one entry per row");
  for (const auto& row : payoffs)
    if (!row.is_array() || row.size() != cols)
      fail(ErrorCode::DimensionMismatch, "every payoff row must have one cell per column");

  if (kind == "categorical") {
    std::vector<CategoricalPayoff> cells;
    for (const auto& row : payoffs)
      for (const auto& cell : row) cells.emplace_back(as_numbers(cell, "categorical payoff"));
    if (j.contains("K") && as_count(j["K"], "K") != cells.front().size())
      fail(ErrorCode::DimensionMismatch, "K does not match the payoff length");
    return DistributionGame::categorical(rows, cols, std::move(cells), sense);
  }
  if (kind == "density") {
    std::vector<PiecewisePolyDensity> cells;
    for (const auto& row : payoffs)
      for (const auto& cell : row) cells.push_back(density_from_json(cell));
    return DistributionGame::densities(rows, cols, std::move(cells), sense);
  }
  fail(ErrorCode::InvalidInput, "kind must be \"categorical\", \"density\" or \"stages\"");
}

Json approximation_to_json(const ApproximationResult& r) {
  Json out = density_to_json(r.density);
  out["metadata"] = Json{{"alpha", r.alpha}, {"degree", r.degree}, {"epsilon", r.epsilon}, {"sup_error", r.sup_error}};
  Json trace = Json::array();
  for (const auto& t : r.trace)
    trace.push_back(Json{{"degree", t.degree}, {"passed", t.passed}, {"phase", to_string(t.phase)},
                         {"sup_error", t.sup_error}});
  out["trace"] = trace;
  return out;
}

Json ordering_to_json(const Ordering& o) {
  Json out{{"order", to_string(o.order)}};
  if (o.witness) {
    out["witness"] = Json{{"derivative_order", o.witness->derivative_order},
                          {"endpoint", o.witness->hi},
                          {"lo", o.witness->lo},
                          {"hi", o.witness->hi},
                          {"subinterval", o.witness->position}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

Json profile_to_json(const MixedProfile& p) { return Json{{"x", numbers(p.x)}, {"y", numbers(p.y)}}; }

Json lex_equilibrium_to_json(const LexEquilibrium& eq) {
  Json stages = Json::array();
  for (std::size_t k = 0; k < eq.stage_log.size(); ++k) {
    const auto& s = eq.stage_log[k];
    auto side = [](const LPSolution& lp) {
      return Json{{"dual_strategy", numbers(lp.dual_strategy)}, {"strategy", numbers(lp.strategy)},
                  {"value", lp.value}};
    };
    stages.push_back(Json{{"column", side(s.column)}, {"row", side(s.row)}, {"stage", k + 1}});
  }
  return Json{{"profile", profile_to_json(eq.profile)}, {"stages", stages}, {"values", numbers(eq.values)}};
}

namespace {

Json deviation_to_json(const Deviation& d) {
  return Json{{"baseline", numbers(d.baseline)},
              {"decisive_stage", d.decisive_stage},
              {"deviated", numbers(d.deviated)},
              {"player", to_string(d.player)},
              {"strategy", d.strategy}};
}

}  // namespace

Json nash_report_to_json(const NashReport& r) {
  Json improving = Json::array();
  for (const auto& d : r.improving) improving.push_back(deviation_to_json(d));
  return Json{{"improving", improving},
              {"is_nash", r.is_nash},
              {"witness", r.witness ? deviation_to_json(*r.witness) : Json(nullptr)}};
}

Json lex_nash_report_to_json(const LexNashReport& r) {
  Json devs = Json::array();
  for (const auto& d : r.deviations) {
    Json p = nullptr;
    if (d.punishment)
      p = Json{{"baseline", d.punishment->baseline},
               {"opponent_strategy", d.punishment->opponent_strategy},
               {"punished", d.punishment->punished},
               {"stage", d.punishment->stage}};
    devs.push_back(Json{{"baseline", d.baseline},
                        {"deviated", d.deviated},
                        {"improved_stage", d.improved_stage},
                        {"player", to_string(d.player)},
                        {"punishment", p},
                        {"strategy", d.strategy}});
  }
  return Json{{"deviations", devs}, {"is_lex_nash", r.is_lex_nash}};
}

Json fictitious_play_to_json(const FictitiousPlayResult& r) {
  return Json{{"converged", r.converged}, {"profile", profile_to_json(r.profile)}, {"rounds", r.rounds}};
}

}  // namespace tailgame
