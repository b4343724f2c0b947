#include "tailgame/tailgame.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "tailgame/approx.hpp"
#include "tailgame/errors.hpp"
#include "tailgame/game.hpp"
#include "tailgame/json_io.hpp"
#include "tailgame/lp.hpp"
#include "tailgame/tailorder.hpp"

struct tg_density {
  tailgame::PiecewisePolyDensity value;
};

struct tg_target {
  tailgame::TargetDensity value;
};

struct tg_game {
  tailgame::DistributionGame value;
};

namespace {

using namespace tailgame;

std::string& last_error() {
  thread_local std::string message;
  return message;
}

tg_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return TG_INVALID_INPUT;
    case ErrorCode::PreconditionViolation: return TG_PRECONDITION_VIOLATION;
    case ErrorCode::RangeError: return TG_RANGE_ERROR;
    case ErrorCode::OverflowError: return TG_OVERFLOW_ERROR;
    case ErrorCode::EmptyInput: return TG_EMPTY_INPUT;
    case ErrorCode::DegenerateData: return TG_DEGENERATE_DATA;
    case ErrorCode::DegreeTooLarge: return TG_DEGREE_TOO_LARGE;
    case ErrorCode::ZeroMass: return TG_ZERO_MASS;
    case ErrorCode::NoConvergence: return TG_NO_CONVERGENCE;
    case ErrorCode::SupportMismatch: return TG_SUPPORT_MISMATCH;
    case ErrorCode::PartitionMismatch: return TG_PARTITION_MISMATCH;
    case ErrorCode::NotComparable: return TG_NOT_COMPARABLE;
    case ErrorCode::DimensionMismatch: return TG_DIMENSION_MISMATCH;
    case ErrorCode::BadCutpoints: return TG_BAD_CUTPOINTS;
    case ErrorCode::NumericalFailure: return TG_NUMERICAL_FAILURE;
    case ErrorCode::Infeasible: return TG_INFEASIBLE;
    case ErrorCode::RequiresCategorical: return TG_REQUIRES_CATEGORICAL;
    case ErrorCode::ParseError: return TG_PARSE_ERROR;
  }
  return TG_INTERNAL_ERROR;
}

template <class F>
tg_status guarded(F&& body) {
  try {
    body();
    last_error().clear();
    return TG_OK;
  } catch (const Error& e) {
    last_error() = e.what();
    return map_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error() = std::string("malformed JSON: ") + e.what();
    return TG_INVALID_INPUT;
  } catch (const std::bad_alloc&) {
    last_error() = "out of memory";
    return TG_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error() = e.what();
    return TG_INTERNAL_ERROR;
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) fail(ErrorCode::InvalidInput, std::string(name) + " must not be NULL");
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const Json& j, char** out) {
  if (out != nullptr) *out = duplicate(write_json(j));
}

std::vector<double> copy_of(const double* p, std::size_t n) {
  if (n > 0) require(p, "array");
  return n == 0 ? std::vector<double>{} : std::vector<double>(p, p + n);
}

tg_order to_c(Order o) {
  switch (o) {
    case Order::Less: return TG_LESS;
    case Order::Greater: return TG_GREATER;
    default: return TG_EQUAL;
  }
}

MixedProfile profile_of(const double* x, std::size_t nx, const double* y, std::size_t ny) {
  return {copy_of(x, nx), copy_of(y, ny)};
}

tg_status approximation(const tg_target* t, double epsilon, int grid_size, tg_density** out, char** out_json,
                        std::optional<int> degree) {
  return guarded([&] {
    require(t, "target");
    const int grid = grid_size <= 0 ? kDefaultCertificationGrid : grid_size;
    ApproximationResult r =
        degree ? approximate_at(t->value, *degree, epsilon, grid) : degree_search(t->value, epsilon, grid);
    emit(approximation_to_json(r), out_json);
    if (out != nullptr) *out = new tg_density{std::move(r.density)};
  });
}

}  // namespace

extern "C" {

const char* tg_last_error(void) { return last_error().c_str(); }

const char* tg_status_name(tg_status status) {
  switch (status) {
    case TG_OK: return "Ok";
    case TG_INVALID_INPUT: return "InvalidInput";
    case TG_PRECONDITION_VIOLATION: return "PreconditionViolation";
    case TG_RANGE_ERROR: return "RangeError";
    case TG_OVERFLOW_ERROR: return "OverflowError";
    case TG_EMPTY_INPUT: return "EmptyInput";
    case TG_DEGENERATE_DATA: return "DegenerateData";
    case TG_DEGREE_TOO_LARGE: return "DegreeTooLarge";
    case TG_ZERO_MASS: return "ZeroMass";
    case TG_NO_CONVERGENCE: return "NoConvergence";
    case TG_SUPPORT_MISMATCH: return "SupportMismatch";
    case TG_PARTITION_MISMATCH: return "PartitionMismatch";
    case TG_NOT_COMPARABLE: return "NotComparable";
    case TG_DIMENSION_MISMATCH: return "DimensionMismatch";
    case TG_BAD_CUTPOINTS: return "BadCutpoints";
    case TG_NUMERICAL_FAILURE: return "NumericalFailure";
    case TG_INFEASIBLE: return "Infeasible";
    case TG_REQUIRES_CATEGORICAL: return "RequiresCategorical";
    case TG_PARSE_ERROR: return "ParseError";
    case TG_INTERNAL_ERROR: return "InternalError";
  }
  return "Unknown";
}

int tg_exit_code(tg_status status) {
  switch (status) {
    case TG_OK: return 0;
    case TG_NO_CONVERGENCE: return 2;
    case TG_NUMERICAL_FAILURE:
    case TG_OVERFLOW_ERROR:
    case TG_INFEASIBLE:
    case TG_INTERNAL_ERROR: return 3;
    default: return 1;
  }
}

void tg_string_free(char* s) { std::free(s); }

tg_status tg_density_from_json(const char* json, tg_density** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new tg_density{density_from_json(parse_json(json))};
  });
}

tg_status tg_density_to_json(const tg_density* f, char** out_json) {
  return guarded([&] {
    require(f, "density");
    require(out_json, "out_json");
    emit(density_to_json(f->value), out_json);
  });
}

void tg_density_free(tg_density* f) { delete f; }

tg_status tg_density_support(const tg_density* f, double* a, double* b) {
  return guarded([&] {
    require(f, "density");
    if (a != nullptr) *a = f->value.a();
    if (b != nullptr) *b = f->value.b();
  });
}

tg_status tg_density_eval(const tg_density* f, double x, double* out) {
  return guarded([&] {
    require(f, "density");
    require(out, "out");
    *out = f->value(x);
  });
}

tg_status tg_density_moment(const tg_density* f, int n, double* out) {
  return guarded([&] {
    require(f, "density");
    require(out, "out");
    *out = moment(f->value, n);
  });
}

tg_status tg_density_validate(const tg_density* f, int* valid, char** out_json) {
  return guarded([&] {
    require(f, "density");
    const ValidationReport r = validate(f->value);
    if (valid != nullptr) *valid = r.valid ? 1 : 0;
    emit(Json{{"mass", r.mass}, {"min_value", r.min_value}, {"valid", r.valid}, {"violations", r.violations}},
         out_json);
  });
}

tg_status tg_target_from_density(const tg_density* f, tg_target** out) {
  return guarded([&] {
    require(f, "density");
    require(out, "out");
    *out = new tg_target{TargetDensity::from_density(f->value)};
  });
}

tg_status tg_target_from_samples(const double* samples, size_t n, const double* bandwidth, tg_target** out) {
  return guarded([&] {
    require(out, "out");
    const std::vector<double> xs = copy_of(samples, n);
    std::optional<double> h;
    if (bandwidth != nullptr) h = *bandwidth;
    *out = new tg_target{kde_from_samples(xs, h)};
  });
}

void tg_target_free(tg_target* t) { delete t; }

tg_status tg_target_support(const tg_target* t, double* a, double* b) {
  return guarded([&] {
    require(t, "target");
    if (a != nullptr) *a = t->value.a();
    if (b != nullptr) *b = t->value.b();
  });
}

tg_status tg_target_eval(const tg_target* t, double x, double* out) {
  return guarded([&] {
    require(t, "target");
    require(out, "out");
    *out = t->value(x);
  });
}

tg_status tg_parse_samples(const char* text, double** out, size_t* n) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    require(n, "n");
    const std::vector<double> xs = parse_samples_csv(text);
    *out = static_cast<double*>(std::malloc(std::max<std::size_t>(1, xs.size()) * sizeof(double)));
    if (*out == nullptr) throw std::bad_alloc();
    std::copy(xs.begin(), xs.end(), *out);
    *n = xs.size();
  });
}

void tg_doubles_free(double* p) { std::free(p); }

tg_status tg_degree_search(const tg_target* t, double epsilon, int grid_size, tg_density** out, char** out_json) {
  return approximation(t, epsilon, grid_size, out, out_json, std::nullopt);
}

tg_status tg_approximate_at(const tg_target* t, int degree, double epsilon, int grid_size, tg_density** out,
                            char** out_json) {
  return approximation(t, epsilon, grid_size, out, out_json, degree);
}

tg_status tg_tail_compare(const tg_density* f, const tg_density* g, tg_order* out) {
  return guarded([&] {
    require(f, "f");
    require(g, "g");
    require(out, "out");
    *out = to_c(tail_compare(f->value, g->value).order);
  });
}

tg_status tg_compare_report(const tg_density* f, const tg_density* g, int n_max, char** out_json) {
  return guarded([&] {
    require(f, "f");
    require(g, "g");
    require(out_json, "out_json");
    const Ordering o = tail_compare(f->value, g->value);
    Json report = ordering_to_json(o);
    if (o.order != Order::Equal) {
      const std::optional<int> n = o.order == Order::Less ? moment_dominance_index(f->value, g->value, n_max)
                                                          : moment_dominance_index(g->value, f->value, n_max);
      report["dominance_index"] = n ? Json(*n) : Json(nullptr);
      report["moments_checked"] = n_max;
    }
    emit(report, out_json);
  });
}

tg_status tg_moment_dominance_index(const tg_density* f, const tg_density* g, int n_max, int* found, int* index) {
  return guarded([&] {
    require(f, "f");
    require(g, "g");
    require(found, "found");
    const std::optional<int> n = moment_dominance_index(f->value, g->value, n_max);
    *found = n ? 1 : 0;
    if (index != nullptr) *index = n.value_or(0);
  });
}

tg_status tg_discretize(const tg_density* f, const double* cutpoints, size_t n_cut, double* masses) {
  return guarded([&] {
    require(f, "density");
    require(masses, "masses");
    const CategoricalPayoff p = discretize(f->value, copy_of(cutpoints, n_cut));
    std::copy(p.mass().begin(), p.mass().end(), masses);
  });
}

tg_status tg_discretize_report(const tg_density* f, const double* values, size_t n, int as_quantiles,
                               char** out_json) {
  return guarded([&] {
    require(f, "density");
    require(out_json, "out_json");
    std::vector<double> cuts = copy_of(values, n);
    if (as_quantiles != 0) cuts = quantile_cutpoints(f->value, cuts);
    const CategoricalPayoff p = discretize(f->value, cuts);
    emit(Json{{"cutpoints", cuts}, {"masses", p.mass()}}, out_json);
  });
}

tg_status tg_quantile_cutpoints(const tg_density* f, const double* levels, size_t n, double* out) {
  return guarded([&] {
    require(f, "density");
    if (n > 0) require(out, "out");
    const std::vector<double> c = quantile_cutpoints(f->value, copy_of(levels, n));
    std::copy(c.begin(), c.end(), out);
  });
}

tg_status tg_categorical_compare(const double* p, const double* q, size_t k, tg_order* out) {
  return guarded([&] {
    require(out, "out");
    *out = to_c(categorical_lex_compare(CategoricalPayoff(copy_of(p, k)), CategoricalPayoff(copy_of(q, k))).order);
  });
}

tg_status tg_solve_zero_sum(const double* payoff, size_t rows, size_t cols, double* x, double* y, double* value) {
  return guarded([&] {
    require(payoff, "payoff");
    if (rows == 0 || cols == 0) fail(ErrorCode::DimensionMismatch, "payoff matrix is empty");
    Matrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) a(i, j) = payoff[i * cols + j];
    const ZeroSumSolution s = solve_zero_sum(a);
    if (x != nullptr) std::copy(s.x.begin(), s.x.end(), x);
    if (y != nullptr) std::copy(s.y.begin(), s.y.end(), y);
    if (value != nullptr) *value = s.value;
  });
}

tg_status tg_game_from_json(const char* json, tg_game** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new tg_game{game_from_json(parse_json(json))};
  });
}

void tg_game_free(tg_game* g) { delete g; }

tg_status tg_game_shape(const tg_game* g, size_t* rows, size_t* cols, size_t* stages) {
  return guarded([&] {
    require(g, "game");
    if (rows != nullptr) *rows = g->value.rows();
    if (cols != nullptr) *cols = g->value.cols();
    if (stages != nullptr) *stages = g->value.kind() == PayoffKind::Density ? 0 : g->value.stage_count();
  });
}

tg_status tg_game_discretize(const tg_game* g, const double* cutpoints, size_t n_cut, tg_game** out) {
  return guarded([&] {
    require(g, "game");
    require(out, "out");
    *out = new tg_game{discretize_game(g->value, copy_of(cutpoints, n_cut))};
  });
}

tg_status tg_game_solve(const tg_game* g, char** out_json) {
  return guarded([&] {
    require(g, "game");
    require(out_json, "out_json");
    const LexEquilibrium eq = lex_equilibrium(g->value);
    Json report = lex_equilibrium_to_json(eq);
    report["nash"] = nash_report_to_json(verify_nash(g->value, eq.profile));
    report["lex_nash"] = lex_nash_report_to_json(verify_lex_nash(g->value, eq.profile));
    emit(report, out_json);
  });
}

tg_status tg_game_fictitious_play(const tg_game* g, double epsilon, long long max_rounds, char** out_json) {
  return guarded([&] {
    require(g, "game");
    require(out_json, "out_json");
    const FictitiousPlayResult r = fictitious_play(g->value, epsilon, max_rounds);
    Json report = fictitious_play_to_json(r);
    report["nash"] = nash_report_to_json(verify_nash(g->value, r.profile));
    emit(report, out_json);
  });
}

tg_status tg_game_verify(const tg_game* g, const double* x, size_t nx, const double* y, size_t ny, char** out_json) {
  return guarded([&] {
    require(g, "game");
    require(out_json, "out_json");
    const MixedProfile p = profile_of(x, nx, y, ny);
    emit(Json{{"lex_nash", lex_nash_report_to_json(verify_lex_nash(g->value, p))},
              {"nash", nash_report_to_json(verify_nash(g->value, p))},
              {"profile", profile_to_json(p)},
              {"values", stage_values(g->value, p)}},
         out_json);
  });
}

tg_status tg_game_mixed_payoff(const tg_game* g, const double* x, size_t nx, const double* y, size_t ny,
                               double* out) {
  return guarded([&] {
    require(g, "game");
    require(out, "out");
    const MixedPayoff m = mixed_payoff(g->value, profile_of(x, nx, y, ny));
    if (const auto* c = std::get_if<CategoricalPayoff>(&m)) {
      std::copy(c->mass().begin(), c->mass().end(), out);
    } else if (const auto* v = std::get_if<std::vector<double>>(&m)) {
      std::copy(v->begin(), v->end(), out);
    } else {
      fail(ErrorCode::RequiresCategorical, "mixed payoff of a density game is a density");
    }
  });
}

}  // extern "C"
