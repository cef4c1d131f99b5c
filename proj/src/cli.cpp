/*
   Copyright 2026 The hyptrace Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "hyptrace/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hyptrace/arith.hpp"
#include "hyptrace/charsums.hpp"
#include "hyptrace/density.hpp"
#include "hyptrace/ensemble.hpp"
#include "hyptrace/errors.hpp"
#include "hyptrace/lfunction.hpp"
#include "hyptrace/log.hpp"
#include "hyptrace/quadchar.hpp"
#include "hyptrace/rmt.hpp"

#ifndef HYPTRACE_VERSION
#define HYPTRACE_VERSION "unknown"
#endif

namespace hyptrace::cli {

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string cell_text(const Cell& c) {
  if (std::holds_alternative<std::int64_t>(c)) return std::to_string(std::get<std::int64_t>(c));
  if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return "";
}

Cell big(const BigInt& v) { return to_decimal(v); }
Cell rat(const Rational& v) { return to_decimal(v); }
Cell integer(std::int64_t v) { return v; }
Cell real(double v) { return v; }

// Bad configuration detected after parsing.
class InvalidConfig : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  RunConfig config;
  const Field* field = nullptr;
};

const Field& field_for(std::uint64_t q) {
  const auto [p, e] = split_prime_power(q);
  return field_make(p, e);
}

int resolve_n_max(const RunConfig& c, int fallback) {
  const int n_max = c.n_max.value_or(fallback);
  if (n_max < 1) throw InvalidConfig("--n-max must be >= 1");
  return n_max;
}

EnsembleSpec ensemble_spec(const Context& ctx, int g) {
  EnsembleSpec spec{ctx.field, g};
  if (ctx.config.sample > 0) {
    spec.mode = EnsembleMode::sample;
    spec.sample_count = ctx.config.sample;
    spec.seed = ctx.config.seed;
  }
  spec.budget = ctx.config.budget;
  validate(spec);
  return spec;
}

Poly curve_from_flag(const Context& ctx) {
  if (ctx.config.poly.empty()) throw InvalidConfig("--poly is required");
  Poly D = parse_poly(*ctx.field, ctx.config.poly);
  if (D.degree() < 1 || !D.is_monic()) throw InvalidConfig("--poly must be monic of positive degree");
  if (!is_squarefree(D)) throw InvalidConfig("--poly must be squarefree");
  return D;
}

// avg-trace

Document cmd_avg_trace(const Context& ctx) {
  const int g = ctx.config.g;
  const int n_max = resolve_n_max(ctx.config, 4 * g);
  const EnsembleAccumulator acc = accumulate(ensemble_spec(ctx, g), n_max, {}, ctx.config.threads);
  const EnsembleReport rep = report(acc, ctx.config.warn_ratio);
  Document doc;
  doc.notes = {{"curves", std::to_string(rep.curve_count)}, {"mode", rep.exhaustive ? "exhaustive" : "sample"}};
  Table t{"avg_trace",
          {"n", "sum_s_n", "curves", "avg_trace", "std_error", "prediction", "prediction_float", "usp_moment",
           "residual", "error_scale", "ratio", "prime_part", "square_part", "higher_part"},
          {}};
  for (const auto& r : rep.rows)
    t.rows.push_back({integer(r.n), big(r.numerator), integer(static_cast<std::int64_t>(rep.curve_count)),
                      real(r.average), real(r.std_error), rat(r.prediction), real(to_double(r.prediction)),
                      integer(r.usp_moment), real(r.residual), real(r.error_scale), real(r.ratio), big(r.prime_part),
                      big(r.square_part), big(r.higher_part)});
  doc.tables.push_back(std::move(t));
  return doc;
}

// pair

Document cmd_pair(const Context& ctx) {
  const int g = ctx.config.g;
  std::vector<std::pair<int, int>> pairs;
  int n_max = 0;
  if (ctx.config.m || ctx.config.n) {
    if (!ctx.config.m || !ctx.config.n) throw InvalidConfig("--m and --n go together");
    int m = *ctx.config.m, n = *ctx.config.n;
    if (m < 1 || n < 1) throw InvalidConfig("--m and --n must be >= 1");
    if (m > n) std::swap(m, n);
    pairs.emplace_back(m, n);
    n_max = n;
  } else {
    n_max = resolve_n_max(ctx.config, 2 * g);
    for (int m = 1; m <= n_max; ++m)
      for (int n = m; n <= n_max; ++n) pairs.emplace_back(m, n);
  }
  const EnsembleAccumulator acc = accumulate(ensemble_spec(ctx, g), n_max, pairs, ctx.config.threads);
  const EnsembleReport rep = report(acc, ctx.config.warn_ratio);
  Document doc;
  doc.notes = {{"curves", std::to_string(rep.curve_count)}, {"mode", rep.exhaustive ? "exhaustive" : "sample"}};
  Table t{"pairs",
          {"m", "n", "sum_s_m_s_n", "curves", "avg_pair", "prediction", "prediction_float", "usp_moment", "residual"},
          {}};
  for (const auto& r : rep.pair_rows) {
    Cell pred, pred_f, resid;
    if (r.prediction) {
      pred = rat(*r.prediction);
      pred_f = real(to_double(*r.prediction));
    }
    if (r.residual) resid = real(*r.residual);
    t.rows.push_back({integer(r.m), integer(r.n), big(r.numerator), integer(static_cast<std::int64_t>(rep.curve_count)),
                      real(r.average), pred, pred_f, integer(r.usp_moment), resid});
  }
  doc.tables.push_back(std::move(t));
  return doc;
}

// charsum

Document cmd_charsum(const Context& ctx) {
  if (!ctx.config.n) throw InvalidConfig("--n is required");
  const int n = *ctx.config.n;
  if (n < 1) throw InvalidConfig("--n must be >= 1");
  const STable table = s_table(*ctx.field, n, n + 2);
  Document doc;
  Table s{"S", {"beta", "S"}, {}};
  for (int beta = 0; beta < n; ++beta) s.rows.push_back({integer(beta), big(table.values[beta])});
  doc.tables.push_back(std::move(s));
  const DualityReport dual = duality_check(*ctx.field, n);
  Table d{"duality", {"relation", "beta", "lhs", "rhs", "residual"}, {}};
  for (const auto& r : dual.rows)
    d.rows.push_back({r.relation, integer(r.beta), big(r.lhs), big(r.rhs), big(r.lhs - r.rhs)});
  doc.tables.push_back(std::move(d));
  const BoundReport bounds = bound_monitor(*ctx.field, n, ctx.config.warn_ratio);
  Table b{"bounds", {"beta", "S", "crude_ratio", "bootstrap_ratio", "warn"}, {}};
  for (const auto& r : bounds.rows) {
    Cell boot;
    if (r.bootstrap_ratio) boot = real(*r.bootstrap_ratio);
    b.rows.push_back({integer(r.beta), big(r.s_value), real(r.crude_ratio), boot, integer(r.warn ? 1 : 0)});
  }
  doc.tables.push_back(std::move(b));
  return doc;
}

// lfun

Document cmd_lfun(const Context& ctx, nlohmann::ordered_json& extra) {
  const Poly D = curve_from_flag(ctx);
  const LPolynomial L = l_function(D);
  const int n_max = resolve_n_max(ctx.config, std::max(1, 2 * L.delta));
  const FrobeniusData frob = power_sums(L, n_max);
  const std::vector<BigInt> explicit_sums = explicit_formula_sums(D, n_max);
  for (int k = 1; k <= n_max; ++k)
    if (explicit_sums[k] != -frob.s[k])
      throw IdentityFailure("power sum and explicit formula disagree at n = " + std::to_string(k));
  const std::vector<double> angles = eigenangles(L);

  Document doc;
  Table lt{"Lstar", {"b", "coeff"}, {}};
  for (std::size_t b = 0; b < L.coeffs.size(); ++b) lt.rows.push_back({integer(static_cast<std::int64_t>(b)), big(L.coeffs[b])});
  doc.tables.push_back(std::move(lt));

  Table st{"power_sums", {"n", "s_n", "points"}, {}};
  std::vector<Cell> points(n_max + 1);
  if (D.degree() % 2 == 1) {
    for (int k = 1; k <= n_max; ++k) {
      try {
        points[k] = integer(static_cast<std::int64_t>(point_count(D, k)));
      } catch (const BudgetExceeded&) {
        break;
      }
    }
  }
  for (int k = 1; k <= n_max; ++k) st.rows.push_back({integer(k), big(frob.s[k]), points[k]});
  doc.tables.push_back(std::move(st));

  Table at{"angles", {"j", "theta"}, {}};
  for (std::size_t j = 0; j < angles.size(); ++j) at.rows.push_back({integer(static_cast<std::int64_t>(j)), real(angles[j])});
  doc.tables.push_back(std::move(at));

  nlohmann::json base = to_json(frob);
  extra = nlohmann::ordered_json::object();
  for (const char* key : {"q", "D", "lambda", "delta", "Lstar", "s"}) extra[key] = base[key];
  extra["angles"] = angles;
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (int k = 1; k <= n_max; ++k) {
    if (std::holds_alternative<std::int64_t>(points[k])) pts.push_back(std::get<std::int64_t>(points[k]));
  }
  extra["points"] = pts;
  return doc;
}

// one-level

Document cmd_one_level(const Context& ctx) {
  const TestFunction fn = TestFunction::parse(ctx.config.fhat);
  Document doc;
  doc.notes = {{"fhat", fn.describe()},
               {"prime_sum", format_double(prime_sum(static_cast<std::uint32_t>(ctx.config.q)))},
               {"dev", format_double(dev(fn, static_cast<std::uint32_t>(ctx.config.q)))}};
  if (!ctx.config.poly.empty()) {
    const Poly D = curve_from_flag(ctx);
    const LPolynomial L = l_function(D);
    const int g = std::max(1, L.delta);
    const FrobeniusData frob = power_sums(L, std::max(1, fourier_terms(fn, g)));
    Table t{"curve", {"g", "fourier", "direct", "tail_bound", "window", "difference"}, {}};
    const double fourier = z_f_fourier(frob.s, L.q, fn, g);
    Cell direct, tail, window, diff;
    if (fn.has_closed_form()) {
      const DirectSum d = z_f_direct(eigenangles(L), fn, g);
      direct = real(d.value);
      tail = real(d.tail_bound);
      window = integer(d.window);
      diff = real(fourier - d.value);
    }
    t.rows.push_back({integer(g), real(fourier), direct, tail, window, diff});
    doc.tables.push_back(std::move(t));
    return doc;
  }
  if (fn.kind() != TestFunction::Kind::zero && fn.sigma() >= 2.0)
    throw InvalidConfig("ensemble runs need a test function supported inside (-2, 2)");
  std::vector<int> genera;
  for (int g = 1; g <= ctx.config.g; ++g) {
    ensemble_spec(ctx, g);
    genera.push_back(g);
  }
  EnsembleSpec base = ensemble_spec(ctx, 1);
  const auto rows = one_level_compare(base, genera, fn, ctx.config.threads);
  Table t{"one_level", {"g", "curves", "avg_z_f", "usp", "dev_over_g", "residual", "g_residual"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({integer(r.g), integer(static_cast<std::int64_t>(r.curves)), real(r.average), real(r.usp),
                      real(r.dev_over_g), real(r.residual), real(r.scaled_residual)});
  doc.tables.push_back(std::move(t));
  return doc;
}

// rmt

Document cmd_rmt(const Context& ctx) {
  const int g = ctx.config.g;
  const int n_max = resolve_n_max(ctx.config, 4 * g + 2);
  Document doc;
  Table tr{"trace_moments", {"n", "moment"}, {}};
  for (int n = 1; n <= n_max; ++n) tr.rows.push_back({integer(n), integer(usp_trace_moment(n, g))});
  doc.tables.push_back(std::move(tr));
  Table pr{"pair_moments", {"m", "n", "moment"}, {}};
  for (int m = 1; m <= n_max; ++m)
    for (int n = m; n <= n_max; ++n) pr.rows.push_back({integer(m), integer(n), integer(usp_pair_moment(m, n, g))});
  doc.tables.push_back(std::move(pr));
  const TestFunction fn = TestFunction::parse(ctx.config.fhat);
  auto fhat = [&](double u) { return fn.fhat(u); };
  Table ol{"one_level", {"fhat", "closed_form", "fourier"}, {}};
  ol.rows.push_back({fn.describe(), real(usp_one_level(fhat, g)), real(usp_one_level_fourier(fhat, g, 4 * g))});
  doc.tables.push_back(std::move(ol));
  return doc;
}

// verify

struct CheckRow {
  std::string check;
  std::uint64_t cases = 0;
  std::string status = "pass";
  std::string detail;
};

Document cmd_verify(const Context& ctx, bool& all_passed) {
  const int g = ctx.config.g;
  const Field& F = *ctx.field;
  const std::uint32_t q = F.q();
  if (ctx.config.sample > 0) throw InvalidConfig("verify runs on the exhaustive ensemble only");
  const EnsembleSpec spec = ensemble_spec(ctx, g);
  std::vector<CheckRow> rows;
  auto run_check = [&](const std::string& name, const std::function<std::uint64_t()>& body) {
    CheckRow row{name, 0, "pass", ""};
    try {
      row.cases = body();
    } catch (const IdentityFailure& e) {
      row.status = "fail";
      row.detail = e.what();
      log_event(LogLevel::error, "identity_failure", {{"check", name}, {"detail", e.what()}});
    }
    rows.push_back(row);
  };

  const int n_curve = 4 * g;
  std::uint64_t curves = 0;
  run_check("functional_equation", [&] {
    std::uint64_t count = 0;
    for_each_curve(spec, [&](const Poly& Q) {
      l_function(Q);
      ++count;
    });
    curves = count;
    return count;
  });
  run_check("weil_bound", [&] {
    std::uint64_t count = 0;
    for_each_curve(spec, [&](const Poly& Q) {
      power_sums(l_function_half(Q), n_curve);
      count += n_curve;
    });
    return count;
  });
  const int n_acc = std::max(n_curve, 2 * g + 2);
  EnsembleAccumulator acc;
  bool have_acc = false;
  run_check("newton_vs_explicit", [&] {
    acc = accumulate(spec, n_acc, {}, ctx.config.threads);
    have_acc = true;
    return acc.curve_count * static_cast<std::uint64_t>(n_acc);
  });
  run_check("curve_count", [&] {
    if (!have_acc) throw IdentityFailure("no accumulator");
    if (acc.curve_count != ensemble_size(q, g) || curves != acc.curve_count)
      throw IdentityFailure("curve count differs from (q - 1) q^{2g}");
    return std::uint64_t{1};
  });
  if (g <= 2) {
    run_check("point_counts", [&] {
      std::uint64_t count = 0;
      for_each_curve(spec, [&](const Poly& Q) {
        const FrobeniusData fr = power_sums(l_function(Q), 2);
        for (int k = 1; k <= 2; ++k) {
          const BigInt expected = big_pow(q, k) + 1 - fr.s[k];
          if (BigInt(point_count(Q, k)) != expected)
            throw IdentityFailure("point count mismatch for " + to_string(Q) + " at n = " + std::to_string(k));
          ++count;
        }
      });
      return count;
    });
  }
  run_check("prime_identity", [&] {
    if (!have_acc) throw IdentityFailure("no accumulator");
    std::uint64_t count = 0;
    for (int n = 1; n <= 2 * g + 2; ++n) {
      const PrimeIdentityResult r = avg_prime_identity_check(acc, F, n);
      if (n > g && n < 2 * g && r.prime_average_scaled != 0)
        throw IdentityFailure("prime average nonzero at n = " + std::to_string(n));
      ++count;
    }
    return count;
  });
  run_check("duality", [&] {
    std::uint64_t count = 0;
    for (int n = 1; n <= 6; ++n) count += duality_check(F, n).rows.size();
    return count;
  });
  run_check("zeta_identities", [&] {
    int d_max = 1;
    while (d_max < 2 * g + 2 && checked_pow(q, d_max + 1) <= 20000) ++d_max;
    return static_cast<std::uint64_t>(zeta_identity_check(F, d_max).rows.size());
  });
  run_check("reciprocity", [&] {
    int deg = 1;
    while (deg < 3 && checked_pow(q, deg + 1) <= 30) ++deg;
    std::vector<Poly> monics;
    for (int d = 1; d <= deg; ++d)
      for (const Poly& f : monic_polys(F, d)) monics.push_back(f);
    std::uint64_t count = 0;
    for (const Poly& a : monics)
      for (const Poly& b : monics) {
        const ReciprocityResult r = reciprocity_check(a, b);
        if (!r.holds) throw IdentityFailure("reciprocity fails for " + to_string(a) + ", " + to_string(b));
        if (jacobi(a, b) != r.lhs) throw IdentityFailure("Euclidean symbol differs for " + to_string(a) + ", " + to_string(b));
        ++count;
      }
    return count;
  });
  run_check("mobius_sigma", [&] {
    std::uint64_t count = 0;
    for (int n = 1; n <= 4; ++n) {
      const Poly& P = irreducibles(F, n).front();
      for (int alpha = 0; alpha <= 8 && checked_pow(q, alpha) <= 20000; ++alpha) {
        if (sigma(q, n, alpha) != sigma_direct(P, alpha))
          throw IdentityFailure("sigma closed form differs at n = " + std::to_string(n) + ", alpha = " + std::to_string(alpha));
        ++count;
      }
    }
    return count;
  });

  Document doc;
  Table t{"verify", {"check", "cases", "status", "detail"}, {}};
  all_passed = true;
  for (const auto& r : rows) {
    if (r.status != "pass") all_passed = false;
    t.rows.push_back({r.check, integer(static_cast<std::int64_t>(r.cases)), r.status, r.detail});
  }
  doc.tables.push_back(std::move(t));
  doc.notes = {{"result", all_passed ? "all exact identities passed" : "exact identity failures"}};
  return doc;
}

void add_ensemble_flags(CLI::App* sub, RunConfig& c) {
  sub->add_option("--q", c.q, "Field size (odd prime power)");
  sub->add_option("--g", c.g, "Genus");
  sub->add_option("--sample", c.sample, "Number of sampled curves (0: exhaustive)");
  sub->add_option("--seed", c.seed, "Sampling seed");
  sub->add_option("--budget", c.budget, "Maximum number of curves");
}

}  // namespace

std::vector<std::pair<std::string, std::string>> config_fields(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> f{{"command", c.command}, {"q", std::to_string(c.q)}};
  auto add = [&](const char* k, std::string v) { f.emplace_back(k, std::move(v)); };
  if (c.command != "lfun" && c.command != "charsum") add("g", std::to_string(c.g));
  if (c.n_max) add("n_max", std::to_string(*c.n_max));
  if (c.m) add("m", std::to_string(*c.m));
  if (c.n) add("n", std::to_string(*c.n));
  if (!c.poly.empty()) add("poly", c.poly);
  if (c.command == "one-level" || c.command == "rmt") add("fhat", c.fhat);
  if (c.command == "avg-trace" || c.command == "pair" || c.command == "one-level" || c.command == "verify") {
    add("mode", c.sample > 0 ? "sample" : "exhaustive");
    if (c.sample > 0) {
      add("sample", std::to_string(c.sample));
      add("seed", std::to_string(c.seed));
    }
    add("budget", std::to_string(c.budget));
  }
  add("format", c.format);
  return f;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& os, const Document& doc) {
  os << "# tool=hyptrace version=" << HYPTRACE_VERSION << '\n';
  os << "# config";
  for (const auto& [k, v] : doc.config) os << ' ' << k << '=' << v;
  os << '\n';
  os << "# wall_time_s=" << format_double(doc.wall_time_s) << '\n';
  for (const auto& [k, v] : doc.notes) os << "# " << k << '=' << v << '\n';
  bool first = true;
  for (const auto& t : doc.tables) {
    if (!first) os << '\n';
    first = false;
    if (doc.tables.size() > 1) os << "# table=" << t.name << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_escape(t.columns[i]);
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(cell_text(row[i]));
      os << '\n';
    }
  }
}

namespace {

nlohmann::ordered_json cell_json(const Cell& c) {
  if (std::holds_alternative<std::int64_t>(c)) return std::get<std::int64_t>(c);
  if (std::holds_alternative<double>(c)) {
    const double v = std::get<double>(c);
    if (!std::isfinite(v)) return nullptr;
    return v;
  }
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return nullptr;
}

nlohmann::ordered_json document_json(const Document& doc) {
  nlohmann::ordered_json j;
  j["tool"] = "hyptrace";
  j["version"] = HYPTRACE_VERSION;
  j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : doc.config) j["config"][k] = v;
  j["wall_time_s"] = doc.wall_time_s;
  for (const auto& [k, v] : doc.notes) j[k] = v;
  j["tables"] = nlohmann::ordered_json::object();
  for (const auto& t : doc.tables) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json r = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = cell_json(row[i]);
      rows.push_back(std::move(r));
    }
    j["tables"][t.name] = std::move(rows);
  }
  return j;
}

}  // namespace

void write_json(std::ostream& os, const Document& doc) { os << document_json(doc).dump(2) << '\n'; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Hyperelliptic L-functions and Frobenius trace statistics over F_q"};
  app.set_version_flag("--version", HYPTRACE_VERSION);
  app.require_subcommand(1);
  app.add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"auto", "csv", "json"}));
  app.add_option("--out", c.out, "Output file (default stdout)");
  app.add_option("--cache-dir", c.cache_dir, "Directory for irreducible polynomial tables");
  app.add_option("--warn-ratio", c.warn_ratio, "Residual ratio that triggers a warning");
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "debug, info, warn, error or off")
      ->check(CLI::IsMember({"debug", "info", "warn", "error", "off"}));
  app.fallthrough();

  auto* avg = app.add_subcommand("avg-trace", "Ensemble averages of tr Theta^n");
  add_ensemble_flags(avg, c);
  avg->add_option("--n-max", c.n_max, "Largest n");

  auto* pair = app.add_subcommand("pair", "Ensemble averages of tr Theta^m tr Theta^n");
  add_ensemble_flags(pair, c);
  pair->add_option("--n-max", c.n_max, "Largest index when --m/--n are not given");
  pair->add_option("--m", c.m, "First index");
  pair->add_option("--n", c.n, "Second index");

  auto* cs = app.add_subcommand("charsum", "Double character sums S(beta; n) and duality");
  cs->add_option("--q", c.q, "Field size");
  cs->add_option("--n", c.n, "Prime degree")->required();

  auto* lf = app.add_subcommand("lfun", "L-function of a single curve");
  lf->add_option("--q", c.q, "Field size");
  lf->add_option("--poly", c.poly, "Ascending comma-separated coefficients")->required();
  lf->add_option("--n-max", c.n_max, "Largest power sum");

  auto* ol = app.add_subcommand("one-level", "One-level density against USp(2g)");
  add_ensemble_flags(ol, c);
  ol->add_option("--fhat", c.fhat, "zero, triangle:S, cosine:S or file:PATH");
  ol->add_option("--poly", c.poly, "Single curve: compare both Z_f routes");

  auto* ver = app.add_subcommand("verify", "Exact identity suite");
  add_ensemble_flags(ver, c);

  auto* rm = app.add_subcommand("rmt", "USp(2g) reference values");
  rm->add_option("--g", c.g, "Rank");
  rm->add_option("--n-max", c.n_max, "Largest index");
  rm->add_option("--fhat", c.fhat, "Test function for the one-level average");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (c.format == "auto") c.format = c.command == "lfun" ? "json" : "csv";

  static const std::map<std::string, LogLevel> levels{{"debug", LogLevel::debug}, {"info", LogLevel::info},
                                                      {"warn", LogLevel::warn},   {"error", LogLevel::error},
                                                      {"off", LogLevel::off}};
  set_log_level(levels.at(log_level));

  Context ctx{c};
  const auto start = std::chrono::steady_clock::now();
  Document doc;
  nlohmann::ordered_json lfun_json;
  bool verified = true;
  try {
    if (c.g < 1) throw InvalidConfig("--g must be >= 1");
    ctx.field = &field_for(c.q);
    if (!c.cache_dir.empty()) set_irreducible_cache_dir(c.cache_dir);
    if (c.command == "avg-trace") doc = cmd_avg_trace(ctx);
    else if (c.command == "pair") doc = cmd_pair(ctx);
    else if (c.command == "charsum") doc = cmd_charsum(ctx);
    else if (c.command == "lfun") doc = cmd_lfun(ctx, lfun_json);
    else if (c.command == "one-level") doc = cmd_one_level(ctx);
    else if (c.command == "verify") doc = cmd_verify(ctx, verified);
    else doc = cmd_rmt(ctx);
  } catch (const IdentityFailure& e) {
    err << "identity failure: " << e.what() << '\n';
    return kExitIdentity;
  } catch (const BudgetExceeded& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const InvalidConfig& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  doc.config = config_fields(c);
  doc.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ofstream file;
  std::ostream* os = &out;
  if (!c.out.empty()) {
    file.open(c.out, std::ios::binary);
    if (!file) {
      err << "cannot open " << c.out << '\n';
      return kExitInvalid;
    }
    os = &file;
  }
  if (c.format == "json") {
    if (c.command == "lfun") {
      nlohmann::ordered_json j = document_json(doc);
      j["result"] = lfun_json;
      *os << j.dump(2) << '\n';
    } else {
      write_json(*os, doc);
    }
  } else {
    write_csv(*os, doc);
  }
  if (c.command == "verify") {
    out << (verified ? "all exact identities passed" : "exact identity failures") << '\n';
    if (!verified) return kExitIdentity;
  }
  return kExitOk;
}

}  // namespace hyptrace::cli
