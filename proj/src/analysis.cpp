#include "rgsc/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rgsc {

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::Cap: return "cap";
    case SweepParam::Demand: return "demand";
    case SweepParam::Capacity: return "capacity";
  }
  return "?";
}

SweepParam parse_sweep_param(const std::string& s) {
  if (s == "cap" || s == "cap-fraction") return SweepParam::Cap;
  if (s == "demand" || s == "demand-fraction") return SweepParam::Demand;
  if (s == "capacity" || s == "capacity-fraction") return SweepParam::Capacity;
  throw std::invalid_argument("unknown sweep parameter '" + s + "'");
}

namespace {

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::logic_error&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw std::invalid_argument("bad number '" + s + "' in grid");
  return v;
}

void check_monotone(const std::vector<double>& g) {
  if (g.empty()) throw std::invalid_argument("grid is empty");
  if (g.size() < 2) return;
  const bool up = g[1] > g[0];
  for (std::size_t i = 1; i < g.size(); ++i)
    if (up ? !(g[i] > g[i - 1]) : !(g[i] < g[i - 1]))
      throw std::invalid_argument("grid must be strictly monotone");
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw std::invalid_argument("grid range must be start:stop:step");
    const double start = parse_double(parts[0]), stop = parse_double(parts[1]);
    const double step = std::abs(parse_double(parts[2]));
    if (step == 0.0) throw std::invalid_argument("grid step must be nonzero");
    const double dir = stop >= start ? 1.0 : -1.0;
    const long n = static_cast<long>(std::floor(std::abs(stop - start) / step + 1e-9)) + 1;
    for (long i = 0; i < n; ++i) {
      const double v = start + dir * static_cast<double>(i) * step;
      grid.push_back(std::round(v * 1e12) / 1e12);
    }
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) grid.push_back(parse_double(p));
  }
  check_monotone(grid);
  return grid;
}

GeneratedInstance apply_multiplier(const Instance& inst, const ScenarioSet& scen, SweepParam p,
                                   double factor) {
  if (!(factor >= 0.0)) throw std::invalid_argument("multiplier must be nonnegative");
  GeneratedInstance g{inst, scen};
  switch (p) {
    case SweepParam::Cap:
      for (double& c : g.instance.cap) c *= factor;
      break;
    case SweepParam::Demand:
      for (double& d : g.scenarios.demand.data()) d *= factor;
      g.instance.big_m = std::max(g.instance.big_m, min_valid_big_m(g.scenarios));
      break;
    case SweepParam::Capacity:
      for (double& c : g.instance.mfg_capacity) c *= factor;
      for (double& c : g.instance.wh_capacity) c *= factor;
      break;
  }
  return g;
}

namespace {

struct PointRun {
  SweepPoint point;
  std::unique_ptr<MilpModel> model;
  std::optional<std::vector<double>> x;
};

void describe_solution(const MilpModel& model, const std::vector<double>& x, SweepPoint& pt) {
  const ObjectiveBreakdown br = evaluate_solution(model, x);
  pt.has_solution = true;
  pt.z1 = br.z1;
  pt.z2 = br.z2;
  pt.z_total = br.z_total;
  pt.temp_open = 0;
  pt.safety_stock = pt.shortage = 0.0;
  const ScenarioSet& scen = model.inputs->scenarios;
  for (int c = 0; c < model.n_cols(); ++c) {
    const VarKey& k = model.var_map.key(c);
    if ((k.family == Family::U || k.family == Family::V) && x[c] > 0.5) ++pt.temp_open;
    if (k.family == Family::MSS) pt.safety_stock += scen.probability[k.index[2]] * x[c];
    if (k.family == Family::MS) pt.shortage += scen.probability[k.index[2]] * x[c];
  }
  pt.gap = (pt.z_total - pt.bound) / std::max(1.0, std::abs(pt.z_total));
  if (pt.status == "optimal") pt.gap = std::max(0.0, pt.gap);
}

PointRun solve_point(const Instance& inst, const ScenarioSet& scen, const SweepSpec& spec,
                     double multiplier) {
  PointRun run;
  run.point.multiplier = multiplier;
  try {
    const GeneratedInstance g = apply_multiplier(inst, scen, spec.param, multiplier);
    run.model = std::make_unique<MilpModel>(build_model(g.instance, g.scenarios, spec.strategies, spec.model));
    const MipResult res = solve_model(*run.model, spec.solver);
    run.point.status = to_string(res.status);
    run.point.nodes = res.nodes;
    run.point.bound = res.bound;
    run.point.gap = res.gap;
    if (res.incumbent) {
      run.x = res.incumbent;
      describe_solution(*run.model, *run.x, run.point);
    }
  } catch (const std::exception&) {
    run.point.status = "error";
    run.model.reset();
  }
  return run;
}

template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs > 0 ? jobs : 1, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

SweepReport run_sweep(const Instance& inst, const ScenarioSet& scen, const SweepSpec& spec) {
  check_monotone(spec.grid);
  std::vector<PointRun> runs(spec.grid.size());
  parallel_for(runs.size(), spec.jobs,
               [&](std::size_t i) { runs[i] = solve_point(inst, scen, spec, spec.grid[i]); });

  if (spec.cross_seed) {
    // Candidates come from the original solves only, so the outcome does not
    // depend on the order in which points are visited.
    std::vector<std::optional<std::vector<double>>> original(runs.size());
    for (std::size_t i = 0; i < runs.size(); ++i) original[i] = runs[i].x;
    for (std::size_t p = 0; p < runs.size(); ++p) {
      PointRun& run = runs[p];
      if (!run.model || run.point.status == "infeasible") continue;
      double best = run.x ? run.model->lp.objective(*run.x) : kInf;
      std::optional<std::size_t> from;
      for (std::size_t q = 0; q < runs.size(); ++q) {
        if (q == p || !original[q]) continue;
        const std::vector<double>& cand = *original[q];
        if (static_cast<int>(cand.size()) != run.model->n_cols()) continue;
        const double z = run.model->lp.objective(cand);
        if (!(z < best - spec.solver.tol_opt * std::max(1.0, std::abs(best)))) continue;
        if (!check_feasibility(*run.model, cand, spec.solver.tol_feas, spec.solver.tol_int).empty())
          continue;
        best = z;
        from = q;
      }
      if (from) {
        run.x = original[*from];
        run.point.seeded = true;
        describe_solution(*run.model, *run.x, run.point);
      }
    }
  }

  SweepReport report;
  report.param = spec.param;
  report.strategies = spec.strategies;
  for (auto& run : runs) report.points.push_back(run.point);
  for (const SweepPoint& pt : report.points)
    if (pt.status == "infeasible") {
      report.first_infeasible = pt.multiplier;
      break;
    }
  InstanceFile file{inst, scen, spec.strategies};
  report.provenance.instance_hash = instance_hash(file);
  report.provenance.options = describe_options(spec.strategies, spec.model, spec.solver);
  report.provenance.options.emplace_back("sweep_param", to_string(spec.param));
  std::string grid;
  for (double g : spec.grid) grid += (grid.empty() ? "" : ",") + format_number(g);
  report.provenance.options.emplace_back("grid", grid);
  report.provenance.options.emplace_back("cross_seed", spec.cross_seed ? "on" : "off");
  return report;
}

namespace {

/// -1: a cheaper, +1: b cheaper, 0: tie, nullopt: not comparable.
std::optional<int> sign_of(const SweepPoint& a, const SweepPoint& b, double rel_tol) {
  if (!a.has_solution || !b.has_solution) return std::nullopt;
  const double diff = a.z_total - b.z_total;
  const double tol = rel_tol * std::max({1.0, std::abs(a.z_total), std::abs(b.z_total)});
  if (std::abs(diff) <= tol) return 0;
  return diff < 0 ? -1 : 1;
}

}  // namespace

CompareReport compare_strategies(const Instance& inst, const ScenarioSet& scen,
                                 const StrategyConfig& a, const StrategyConfig& b,
                                 const SweepSpec& spec) {
  if (a == b) throw std::invalid_argument("compared configurations are identical");
  // Differences inside the requested optimality gap are not resolvable.
  const double rel_tol = std::max(1e-9, spec.solver.mip_gap);

  CompareReport out;
  SweepSpec sa = spec, sb = spec;
  sa.strategies = a;
  sb.strategies = b;
  out.a = run_sweep(inst, scen, sa);
  out.b = run_sweep(inst, scen, sb);

  std::optional<int> last_sign;
  std::optional<std::size_t> last_index;
  bool a_wins = false, b_wins = false, ties = false;
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    const auto sg = sign_of(out.a.points[i], out.b.points[i], rel_tol);
    out.winner.push_back(!sg ? "n/a" : *sg < 0 ? "a" : *sg > 0 ? "b" : "tie");
    if (sg && *sg == 0) ties = true;
    if (!sg || *sg == 0) continue;
    (*sg < 0 ? a_wins : b_wins) = true;
    if (!out.crossover && last_sign && *last_sign != *sg) {
      Crossover c;
      c.lower = spec.grid[*last_index];
      c.upper = spec.grid[i];
      c.refined_lower = c.lower;
      c.refined_upper = c.upper;
      int lo_sign = *last_sign;
      for (int step = 0; step < 4; ++step) {
        const double mid = 0.5 * (c.refined_lower + c.refined_upper);
        SweepSpec one = spec;
        one.grid = {mid};
        one.jobs = std::min(spec.jobs, 2);
        SweepSpec oa = one, ob = one;
        oa.strategies = a;
        ob.strategies = b;
        SweepPoint pa, pb;
        parallel_for(2, one.jobs, [&](std::size_t k) {
          (k == 0 ? pa : pb) = run_sweep(inst, scen, k == 0 ? oa : ob).points.front();
        });
        c.refinement_a.push_back(pa);
        c.refinement_b.push_back(pb);
        const auto ms = sign_of(pa, pb, rel_tol);
        if (!ms || *ms == 0) break;
        if (*ms == lo_sign) c.refined_lower = mid;
        else c.refined_upper = mid;
      }
      out.crossover = c;
    }
    last_sign = sg;
    last_index = i;
  }
  if (out.crossover) out.verdict = "crossover";
  else if (a_wins && !b_wins) out.verdict = "a-cheaper";
  else if (b_wins && !a_wins) out.verdict = "b-cheaper";
  else if (ties) out.verdict = "equal";
  else out.verdict = "undetermined";
  return out;
}

// ---------------------------------------------------------------- JSON

namespace {

Json num(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : v > 0 ? "inf" : "-inf";
}

double from_num(const Json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  return std::nan("");
}

Json strategies_json(const StrategyConfig& c) {
  return {{"backup_suppliers", c.backup_suppliers},   {"multiple_sourcing", c.multiple_sourcing},
          {"safety_stock", c.safety_stock},           {"stockpiling", c.stockpiling},
          {"temporary_facilities", c.temporary_facilities}, {"info_sharing", c.info_sharing}};
}

StrategyConfig strategies_from(const Json& j) {
  StrategyConfig c;
  c.backup_suppliers = j.at("backup_suppliers").get<bool>();
  c.multiple_sourcing = j.at("multiple_sourcing").get<bool>();
  c.safety_stock = j.at("safety_stock").get<bool>();
  c.stockpiling = j.at("stockpiling").get<bool>();
  c.temporary_facilities = j.at("temporary_facilities").get<bool>();
  c.info_sharing = j.at("info_sharing").get<bool>();
  return c;
}

Json point_json(const SweepPoint& p) {
  return {{"multiplier", p.multiplier}, {"status", p.status},
          {"has_solution", p.has_solution}, {"z1", num(p.z1)},
          {"z2", num(p.z2)},           {"z_total", num(p.z_total)},
          {"bound", num(p.bound)},     {"gap", num(p.gap)},
          {"nodes", p.nodes},          {"temp_open", p.temp_open},
          {"safety_stock", num(p.safety_stock)}, {"shortage", num(p.shortage)},
          {"seeded", p.seeded}};
}

SweepPoint point_from(const Json& j) {
  SweepPoint p;
  p.multiplier = j.at("multiplier").get<double>();
  p.status = j.at("status").get<std::string>();
  p.has_solution = j.at("has_solution").get<bool>();
  p.z1 = from_num(j.at("z1"));
  p.z2 = from_num(j.at("z2"));
  p.z_total = from_num(j.at("z_total"));
  p.bound = from_num(j.at("bound"));
  p.gap = from_num(j.at("gap"));
  p.nodes = j.at("nodes").get<long>();
  p.temp_open = j.at("temp_open").get<int>();
  p.safety_stock = from_num(j.at("safety_stock"));
  p.shortage = from_num(j.at("shortage"));
  p.seeded = j.at("seeded").get<bool>();
  return p;
}

Provenance provenance_from(const Json& j) {
  Provenance p;
  p.instance_hash = j.at("instance_hash").get<std::string>();
  for (const auto& [k, v] : j.at("options").items()) p.options.emplace_back(k, v.get<std::string>());
  return p;
}

}  // namespace

Json report_to_json(const SweepReport& r) {
  Json j;
  j["provenance"] = r.provenance.to_json();
  j["param"] = to_string(r.param);
  j["strategies"] = strategies_json(r.strategies);
  j["first_infeasible"] = r.first_infeasible ? Json(*r.first_infeasible) : Json(nullptr);
  Json pts = Json::array();
  for (const SweepPoint& p : r.points) pts.push_back(point_json(p));
  j["points"] = pts;
  return j;
}

SweepReport report_from_json(const Json& j) {
  SweepReport r;
  r.provenance = provenance_from(j.at("provenance"));
  r.param = parse_sweep_param(j.at("param").get<std::string>());
  r.strategies = strategies_from(j.at("strategies"));
  if (!j.at("first_infeasible").is_null()) r.first_infeasible = j.at("first_infeasible").get<double>();
  for (const Json& p : j.at("points")) r.points.push_back(point_from(p));
  return r;
}

Json compare_to_json(const CompareReport& r) {
  Json j;
  j["verdict"] = r.verdict;
  j["winner"] = r.winner;
  if (r.crossover) {
    const Crossover& c = *r.crossover;
    Json ra = Json::array(), rb = Json::array();
    for (const auto& p : c.refinement_a) ra.push_back(point_json(p));
    for (const auto& p : c.refinement_b) rb.push_back(point_json(p));
    j["crossover"] = {{"lower", c.lower},
                      {"upper", c.upper},
                      {"refined_lower", c.refined_lower},
                      {"refined_upper", c.refined_upper},
                      {"refinement_a", ra},
                      {"refinement_b", rb}};
  } else {
    j["crossover"] = nullptr;
  }
  j["a"] = report_to_json(r.a);
  j["b"] = report_to_json(r.b);
  return j;
}

CompareReport compare_from_json(const Json& j) {
  CompareReport r;
  r.verdict = j.at("verdict").get<std::string>();
  r.winner = j.at("winner").get<std::vector<std::string>>();
  if (!j.at("crossover").is_null()) {
    const Json& c = j.at("crossover");
    Crossover x;
    x.lower = c.at("lower").get<double>();
    x.upper = c.at("upper").get<double>();
    x.refined_lower = c.at("refined_lower").get<double>();
    x.refined_upper = c.at("refined_upper").get<double>();
    for (const Json& p : c.at("refinement_a")) x.refinement_a.push_back(point_from(p));
    for (const Json& p : c.at("refinement_b")) x.refinement_b.push_back(point_from(p));
    r.crossover = x;
  }
  r.a = report_from_json(j.at("a"));
  r.b = report_from_json(j.at("b"));
  return r;
}

// ----------------------------------------------------------------- CSV

std::string report_csv(const SweepReport& r) {
  std::string out = r.provenance.comment_block("# ");
  out += "multiplier,status,z1,z2,z_total,bound,gap,nodes,temp_open,safety_stock,shortage,seeded\n";
  for (const SweepPoint& p : r.points) {
    auto val = [&](double v) { return p.has_solution ? format_number(v) : std::string(); };
    out += format_number(p.multiplier) + "," + p.status + "," + val(p.z1) + "," + val(p.z2) + "," +
           val(p.z_total) + "," + format_number(p.bound) + "," + val(p.gap) + "," +
           std::to_string(p.nodes) + "," + std::to_string(p.temp_open) + "," +
           val(p.safety_stock) + "," + val(p.shortage) + "," + (p.seeded ? "1" : "0") + "\n";
  }
  return out;
}

std::string compare_csv(const CompareReport& r) {
  std::string out = r.a.provenance.comment_block("# a ") + r.b.provenance.comment_block("# b ");
  out += "# verdict: " + r.verdict + "\n";
  if (r.crossover)
    out += "# crossover: [" + format_number(r.crossover->refined_lower) + ", " +
           format_number(r.crossover->refined_upper) + "]\n";
  out += "multiplier,status_a,z_total_a,status_b,z_total_b,winner\n";
  for (std::size_t i = 0; i < r.a.points.size(); ++i) {
    const SweepPoint& a = r.a.points[i];
    const SweepPoint& b = r.b.points[i];
    out += format_number(a.multiplier) + "," + a.status + "," +
           (a.has_solution ? format_number(a.z_total) : "") + "," + b.status + "," +
           (b.has_solution ? format_number(b.z_total) : "") + "," + r.winner[i] + "\n";
  }
  return out;
}

// ----------------------------------------------------------------- SVG

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v, int digits = 1) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string short_number(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Series {
  std::string name, color;
  std::vector<std::optional<double>> y;
};

std::string line_chart(const std::string& title, const std::vector<double>& x,
                       const std::vector<Series>& series, const std::vector<char>& infeasible,
                       const std::string& provenance, std::optional<std::pair<double, double>> mark) {
  const double W = 760, H = 440, left = 90, right = 170, top = 40, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;
  double xmin = *std::min_element(x.begin(), x.end()), xmax = *std::max_element(x.begin(), x.end());
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  double ymin = kInf, ymax = -kInf;
  for (const auto& s : series)
    for (const auto& v : s.y)
      if (v) {
        ymin = std::min(ymin, *v);
        ymax = std::max(ymax, *v);
      }
  if (!std::isfinite(ymin)) ymin = 0, ymax = 1;
  if (ymax == ymin) {
    ymin -= std::max(1.0, std::abs(ymin) * 0.05);
    ymax += std::max(1.0, std::abs(ymax) * 0.05);
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto px = [&](double v) { return left + (v - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double v) { return top + (ymax - v) / (ymax - ymin) * ph; };

  std::ostringstream o;
  std::string prov = provenance;
  for (std::size_t p; (p = prov.find("--")) != std::string::npos;) prov.replace(p, 2, "- -");
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << " " << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<!--\n" << prov << "-->\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  o << "<text x=\"" << left << "\" y=\"22\" font-size=\"15\">" << xml_escape(title) << "</text>\n";

  // Infeasible points are shaded out to the midpoints with their neighbours.
  bool labelled = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!infeasible[i]) continue;
    double a = x[i], b = x[i];
    if (x.size() > 1) {
      const double prev = i > 0 ? 0.5 * (x[i - 1] + x[i]) : x[i] - 0.5 * (x[1] - x[0]);
      const double next = i + 1 < x.size() ? 0.5 * (x[i] + x[i + 1])
                                           : x[i] + 0.5 * (x[i] - x[i - 1]);
      a = prev;
      b = next;
    }
    double x0 = std::clamp(px(std::min(a, b)), left, left + pw);
    double x1 = std::clamp(px(std::max(a, b)), left, left + pw);
    if (x1 - x0 < 4) {
      x0 -= 2;
      x1 += 2;
    }
    o << "<rect class=\"infeasible\" x=\"" << fixed(x0) << "\" y=\"" << top << "\" width=\""
      << fixed(x1 - x0) << "\" height=\"" << ph << "\" fill=\"#d9534f\" fill-opacity=\"0.18\"/>\n";
    if (!labelled) {
      o << "<text x=\"" << fixed(x0 + 4) << "\" y=\"" << top + 16
        << "\" fill=\"#a94442\">infeasible</text>\n";
      labelled = true;
    }
  }
  if (mark) {
    for (double v : {mark->first, mark->second})
      o << "<line x1=\"" << fixed(px(v)) << "\" y1=\"" << top << "\" x2=\"" << fixed(px(v))
        << "\" y2=\"" << top + ph << "\" stroke=\"#555\" stroke-dasharray=\"4 3\"/>\n";
    o << "<text x=\"" << fixed(px(0.5 * (mark->first + mark->second)) + 4) << "\" y=\""
      << top + 30 << "\" fill=\"#333\">crossover</text>\n";
  }

  o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 5.0, yv = ymin + (ymax - ymin) * k / 5.0;
    o << "<text x=\"" << fixed(px(xv)) << "\" y=\"" << top + ph + 18
      << "\" text-anchor=\"middle\">" << short_number(xv) << "</text>\n";
    o << "<text x=\"" << left - 6 << "\" y=\"" << fixed(py(yv) + 4)
      << "\" text-anchor=\"end\">" << short_number(yv) << "</text>\n";
    o << "<line x1=\"" << left << "\" y1=\"" << fixed(py(yv)) << "\" x2=\"" << left + pw
      << "\" y2=\"" << fixed(py(yv)) << "\" stroke=\"#eee\"/>\n";
  }
  o << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 18
    << "\" text-anchor=\"middle\">multiplier</text>\n";

  int row = 0;
  for (const auto& s : series) {
    std::string path;
    bool pen = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!s.y[i]) {
        pen = false;
        continue;
      }
      path += (pen ? " L" : " M") + fixed(px(x[i])) + " " + fixed(py(*s.y[i]));
      pen = true;
    }
    if (!path.empty())
      o << "<path d=\"" << path.substr(1) << "\" fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"/>\n";
    for (std::size_t i = 0; i < x.size(); ++i)
      if (s.y[i])
        o << "<circle cx=\"" << fixed(px(x[i])) << "\" cy=\"" << fixed(py(*s.y[i]))
          << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
    const double ly = top + 14 + 18 * row++;
    o << "<line x1=\"" << left + pw + 14 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 34
      << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << left + pw + 40 << "\" y=\"" << ly << "\">" << xml_escape(s.name)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace

std::string report_svg(const SweepReport& r, const std::string& title) {
  std::vector<double> x;
  std::vector<char> infeasible;
  Series total{"Z_total", "#1f77b4", {}}, z1{"Z1 (cost)", "#2ca02c", {}}, z2{"Z2 (emission)", "#ff7f0e", {}};
  for (const SweepPoint& p : r.points) {
    x.push_back(p.multiplier);
    infeasible.push_back(p.status == "infeasible");
    auto v = [&](double d) { return p.has_solution ? std::optional<double>(d) : std::nullopt; };
    total.y.push_back(v(p.z_total));
    z1.y.push_back(v(p.z1));
    z2.y.push_back(v(p.z2));
  }
  const std::string t = title.empty() ? "Z_total vs " + to_string(r.param) + " multiplier" : title;
  return line_chart(t, x, {total, z1, z2}, infeasible, r.provenance.comment_block(""), std::nullopt);
}

std::string compare_svg(const CompareReport& r, const std::string& title) {
  std::vector<double> x;
  std::vector<char> infeasible;
  Series a{"Z_total (a)", "#1f77b4", {}}, b{"Z_total (b)", "#d62728", {}};
  for (std::size_t i = 0; i < r.a.points.size(); ++i) {
    const SweepPoint& pa = r.a.points[i];
    const SweepPoint& pb = r.b.points[i];
    x.push_back(pa.multiplier);
    infeasible.push_back(pa.status == "infeasible" && pb.status == "infeasible");
    a.y.push_back(pa.has_solution ? std::optional<double>(pa.z_total) : std::nullopt);
    b.y.push_back(pb.has_solution ? std::optional<double>(pb.z_total) : std::nullopt);
  }
  std::optional<std::pair<double, double>> mark;
  if (r.crossover) mark = std::make_pair(r.crossover->refined_lower, r.crossover->refined_upper);
  const std::string t = title.empty() ? "strategy comparison, verdict: " + r.verdict : title;
  return line_chart(t, x, {a, b}, infeasible,
                    r.a.provenance.comment_block("a ") + r.b.provenance.comment_block("b "), mark);
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

bool wants(const std::vector<std::string>& formats, const char* f) {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

}  // namespace

void emit_report(const SweepReport& r, const std::filesystem::path& dir,
                 const std::vector<std::string>& formats) {
  std::filesystem::create_directories(dir);
  if (wants(formats, "csv")) write_file(dir / "report.csv", report_csv(r));
  if (wants(formats, "json")) write_file(dir / "report.json", report_to_json(r).dump(2) + "\n");
  if (wants(formats, "svg")) write_file(dir / "report.svg", report_svg(r));
}

void emit_report(const CompareReport& r, const std::filesystem::path& dir,
                 const std::vector<std::string>& formats) {
  std::filesystem::create_directories(dir);
  if (wants(formats, "csv")) write_file(dir / "report.csv", compare_csv(r));
  if (wants(formats, "json")) write_file(dir / "report.json", compare_to_json(r).dump(2) + "\n");
  if (wants(formats, "svg")) write_file(dir / "report.svg", compare_svg(r));
}

}  // namespace rgsc
