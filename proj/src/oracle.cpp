#include "rgsc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace rgsc::oracle {

namespace {

using Shape = std::vector<std::size_t>;

Shape dims(std::initializer_list<int> d) {
  Shape s;
  for (int v : d) s.push_back(static_cast<std::size_t>(v));
  return s;
}

struct Sizes {
  int I, J, K, M, T, L, S;
  int Ia, Ja, Ka;  // active under the configuration
  int I0, J0, K0;  // main entities
  Sizes(const NetworkSets& n, const StrategyConfig& c)
      : I(n.suppliers()), J(n.manufacturers()), K(n.warehouses()), M(n.retailers),
        T(n.periods), L(n.modes), S(n.scenarios),
        Ia(c.backup_suppliers ? n.suppliers() : n.suppliers_main),
        Ja(c.temporary_facilities ? n.manufacturers() : n.mfg_main),
        Ka(c.temporary_facilities ? n.warehouses() : n.wh_main),
        I0(n.suppliers_main), J0(n.mfg_main), K0(n.wh_main) {}
};

double net_emission(const Instance& inst, const StrategyConfig& cfg, double e) {
  return cfg.info_sharing ? std::max(0.0, e - inst.emission_saving) : e;
}

double net_delay(const StrategyConfig& cfg, double delay, double saved) {
  return std::max(0.0, delay - (cfg.info_sharing ? saved : 0.0));
}

std::string at(const char* what, std::initializer_list<int> idx) {
  std::ostringstream os;
  os << what << "(";
  bool first = true;
  for (int v : idx) {
    os << (first ? "" : ",") << v + 1;
    first = false;
  }
  os << ")";
  return os.str();
}

}  // namespace

Assignment empty_assignment(const NetworkSets& n) {
  const int I = n.suppliers(), J = n.manufacturers(), K = n.warehouses();
  const int M = n.retailers, T = n.periods, L = n.modes, S = n.scenarios;
  Assignment a;
  a.xx = Tensor(dims({I, J, T, L}));
  a.yy = Tensor(dims({J, K, T, L}));
  a.zz = Tensor(dims({K, M, T, L}));
  a.u = Tensor(dims({J}));
  a.v = Tensor(dims({K}));
  a.x = Tensor(dims({I, J, T, L, S}));
  a.y = Tensor(dims({J, K, T, L, S}));
  a.z = Tensor(dims({K, M, T, L, S}));
  a.mi = Tensor(dims({J, T, S}));
  a.ms = Tensor(dims({J, T, S}));
  a.mss = Tensor(dims({J, T, S}));
  a.sp = Tensor(dims({J, T, S}));
  return a;
}

Objective evaluate(const Instance& inst, const ScenarioSet& scen, const StrategyConfig& cfg,
                   const Weights& w, const Assignment& a) {
  const Sizes n(inst.sets, cfg);
  double delay = 0.0, setup = 0.0;
  std::vector<double> transport(n.S, 0.0), holding(n.S, 0.0), shortage(n.S, 0.0),
      emission(n.S, 0.0);

  for (int s = 0; s < n.S; ++s) {
    const double ws = w.literal_delay ? 1.0 : scen.probability[s];
    for (int t = 0; t < n.T; ++t)
      for (int l = 0; l < n.L; ++l) {
        for (int i = 0; i < n.I; ++i)
          for (int j = 0; j < n.J; ++j) {
            delay += ws * inst.delay_cost * a.xx(i, j, t, l) *
                     net_delay(cfg, inst.transport_delay1(i, j, l, s), inst.saved_time1(i, j, l));
            transport[s] += inst.transport_cost1(i, j, l, s) * a.x(i, j, t, l, s);
            emission[s] +=
                net_emission(inst, cfg, inst.emission_transport1(i, j, l)) * a.x(i, j, t, l, s);
          }
        for (int j = 0; j < n.J; ++j)
          for (int k = 0; k < n.K; ++k) {
            delay += ws * inst.delay_cost * a.yy(j, k, t, l) *
                     net_delay(cfg, inst.transport_delay2(j, k, l, s), inst.saved_time2(j, k, l));
            transport[s] += inst.transport_cost2(j, k, l, s) * a.y(j, k, t, l, s);
            emission[s] += (inst.emission_prod[j] +
                            net_emission(inst, cfg, inst.emission_transport2(j, k, l))) *
                           a.y(j, k, t, l, s);
          }
        for (int k = 0; k < n.K; ++k)
          for (int m = 0; m < n.M; ++m) {
            delay += ws * inst.delay_cost * a.zz(k, m, t, l) *
                     net_delay(cfg, inst.transport_delay3(k, m, l, s), inst.saved_time3(k, m, l));
            transport[s] += inst.transport_cost3(k, m, l, s) * a.z(k, m, t, l, s);
            emission[s] +=
                net_emission(inst, cfg, inst.emission_transport3(k, m, l)) * a.z(k, m, t, l, s);
          }
      }
    for (int j = 0; j < n.J; ++j)
      for (int t = 0; t < n.T; ++t) {
        holding[s] += inst.inv_cost(j, s) * (a.mi(j, t, s) + a.mss(j, t, s)) +
                      inst.stockpile_premium * a.sp(j, t, s);
        shortage[s] += inst.short_cost(j, s) * a.ms(j, t, s);
      }
  }
  for (int j = n.J0; j < n.J; ++j) setup += inst.setup_temp_mfg[j - n.J0] * a.u(j);
  for (int k = n.K0; k < n.K; ++k) setup += inst.setup_temp_wh[k - n.K0] * a.v(k);
  if (cfg.info_sharing) setup += inst.info_setup + inst.info_training;

  Objective obj;
  obj.z1 = delay + setup;
  for (int s = 0; s < n.S; ++s) {
    obj.z1 += scen.probability[s] * (transport[s] + holding[s] + shortage[s]);
    obj.z2 += scen.probability[s] * emission[s];
  }
  obj.total = w.cost * obj.z1 + w.emission * obj.z2;
  return obj;
}

std::vector<std::string> check(const Instance& inst, const ScenarioSet& scen,
                               const StrategyConfig& cfg, const Assignment& a,
                               const CheckOptions& opts) {
  const Sizes n(inst.sets, cfg);
  const double tol = opts.tol;
  std::vector<std::string> out;
  auto fail = [&](std::string what) { out.push_back(std::move(what)); };

  auto is_int = [&](double v) { return std::abs(v - std::round(v)) <= 1e-6; };
  auto binary = [&](double v, const std::string& name) {
    if (v < -tol || v > 1.0 + tol) fail(name + " outside [0,1]");
    else if (!is_int(v)) fail(name + " fractional");
  };
  auto quantity = [&](double v, const std::string& name) {
    if (v < -tol) fail(name + " negative");
    if (v > opts.flow_upper + tol) fail(name + " above bound");
    if (opts.integer_flows && !is_int(v)) fail(name + " fractional");
  };
  auto absent = [&](double v, const std::string& name) {
    if (v != 0.0) fail(name + " not part of this configuration");
  };

  const bool sup_on[2] = {true, cfg.backup_suppliers};
  auto supplier_active = [&](int i) { return sup_on[i >= n.I0]; };
  auto mfg_active = [&](int j) { return j < n.J0 || cfg.temporary_facilities; };
  auto wh_active = [&](int k) { return k < n.K0 || cfg.temporary_facilities; };

  // Domains.
  for (int t = 0; t < n.T; ++t)
    for (int l = 0; l < n.L; ++l) {
      for (int i = 0; i < n.I; ++i)
        for (int j = 0; j < n.J; ++j) {
          const bool on = supplier_active(i) && mfg_active(j);
          const std::string nm = at("XX", {i, j, t, l});
          on ? binary(a.xx(i, j, t, l), nm) : absent(a.xx(i, j, t, l), nm);
          for (int s = 0; s < n.S; ++s) {
            const std::string f = at("X", {i, j, t, l, s});
            on ? quantity(a.x(i, j, t, l, s), f) : absent(a.x(i, j, t, l, s), f);
          }
        }
      for (int j = 0; j < n.J; ++j)
        for (int k = 0; k < n.K; ++k) {
          const bool on = mfg_active(j) && wh_active(k);
          const std::string nm = at("YY", {j, k, t, l});
          on ? binary(a.yy(j, k, t, l), nm) : absent(a.yy(j, k, t, l), nm);
          for (int s = 0; s < n.S; ++s) {
            const std::string f = at("Y", {j, k, t, l, s});
            on ? quantity(a.y(j, k, t, l, s), f) : absent(a.y(j, k, t, l, s), f);
          }
        }
      for (int k = 0; k < n.K; ++k)
        for (int m = 0; m < n.M; ++m) {
          const bool on = wh_active(k);
          const std::string nm = at("ZZ", {k, m, t, l});
          on ? binary(a.zz(k, m, t, l), nm) : absent(a.zz(k, m, t, l), nm);
          for (int s = 0; s < n.S; ++s) {
            const std::string f = at("Z", {k, m, t, l, s});
            on ? quantity(a.z(k, m, t, l, s), f) : absent(a.z(k, m, t, l, s), f);
          }
        }
    }
  for (int j = 0; j < n.J; ++j) {
    const bool temp = j >= n.J0 && cfg.temporary_facilities;
    temp ? binary(a.u(j), at("U", {j})) : absent(a.u(j), at("U", {j}));
    for (int t = 0; t < n.T; ++t)
      for (int s = 0; s < n.S; ++s) {
        const bool on = mfg_active(j);
        on ? quantity(a.mi(j, t, s), at("MI", {j, t, s})) : absent(a.mi(j, t, s), at("MI", {j, t, s}));
        on ? quantity(a.ms(j, t, s), at("MS", {j, t, s})) : absent(a.ms(j, t, s), at("MS", {j, t, s}));
        on && cfg.safety_stock ? quantity(a.mss(j, t, s), at("MSS", {j, t, s}))
                               : absent(a.mss(j, t, s), at("MSS", {j, t, s}));
        on && cfg.stockpiling ? quantity(a.sp(j, t, s), at("SP", {j, t, s}))
                              : absent(a.sp(j, t, s), at("SP", {j, t, s}));
      }
  }
  for (int k = 0; k < n.K; ++k) {
    const bool temp = k >= n.K0 && cfg.temporary_facilities;
    temp ? binary(a.v(k), at("V", {k})) : absent(a.v(k), at("V", {k}));
  }

  // A flow needs its link chosen; one mode per link.
  const double big_m = inst.big_m;
  for (int t = 0; t < n.T; ++t) {
    for (int i = 0; i < n.I; ++i)
      for (int j = 0; j < n.J; ++j) {
        double modes = 0.0;
        for (int l = 0; l < n.L; ++l) {
          modes += a.xx(i, j, t, l);
          for (int s = 0; s < n.S; ++s)
            if (a.x(i, j, t, l, s) > big_m * a.xx(i, j, t, l) + tol)
              fail(at("X", {i, j, t, l, s}) + " on a closed link");
        }
        if (modes > 1.0 + tol) fail(at("modes XX", {i, j, t}) + " more than one");
      }
    for (int j = 0; j < n.J; ++j)
      for (int k = 0; k < n.K; ++k) {
        double modes = 0.0;
        for (int l = 0; l < n.L; ++l) {
          modes += a.yy(j, k, t, l);
          for (int s = 0; s < n.S; ++s)
            if (a.y(j, k, t, l, s) > big_m * a.yy(j, k, t, l) + tol)
              fail(at("Y", {j, k, t, l, s}) + " on a closed link");
        }
        if (modes > 1.0 + tol) fail(at("modes YY", {j, k, t}) + " more than one");
      }
    for (int k = 0; k < n.K; ++k)
      for (int m = 0; m < n.M; ++m) {
        double modes = 0.0;
        for (int l = 0; l < n.L; ++l) {
          modes += a.zz(k, m, t, l);
          for (int s = 0; s < n.S; ++s)
            if (a.z(k, m, t, l, s) > big_m * a.zz(k, m, t, l) + tol)
              fail(at("Z", {k, m, t, l, s}) + " on a closed link");
        }
        if (modes > 1.0 + tol) fail(at("modes ZZ", {k, m, t}) + " more than one");
      }
  }

  for (int s = 0; s < n.S; ++s)
    for (int t = 0; t < n.T; ++t) {
      // Manufacturer stock balance.
      for (int j = 0; j < n.J; ++j) {
        double in = 0.0, outflow = 0.0, produced = 0.0;
        for (int l = 0; l < n.L; ++l) {
          for (int i = 0; i < n.I; ++i) in += a.x(i, j, t, l, s);
          for (int k = 0; k < n.K; ++k) produced += a.y(j, k, t, l, s);
        }
        outflow = produced;
        const double prev_mi = t > 0 ? a.mi(j, t - 1, s) : 0.0;
        const double prev_ms = t > 0 ? a.ms(j, t - 1, s) : 0.0;
        const double prev_mss = t > 0 ? a.mss(j, t - 1, s) : 0.0;
        const double lhs = in + prev_mi + a.ms(j, t, s) + prev_mss + a.sp(j, t, s);
        const double rhs = outflow + a.mi(j, t, s) + prev_ms + a.mss(j, t, s);
        if (std::abs(lhs - rhs) > tol) fail(at("balance", {j, t, s}) + " broken");
        if (produced > inst.mfg_capacity[j] * (1.0 - scen.mfg_capacity_loss(j, s)) + tol)
          fail(at("manufacturer capacity", {j, t, s}) + " exceeded");
      }
      // Warehouses pass everything through.
      for (int k = 0; k < n.K; ++k) {
        double in = 0.0, outflow = 0.0;
        for (int l = 0; l < n.L; ++l) {
          for (int j = 0; j < n.J; ++j) in += a.y(j, k, t, l, s);
          for (int m = 0; m < n.M; ++m) outflow += a.z(k, m, t, l, s);
        }
        if (std::abs(in - outflow) > tol) fail(at("warehouse flow", {k, t, s}) + " broken");
        if (outflow > inst.wh_capacity[k] * (1.0 - scen.wh_capacity_loss(k, s)) + tol)
          fail(at("warehouse capacity", {k, t, s}) + " exceeded");
      }
      for (int m = 0; m < n.M; ++m) {
        double got = 0.0;
        for (int k = 0; k < n.K; ++k)
          for (int l = 0; l < n.L; ++l) got += a.z(k, m, t, l, s);
        if (std::abs(got - scen.demand(m, t, s)) > tol) fail(at("demand", {m, t, s}) + " unmet");
      }
      double em = 0.0;
      for (int l = 0; l < n.L; ++l) {
        for (int i = 0; i < n.I; ++i)
          for (int j = 0; j < n.J; ++j)
            em += net_emission(inst, cfg, inst.emission_transport1(i, j, l)) * a.x(i, j, t, l, s);
        for (int j = 0; j < n.J; ++j)
          for (int k = 0; k < n.K; ++k)
            em += (inst.emission_prod[j] + net_emission(inst, cfg, inst.emission_transport2(j, k, l))) *
                  a.y(j, k, t, l, s);
        for (int k = 0; k < n.K; ++k)
          for (int m = 0; m < n.M; ++m)
            em += net_emission(inst, cfg, inst.emission_transport3(k, m, l)) * a.z(k, m, t, l, s);
      }
      if (em > inst.cap[t] + tol) fail(at("emission cap", {t, s}) + " exceeded");
    }

  if (cfg.multiple_sourcing)
    for (int j = 0; j < n.Ja; ++j)
      for (int t = 0; t < n.T; ++t) {
        double chosen = 0.0;
        for (int i = 0; i < n.I; ++i)
          for (int l = 0; l < n.L; ++l) chosen += a.xx(i, j, t, l);
        if (chosen < inst.min_suppliers - tol) fail(at("suppliers", {j, t}) + " too few");
      }

  // Temporary sites must be opened before links touch them.
  if (cfg.temporary_facilities)
    for (int t = 0; t < n.T; ++t)
      for (int l = 0; l < n.L; ++l) {
        for (int j = 0; j < n.J; ++j)
          for (int k = 0; k < n.K; ++k) {
            if (j >= n.J0 && a.yy(j, k, t, l) > a.u(j) + tol)
              fail(at("YY", {j, k, t, l}) + " uses a closed temporary manufacturer");
            if (k >= n.K0 && a.yy(j, k, t, l) > a.v(k) + tol)
              fail(at("YY", {j, k, t, l}) + " uses a closed temporary warehouse");
          }
        for (int k = n.K0; k < n.K; ++k)
          for (int m = 0; m < n.M; ++m)
            if (a.zz(k, m, t, l) > a.v(k) + tol)
              fail(at("ZZ", {k, m, t, l}) + " uses a closed temporary warehouse");
      }
  return out;
}

namespace {

struct Arc {
  int o, d, l;
};

/// Per-period plan of one scenario.
struct PeriodPlan {
  std::vector<int> x, y, z;            // along the open arcs
  std::vector<int> mi, ms, mss, sp;    // per active manufacturer
};

struct Searcher {
  const Instance& inst;
  const ScenarioSet& scen;
  const StrategyConfig& cfg;
  const Weights& w;
  Sizes n;
  int cap_q;  // max_flow
  long long guard;
  long long count = 0;

  void tick() {
    if (++count > guard)
      throw GuardExceeded("oracle search space exceeds " + std::to_string(guard) + " assignments");
  }

  /// Calls fn for every vector in [0,cap]^size (odometer order).
  template <typename Fn>
  void odometer(std::size_t size, int cap, Fn&& fn) {
    std::vector<int> v(size, 0);
    while (true) {
      fn(v);
      std::size_t p = 0;
      while (p < size && v[p] == cap) v[p++] = 0;
      if (p == size) return;
      ++v[p];
    }
  }

  struct StateValue {
    double value;
    std::vector<int> prev_state;
    PeriodPlan plan;
  };

  /// Best recourse cost of scenario s for the open arcs, or +inf.
  double scenario(int s, const std::vector<std::vector<Arc>>& ax, const std::vector<std::vector<Arc>>& ay,
                  const std::vector<std::vector<Arc>>& az, std::vector<PeriodPlan>* plans) {
    const int Ja = n.Ja;
    const double p = scen.probability[s];
    const int per_state = 3;  // mi, ms, mss per manufacturer
    // A chosen link carries at most big_m.
    const int arc_cap = static_cast<int>(std::min<double>(cap_q, std::floor(inst.big_m)));
    using State = std::vector<int>;
    std::vector<std::map<State, StateValue>> layers(n.T + 1);
    layers[0][State(per_state * Ja, 0)] = {0.0, {}, {}};

    for (int t = 0; t < n.T; ++t) {
      // Retailer deliveries, independent of the carried state.
      std::vector<std::vector<int>> z_options;
      odometer(az[t].size(), arc_cap, [&](const std::vector<int>& z) {
        tick();
        std::vector<double> got(n.M, 0.0), sent(n.K, 0.0);
        for (std::size_t q = 0; q < z.size(); ++q) {
          got[az[t][q].d] += z[q];
          sent[az[t][q].o] += z[q];
        }
        for (int m = 0; m < n.M; ++m)
          if (got[m] != scen.demand(m, t, s)) return;
        for (int k = 0; k < n.Ka; ++k)
          if (sent[k] > inst.wh_capacity[k] * (1.0 - scen.wh_capacity_loss(k, s))) return;
        z_options.push_back(z);
      });

      std::vector<std::pair<std::vector<int>, std::vector<int>>> yz_options;
      for (const auto& z : z_options) {
        std::vector<double> sent(n.K, 0.0);
        for (std::size_t q = 0; q < z.size(); ++q) sent[az[t][q].o] += z[q];
        odometer(ay[t].size(), arc_cap, [&](const std::vector<int>& y) {
          tick();
          std::vector<double> in(n.K, 0.0), made(n.J, 0.0);
          for (std::size_t q = 0; q < y.size(); ++q) {
            in[ay[t][q].d] += y[q];
            made[ay[t][q].o] += y[q];
          }
          for (int k = 0; k < n.Ka; ++k)
            if (in[k] != sent[k]) return;
          for (int j = 0; j < Ja; ++j)
            if (made[j] > inst.mfg_capacity[j] * (1.0 - scen.mfg_capacity_loss(j, s))) return;
          yz_options.emplace_back(y, z);
        });
      }

      // Fixed part of the period cost and emission for each (Y, Z).
      std::vector<double> yz_cost(yz_options.size(), 0.0), yz_em(yz_options.size(), 0.0);
      for (std::size_t o = 0; o < yz_options.size(); ++o) {
        const auto& [y, z] = yz_options[o];
        for (std::size_t q = 0; q < y.size(); ++q) {
          const Arc& a = ay[t][q];
          yz_cost[o] += inst.transport_cost2(a.o, a.d, a.l, s) * y[q];
          yz_em[o] += (inst.emission_prod[a.o] +
                       net_emission(inst, cfg, inst.emission_transport2(a.o, a.d, a.l))) * y[q];
        }
        for (std::size_t q = 0; q < z.size(); ++q) {
          const Arc& a = az[t][q];
          yz_cost[o] += inst.transport_cost3(a.o, a.d, a.l, s) * z[q];
          yz_em[o] += net_emission(inst, cfg, inst.emission_transport3(a.o, a.d, a.l)) * z[q];
        }
      }

      // Per manufacturer: MS, then MSS and SP when enabled; MI follows from balance.
      const int free_per_mfg = 1 + (cfg.safety_stock ? 1 : 0) + (cfg.stockpiling ? 1 : 0);
      for (const auto& [state, sv] : layers[t]) {
        for (std::size_t o = 0; o < yz_options.size(); ++o) {
          const auto& y = yz_options[o].first;
          std::vector<double> made(n.J, 0.0);
          for (std::size_t q = 0; q < y.size(); ++q) made[ay[t][q].o] += y[q];
          odometer(ax[t].size(), arc_cap, [&](const std::vector<int>& x) {
            std::vector<double> in(n.J, 0.0);
            double x_cost = 0.0, x_em = 0.0;
            for (std::size_t q = 0; q < x.size(); ++q) {
              const Arc& a = ax[t][q];
              in[a.d] += x[q];
              x_cost += inst.transport_cost1(a.o, a.d, a.l, s) * x[q];
              x_em += net_emission(inst, cfg, inst.emission_transport1(a.o, a.d, a.l)) * x[q];
            }
            const double em = yz_em[o] + x_em;
            if (em > inst.cap[t]) {
              tick();
              return;
            }
            odometer(static_cast<std::size_t>(free_per_mfg * Ja), cap_q, [&](const std::vector<int>& f) {
              tick();
              PeriodPlan plan;
              plan.mi.assign(Ja, 0);
              plan.ms.assign(Ja, 0);
              plan.mss.assign(Ja, 0);
              plan.sp.assign(Ja, 0);
              State next(per_state * Ja, 0);
              double cost = x_cost + yz_cost[o];
              for (int j = 0; j < Ja; ++j) {
                int pos = j * free_per_mfg;
                const int ms = f[pos++];
                const int mss = cfg.safety_stock ? f[pos++] : 0;
                const int sp = cfg.stockpiling ? f[pos++] : 0;
                const int prev_mi = state[3 * j], prev_ms = state[3 * j + 1],
                          prev_mss = state[3 * j + 2];
                const double mi = in[j] + prev_mi + ms + prev_mss + sp - made[j] - prev_ms - mss;
                if (mi < 0 || mi > cap_q) return;
                plan.mi[j] = static_cast<int>(mi);
                plan.ms[j] = ms;
                plan.mss[j] = mss;
                plan.sp[j] = sp;
                next[3 * j] = plan.mi[j];
                next[3 * j + 1] = ms;
                next[3 * j + 2] = mss;
                cost += inst.inv_cost(j, s) * (mi + mss) + inst.short_cost(j, s) * ms +
                        inst.stockpile_premium * sp;
              }
              const double value = sv.value + p * (w.cost * cost + w.emission * em);
              auto it = layers[t + 1].find(next);
              if (it == layers[t + 1].end() || value < it->second.value) {
                plan.x = x;
                plan.y = y;
                plan.z = yz_options[o].second;
                layers[t + 1][next] = {value, state, std::move(plan)};
              }
            });
          });
        }
      }
      if (layers[t + 1].empty()) return kInfinity;
    }

    auto best = std::min_element(layers[n.T].begin(), layers[n.T].end(),
                                 [](const auto& a, const auto& b) {
                                   return a.second.value < b.second.value;
                                 });
    if (plans) {
      plans->assign(n.T, {});
      State st = best->first;
      for (int t = n.T; t > 0; --t) {
        const StateValue& v = layers[t].at(st);
        (*plans)[t - 1] = v.plan;
        st = v.prev_state;
      }
    }
    return best->second.value;
  }

  static constexpr double kInfinity = 1e300;
};

}  // namespace

Result enumerate_optimal(const Instance& inst, const ScenarioSet& scen, const StrategyConfig& cfg,
                         const Weights& w, int max_flow, long long guard) {
  if (max_flow < 0) throw std::invalid_argument("max_flow must be nonnegative");
  Searcher srch{inst, scen, cfg, w, Sizes(inst.sets, cfg), max_flow, guard};
  const Sizes& n = srch.n;

  // One decision per link and period: -1 (off) or a mode.
  struct Link {
    int echelon, o, d, t;
  };
  std::vector<Link> links;
  for (int t = 0; t < n.T; ++t) {
    for (int i = 0; i < n.Ia; ++i)
      for (int j = 0; j < n.Ja; ++j) links.push_back({0, i, j, t});
    for (int j = 0; j < n.Ja; ++j)
      for (int k = 0; k < n.Ka; ++k) links.push_back({1, j, k, t});
    for (int k = 0; k < n.Ka; ++k)
      for (int m = 0; m < n.M; ++m) links.push_back({2, k, m, t});
  }
  std::vector<int> temp_mfg, temp_wh;
  for (int j = n.J0; j < n.Ja; ++j) temp_mfg.push_back(j);
  for (int k = n.K0; k < n.Ka; ++k) temp_wh.push_back(k);
  const std::size_t n_open = temp_mfg.size() + temp_wh.size();

  Result best;
  double best_value = Searcher::kInfinity;

  std::vector<int> choice(links.size(), -1);
  std::vector<int> open(n_open, 0);
  const Assignment blank = empty_assignment(inst.sets);

  while (true) {
    srch.tick();
    Assignment a = blank;
    for (std::size_t q = 0; q < links.size(); ++q) {
      const Link& lk = links[q];
      if (choice[q] < 0) continue;
      Tensor& bin = lk.echelon == 0 ? a.xx : lk.echelon == 1 ? a.yy : a.zz;
      bin(lk.o, lk.d, lk.t, choice[q]) = 1.0;
    }
    for (std::size_t q = 0; q < temp_mfg.size(); ++q) a.u(temp_mfg[q]) = open[q];
    for (std::size_t q = 0; q < temp_wh.size(); ++q) a.v(temp_wh[q]) = open[temp_mfg.size() + q];

    // First-stage rows: minimum sourcing and temporary-site opening.
    bool ok = true;
    if (cfg.multiple_sourcing)
      for (int j = 0; j < n.Ja && ok; ++j)
        for (int t = 0; t < n.T && ok; ++t) {
          int chosen = 0;
          for (int i = 0; i < n.Ia; ++i)
            for (int l = 0; l < n.L; ++l) chosen += a.xx(i, j, t, l) > 0.5;
          ok = chosen >= inst.min_suppliers;
        }
    for (int t = 0; t < n.T && ok; ++t)
      for (int l = 0; l < n.L && ok; ++l) {
        for (int j = 0; j < n.Ja && ok; ++j)
          for (int k = 0; k < n.Ka && ok; ++k) {
            if (a.yy(j, k, t, l) > 0.5 && ((j >= n.J0 && a.u(j) < 0.5) || (k >= n.K0 && a.v(k) < 0.5)))
              ok = false;
          }
        for (int k = n.K0; k < n.Ka && ok; ++k)
          for (int m = 0; m < n.M && ok; ++m)
            if (a.zz(k, m, t, l) > 0.5 && a.v(k) < 0.5) ok = false;
      }

    if (ok) {
      // The evaluator of an all-zero recourse gives exactly the first-stage charge.
      const Objective first = evaluate(inst, scen, cfg, w, a);
      double value = w.cost * first.z1;
      if (value < best_value) {
        std::vector<std::vector<Arc>> ax(n.T), ay(n.T), az(n.T);
        for (int t = 0; t < n.T; ++t)
          for (int l = 0; l < n.L; ++l) {
            for (int i = 0; i < n.Ia; ++i)
              for (int j = 0; j < n.Ja; ++j)
                if (a.xx(i, j, t, l) > 0.5) ax[t].push_back({i, j, l});
            for (int j = 0; j < n.Ja; ++j)
              for (int k = 0; k < n.Ka; ++k)
                if (a.yy(j, k, t, l) > 0.5) ay[t].push_back({j, k, l});
            for (int k = 0; k < n.Ka; ++k)
              for (int m = 0; m < n.M; ++m)
                if (a.zz(k, m, t, l) > 0.5) az[t].push_back({k, m, l});
          }
        for (int s = 0; s < n.S && value < best_value; ++s)
          value += srch.scenario(s, ax, ay, az, nullptr);
        if (value < best_value) {
          best_value = value;
          for (int s = 0; s < n.S; ++s) {
            std::vector<PeriodPlan> plans;
            srch.scenario(s, ax, ay, az, &plans);
            for (int t = 0; t < n.T; ++t) {
              const PeriodPlan& pl = plans[t];
              for (std::size_t q = 0; q < ax[t].size(); ++q)
                a.x(ax[t][q].o, ax[t][q].d, t, ax[t][q].l, s) = pl.x[q];
              for (std::size_t q = 0; q < ay[t].size(); ++q)
                a.y(ay[t][q].o, ay[t][q].d, t, ay[t][q].l, s) = pl.y[q];
              for (std::size_t q = 0; q < az[t].size(); ++q)
                a.z(az[t][q].o, az[t][q].d, t, az[t][q].l, s) = pl.z[q];
              for (int j = 0; j < n.Ja; ++j) {
                a.mi(j, t, s) = pl.mi[j];
                a.ms(j, t, s) = pl.ms[j];
                a.mss(j, t, s) = pl.mss[j];
                a.sp(j, t, s) = pl.sp[j];
              }
            }
          }
          best.assignment = std::move(a);
          best.feasible = true;
        }
      }
    }

    // Advance: link choices first, then facility openings.
    std::size_t q = 0;
    while (q < choice.size() && choice[q] == n.L - 1) choice[q++] = -1;
    if (q < choice.size()) {
      ++choice[q];
      continue;
    }
    std::size_t r = 0;
    while (r < open.size() && open[r] == 1) open[r++] = 0;
    if (r == open.size()) break;
    ++open[r];
  }

  best.assignments = srch.count;
  if (best.feasible) best.objective = evaluate(inst, scen, cfg, w, best.assignment).total;
  return best;
}

}  // namespace rgsc::oracle
