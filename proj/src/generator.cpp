#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "rgsc/instance.hpp"

namespace rgsc {

namespace {

struct Profile {
  const char* name;
  double demand_amp;  // relative demand increase at the strongest level
  double delay_amp;
  double cost_amp;
  double loss_amp;    // capacity-loss fraction at the strongest level
};

constexpr Profile kProfiles[] = {
    {"paper-like", 0.25, 1.5, 0.30, 0.30},
    {"severe", 0.50, 3.0, 0.60, 0.60},
    {"none", 0.0, 0.0, 0.0, 0.0},
};

// mt19937_64 is fully specified; the standard distributions are not, so
// uniforms are derived from the raw stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 engine_;
};

double round_to(double x, double unit) { return std::round(x / unit) * unit; }
double cents(double x) { return round_to(x, 0.01); }

}  // namespace

std::vector<std::string> disruption_profiles() {
  std::vector<std::string> names;
  for (const auto& p : kProfiles) names.emplace_back(p.name);
  return names;
}

GeneratedInstance generate_instance(std::uint64_t seed, const NetworkSets& sets,
                                    const std::string& profile_name) {
  const Profile* profile = nullptr;
  for (const auto& p : kProfiles)
    if (profile_name == p.name) profile = &p;
  if (!profile) throw std::invalid_argument("unknown disruption profile '" + profile_name + "'");
  {
    Instance probe;
    probe.sets = sets;
    ScenarioSet none;
    const auto report = validate_instance(probe, none);
    if (has_violation(report, "count"))
      throw std::invalid_argument("invalid network sets: " + report.front().detail);
  }

  const int I = sets.suppliers(), J = sets.manufacturers(), K = sets.warehouses();
  const int M = sets.retailers, T = sets.periods, L = sets.modes, S = sets.scenarios;

  Rng rng(seed);
  Instance inst = make_empty_instance(sets);
  ScenarioSet scen = make_empty_scenarios(sets);

  std::vector<double> level(S);
  for (int s = 0; s < S; ++s) level[s] = S > 1 ? static_cast<double>(s) / (S - 1) : 0.0;

  double weight_sum = 0.0;
  for (int s = 0; s < S; ++s) weight_sum += S - s;
  for (int s = 0; s < S; ++s) scen.probability[s] = (S - s) / weight_sum;

  auto mode_cost = [](int l) { return 1.0 + 0.35 * l; };
  auto mode_delay = [](int l) { return 1.0 / (1.0 + l); };
  auto mode_emission = [](int l) { return 1.0 + 0.4 * l; };

  // Backup suppliers are pricier but less exposed to disruption.
  auto supplier_price = [&](int i) { return i >= sets.suppliers_main ? 1.25 : 1.0; };
  auto supplier_exposure = [&](int i) { return i >= sets.suppliers_main ? 0.3 : 1.0; };
  auto temp_mfg = [&](int j) { return j >= sets.mfg_main; };
  auto temp_wh = [&](int k) { return k >= sets.wh_main; };

  // Fills one echelon: cost, delay and saved time per (o, d, l, s),
  // transport emission per (o, d, l).
  auto fill_link = [&](int n_orig, int n_dest, Tensor& cost, Tensor& delay, Tensor& saved,
                       Tensor& emission, auto price_factor, auto exposure) {
    for (int o = 0; o < n_orig; ++o)
      for (int d = 0; d < n_dest; ++d)
        for (int l = 0; l < L; ++l) {
          const double base_cost = rng.uniform(2.0, 5.0) * price_factor(o, d) * mode_cost(l);
          const double base_delay = rng.uniform(1.0, 4.0) * mode_delay(l);
          saved(o, d, l) = cents(rng.uniform(0.2, 0.6) * base_delay);
          emission(o, d, l) = cents(rng.uniform(0.5, 1.5) * mode_emission(l));
          const double exp = exposure(o, d);
          for (int s = 0; s < S; ++s) {
            cost(o, d, l, s) = cents(base_cost * (1.0 + level[s] * profile->cost_amp * exp));
            delay(o, d, l, s) = cents(base_delay * (1.0 + level[s] * profile->delay_amp * exp));
          }
        }
  };

  fill_link(
      I, J, inst.transport_cost1, inst.transport_delay1, inst.saved_time1,
      inst.emission_transport1,
      [&](int i, int j) { return supplier_price(i) * (temp_mfg(j) ? 1.15 : 1.0); },
      [&](int i, int) { return supplier_exposure(i); });
  fill_link(
      J, K, inst.transport_cost2, inst.transport_delay2, inst.saved_time2,
      inst.emission_transport2,
      [&](int j, int k) { return (temp_mfg(j) ? 1.15 : 1.0) * (temp_wh(k) ? 1.15 : 1.0); },
      [](int, int) { return 1.0; });
  fill_link(
      K, M, inst.transport_cost3, inst.transport_delay3, inst.saved_time3,
      inst.emission_transport3, [&](int k, int) { return temp_wh(k) ? 1.15 : 1.0; },
      [](int, int) { return 1.0; });

  for (int j = 0; j < J; ++j) {
    inst.emission_prod[j] = cents(temp_mfg(j) ? rng.uniform(4.0, 6.0) : rng.uniform(3.0, 5.0));
    const double inv = rng.uniform(0.5, 1.0);
    const double shortage = rng.uniform(15.0, 20.0);
    for (int s = 0; s < S; ++s) {
      inst.inv_cost(j, s) = cents(inv * (1.0 + 0.2 * level[s]));
      inst.short_cost(j, s) = cents(shortage * (1.0 + 0.2 * level[s]));
    }
  }
  for (auto& v : inst.setup_temp_mfg) v = cents(rng.uniform(20000.0, 30000.0));
  for (auto& v : inst.setup_temp_wh) v = cents(rng.uniform(10000.0, 15000.0));

  inst.delay_cost = 40.0;
  inst.info_setup = 30000.0;
  inst.info_training = 12000.0;
  inst.stockpile_premium = 6.0;
  inst.min_suppliers = std::min(2, sets.suppliers_main);
  inst.emission_saving = 0.1;

  // Demand: per-retailer base with per-period noise, scaled up by level.
  for (int m = 0; m < M; ++m) {
    const double base = rng.uniform(7000.0, 8000.0);
    for (int t = 0; t < T; ++t) {
      const double noise = rng.uniform(0.97, 1.03);
      for (int s = 0; s < S; ++s)
        scen.demand(m, t, s) = std::round(base * noise * (1.0 + level[s] * profile->demand_amp));
    }
  }

  auto fill_loss = [&](int n, auto is_temp, Tensor& loss) {
    for (int e = 0; e < n; ++e) {
      const double spread = 0.75 + 0.5 * rng.uniform(0.0, 1.0);
      const double exposure = is_temp(e) ? 0.25 : 1.0;
      for (int s = 0; s < S; ++s)
        loss(e, s) = std::min(1.0, round_to(level[s] * profile->loss_amp * spread * exposure, 1e-4));
    }
  };
  fill_loss(J, temp_mfg, scen.mfg_capacity_loss);
  fill_loss(K, temp_wh, scen.wh_capacity_loss);

  std::vector<double> peak_demand(S, 0.0);  // max over t of total demand
  std::vector<std::vector<double>> period_demand(T, std::vector<double>(S, 0.0));
  for (int s = 0; s < S; ++s)
    for (int t = 0; t < T; ++t) {
      for (int m = 0; m < M; ++m) period_demand[t][s] += scen.demand(m, t, s);
      peak_demand[s] = std::max(peak_demand[s], period_demand[t][s]);
    }

  // Main facilities jointly cover 115% of peak demand in every scenario after
  // their capacity losses; temporary ones are identical and smaller.
  auto fill_capacity = [&](int n_main, int n_total, const Tensor& loss,
                           std::vector<double>& capacity) {
    std::vector<double> share(n_main);
    for (auto& v : share) v = rng.uniform(0.8, 1.2);
    double scale = 0.0;
    for (int s = 0; s < S; ++s) {
      double effective = 0.0;
      for (int e = 0; e < n_main; ++e) effective += share[e] * (1.0 - loss(e, s));
      scale = std::max(scale, 1.15 * peak_demand[s] / effective);
    }
    double mean = 0.0;
    for (int e = 0; e < n_main; ++e) {
      capacity[e] = std::ceil(scale * share[e]);
      mean += capacity[e] / n_main;
    }
    for (int e = n_main; e < n_total; ++e) capacity[e] = std::round(0.35 * mean);
  };
  fill_capacity(sets.mfg_main, J, scen.mfg_capacity_loss, inst.mfg_capacity);
  fill_capacity(sets.wh_main, K, scen.wh_capacity_loss, inst.wh_capacity);

  // Cap: every unit routed along the dirtiest path still fits at t = 0 with
  // 20% headroom, tightening linearly to no headroom in the last period.
  auto max_of = [](const Tensor& t) { return *std::max_element(t.data().begin(), t.data().end()); };
  const double dirtiest = max_of(inst.emission_transport1) +
                          *std::max_element(inst.emission_prod.begin(), inst.emission_prod.end()) +
                          max_of(inst.emission_transport2) + max_of(inst.emission_transport3);
  for (int t = 0; t < T; ++t) {
    double demand_t = 0.0;
    for (int s = 0; s < S; ++s) demand_t = std::max(demand_t, period_demand[t][s]);
    const double headroom = T > 1 ? 1.2 - 0.2 * t / (T - 1) : 1.2;
    inst.cap[t] = std::ceil(dirtiest * demand_t * headroom);
  }

  inst.big_m = std::ceil(min_valid_big_m(scen));
  return {std::move(inst), std::move(scen)};
}

}  // namespace rgsc
