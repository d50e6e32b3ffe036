// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "chains.hpp"
#include "fixtures.hpp"
#include "inter_mdm/inter_mdm.hpp"
#include "oracles.hpp"

using namespace inter_mdm;

namespace {

using CellKey = std::tuple<Variant, CommunicationMode, int>;

std::map<CellKey, SummaryRow> g_cells;

const SummaryRow& cell(Variant v, CommunicationMode m, int condition) {
  const CellKey key{v, m, condition};
  auto it = g_cells.find(key);
  if (it != g_cells.end()) return it->second;
  ExperimentConfig cfg;
  cfg.variant = v;
  cfg.method = m;
  cfg.condition = condition;
  cfg.seed = 1;
  const SummaryRow s = summarize_cell(run_cell(cfg));
  std::printf("  cell %s/%s/%d: ARI_A %.3f (%.3f)  ARI_B %.3f (%.3f)", std::string(to_string(v)).c_str(),
              std::string(to_string(m)).c_str(), condition, s.ari_a.mean, s.ari_a.sd, s.ari_b.mean, s.ari_b.sd);
  if (s.kappa) std::printf("  kappa %.3f (%.3f)", s.kappa->mean, s.kappa->sd);
  std::printf("\n");
  std::fflush(stdout);
  return g_cells.emplace(key, s).first->second;
}

bool in_band(double x) { return x >= 0.80 && x <= 0.95; }

int g_failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

void criterion1() {
  const auto& s = cell(Variant::H2H, CommunicationMode::MH, 1);
  report(1, in_band(s.ari_a.mean) && in_band(s.ari_b.mean) && s.kappa->mean >= 0.90,
         fmt("ARI_A %.3f ARI_B %.3f kappa %.3f", s.ari_a.mean, s.ari_b.mean, s.kappa->mean));
}

void criterion2() {
  bool ok = true;
  std::string detail;
  for (Variant v : {Variant::H2H, Variant::T2T}) {
    const auto& s = cell(v, CommunicationMode::AllRejection, 1);
    ok = ok && std::abs(s.kappa->mean) <= 0.15 && in_band(s.ari_a.mean) && in_band(s.ari_b.mean);
    detail += std::string(to_string(v)) + fmt(": kappa %.3f ARI_A %.3f ARI_B %.3f  ", s.kappa->mean, s.ari_a.mean, s.ari_b.mean);
  }
  report(2, ok, detail);
}

void criterion3() {
  const double mh = cell(Variant::H2H, CommunicationMode::MH, 3).ari_b.mean;
  const double rej = cell(Variant::H2H, CommunicationMode::AllRejection, 3).ari_b.mean;
  const double gibbs = cell(Variant::H2H, CommunicationMode::GibbsTopline, 3).ari_b.mean;
  report(3, mh - rej >= 0.05 && std::abs(mh - gibbs) <= 0.06,
         fmt("ARI_B mh %.3f reject %.3f gibbs %.3f (gain %.3f)", mh, rej, gibbs, mh - rej));
}

void criterion4() {
  bool ok = true;
  std::string detail;
  for (Variant v : {Variant::H2H, Variant::T2T}) {
    const auto& mh = cell(v, CommunicationMode::MH, 4);
    const auto& rej = cell(v, CommunicationMode::AllRejection, 4);
    const double gain_a = mh.ari_a.mean - rej.ari_a.mean;
    const double gain_b = mh.ari_b.mean - rej.ari_b.mean;
    ok = ok && gain_a >= 0.03 && gain_b >= 0.05 && mh.kappa->mean >= 0.85;
    detail += std::string(to_string(v)) + fmt(": gain_A %.3f gain_B %.3f kappa %.3f  ", gain_a, gain_b, mh.kappa->mean);
  }
  report(4, ok, detail);
}

void criterion5() {
  const double k = cell(Variant::T2T, CommunicationMode::MH, 1).kappa->mean;
  bool ok = k >= 0.85;
  double worst = 0.0;
  for (int c = 1; c <= kNumConditions; ++c) {
    const auto& t = cell(Variant::T2T, CommunicationMode::MH, c);
    const auto& h = cell(Variant::H2H, CommunicationMode::MH, c);
    worst = std::max({worst, std::abs(t.ari_a.mean - h.ari_a.mean), std::abs(t.ari_b.mean - h.ari_b.mean)});
  }
  ok = ok && worst <= 0.08;
  report(5, ok, fmt("t2t kappa %.3f, max |t2t - h2h| ARI gap %.3f", k, worst));
}

void criterion6() {
  std::mt19937 gen(6);
  double worst = 0.0;
  for (Variant v : {Variant::H2H, Variant::T2T}) {
    for (int draw = 0; draw < 20; ++draw) {
      auto pair = chains::random_pair(v, gen);
      RngStream rng(600 + static_cast<std::uint64_t>(draw), static_cast<std::uint64_t>(v));
      const auto counts = chains::alternating_listener_counts(pair.a, pair.b, 100000, rng);
      worst = std::max(worst, oracle::total_variation(oracle::frequencies(counts), pair.target));
    }
  }
  report(6, worst <= 0.03, fmt("max TV over 40 chains %.4f", worst));
}

void criterion7() {
  const std::vector<double> ra{0.7, 0.2, 0.1}, rb{0.1, 0.2, 0.7};
  AgentModel a = fixture::agent(Variant::H2H, AgentId::A, 1, 3, {ra}, {{0.5, 0.5}}, {0}, {0});
  AgentModel b = fixture::agent(Variant::H2H, AgentId::B, 1, 3, {rb}, {{0.5, 0.5}}, {0}, {0});
  RngStream rng(7, 0);
  std::vector<long> counts(3, 0);
  for (int i = 0; i < 100000; ++i) ++counts[static_cast<std::size_t>(gibbs_word(a, b, 0, rng))];
  const auto freq = oracle::frequencies(counts);
  const double tv = oracle::total_variation(freq, oracle::product_target(ra, rb));
  report(7, tv <= 0.01, fmt("empirical [%.4f, %.4f, %.4f] TV %.4f", freq[0], freq[1], freq[2], tv));
}

void criterion8() {
  std::mt19937 gen(8);
  std::uniform_int_distribution<int> size(1, 30), classes(1, 6);
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const auto n = static_cast<std::size_t>(size(gen));
    const int kx = classes(gen), ky = classes(gen);
    std::vector<int> x(n), y(n);
    for (auto& e : x) e = std::uniform_int_distribution<int>(0, kx - 1)(gen);
    for (auto& e : y) e = std::uniform_int_distribution<int>(0, ky - 1)(gen);
    worst = std::max(worst, std::abs(adjusted_rand_index(x, y) - oracle::ari_by_pairs(x, y)));
    const int l = std::max(kx, ky);
    worst = std::max(worst, std::abs(kappa(x, y, l) - oracle::kappa_by_frequencies(x, y, l)));
  }
  const double example = adjusted_rand_index(std::vector<int>{0, 0, 1, 1}, std::vector<int>{0, 1, 0, 1});
  report(8, worst <= 1e-12 && example == -0.5, fmt("max deviation %.3g, example %.17g", worst, example));
}

void criterion9() {
  ExperimentConfig cfg;
  cfg.trials = 3;
  cfg.iterations = 20;
  cfg.seed = 9;
  auto detail_text = [&] {
    std::ostringstream os;
    write_detail_csv(os, run_cell(cfg));
    return os.str();
  };
  const std::string first = detail_text();
  const std::string second = detail_text();
  report(9, first == second && !first.empty(), fmt("detail CSV bytes %.0f", static_cast<double>(first.size())));
}

}  // namespace

int main() {
  criterion8();
  criterion7();
  criterion6();
  criterion9();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
