#pragma once

// One agent's multimodal Dirichlet mixture: explicit parameters resampled
// from their conjugate posteriors, then per-object category draws from the
// exact full conditional.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "inter_mdm/dataset.hpp"
#include "inter_mdm/errors.hpp"
#include "inter_mdm/random.hpp"
#include "inter_mdm/types.hpp"

namespace inter_mdm {

struct AgentModel {
  Variant variant = Variant::H2H;
  AgentId id = AgentId::A;
  Hyperparams hyper{};
  ModalityMask mask = ModalityMask::all();

  // Category prior; H2H only.
  std::optional<ProbVector> pi;
  // H2H: K x L, row c is P(w | c). T2T: L x K, row w is P(c | w).
  StochasticMatrix theta;
  // phi[m]: K x F_m feature emission, present for perceived modalities.
  std::array<std::optional<StochasticMatrix>, kNumModalities> phi;

  std::vector<int> c;  // category of each object
  std::vector<int> w;  // this agent's copy of each object's sign

  std::size_t num_objects() const noexcept { return c.size(); }
  std::size_t num_categories() const noexcept { return static_cast<std::size_t>(hyper.num_categories); }
  std::size_t num_signs() const noexcept { return static_cast<std::size_t>(hyper.num_signs); }

  // P(sign = w | category = l) under H2H, or P(category = l | sign = w) under T2T.
  double theta_at(std::size_t category, std::size_t sign) const {
    return variant == Variant::H2H ? theta(category, sign) : theta(sign, category);
  }

  friend bool operator==(const AgentModel&, const AgentModel&) = default;
};

// Counts the conjugate updates are built from.
struct SufficientStats {
  std::vector<int> category_counts;              // K
  std::vector<std::vector<int>> joint_counts;    // K x L, [c][w]
  // feature_sums[m][l][f] = sum of o_{m,d,f} over d with c_d = l
  std::array<std::vector<std::vector<long>>, kNumModalities> feature_sums;
};

inline void check_agent(const AgentModel& agent, const Dataset& data) {
  const auto n = data.num_objects();
  if (agent.c.size() != n || agent.w.size() != n)
    throw ParameterError("assignment vectors do not match the dataset size");
  for (std::size_t d = 0; d < n; ++d) {
    if (agent.c[d] < 0 || agent.c[d] >= agent.hyper.num_categories)
      throw ParameterError("category assignment out of range");
    if (agent.w[d] < 0 || agent.w[d] >= agent.hyper.num_signs)
      throw ParameterError("sign assignment out of range");
  }
  for (Modality m : agent.mask.present())
    if (!data.has(agent.id, m))
      throw ParameterError(std::string("agent perceives modality ") + modality_key(m) +
                           " missing from the dataset");
}

inline SufficientStats sufficient_stats(const AgentModel& agent, const Dataset& data) {
  check_agent(agent, data);
  const std::size_t k = agent.num_categories();
  SufficientStats s;
  s.category_counts.assign(k, 0);
  s.joint_counts.assign(k, std::vector<int>(agent.num_signs(), 0));
  for (std::size_t d = 0; d < agent.num_objects(); ++d) {
    ++s.category_counts[static_cast<std::size_t>(agent.c[d])];
    ++s.joint_counts[static_cast<std::size_t>(agent.c[d])][static_cast<std::size_t>(agent.w[d])];
  }
  for (Modality m : agent.mask.present()) {
    const auto& hists = data.histograms(agent.id, m);
    const std::size_t f_dim = hists.empty() ? 0 : hists.front().size();
    auto& sums = s.feature_sums[index_of(m)];
    sums.assign(k, std::vector<long>(f_dim, 0));
    for (std::size_t d = 0; d < hists.size(); ++d) {
      auto& row = sums[static_cast<std::size_t>(agent.c[d])];
      for (std::size_t f = 0; f < f_dim; ++f) row[f] += hists[d][f];
    }
  }
  return s;
}

// Resamples pi (H2H), theta and phi from their Dirichlet posteriors given the
// current assignments. Empty categories fall back to the prior.
inline void update_parameters(AgentModel& agent, const Dataset& data, RngStream& rng) {
  const SufficientStats s = sufficient_stats(agent, data);
  const std::size_t k = agent.num_categories();
  const std::size_t l_dim = agent.num_signs();
  const Hyperparams& h = agent.hyper;

  if (agent.variant == Variant::H2H) {
    std::vector<double> conc(k);
    for (std::size_t l = 0; l < k; ++l) conc[l] = h.gamma + s.category_counts[l];
    agent.pi = sample_dirichlet(conc, rng);

    agent.theta = StochasticMatrix(k, l_dim);
    std::vector<double> row(l_dim);
    for (std::size_t l = 0; l < k; ++l) {
      for (std::size_t w = 0; w < l_dim; ++w) row[w] = h.alpha + s.joint_counts[l][w];
      agent.theta.set_row(l, sample_dirichlet(row, rng));
    }
  } else {
    agent.pi.reset();
    agent.theta = StochasticMatrix(l_dim, k);
    std::vector<double> row(k);
    for (std::size_t w = 0; w < l_dim; ++w) {
      for (std::size_t l = 0; l < k; ++l) row[l] = h.alpha + s.joint_counts[l][w];
      agent.theta.set_row(w, sample_dirichlet(row, rng));
    }
  }

  for (Modality m : kAllModalities) {
    const std::size_t mi = index_of(m);
    if (!agent.mask.has(m)) {
      agent.phi[mi].reset();
      continue;
    }
    const auto& sums = s.feature_sums[mi];
    const std::size_t f_dim = sums.front().size();
    StochasticMatrix phi(k, f_dim);
    std::vector<double> row(f_dim);
    for (std::size_t l = 0; l < k; ++l) {
      for (std::size_t f = 0; f < f_dim; ++f)
        row[f] = h.beta[mi] + static_cast<double>(sums[l][f]);
      phi.set_row(l, sample_dirichlet(row, rng));
    }
    agent.phi[mi] = std::move(phi);
  }
}

namespace detail {

// Log-parameter tables for one sweep over objects.
class CategoryScorer {
 public:
  CategoryScorer(const AgentModel& agent, const Dataset& data) : agent_(agent), data_(data) {
    const std::size_t k = agent.num_categories();
    const std::size_t l_dim = agent.num_signs();
    if (agent.variant == Variant::H2H && !agent.pi)
      throw ParameterError("H2H agent has no category prior");
    log_theta_.assign(k * l_dim, 0.0);
    for (std::size_t l = 0; l < k; ++l)
      for (std::size_t w = 0; w < l_dim; ++w)
        log_theta_[l * l_dim + w] = std::log(std::max(agent.theta_at(l, w), kProbFloor));
    if (agent.pi) {
      log_pi_.resize(k);
      for (std::size_t l = 0; l < k; ++l) log_pi_[l] = std::log(std::max((*agent.pi)[l], kProbFloor));
    }
    for (Modality m : agent.mask.present()) {
      const auto& phi = agent.phi[index_of(m)];
      if (!phi) throw ParameterError("perceived modality has no emission parameters");
      auto& table = log_phi_[index_of(m)];
      table.resize(phi->rows() * phi->cols());
      for (std::size_t l = 0; l < phi->rows(); ++l)
        for (std::size_t f = 0; f < phi->cols(); ++f)
          table[l * phi->cols() + f] = std::log(std::max((*phi)(l, f), kProbFloor));
    }
  }

  std::vector<double> log_weights(std::size_t d) const {
    const std::size_t k = agent_.num_categories();
    const std::size_t l_dim = agent_.num_signs();
    const auto sign = static_cast<std::size_t>(agent_.w[d]);
    std::vector<double> out(k, 0.0);
    for (std::size_t l = 0; l < k; ++l) {
      out[l] = log_theta_[l * l_dim + sign];
      if (!log_pi_.empty()) out[l] += log_pi_[l];
    }
    for (Modality m : agent_.mask.present()) {
      const auto& obs = data_.histograms(agent_.id, m)[d];
      const auto& table = log_phi_[index_of(m)];
      const std::size_t f_dim = obs.size();
      for (std::size_t l = 0; l < k; ++l) {
        double acc = 0.0;
        for (std::size_t f = 0; f < f_dim; ++f)
          if (obs[f] != 0) acc += obs[f] * table[l * f_dim + f];
        out[l] += acc;
      }
    }
    return out;
  }

 private:
  const AgentModel& agent_;
  const Dataset& data_;
  std::vector<double> log_theta_;  // [category][sign]
  std::vector<double> log_pi_;
  std::array<std::vector<double>, kNumModalities> log_phi_;
};

inline void sample_categories_impl(AgentModel& agent, const Dataset& data, RngStream& rng) {
  check_agent(agent, data);
  const CategoryScorer scorer(agent, data);
  for (std::size_t d = 0; d < agent.num_objects(); ++d) {
    const auto weights = scorer.log_weights(d);
    agent.c[d] = static_cast<int>(sample_categorical(normalize_log_weights(weights), rng));
  }
}

}  // namespace detail

// Unnormalized log full conditional of c_d over the K categories.
inline std::vector<double> category_log_weights(const AgentModel& agent, const Dataset& data,
                                                std::size_t d) {
  check_agent(agent, data);
  return detail::CategoryScorer(agent, data).log_weights(d);
}

// c_d ~ pi[l] * theta[l][w_d] * prod_m Mult(o_{m,d} | phi[m][l])
inline void sample_categories_h2h(AgentModel& agent, const Dataset& data, RngStream& rng) {
  if (agent.variant != Variant::H2H) throw ParameterError("agent is not H2H");
  detail::sample_categories_impl(agent, data, rng);
}

// c_d ~ theta[w_d][l] * prod_m Mult(o_{m,d} | phi[m][l])
inline void sample_categories_t2t(AgentModel& agent, const Dataset& data, RngStream& rng) {
  if (agent.variant != Variant::T2T) throw ParameterError("agent is not T2T");
  detail::sample_categories_impl(agent, data, rng);
}

inline void sample_categories(AgentModel& agent, const Dataset& data, RngStream& rng) {
  if (agent.variant == Variant::H2H) sample_categories_h2h(agent, data, rng);
  else sample_categories_t2t(agent, data, rng);
}

// The agent's own belief about the sign of object d given its category.
// T2T assumes a uniform prior over signs, so P(w | c) is the normalized
// column theta[.][c].
inline ProbVector self_word_distribution(const AgentModel& agent, std::size_t d) {
  if (d >= agent.num_objects()) throw ParameterError("object index out of range");
  const auto category = static_cast<std::size_t>(agent.c[d]);
  if (agent.variant == Variant::H2H) return agent.theta.row_vector(category);
  std::vector<double> col(agent.num_signs());
  for (std::size_t w = 0; w < col.size(); ++w) col[w] = std::max(agent.theta(w, category), kProbFloor);
  double total = 0.0;
  for (double x : col) total += x;
  for (double& x : col) x /= total;
  return ProbVector(std::move(col));
}

// Uniform random assignments, then parameters drawn given them. `mask`
// defaults to whatever the dataset provides for this agent.
inline AgentModel init_agent(Variant variant, const Hyperparams& hyper, const Dataset& data,
                             AgentId id, RngStream& rng,
                             std::optional<ModalityMask> mask = std::nullopt) {
  hyper.validate();
  AgentModel agent;
  agent.variant = variant;
  agent.id = id;
  agent.hyper = hyper;
  agent.mask = mask.value_or(data.mask[index_of(id)]);
  const auto n = data.num_objects();
  agent.c.resize(n);
  agent.w.resize(n);
  std::uniform_int_distribution<int> cat(0, hyper.num_categories - 1);
  std::uniform_int_distribution<int> sign(0, hyper.num_signs - 1);
  for (auto& x : agent.c) x = cat(rng.engine());
  for (auto& x : agent.w) x = sign(rng.engine());
  update_parameters(agent, data, rng);
  return agent;
}

// ---------------------------------------------------------------------------
// Snapshot (debugging and fixtures)

namespace detail {

inline nlohmann::ordered_json matrix_to_json(const StochasticMatrix& m) {
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto span = m.row(r);
    rows.push_back(std::vector<double>(span.begin(), span.end()));
  }
  return rows;
}

inline StochasticMatrix matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.empty()) throw ParameterError("empty matrix");
  StochasticMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, ProbVector(rows[r]));
  return m;
}

}  // namespace detail

inline nlohmann::ordered_json agent_to_json(const AgentModel& agent) {
  nlohmann::ordered_json j;
  j["variant"] = std::string(to_string(agent.variant));
  j["agent"] = std::string(1, agent_key(agent.id));
  j["hyperparams"] = hyperparams_to_json(agent.hyper);
  j["mask"] = agent.mask.keys();
  j["c"] = agent.c;
  j["w"] = agent.w;
  if (agent.pi) j["pi"] = std::vector<double>(agent.pi->begin(), agent.pi->end());
  j["theta"] = detail::matrix_to_json(agent.theta);
  nlohmann::ordered_json phi = nlohmann::ordered_json::object();
  for (Modality m : agent.mask.present())
    phi[std::string(1, modality_key(m))] = detail::matrix_to_json(*agent.phi[index_of(m)]);
  j["phi"] = std::move(phi);
  return j;
}

inline AgentModel agent_from_json(const nlohmann::json& j) {
  AgentModel agent;
  try {
    const auto variant = j.at("variant").get<std::string>();
    if (variant != "t2t" && variant != "h2h") throw ParameterError("unknown variant " + variant);
    agent.variant = variant == "t2t" ? Variant::T2T : Variant::H2H;
    agent.id = j.at("agent").get<std::string>() == "B" ? AgentId::B : AgentId::A;
    hyperparams_from_json(j.at("hyperparams"), agent.hyper);
    agent.mask = ModalityMask(j.at("mask").get<std::string>());
    agent.c = j.at("c").get<std::vector<int>>();
    agent.w = j.at("w").get<std::vector<int>>();
    if (j.contains("pi")) agent.pi = ProbVector(j.at("pi").get<std::vector<double>>());
    agent.theta = detail::matrix_from_json(j.at("theta"));
    for (Modality m : agent.mask.present())
      agent.phi[index_of(m)] = detail::matrix_from_json(j.at("phi").at(std::string(1, modality_key(m))));
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("malformed agent snapshot: ") + e.what());
  }
  if ((agent.variant == Variant::H2H) != agent.pi.has_value())
    throw ParameterError("category prior must be present exactly for H2H agents");
  return agent;
}

}  // namespace inter_mdm
