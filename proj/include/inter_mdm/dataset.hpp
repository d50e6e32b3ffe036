#pragma once

// Synthetic multimodal observations. Each object type owns one emission
// distribution per modality drawn from Dir(beta_m); both agents observe every
// object through independent multinomial draws from that shared emission.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "inter_mdm/errors.hpp"
#include "inter_mdm/random.hpp"
#include "inter_mdm/types.hpp"

namespace inter_mdm {

struct SyntheticConfig {
  int num_types = 15;
  int objects_per_type = 10;
  std::array<int, kNumModalities> feature_dims = {20, 20, 20};
  int draws_per_modality = 20;
  Hyperparams hyper{};

  int num_objects() const noexcept { return num_types * objects_per_type; }

  void validate() const {
    if (num_types < 1) throw ConfigError("num_types", "must be >= 1");
    if (objects_per_type < 1) throw ConfigError("objects_per_type", "must be >= 1");
    for (int f : feature_dims)
      if (f < 1) throw ConfigError("feature_dim", "must be >= 1");
    if (draws_per_modality < 1) throw ConfigError("draws_per_modality", "must be >= 1");
    hyper.validate();
  }
};

class Dataset {
 public:
  using Histograms = std::vector<CountHistogram>;

  std::vector<int> true_type;
  std::array<ModalityMask, 2> mask{ModalityMask::all(), ModalityMask::all()};
  // observations[agent][modality]; absent when that agent does not perceive it
  std::array<std::array<std::optional<Histograms>, kNumModalities>, 2> observations;
  SyntheticConfig config;

  std::size_t num_objects() const noexcept { return true_type.size(); }

  bool has(AgentId a, Modality m) const {
    return observations[index_of(a)][index_of(m)].has_value();
  }

  const Histograms& histograms(AgentId a, Modality m) const {
    const auto& slot = observations[index_of(a)][index_of(m)];
    if (!slot) {
      throw ParameterError(std::string("agent ") + agent_key(a) + " has no modality " +
                           modality_key(m));
    }
    return *slot;
  }

  friend bool operator==(const Dataset& x, const Dataset& y) {
    return x.true_type == y.true_type && x.mask == y.mask && x.observations == y.observations;
  }
};

// Ground-truth generating parameters, exposed for tests.
struct GeneratedData {
  Dataset dataset;
  // emissions[type][modality]
  std::vector<std::array<ProbVector, kNumModalities>> true_emissions;
};

inline GeneratedData generate_dataset_with_truth(const SyntheticConfig& cfg,
                                                 const ModalityMask& mask_a,
                                                 const ModalityMask& mask_b, RngStream& rng) {
  cfg.validate();
  GeneratedData out;
  Dataset& data = out.dataset;
  data.config = cfg;
  data.mask = {mask_a, mask_b};

  out.true_emissions.resize(static_cast<std::size_t>(cfg.num_types));
  for (auto& per_type : out.true_emissions) {
    for (Modality m : kAllModalities) {
      const std::vector<double> beta(static_cast<std::size_t>(cfg.feature_dims[index_of(m)]),
                                     cfg.hyper.beta[index_of(m)]);
      per_type[index_of(m)] = sample_dirichlet(beta, rng);
    }
  }

  data.true_type.reserve(static_cast<std::size_t>(cfg.num_objects()));
  for (int t = 0; t < cfg.num_types; ++t)
    for (int i = 0; i < cfg.objects_per_type; ++i) data.true_type.push_back(t);

  // Every histogram is drawn regardless of the masks so the random sequence,
  // and therefore every unmasked observation, is independent of the condition.
  for (AgentId a : {AgentId::A, AgentId::B}) {
    for (Modality m : kAllModalities) {
      Dataset::Histograms hists;
      hists.reserve(data.true_type.size());
      for (int t : data.true_type) {
        hists.push_back(sample_multinomial(cfg.draws_per_modality,
                                           out.true_emissions[static_cast<std::size_t>(t)][index_of(m)],
                                           rng));
      }
      if (data.mask[index_of(a)].has(m))
        data.observations[index_of(a)][index_of(m)] = std::move(hists);
    }
  }
  return out;
}

inline Dataset generate_dataset(const SyntheticConfig& cfg, const ModalityMask& mask_a,
                                const ModalityMask& mask_b, RngStream& rng) {
  return generate_dataset_with_truth(cfg, mask_a, mask_b, rng).dataset;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json hyperparams_to_json(const Hyperparams& h) {
  nlohmann::ordered_json j;
  j["alpha"] = h.alpha;
  j["beta"] = {{"v", h.beta[0]}, {"s", h.beta[1]}, {"h", h.beta[2]}};
  j["gamma"] = h.gamma;
  j["K"] = h.num_categories;
  j["L"] = h.num_signs;
  return j;
}

inline nlohmann::ordered_json synthetic_to_json(const SyntheticConfig& c) {
  nlohmann::ordered_json j;
  j["num_types"] = c.num_types;
  j["objects_per_type"] = c.objects_per_type;
  j["feature_dim"] = {{"v", c.feature_dims[0]}, {"s", c.feature_dims[1]}, {"h", c.feature_dims[2]}};
  j["draws_per_modality"] = c.draws_per_modality;
  j["hyperparams"] = hyperparams_to_json(c.hyper);
  return j;
}

namespace detail {

template <typename T, typename Json>
std::array<T, kNumModalities> per_modality(const Json& j, const std::string& key) {
  std::array<T, kNumModalities> out{};
  if (j.is_number()) {
    out.fill(j.template get<T>());
    return out;
  }
  if (!j.is_object()) throw ConfigError(key, "expected a number or {v,s,h} object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key().size() != 1 || std::string("vsh").find(it.key()) == std::string::npos)
      throw ConfigError(key + "." + it.key(), "unknown modality key");
    out[index_of(modality_from_key(it.key()[0]))] = it.value().template get<T>();
  }
  return out;
}

}  // namespace detail

// Unknown keys are rejected; omitted keys keep the values already in `h`.
template <typename Json>
void hyperparams_from_json(const Json& j, Hyperparams& h) {
  if (!j.is_object()) throw ConfigError("hyperparams", "expected an object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      if (k == "alpha") h.alpha = it.value().template get<double>();
      else if (k == "beta") h.beta = detail::per_modality<double>(it.value(), "beta");
      else if (k == "gamma") h.gamma = it.value().template get<double>();
      else if (k == "K") h.num_categories = it.value().template get<int>();
      else if (k == "L") h.num_signs = it.value().template get<int>();
      else throw ConfigError(k, "unknown key");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("hyperparams", e.what());
  }
}

template <typename Json>
void synthetic_from_json(const Json& j, SyntheticConfig& c) {
  if (!j.is_object()) throw ConfigError("synthetic", "expected an object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      if (k == "num_types") c.num_types = it.value().template get<int>();
      else if (k == "objects_per_type") c.objects_per_type = it.value().template get<int>();
      else if (k == "feature_dim") c.feature_dims = detail::per_modality<int>(it.value(), "feature_dim");
      else if (k == "draws_per_modality") c.draws_per_modality = it.value().template get<int>();
      else if (k == "hyperparams") hyperparams_from_json(it.value(), c.hyper);
      else throw ConfigError(k, "unknown key");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("synthetic", e.what());
  }
}

inline nlohmann::ordered_json dataset_to_json(const Dataset& data) {
  nlohmann::ordered_json j;
  j["true_type"] = data.true_type;
  nlohmann::ordered_json obs = nlohmann::ordered_json::object();
  nlohmann::ordered_json mask = nlohmann::ordered_json::object();
  for (AgentId a : {AgentId::A, AgentId::B}) {
    nlohmann::ordered_json per_agent = nlohmann::ordered_json::object();
    for (Modality m : kAllModalities) {
      if (data.has(a, m)) per_agent[std::string(1, modality_key(m))] = data.histograms(a, m);
    }
    obs[std::string(1, agent_key(a))] = std::move(per_agent);
    mask[std::string(1, agent_key(a))] = data.mask[index_of(a)].keys();
  }
  j["observations"] = std::move(obs);
  j["mask"] = std::move(mask);
  j["config"] = synthetic_to_json(data.config);
  return j;
}

inline Dataset dataset_from_json(const nlohmann::json& j) {
  Dataset data;
  try {
    data.true_type = j.at("true_type").get<std::vector<int>>();
    if (j.contains("config")) synthetic_from_json(j.at("config"), data.config);
    const auto n = data.true_type.size();
    for (AgentId a : {AgentId::A, AgentId::B}) {
      const std::string ak(1, agent_key(a));
      data.mask[index_of(a)] = ModalityMask(j.at("mask").at(ak).get<std::string>());
      const auto& per_agent = j.at("observations").at(ak);
      for (Modality m : kAllModalities) {
        const std::string mk(1, modality_key(m));
        const bool listed = per_agent.contains(mk);
        if (listed != data.mask[index_of(a)].has(m))
          throw ParameterError("observations for agent " + ak + " disagree with its mask");
        if (!listed) continue;
        auto hists = per_agent.at(mk).get<Dataset::Histograms>();
        if (hists.size() != n)
          throw ParameterError("observation count differs from object count");
        for (const auto& h : hists)
          for (auto c : h)
            if (c < 0) throw ParameterError("negative feature count");
        data.observations[index_of(a)][index_of(m)] = std::move(hists);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("malformed dataset document: ") + e.what());
  }
  return data;
}

}  // namespace inter_mdm
