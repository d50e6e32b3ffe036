#pragma once

// Inter-agent inference of the shared sign w_d. A speaker proposes a sign from
// its own P(w | c_d); the listener accepts with the Metropolis-Hastings
// probability computed purely from its own parameters. The all-rejection
// baseline and the joint Gibbs topline share the same turn structure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "inter_mdm/agent.hpp"
#include "inter_mdm/dataset.hpp"
#include "inter_mdm/metrics.hpp"
#include "inter_mdm/random.hpp"
#include "inter_mdm/types.hpp"

namespace inter_mdm {

enum class CommunicationMode : std::uint8_t { MH, AllRejection, GibbsTopline };

inline std::string_view to_string(CommunicationMode m) {
  switch (m) {
    case CommunicationMode::MH: return "mh";
    case CommunicationMode::AllRejection: return "reject";
    case CommunicationMode::GibbsTopline: return "gibbs";
  }
  return "?";
}

struct Utterance {
  std::size_t object = 0;
  int sign = 0;
};

struct ExchangeResult {
  Utterance utterance;
  bool accepted = false;
};

namespace detail {

inline double floored_ratio(double num, double den) {
  return std::exp(std::log(std::max(num, kProbFloor)) - std::log(std::max(den, kProbFloor)));
}

inline void check_sign(const AgentModel& agent, std::size_t d, int w) {
  if (d >= agent.num_objects()) throw ParameterError("object index out of range");
  if (w < 0 || w >= agent.hyper.num_signs) throw ParameterError("sign index out of range");
}

}  // namespace detail

// theta[c_d][w_new] / theta[c_d][w_old] for the listener.
inline double acceptance_ratio_h2h(const AgentModel& listener, std::size_t d, int w_new, int w_old) {
  if (listener.variant != Variant::H2H) throw ParameterError("listener is not H2H");
  detail::check_sign(listener, d, w_new);
  detail::check_sign(listener, d, w_old);
  const auto c = static_cast<std::size_t>(listener.c[d]);
  return detail::floored_ratio(listener.theta(c, static_cast<std::size_t>(w_new)),
                               listener.theta(c, static_cast<std::size_t>(w_old)));
}

// theta[w_new][c_d] / theta[w_old][c_d] for the listener.
inline double acceptance_ratio_t2t(const AgentModel& listener, std::size_t d, int w_new, int w_old) {
  if (listener.variant != Variant::T2T) throw ParameterError("listener is not T2T");
  detail::check_sign(listener, d, w_new);
  detail::check_sign(listener, d, w_old);
  const auto c = static_cast<std::size_t>(listener.c[d]);
  return detail::floored_ratio(listener.theta(static_cast<std::size_t>(w_new), c),
                               listener.theta(static_cast<std::size_t>(w_old), c));
}

inline double acceptance_ratio(const AgentModel& listener, std::size_t d, int w_new, int w_old) {
  return listener.variant == Variant::H2H ? acceptance_ratio_h2h(listener, d, w_new, w_old)
                                          : acceptance_ratio_t2t(listener, d, w_new, w_old);
}

inline Utterance utter(const AgentModel& speaker, std::size_t d, RngStream& rng) {
  return {d, static_cast<int>(sample_categorical(self_word_distribution(speaker, d), rng))};
}

// One MH step on the listener's copy of w_d with an independence proposal
// from the speaker. The speaker's own copy is left alone: each agent's copy is
// then a Metropolis-Hastings chain whose target is the normalized product of
// both agents' P(w | c).
inline ExchangeResult mh_exchange(const AgentModel& speaker, AgentModel& listener, std::size_t d,
                                  RngStream& rng) {
  if (speaker.variant != listener.variant) throw ParameterError("agents use different variants");
  const Utterance u = utter(speaker, d, rng);
  const double a = acceptance_ratio(listener, d, u.sign, listener.w[d]);
  // min(1, a); the uniform is drawn only when it matters
  const bool accept = a >= 1.0 || rng.uniform() < a;
  if (accept) listener.w[d] = u.sign;
  return {u, accept};
}

// Baseline: the listener never accepts. The speaker still refreshes its own
// copy from P(w | c_d), which makes each agent an independent single-agent
// Gibbs sampler over its own (c, w).
inline ExchangeResult rejection_exchange(AgentModel& speaker, const AgentModel& listener,
                                         std::size_t d, RngStream& rng) {
  if (speaker.variant != listener.variant) throw ParameterError("agents use different variants");
  const Utterance u = utter(speaker, d, rng);
  speaker.w[d] = u.sign;
  return {u, false};
}

// Joint draw of w_d from the normalized product of both agents' sign
// distributions; both copies receive the same value.
inline int gibbs_word(AgentModel& agent_a, AgentModel& agent_b, std::size_t d, RngStream& rng) {
  if (agent_a.variant != agent_b.variant) throw ParameterError("agents use different variants");
  if (agent_a.num_signs() != agent_b.num_signs()) throw ParameterError("vocabulary sizes differ");
  if (d >= agent_a.num_objects() || d >= agent_b.num_objects())
    throw ParameterError("object index out of range");
  const auto ca = static_cast<std::size_t>(agent_a.c[d]);
  const auto cb = static_cast<std::size_t>(agent_b.c[d]);
  std::vector<double> logw(agent_a.num_signs());
  for (std::size_t w = 0; w < logw.size(); ++w) {
    logw[w] = std::log(std::max(agent_a.theta_at(ca, w), kProbFloor)) +
              std::log(std::max(agent_b.theta_at(cb, w), kProbFloor));
  }
  const int sign = static_cast<int>(sample_categorical(normalize_log_weights(logw), rng));
  agent_a.w[d] = sign;
  agent_b.w[d] = sign;
  return sign;
}

// ---------------------------------------------------------------------------
// Game loop

struct AgentStreams {
  RngStream model;   // parameter and category resampling
  RngStream speech;  // utterances and acceptance draws while speaking
};

struct GameState {
  AgentModel agent_a;
  AgentModel agent_b;
  int iteration = 0;
  CommunicationMode mode = CommunicationMode::MH;
  Variant variant = Variant::H2H;
  AgentStreams streams_a;
  AgentStreams streams_b;
  RngStream joint;  // gibbs_word draws

  AgentModel& agent(AgentId id) { return id == AgentId::A ? agent_a : agent_b; }
  AgentStreams& streams(AgentId id) { return id == AgentId::A ? streams_a : streams_b; }
};

namespace stream_tag {
inline constexpr std::uint64_t kInit = 10;
inline constexpr std::uint64_t kModel = 20;
inline constexpr std::uint64_t kSpeech = 30;
inline constexpr std::uint64_t kJoint = 40;
}  // namespace stream_tag

inline GameState make_game(Variant variant, CommunicationMode mode, const Hyperparams& hyper,
                           const Dataset& data, const RngStream& rng) {
  auto for_agent = [&](AgentId id, std::uint64_t tag) {
    return rng.derive(tag + index_of(id));
  };
  RngStream init_a = for_agent(AgentId::A, stream_tag::kInit);
  RngStream init_b = for_agent(AgentId::B, stream_tag::kInit);
  GameState state{
      init_agent(variant, hyper, data, AgentId::A, init_a),
      init_agent(variant, hyper, data, AgentId::B, init_b),
      0,
      mode,
      variant,
      {for_agent(AgentId::A, stream_tag::kModel), for_agent(AgentId::A, stream_tag::kSpeech)},
      {for_agent(AgentId::B, stream_tag::kModel), for_agent(AgentId::B, stream_tag::kSpeech)},
      rng.derive(stream_tag::kJoint),
  };
  if (mode == CommunicationMode::GibbsTopline) state.agent_b.w = state.agent_a.w;
  return state;
}

inline void agent_turn(GameState& state, AgentId id, const Dataset& data) {
  AgentModel& agent = state.agent(id);
  RngStream& rng = state.streams(id).model;
  update_parameters(agent, data, rng);
  sample_categories(agent, data, rng);
}

inline void speaking_phase(GameState& state, AgentId speaker_id, const Dataset& data) {
  AgentModel& speaker = state.agent(speaker_id);
  AgentModel& listener = state.agent(other(speaker_id));
  RngStream& rng = state.streams(speaker_id).speech;
  for (std::size_t d = 0; d < data.num_objects(); ++d) {
    if (state.mode == CommunicationMode::MH) mh_exchange(speaker, listener, d, rng);
    else rejection_exchange(speaker, listener, d, rng);
  }
}

// A categorizes, A speaks to B, B categorizes, B speaks to A. The topline
// replaces both speaking phases with one joint draw per object.
inline void run_iteration(GameState& state, const Dataset& data) {
  agent_turn(state, AgentId::A, data);
  if (state.mode != CommunicationMode::GibbsTopline) speaking_phase(state, AgentId::A, data);
  agent_turn(state, AgentId::B, data);
  if (state.mode == CommunicationMode::GibbsTopline) {
    for (std::size_t d = 0; d < data.num_objects(); ++d)
      gibbs_word(state.agent_a, state.agent_b, d, state.joint);
  } else {
    speaking_phase(state, AgentId::B, data);
  }
  ++state.iteration;
}

inline MetricsRecord record_metrics(const GameState& state, const Dataset& data) {
  MetricsRecord r;
  r.iteration = state.iteration;
  r.ari_a = adjusted_rand_index(state.agent_a.c, data.true_type);
  r.ari_b = adjusted_rand_index(state.agent_b.c, data.true_type);
  if (state.mode != CommunicationMode::GibbsTopline)
    r.kappa = kappa(state.agent_a.w, state.agent_b.w, state.agent_a.hyper.num_signs);
  return r;
}

struct GameResult {
  GameState state;
  std::vector<MetricsRecord> metrics;
};

inline GameResult run_game(Variant variant, CommunicationMode mode, const Hyperparams& hyper,
                           const Dataset& data, int iterations, const RngStream& rng) {
  if (iterations < 1) throw ParameterError("iterations must be at least 1");
  GameResult result{make_game(variant, mode, hyper, data, rng), {}};
  result.metrics.reserve(static_cast<std::size_t>(iterations));
  for (int i = 0; i < iterations; ++i) {
    run_iteration(result.state, data);
    result.metrics.push_back(record_metrics(result.state, data));
  }
  return result;
}

}  // namespace inter_mdm
