#pragma once

#include <vector>

#include "inter_mdm/agent.hpp"
#include "inter_mdm/dataset.hpp"

namespace fixture {

using namespace inter_mdm;

inline StochasticMatrix matrix(const std::vector<std::vector<double>>& rows) {
  StochasticMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, ProbVector(rows[r]));
  return m;
}

// Both agents see only vision, with the given histograms.
inline Dataset vision_only(const std::vector<CountHistogram>& hists) {
  Dataset data;
  data.true_type.assign(hists.size(), 0);
  data.mask = {ModalityMask("v"), ModalityMask("v")};
  data.observations[0][0] = hists;
  data.observations[1][0] = hists;
  data.config.feature_dims = {static_cast<int>(hists.front().size()), 1, 1};
  return data;
}

// Hand-set parameters; theta is K x L for H2H and L x K for T2T.
inline AgentModel agent(Variant variant, AgentId id, int k, int l,
                        const std::vector<std::vector<double>>& theta,
                        const std::vector<std::vector<double>>& phi_v, std::vector<int> c,
                        std::vector<int> w) {
  AgentModel a;
  a.variant = variant;
  a.id = id;
  a.hyper.num_categories = k;
  a.hyper.num_signs = l;
  a.mask = ModalityMask("v");
  if (variant == Variant::H2H) a.pi = ProbVector(std::vector<double>(static_cast<std::size_t>(k), 1.0 / k));
  a.theta = matrix(theta);
  a.phi[0] = matrix(phi_v);
  a.c = std::move(c);
  a.w = std::move(w);
  return a;
}

inline std::vector<std::vector<double>> uniform_rows(std::size_t rows, std::size_t cols) {
  return std::vector<std::vector<double>>(rows, std::vector<double>(cols, 1.0 / static_cast<double>(cols)));
}

}  // namespace fixture
