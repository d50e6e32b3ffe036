#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inter_mdm/errors.hpp"
#include "inter_mdm/random.hpp"

namespace inter_mdm {

enum class Modality : std::uint8_t { Vision = 0, Sound = 1, Haptic = 2 };
inline constexpr std::size_t kNumModalities = 3;
inline constexpr std::array<Modality, kNumModalities> kAllModalities = {
    Modality::Vision, Modality::Sound, Modality::Haptic};

constexpr std::size_t index_of(Modality m) noexcept { return static_cast<std::size_t>(m); }

constexpr char modality_key(Modality m) noexcept {
  switch (m) {
    case Modality::Vision: return 'v';
    case Modality::Sound: return 's';
    case Modality::Haptic: return 'h';
  }
  return '?';
}

inline Modality modality_from_key(char key) {
  switch (key) {
    case 'v': return Modality::Vision;
    case 's': return Modality::Sound;
    case 'h': return Modality::Haptic;
    default: throw ParameterError(std::string("unknown modality '") + key + "'");
  }
}

enum class AgentId : std::uint8_t { A = 0, B = 1 };
constexpr std::size_t index_of(AgentId a) noexcept { return static_cast<std::size_t>(a); }
constexpr char agent_key(AgentId a) noexcept { return a == AgentId::A ? 'A' : 'B'; }
constexpr AgentId other(AgentId a) noexcept { return a == AgentId::A ? AgentId::B : AgentId::A; }

// Which direction the shared sign hangs off the agents' categories.
enum class Variant : std::uint8_t {
  T2T,  // sign is a parent: theta[w] is the category prior
  H2H,  // sign is a child: theta[c] emits the sign
};

inline std::string_view to_string(Variant v) { return v == Variant::T2T ? "t2t" : "h2h"; }

// The set of modalities an agent perceives. Never empty.
class ModalityMask {
 public:
  constexpr ModalityMask() = default;

  static ModalityMask all() { return ModalityMask("vsh"); }

  // Built from a string of modality keys, e.g. "vs".
  explicit ModalityMask(std::string_view keys) {
    for (char k : keys) bits_ |= bit(modality_from_key(k));
    if (bits_ == 0) throw ParameterError("modality mask must not be empty");
  }

  bool has(Modality m) const noexcept { return (bits_ & bit(m)) != 0; }

  std::vector<Modality> present() const {
    std::vector<Modality> out;
    for (Modality m : kAllModalities)
      if (has(m)) out.push_back(m);
    return out;
  }

  std::string keys() const {
    std::string out;
    for (Modality m : present()) out.push_back(modality_key(m));
    return out;
  }

  friend bool operator==(const ModalityMask&, const ModalityMask&) = default;

 private:
  static constexpr std::uint8_t bit(Modality m) noexcept {
    return static_cast<std::uint8_t>(1u << index_of(m));
  }
  std::uint8_t bits_ = 0;
};

struct Hyperparams {
  double alpha = 0.01;                        // sign distribution concentration
  std::array<double, kNumModalities> beta = {0.001, 0.001, 0.001};
  double gamma = 0.01;                        // category prior concentration
  int num_categories = 15;                    // K
  int num_signs = 15;                         // L

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;

  void validate() const {
    auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
    if (!positive(alpha)) throw ConfigError("alpha", "must be > 0");
    if (!positive(gamma)) throw ConfigError("gamma", "must be > 0");
    for (double b : beta)
      if (!positive(b)) throw ConfigError("beta", "must be > 0");
    if (num_categories < 1) throw ConfigError("K", "must be >= 1");
    if (num_signs < 1) throw ConfigError("L", "must be >= 1");
  }
};

// Dense row-stochastic matrix stored row-major.
class StochasticMatrix {
 public:
  StochasticMatrix() = default;
  StochasticMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cols ? 1.0 / static_cast<double>(cols) : 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void set_row(std::size_t r, const ProbVector& p) {
    if (p.size() != cols_) throw ParameterError("row length does not match matrix width");
    std::copy(p.begin(), p.end(), data_.begin() + static_cast<std::ptrdiff_t>(r * cols_));
  }

  ProbVector row_vector(std::size_t r) const {
    auto span = row(r);
    return ProbVector(std::vector<double>(span.begin(), span.end()));
  }

  friend bool operator==(const StochasticMatrix&, const StochasticMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace inter_mdm
