#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qreach/linalg.hpp"

namespace qreach {

/// A named trace-preserving action.
struct SuperOperator {
  std::string name;
  Channel channel;
};

/// A measurement; outcomes are kept sorted by label, which fixes branch order
/// during evolution.
struct Measurement {
  std::string name;
  std::map<std::string, CMatrix> operators;

  Index dim() const;
  bool is_projective(const Tolerances& tol = {}) const;
};

struct Observation {
  std::string measurement;
  std::string outcome;

  auto operator<=>(const Observation&) const = default;
};

/// Sequence of action / measurement names. The first letter acts first.
using Word = std::vector<std::string>;

std::string format_word(const Word& w);

/// Availability map: name -> names allowed next.
using Availability = std::map<std::string, std::set<std::string>>;

class Qmdp {
 public:
  Qmdp() = default;
  /// Checks structural invariants (dimensions, unique names, availability
  /// referring to declared names); completeness is left to validate_model.
  Qmdp(Index dimension, std::vector<SuperOperator> actions,
       std::vector<Measurement> measurements = {},
       std::optional<Availability> availability = std::nullopt);

  Index dim() const { return dim_; }
  const std::vector<SuperOperator>& actions() const { return actions_; }
  const std::vector<Measurement>& measurements() const { return measurements_; }
  const std::optional<Availability>& availability() const { return availability_; }

  bool is_action(const std::string& name) const;
  bool is_measurement(const std::string& name) const;
  bool has_name(const std::string& name) const { return is_action(name) || is_measurement(name); }

  /// Throw kUnknownName when absent.
  const SuperOperator& action(const std::string& name) const;
  const Measurement& measurement(const std::string& name) const;

  /// Actions in declaration order, then measurements.
  std::vector<std::string> names() const;

  /// Whether `next` may follow `previous` (empty previous = first decision).
  bool allows(const std::string& previous, const std::string& next) const;

  /// Same model with only the listed actions (in the given order) and no
  /// measurements or availability.
  Qmdp with_actions(const std::vector<std::string>& keep) const;

 private:
  Index dim_ = 0;
  std::vector<SuperOperator> actions_;
  std::vector<Measurement> measurements_;
  std::optional<Availability> availability_;
};

struct Finding {
  std::string component;  // e.g. "action alpha"
  std::string message;
  double residual = 0.0;
};

/// Completeness and dimension checks; empty iff the model is well formed.
std::vector<Finding> validate_model(const Qmdp& m, const Tolerances& tol = {});

/// Channel sum_m M_m . M_m^dag (outcome discarded).
Channel measurement_to_superop(const Measurement& meas);

/// Channel of a single letter: the action itself, or the outcome-discarding
/// channel of a measurement.
Channel letter_channel(const Qmdp& m, const std::string& name);

/// Kraus form of E_{s_k} o ... o E_{s_1}; the empty word gives the identity.
/// Zero products are dropped.
Channel compose_word(const Qmdp& m, const Word& s);

/// {P_T K P_T}, dropping operators that vanish.
Channel restrict_superop(const Channel& e, const Subspace& t, const Tolerances& tol = {});

// -- serialization -------------------------------------------------------------

Qmdp load_model(const std::string& text);
std::string save_model(const Qmdp& m);

}  // namespace qreach
