#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qreach/evolution.hpp"
#include "qreach/io.hpp"
#include "qreach/model.hpp"

namespace qreach {

struct LoopSpec {
  CMatrix guard;  // P1
  std::vector<CMatrix> unitaries;
};

/// A built-in model plus its suggested analysis inputs.
struct Example {
  std::string name;
  Qmdp model;
  Subspace target;
  CMatrix initial;
  std::vector<io::Json> schedulers;  // scheduler-file JSON
  std::optional<LoopSpec> loop;
};

std::vector<std::string> example_names();

/// Throws kUnknownName listing the available names.
Example generate_example(const std::string& name);

/// Model JSON with an extra "metadata" object (target, initial, schedulers,
/// loop guard/unitaries); load_model ignores the extra key.
std::string example_to_json(const Example& ex);

}  // namespace qreach
