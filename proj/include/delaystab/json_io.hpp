#pragma once

// JSON views of the result types. Keys follow the field names; absent
// optional fields are omitted, as is "hi" for an unbounded window.

#include <json.hpp>

#include "delaystab/model.hpp"
#include "delaystab/spectrum.hpp"

namespace dstab {

[[nodiscard]] nlohmann::json to_json(const DerivedQuantities& dq);
[[nodiscard]] nlohmann::json to_json(const Verdict& v);
[[nodiscard]] nlohmann::json to_json(const TauWindows& w);
[[nodiscard]] nlohmann::json to_json(const Trajectory& tr);
[[nodiscard]] nlohmann::json to_json(const Crossing& c);

}  // namespace dstab
