#pragma once

#include <json.hpp>

namespace samdisc {

// Reports keep insertion order so serialized output is byte-stable.
using json = nlohmann::ordered_json;

} // namespace samdisc
