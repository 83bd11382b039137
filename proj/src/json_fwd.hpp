#pragma once

#include <json.hpp>

namespace remap {
using json = nlohmann::ordered_json;
}
