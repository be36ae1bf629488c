#pragma once

#include <string>
#include <string_view>

#include "pfc/value.hpp"

namespace pfc {

// (policy (entry (state ...) (action NAME) (theta (X t) ... [(U1 fluents...)]) (sigma (Y t) ...)) ...)
std::string render_policy(const Policy& pi);
Policy parse_policy(std::string_view text);

// (value (entry VALUE (state ...)) ...)
std::string render_value(const ValueFunction& v);
ValueFunction parse_value(std::string_view text);

}  // namespace pfc
