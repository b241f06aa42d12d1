#pragma once

#include <string>

#include "cheeselab/cheese.hpp"
#include "cheeselab/config.hpp"

namespace cheeselab::io {

// Plan documents are line-oriented 'key = value' text with decimal floats
// printed to 17 significant digits; see docs/formats.md.
std::string serialize_plan(const cheese::CheesePlan& plan);
cheese::CheesePlan parse_plan(const std::string& text, const std::string& file_name);

void save_plan(const cheese::CheesePlan& plan, const std::string& path);
cheese::CheesePlan load_plan(const std::string& path);

}  // namespace cheeselab::io
