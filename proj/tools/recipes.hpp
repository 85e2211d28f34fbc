#pragma once

#include <string>
#include <vector>

#include "causal_affects/io.hpp"

namespace causal_affects {

const std::vector<std::string>& recipe_names();

// Runs every pipeline that applies to the files present in dir/name.
io::Json run_recipe(const std::string& recipes_dir, const std::string& name);

// Dotted paths where actual differs from expected.
std::vector<std::string> diff_reports(const io::Json& expected, const io::Json& actual, const std::string& path = "");

}  // namespace causal_affects
