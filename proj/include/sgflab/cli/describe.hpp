#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sgflab::cli {

/// Every name accepted by describe(): studies, problems and terms.
std::vector<std::string_view> describable_names();

/// Parameters, defaults and the claim a study checks (with its bound), or the
/// constants of a problem/term. Throws ConfigError listing valid names.
std::string describe(std::string_view name);

}  // namespace sgflab::cli
