#pragma once

#include "zipfcode/coding.hpp"
#include "zipfcode/corpus.hpp"
#include "zipfcode/error.hpp"
#include "zipfcode/law_fitting.hpp"
#include "zipfcode/random_typing.hpp"
#include "zipfcode/rank_stats.hpp"

namespace zipfcode {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace zipfcode
