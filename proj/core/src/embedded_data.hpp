#pragma once

#include <string_view>

// Generated at configure time from core/data/.
namespace claimcheck::preprocess::detail {

std::string_view embedded_emoticons();
std::string_view embedded_url_shorteners();

}  // namespace claimcheck::preprocess::detail
