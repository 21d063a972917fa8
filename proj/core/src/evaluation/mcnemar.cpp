#include "claimcheck/evaluation/mcnemar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "claimcheck/error.hpp"

namespace claimcheck::evaluation {
namespace {

// 2 * P(X <= k) for X ~ Binomial(n, 1/2), clamped to 1.
double exact_two_sided(std::size_t n, std::size_t k) {
  if (n <= 50) {
    // Integer arithmetic keeps small cases exact.
    std::uint64_t coef = 1;
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i <= k; ++i) {
      sum += coef;
      coef = coef * (n - i) / (i + 1);
    }
    return std::min(1.0, 2.0 * std::ldexp(static_cast<double>(sum), -static_cast<int>(n)));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i <= k; ++i) {
    const double log_term = std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(i) + 1) -
                            std::lgamma(static_cast<double>(n - i) + 1) - static_cast<double>(n) * std::log(2.0);
    sum += std::exp(log_term);
  }
  return std::min(1.0, 2.0 * sum);
}

}  // namespace

std::string_view mcnemar_method_name(McNemarMethod method) {
  switch (method) {
    case McNemarMethod::automatic: return "auto";
    case McNemarMethod::exact_binomial: return "exact-binomial";
    case McNemarMethod::chi_square_cc: return "chi-square-cc";
  }
  return "?";
}

McNemarMethod parse_mcnemar_method(std::string_view name) {
  if (name == "auto") return McNemarMethod::automatic;
  if (name == "exact" || name == "exact-binomial") return McNemarMethod::exact_binomial;
  if (name == "chi2" || name == "chi-square" || name == "chi-square-cc") return McNemarMethod::chi_square_cc;
  throw ConfigError("unknown McNemar method '" + std::string(name) + "'");
}

double chi_square_1dof_sf(double x) {
  if (x <= 0.0) return 1.0;
  return std::erfc(std::sqrt(x / 2.0));
}

McNemarResult mcnemar(std::size_t b, std::size_t c, double alpha, McNemarMethod method) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  McNemarResult r;
  r.b = b;
  r.c = c;
  r.alpha = alpha;
  const std::size_t n = b + c;
  r.method = method != McNemarMethod::automatic
                 ? method
                 : (n < kExactThreshold ? McNemarMethod::exact_binomial : McNemarMethod::chi_square_cc);
  if (n == 0) {
    r.degenerate = true;
    r.p_value = 1.0;
    if (r.method == McNemarMethod::chi_square_cc) r.statistic = 0.0;
    return r;
  }
  if (r.method == McNemarMethod::exact_binomial) {
    r.p_value = b == c ? 1.0 : exact_two_sided(n, std::min(b, c));
  } else {
    const std::size_t diff = b > c ? b - c : c - b;
    if (diff <= 1) {
      r.statistic = 0.0;
      r.p_value = 1.0;
    } else {
      const double d = static_cast<double>(diff) - 1.0;
      r.statistic = d * d / static_cast<double>(n);
      r.p_value = chi_square_1dof_sf(*r.statistic);
    }
  }
  r.null_rejected = r.p_value < alpha;
  return r;
}

McNemarResult mcnemar(const std::vector<std::pair<bool, bool>>& paired, double alpha, McNemarMethod method) {
  std::size_t b = 0;
  std::size_t c = 0;
  for (const auto& [a_ok, b_ok] : paired) {
    if (a_ok && !b_ok) ++b;
    if (!a_ok && b_ok) ++c;
  }
  return mcnemar(b, c, alpha, method);
}

McNemarResult mcnemar(const std::map<std::string, bool>& a, const std::map<std::string, bool>& b, double alpha,
                      McNemarMethod method) {
  std::vector<std::string> only_a;
  std::vector<std::string> only_b;
  for (const auto& [id, ok] : a) {
    if (!b.count(id)) only_a.push_back(id);
  }
  for (const auto& [id, ok] : b) {
    if (!a.count(id)) only_b.push_back(id);
  }
  if (!only_a.empty() || !only_b.empty()) {
    auto first = [](const std::vector<std::string>& ids) { return ids.empty() ? std::string("-") : ids.front(); };
    throw ConfigError("McNemar needs identical item sets: " + std::to_string(only_a.size()) + " id(s) only in A (e.g. " +
                      first(only_a) + "), " + std::to_string(only_b.size()) + " only in B (e.g. " + first(only_b) +
                      ")");
  }
  std::vector<std::pair<bool, bool>> paired;
  paired.reserve(a.size());
  for (const auto& [id, ok] : a) paired.emplace_back(ok, b.at(id));
  return mcnemar(paired, alpha, method);
}

}  // namespace claimcheck::evaluation
