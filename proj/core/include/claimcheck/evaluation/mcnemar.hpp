#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace claimcheck::evaluation {

enum class McNemarMethod { automatic, exact_binomial, chi_square_cc };

std::string_view mcnemar_method_name(McNemarMethod method);
McNemarMethod parse_mcnemar_method(std::string_view name);

// With automatic selection the exact test is used while b + c is below this.
inline constexpr std::size_t kExactThreshold = 20;

struct McNemarResult {
  std::size_t b = 0;  // A right, B wrong
  std::size_t c = 0;  // A wrong, B right
  McNemarMethod method = McNemarMethod::exact_binomial;
  std::optional<double> statistic;  // chi-square only
  double p_value = 1.0;
  double alpha = 0.05;
  bool null_rejected = false;
  bool degenerate = false;  // b + c = 0
};

// exact:  p = min(1, 2 * P(X <= min(b, c))), X ~ Binomial(b + c, 1/2)
// chi-square: (|b - c| - 1)^2 / (b + c), clamped to 0 when |b - c| <= 1,
//             p from the 1-dof upper tail, erfc(sqrt(x / 2))
McNemarResult mcnemar(std::size_t b, std::size_t c, double alpha,
                      McNemarMethod method = McNemarMethod::automatic);

// Pairs of (A correct, B correct).
McNemarResult mcnemar(const std::vector<std::pair<bool, bool>>& paired, double alpha,
                      McNemarMethod method = McNemarMethod::automatic);

// Per-id correctness of two models; throws ConfigError when the id sets differ.
McNemarResult mcnemar(const std::map<std::string, bool>& a, const std::map<std::string, bool>& b, double alpha,
                      McNemarMethod method = McNemarMethod::automatic);

// Upper tail of the chi-square distribution with one degree of freedom.
double chi_square_1dof_sf(double x);

}  // namespace claimcheck::evaluation
