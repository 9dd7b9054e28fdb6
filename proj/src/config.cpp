#include "sdrct/config.hpp"

#include <cmath>
#include <stdexcept>

namespace sdrct {

void ReconConfig::validate() const {
  if (lambda1 < 0.0 || !std::isfinite(lambda1)) {
    throw std::invalid_argument("lambda1 must be nonnegative");
  }
  if (lambda2 < 0.0 || !std::isfinite(lambda2)) {
    throw std::invalid_argument("lambda2 must be nonnegative");
  }
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw std::invalid_argument("alpha must be in (0, 2]");
  }
  if (!(tv_epsilon > 0.0)) {
    throw std::invalid_argument("tv_epsilon must be positive");
  }
  if (max_outer_iterations < 1) {
    throw std::invalid_argument("max_outer_iterations must be >= 1");
  }
  if (convergence_threshold < 0.0) {
    throw std::invalid_argument("convergence_threshold must be nonnegative");
  }
  if (!(lasso_tolerance > 0.0)) {
    throw std::invalid_argument("lasso_tolerance must be positive");
  }
  if (lasso_max_sweeps < 1) {
    throw std::invalid_argument("lasso_max_sweeps must be >= 1");
  }
  if (ossirt_subsets < 1) {
    throw std::invalid_argument("ossirt_subsets must be >= 1");
  }
}

std::string to_string(TvGradVariant v) {
  return v == TvGradVariant::symmetric ? "symmetric" : "as_printed";
}

std::string to_string(FusionSigns v) {
  return v == FusionSigns::consistent ? "consistent" : "as_printed";
}

TvGradVariant tv_grad_variant_from_string(const std::string& s) {
  if (s == "symmetric") return TvGradVariant::symmetric;
  if (s == "as_printed") return TvGradVariant::as_printed;
  throw std::invalid_argument("unknown tv_grad_variant: " + s);
}

FusionSigns fusion_signs_from_string(const std::string& s) {
  if (s == "consistent") return FusionSigns::consistent;
  if (s == "as_printed") return FusionSigns::as_printed;
  throw std::invalid_argument("unknown fusion_signs: " + s);
}

}  // namespace sdrct
