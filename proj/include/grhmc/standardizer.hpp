#pragma once

#include "grhmc/common.hpp"

namespace grhmc {

/// Affine preconditioning map q = m + S qbar with diagonal positive S.
class Standardizer {
 public:
  Standardizer(Vec center, Vec scale) : m_(std::move(center)), s_(std::move(scale)) {
    if (m_.size() != s_.size())
      throw ContractError("Standardizer: center/scale dimension mismatch");
    if (!(s_.array() > 0.0).all())
      throw ContractError("Standardizer: scale entries must be strictly positive");
  }

  static Standardizer identity(Index d) {
    return Standardizer(Vec::Zero(d), Vec::Ones(d));
  }

  Index dim() const { return m_.size(); }
  const Vec& center() const { return m_; }
  const Vec& scale() const { return s_; }

 private:
  Vec m_, s_;
};

inline Vec standardize(const Vec& q, const Standardizer& std_map) {
  if (q.size() != std_map.dim()) throw ContractError("standardize: dimension mismatch");
  return (q - std_map.center()).cwiseQuotient(std_map.scale());
}

inline Vec unstandardize(const Vec& qbar, const Standardizer& std_map) {
  if (qbar.size() != std_map.dim()) throw ContractError("unstandardize: dimension mismatch");
  return std_map.center() + std_map.scale().cwiseProduct(qbar);
}

}  // namespace grhmc
