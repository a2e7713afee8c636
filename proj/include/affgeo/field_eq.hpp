#pragma once

// Stress tensors, field-equation residuals, divergence identities and the
// conservation statement for an affine metric with δ = 0.
//
//   M1: Ric - (2 Ric^θ_Ω + 2 dθ⊗dθ + ½ tr(F_θ∘F_θ) g)
//   m1: Ric - ½ R g - (2 Ric^θ_Ω + 2 dθ⊗dθ + (½ tr(F_θ∘F_θ) - |∇θ|²) g)
//   M2: div(e^θ Ω_θ)                      M2_equiv: <div F, ·> - 2 dθ(F(·))
//   M3: Δθ + ½ tr(F_θ∘F_θ)                trace4:   R - 2|∇θ|²  (n = 4 only)

#include <optional>

#include "affgeo/algebroid.hpp"

namespace affgeo {

struct StressTensors {
  Tensor t_omega_theta;  // 2 Ric^θ_Ω + ½ tr(F_θ∘F_θ) g
  Tensor t_theta;        // 2 dθ⊗dθ - |∇θ|² g
};

struct FieldEquationResiduals {
  Tensor m1_big;    // M1
  Tensor m1_small;  // m1
  Tensor m2;        // 1-form
  Tensor m2_equiv;  // 1-form
  Jet m3;
  std::optional<Jet> trace4;
};

struct DivergenceIdentities {
  Tensor div_ric_omega;     // div(Ric_Ω) - <div F, F(·)> - ¼ d|F|²
  Tensor div_trff_g;        // div(tr(F∘F) g) + d|F|²
  Tensor div_t_theta;       // div(T^θ) - 2 Δθ dθ
  Tensor div_t_omega;       // div(T^Ω_θ) - tr(F_θ∘F_θ) dθ, holds only where M2 does
  Tensor m2;                // local M2 residual reported beside the conditional one
};

struct Conservation {
  Tensor divergence;  // div(T^Ω_θ + T^θ)
  double m2 = 0.0;    // max |M2|
  double m3 = 0.0;    // |M3|
};

StressTensors stress_tensors(const AffineGeometry& geo);
FieldEquationResiduals residuals(const AffineGeometry& geo);
// Needs jets of order >= 3.
DivergenceIdentities divergence_identities(const AffineGeometry& geo);
Conservation conservation_check(const AffineGeometry& geo);

}  // namespace affgeo
