#include "emt/field_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace emt::field {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

struct Basis {
  Complex f1, f2;
  Complex df1, df2;
};

constexpr Complex kI{0.0, 1.0};

PolarTensor material_tensor(const LayerMaterial& m, double r) {
  return std::visit(
      Overloaded{
          [](const IsotropicLayer& l) { return PolarTensor{l.sigma, 0.0, l.sigma}; },
          [](const TensorLayer& l) { return l.k; },
          [r](const SpokeLayer& l) {
            return PolarTensor{l.coef / std::pow(r, l.exponent), 0.0, 0.0};
          },
      },
      m);
}

Complex power(double r, Complex lambda) { return std::exp(lambda * std::log(r)); }

Basis basis_at(const LayerMaterial& m, Dimension dim, double r) {
  return std::visit(
      Overloaded{
          [&](const IsotropicLayer&) {
            // At the centre only the regular function of a core matters.
            if (r <= 0.0) return Basis{0.0, 0.0, 1.0, 0.0};
            if (dim == Dimension::Plane)
              return Basis{r, 1.0 / r, 1.0, -1.0 / (r * r)};
            return Basis{r, 1.0 / (r * r), 1.0, -2.0 / (r * r * r)};
          },
          [&](const TensorLayer& l) {
            const ModeExponents ex = mode_exponents(l.k);
            const Complex up{ex.alpha, ex.beta_coef};
            const Complex down{-ex.alpha, ex.beta_coef};
            if (r <= 0.0) return Basis{0.0, 0.0, 0.0, 0.0};
            return Basis{power(r, up), power(r, down), up * power(r, up - 1.0),
                         down * power(r, down - 1.0)};
          },
          [&](const SpokeLayer& l) {
            const double e = dim == Dimension::Plane ? l.exponent : l.exponent - 1.0;
            return Basis{std::pow(r, e), 1.0, e * std::pow(r, e - 1.0), 0.0};
          },
      },
      m);
}

Complex radial_flux(const PolarTensor& k, Complex w, Complex dw, double r) {
  return k.k_rr * dw - kI * k.k_rtheta * w / r;
}

Complex angular_flux(const PolarTensor& k, Complex w, Complex dw, double r) {
  return k.k_rtheta * dw - kI * k.k_thetatheta * w / r;
}

RadialState layer_state(const SolvedLayer& layer, Dimension dim, double r) {
  const Basis b = basis_at(layer.material, dim, r);
  const Complex w = layer.c1 * b.f1 + layer.c2 * b.f2;
  const Complex dw = layer.c1 * b.df1 + layer.c2 * b.df2;
  if (r <= 0.0) {
    // Only the regular basis function survives at the centre.
    return RadialState{w, dw, 0.0, 0.0};
  }
  const PolarTensor k = material_tensor(layer.material, r);
  return RadialState{w, dw, radial_flux(k, w, dw, r), angular_flux(k, w, dw, r)};
}

const SolvedLayer* find_layer(const FieldSolution& s, double r, Side side) {
  for (const auto& layer : s.layers) {
    const bool inside = side == Side::Inner ? (r > layer.r_inner && r <= layer.r_outer)
                                            : (r >= layer.r_inner && r < layer.r_outer);
    if (inside) return &layer;
  }
  if (r <= 0.0 && !s.layers.empty()) return &s.layers.front();
  return nullptr;  // exterior
}

void check_chain(const LayerChain& chain) {
  if (chain.layers.empty()) throw Error(ErrorCode::EmptyLayerList, "layer chain is empty");
  double previous = 0.0;
  for (const auto& spec : chain.layers) {
    if (!(spec.r_outer > previous))
      throw Error(ErrorCode::RadiusOrdering, "layer radii must increase strictly");
    previous = spec.r_outer;
    if (chain.dim == Dimension::Space && std::holds_alternative<TensorLayer>(spec.material))
      throw Error(ErrorCode::MethodGeometryMismatch,
                  "constant-tensor layers are planar only");
  }
  if (previous != 1.0)
    throw Error(ErrorCode::RadiusOutOfRange, "outermost layer must end at r = 1");
  if (std::holds_alternative<SpokeLayer>(chain.layers.front().material))
    throw Error(ErrorCode::SingularTensor, "a spoke core is singular at the centre");
}

}  // namespace

double ModeExponents::beta(double r) const { return beta_coef * std::log(r); }

ModeExponents mode_exponents(const PolarTensor& k) {
  if (!(k.k_rr > 0.0))
    throw Error(ErrorCode::SingularTensor, "K_rr must be positive");
  const double det = k.det();
  if (det < 0.0) throw Error(ErrorCode::SingularTensor, "tensor is indefinite");
  return ModeExponents{std::sqrt(det) / k.k_rr, k.k_rtheta / k.k_rr};
}

LayerChain chain_for(const Assemblage& a) {
  auto diag = [](double radial, double angular) {
    return TensorLayer{PolarTensor{radial, 0.0, angular}};
  };
  return std::visit(
      Overloaded{
          [](const SpiralWithCore& g) {
            return LayerChain{Dimension::Plane,
                              {{IsotropicLayer{g.sigma_i}, g.r0},
                               {TensorLayer{spiral_tensor(g.spiral)}, 1.0}}};
          },
          [](const CoatedCircles& g) {
            return LayerChain{Dimension::Plane,
                              {{IsotropicLayer{g.sigma_i}, g.r0}, {IsotropicLayer{g.sigma1}, 1.0}}};
          },
          [&](const Schulgasser& g) {
            return LayerChain{Dimension::Plane, {{diag(g.sigma1, g.sigma2), 1.0}}};
          },
          [&](const OrangeWithCore& g) {
            return LayerChain{Dimension::Plane,
                              {{IsotropicLayer{g.sigma_i}, g.r0}, {diag(g.sigma1, g.sigma2), 1.0}}};
          },
          [&](const OrangeWithShell& g) {
            return LayerChain{Dimension::Plane, {{diag(g.sigma_r, g.sigma_theta), g.r0},
                                                 {IsotropicLayer{g.sigma1}, 1.0}}};
          },
          [](const BasicSpiral& g) {
            return LayerChain{Dimension::Plane,
                              {{TensorLayer{spiral_tensor({g.sigma1, g.sigma2, g.phi})}, 1.0}}};
          },
          [](const SpiralWithShell& g) {
            return LayerChain{Dimension::Plane, {{TensorLayer{spiral_tensor(g.spiral)}, g.r0},
                                                 {IsotropicLayer{g.sigma1_shell}, 1.0}}};
          },
          [](const Wheel& g) {
            return LayerChain{Dimension::Plane,
                              {{IsotropicLayer{g.sigma_i}, g.r0},
                               {SpokeLayer{g.sigma1, 1.0}, g.r1},
                               {IsotropicLayer{g.sigma2}, 1.0}}};
          },
          [](const Star& g) {
            return LayerChain{Dimension::Plane, {{IsotropicLayer{g.sigma_i}, g.r0},
                                                 {SpokeLayer{g.spoke_coefficient(), 1.0}, 1.0}}};
          },
          [](const Hub& g) {
            return LayerChain{Dimension::Space,
                              {{IsotropicLayer{g.sigma_i}, g.rho0},
                               {SpokeLayer{g.sigma * g.mu * g.rho0 * g.rho0, 2.0}, 1.0}}};
          },
          [](const SpikyBall& g) {
            return LayerChain{Dimension::Space,
                              {{IsotropicLayer{g.sigma_i}, g.rho0},
                               {SpokeLayer{g.sigma * g.mu * std::pow(g.rho0, g.n), g.n}, 1.0}}};
          },
      },
      a);
}

FieldSolution solve_spiral_core(const SpiralWithCore& a) {
  validate(a);
  const PolarTensor k = spiral_tensor(a.spiral);
  const ModeExponents ex = mode_exponents(k);
  const double s = std::sqrt(a.spiral.sigma1 * a.spiral.sigma2);  // K_rr * alpha
  const double up = std::pow(a.r0, ex.alpha);
  const double down = std::pow(a.r0, -ex.alpha);

  // Unknowns (C1, C3, rho) after C2 = C4 = 0: exterior normalisation
  // U(1) = 1, then [U, V] = 0 and the current condition at r0 written for
  // the common phase beta(r0) shared by the nucleus field and the annulus.
  Eigen::Matrix3d m;
  m << 1.0, 1.0, 0.0,
       up, down, -a.r0,
       s * up, -s * down, -a.sigma_i * a.r0;
  const Eigen::Vector3d rhs(1.0, 0.0, 0.0);
  const Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
  if (!lu.isInvertible() || lu.rcond() < 1e-14)
    throw Error(ErrorCode::SolverSingular, "reduced spiral system is singular");
  const Eigen::Vector3d x = lu.solve(rhs);
  const double c1 = x(0);
  const double c3 = x(1);
  const double rho = x(2);

  FieldSolution sol;
  sol.geometry = a;
  sol.dim = Dimension::Plane;
  sol.sigma_star = s * (c1 - c3);
  const double phase = ex.beta(a.r0);
  sol.a_core = rho * std::cos(phase);
  sol.b_core = rho * std::sin(phase);
  sol.annulus = AnnulusCoefficients{c1, 0.0, c3, 0.0, ex};
  sol.layers = {
      SolvedLayer{IsotropicLayer{a.sigma_i}, 0.0, a.r0, Complex{sol.a_core, sol.b_core}, 0.0},
      SolvedLayer{TensorLayer{k}, a.r0, 1.0, c1, c3},
  };
  return sol;
}

FieldSolution solve_piecewise_isotropic_chain(const LayerChain& chain) {
  check_chain(chain);
  FieldSolution sol;
  sol.dim = chain.dim;

  double r_inner = 0.0;
  Complex c1 = 1.0;
  Complex c2 = 0.0;
  for (std::size_t i = 0; i < chain.layers.size(); ++i) {
    const LayerSpec& spec = chain.layers[i];
    if (i > 0) {
      // Match W and J of the previous layer at r_inner.
      const RadialState inner = layer_state(sol.layers.back(), chain.dim, r_inner);
      const Basis b = basis_at(spec.material, chain.dim, r_inner);
      const PolarTensor k = material_tensor(spec.material, r_inner);
      const Complex g1 = radial_flux(k, b.f1, b.df1, r_inner);
      const Complex g2 = radial_flux(k, b.f2, b.df2, r_inner);
      const Complex det = b.f1 * g2 - b.f2 * g1;
      const double scale = std::abs(b.f1 * g2) + std::abs(b.f2 * g1);
      if (!(std::abs(det) > 1e-13 * scale))
        throw Error(ErrorCode::SolverSingular, "layer transfer matrix is singular");
      c1 = (inner.w * g2 - b.f2 * inner.j) / det;
      c2 = (b.f1 * inner.j - inner.w * g1) / det;
    }
    sol.layers.push_back(SolvedLayer{spec.material, r_inner, spec.r_outer, c1, c2});
    r_inner = spec.r_outer;
  }

  const RadialState outer = layer_state(sol.layers.back(), chain.dim, 1.0);
  const Complex admittance = outer.j / outer.w;
  sol.sigma_star = admittance.real();
  sol.imag_residual = std::abs(admittance.imag());
  for (auto& layer : sol.layers) {
    layer.c1 /= outer.w;
    layer.c2 /= outer.w;
  }
  sol.a_core = sol.layers.front().c1.real();
  sol.b_core = sol.layers.front().c1.imag();
  for (const auto& layer : sol.layers) {
    if (const auto* t = std::get_if<TensorLayer>(&layer.material)) {
      sol.annulus = AnnulusCoefficients{layer.c1.real(), layer.c1.imag(), layer.c2.real(),
                                        layer.c2.imag(), mode_exponents(t->k)};
      break;
    }
  }
  return sol;
}

FieldSolution solve(const Assemblage& a) {
  validate(a);
  if (const auto* spiral = std::get_if<SpiralWithCore>(&a)) return solve_spiral_core(*spiral);
  FieldSolution sol = solve_piecewise_isotropic_chain(chain_for(a));
  sol.geometry = a;
  return sol;
}

RadialState radial_state(const FieldSolution& s, double r, Side side) {
  if (const SolvedLayer* layer = find_layer(s, r, side)) return layer_state(*layer, s.dim, r);
  return RadialState{r, 1.0, s.sigma_star, -kI * s.sigma_star};
}

PolarTensor tensor_at(const FieldSolution& s, double r, Side side) {
  if (const SolvedLayer* layer = find_layer(s, r, side)) return material_tensor(layer->material, r);
  return PolarTensor{s.sigma_star, 0.0, s.sigma_star};
}

double eval_potential(const FieldSolution& s, double r, double theta) {
  if (r > 1.0) return r * std::cos(theta);
  const Complex w = radial_state(s, r).w;
  return w.real() * std::cos(theta) + w.imag() * std::sin(theta);
}

CurrentSample eval_current(const FieldSolution& s, double r, double theta) {
  const RadialState st = radial_state(s, r);
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  if (r <= 0.0) {
    // Uniform nucleus current sigma_i (A, B) projected on the polar frame.
    // A tensor core has |j| ~ r^(alpha - 1) at the centre instead.
    const PolarTensor k = tensor_at(s, 0.0);
    if (!s.layers.empty() && std::holds_alternative<TensorLayer>(s.layers.front().material)) {
      const double alpha = mode_exponents(k).alpha;
      if (alpha > 1.0 + 1e-12) return CurrentSample{0.0, 0.0};
      if (alpha < 1.0 - 1e-12) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return CurrentSample{nan, nan};
      }
    }
    const double jx = k.k_rr * s.a_core;
    const double jy = k.k_rr * s.b_core;
    return CurrentSample{jx * c + jy * sn, -jx * sn + jy * c};
  }
  return CurrentSample{st.j.real() * c + st.j.imag() * sn,
                       st.j_theta.real() * c + st.j_theta.imag() * sn};
}

std::vector<JumpResidual> jump_residuals(const FieldSolution& s) {
  std::vector<JumpResidual> out;
  for (const auto& layer : s.layers) {
    const double r = layer.r_outer;
    const RadialState in = radial_state(s, r, Side::Inner);
    const RadialState outside = radial_state(s, r, Side::Outer);
    out.push_back(JumpResidual{r, std::abs(in.w - outside.w), std::abs(in.j - outside.j)});
  }
  return out;
}

double max_jump_residual(const FieldSolution& s) {
  double worst = 0.0;
  for (const auto& j : jump_residuals(s)) worst = std::max({worst, j.potential, j.current});
  return worst;
}

closed_form::RotationResult nucleus_field(const FieldSolution& s) {
  if (s.layers.empty() || !std::holds_alternative<IsotropicLayer>(s.layers.front().material))
    throw Error(ErrorCode::MethodGeometryMismatch, "assemblage has no isotropic nucleus");
  const double magnitude = std::hypot(s.a_core, s.b_core);
  const double psi = std::atan2(s.b_core, s.a_core);
  return closed_form::RotationResult{std::abs(psi), std::abs(psi), magnitude, psi, psi};
}

}  // namespace emt::field
