//! Smooth variations of oriented lines with exact first derivatives.
//!
//! A variation is built from two vector-valued polynomials `w(s,t)` and
//! `u(s,t)`: the direction is `ξ = w/‖w‖` and the foot point is the
//! projection of `u` onto `ξ⊥`. Because the partials of `w` and `u` are
//! polynomials, the tangent vectors `(dπ(X), K(X))` come out in closed form,
//! which makes these variations the reference machinery for checking
//! `Ω = −dθ` and the derivative of `Ψ` against finite differences of the
//! variation itself.

use crate::line_space::{liouville_theta, symplectic_omega, OrientedLine, SplitTangent};
use crate::numerics::VecA;
use crate::rng::SplitMix64;

/// Vector-valued polynomial in two parameters, total degree ≤ 2.
#[derive(Clone, Debug)]
struct PolyMap2 {
    // Coefficients of 1, s, t, s², st, t².
    c: [VecA; 6],
}

impl PolyMap2 {
    fn eval(&self, s: f64, t: f64) -> VecA {
        let m = [1.0, s, t, s * s, s * t, t * t];
        let mut out = VecA::zeros(self.c[0].dim());
        for (coef, mono) in self.c.iter().zip(m.iter()) {
            out = out.add_scaled(*mono, coef);
        }
        out
    }

    fn d_ds(&self, s: f64, t: f64) -> VecA {
        // ∂/∂s of (1, s, t, s², st, t²) = (0, 1, 0, 2s, t, 0).
        let m = [0.0, 1.0, 0.0, 2.0 * s, t, 0.0];
        let mut out = VecA::zeros(self.c[0].dim());
        for (coef, mono) in self.c.iter().zip(m.iter()) {
            out = out.add_scaled(*mono, coef);
        }
        out
    }

    fn d_dt(&self, s: f64, t: f64) -> VecA {
        let m = [0.0, 0.0, 1.0, 0.0, s, 2.0 * t];
        let mut out = VecA::zeros(self.c[0].dim());
        for (coef, mono) in self.c.iter().zip(m.iter()) {
            out = out.add_scaled(*mono, coef);
        }
        out
    }
}

/// A two-parameter analytic variation `(s,t) ↦ line(s,t)`.
#[derive(Clone, Debug)]
pub struct LineVariation2 {
    w: PolyMap2,
    u: PolyMap2,
}

impl LineVariation2 {
    /// Random variation with `‖w‖` bounded away from zero on the standard
    /// sample square `[-0.2, 0.2]²`.
    pub fn random(dim: usize, rng: &mut SplitMix64) -> Self {
        let base = VecA::from(rng.vec(dim, -1.0, 1.0)).normalized();
        let mut wc: Vec<VecA> = vec![base];
        for _ in 0..5 {
            wc.push(VecA::from(rng.vec(dim, -0.3, 0.3)));
        }
        let mut uc: Vec<VecA> = vec![VecA::from(rng.vec(dim, -2.0, 2.0))];
        for _ in 0..5 {
            uc.push(VecA::from(rng.vec(dim, -1.0, 1.0)));
        }
        LineVariation2 {
            w: PolyMap2 {
                c: wc.try_into().unwrap(),
            },
            u: PolyMap2 {
                c: uc.try_into().unwrap(),
            },
        }
    }

    pub fn line(&self, s: f64, t: f64) -> OrientedLine {
        let w = self.w.eval(s, t);
        let xi = w.normalized();
        let u = self.u.eval(s, t);
        OrientedLine::new(xi.clone(), u.reject_from_unit(&xi)).expect("variation line")
    }

    /// Exact coordinate tangents `(∂_s, ∂_t)` at `(s,t)`.
    ///
    /// With `ξ = w/‖w‖` and `η = u − ⟨u,ξ⟩ξ`:
    /// `∂ξ = (∂w − ξ⟨ξ,∂w⟩)/‖w‖`, and the vertical part is the projection
    /// of `∂η` onto `ξ⊥` (the sphere's connection is the tangential part of
    /// the flat derivative).
    pub fn tangents(&self, s: f64, t: f64) -> (SplitTangent, SplitTangent) {
        let w = self.w.eval(s, t);
        let wn = w.norm();
        let xi = w.scale(1.0 / wn);
        let u = self.u.eval(s, t);
        let eta = u.reject_from_unit(&xi);
        let base = OrientedLine::new(xi.clone(), eta.clone()).expect("variation line");

        let mk = |dw: VecA, du: VecA| {
            let dxi = dw.reject_from_unit(&xi).scale(1.0 / wn);
            // ∂η = ∂u − (⟨∂u,ξ⟩ + ⟨u,∂ξ⟩)ξ − ⟨u,ξ⟩∂ξ.
            let coef = du.dot(&xi) + u.dot(&dxi);
            let deta = du.add_scaled(-coef, &xi).add_scaled(-u.dot(&xi), &dxi);
            let ver = deta.reject_from_unit(&xi);
            SplitTangent::new(base.clone(), dxi, ver).expect("variation tangent")
        };
        (
            mk(self.w.d_ds(s, t), self.u.d_ds(s, t)),
            mk(self.w.d_dt(s, t), self.u.d_dt(s, t)),
        )
    }

    /// Components of the pulled-back Liouville form: `(θ(∂_s), θ(∂_t))`.
    pub fn theta_pullback(&self, s: f64, t: f64) -> (f64, f64) {
        let (xs, xt) = self.tangents(s, t);
        (liouville_theta(&xs), liouville_theta(&xt))
    }

    /// Pulled-back symplectic form evaluated on `(∂_s, ∂_t)`.
    pub fn omega_pullback(&self, s: f64, t: f64) -> f64 {
        let (xs, xt) = self.tangents(s, t);
        symplectic_omega(&xs, &xt).expect("same base")
    }

    /// `d(θ-pullback)(∂_s, ∂_t)` by central differences of the exact
    /// pullback components: `∂_s θ_t − ∂_t θ_s`.
    pub fn fd_exterior_derivative_theta(&self, s: f64, t: f64, h: f64) -> f64 {
        let ds = (self.theta_pullback(s + h, t).1 - self.theta_pullback(s - h, t).1) / (2.0 * h);
        let dt = (self.theta_pullback(s, t + h).0 - self.theta_pullback(s, t - h).0) / (2.0 * h);
        ds - dt
    }
}

/// A one-parameter analytic curve `t ↦ (line(t), r(t))` in the line space
/// crossed with the line parameter.
#[derive(Clone, Debug)]
pub struct LineCurve {
    variation: LineVariation2,
    r0: f64,
    r1: f64,
    r2: f64,
}

impl LineCurve {
    pub fn random(dim: usize, rng: &mut SplitMix64) -> Self {
        LineCurve {
            variation: LineVariation2::random(dim, rng),
            r0: rng.uniform(-2.0, 2.0),
            r1: rng.uniform(-1.0, 1.0),
            r2: rng.uniform(-0.5, 0.5),
        }
    }

    pub fn line(&self, t: f64) -> OrientedLine {
        self.variation.line(t, 0.0)
    }

    pub fn r(&self, t: f64) -> f64 {
        self.r0 + self.r1 * t + self.r2 * t * t
    }

    pub fn rho(&self, t: f64) -> f64 {
        self.r1 + 2.0 * self.r2 * t
    }

    /// Exact velocity of the line component at `t`.
    pub fn tangent(&self, t: f64) -> SplitTangent {
        self.variation.tangents(t, 0.0).0
    }

    /// The evaluation map along the curve: `Ψ(line(t), r(t))`.
    pub fn psi(&self, t: f64) -> VecA {
        self.line(t).point_at(self.r(t))
    }

    /// Central-difference derivative of [`psi`](Self::psi) at `t`.
    pub fn fd_psi_derivative(&self, t: f64, h: f64) -> VecA {
        (&self.psi(t + h) - &self.psi(t - h)).scale(0.5 / h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::line_space::d_psi;

    #[test]
    fn tangents_match_finite_differences() {
        let mut rng = SplitMix64::new(2024);
        let var = LineVariation2::random(3, &mut rng);
        let (s, t) = (0.05, -0.08);
        let (xs, _) = var.tangents(s, t);
        let h = 1e-6;
        let lp = var.line(s + h, t);
        let lm = var.line(s - h, t);
        let fd_xi = (&lp.xi().clone() - lm.xi()).scale(0.5 / h);
        assert!(fd_xi.distance(xs.hor()) < 1e-9);
        // Vertical part: projection of the η-derivative.
        let fd_eta = (&lp.eta().clone() - lm.eta()).scale(0.5 / h);
        let ver = fd_eta.reject_from_unit(var.line(s, t).xi());
        assert!(ver.distance(xs.ver()) < 1e-8);
    }

    #[test]
    fn omega_equals_minus_d_theta() {
        let mut rng = SplitMix64::new(7);
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let var = LineVariation2::random(4, &mut rng);
            let (s, t) = (rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1));
            let d_theta = var.fd_exterior_derivative_theta(s, t, 1e-5);
            let omega = var.omega_pullback(s, t);
            worst = worst.max((d_theta + omega).abs());
        }
        assert!(worst < 1e-6, "worst |dθ + Ω| = {worst:.2e}");
    }

    #[test]
    fn d_psi_matches_curve_derivative() {
        let mut rng = SplitMix64::new(8);
        for _ in 0..50 {
            let curve = LineCurve::random(3, &mut rng);
            let t = rng.uniform(-0.1, 0.1);
            let x = curve.tangent(t);
            let closed = d_psi(&x, curve.r(t), curve.rho(t));
            let fd = curve.fd_psi_derivative(t, 1e-6);
            let scale = closed.norm().max(1.0);
            assert!(closed.distance(&fd) / scale < 1e-6);
        }
    }
}
