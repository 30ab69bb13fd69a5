//! Closed-form actions of the Riesz potential, the Cartesian gradient, and
//! their composition on weighted basis expansions, plus the full forward
//! operator L(u~) = -div (-Lap)^{(alpha-2)/2} K grad u~ in coefficient space.
//!
//! Sign bookkeeping: differentiating in y swaps the cosine and sine branches
//! (mu -> mu*), with signs tracked by `Mu::sign`. Scatter targets that land
//! on the excluded index (l = 0, sine) multiply the zero function and are
//! dropped.

use crate::basis::{BasisIndex, CoefficientField, L0Convention, Mu};
use crate::error::{Error, Result};
use crate::gamma::{gamma_ratio2, ln_gamma};

/// Parameters (alpha, k1, k2) of the operator
/// -div (-Lap)^{(alpha-2)/2} diag(k1, k2) grad.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorParams {
    pub alpha: f64,
    pub k1: f64,
    pub k2: f64,
}

impl OperatorParams {
    pub fn new(alpha: f64, k1: f64, k2: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::Domain(format!("alpha must lie in (0, 2), got {alpha}")));
        }
        if !(k1 > 0.0 && k2 > 0.0) {
            return Err(Error::Domain(format!("k1, k2 must be positive, got {k1}, {k2}")));
        }
        Ok(OperatorParams { alpha, k1, k2 })
    }
}

/// Coefficient fields of the two Cartesian derivative channels, both living
/// in the Jacobi family with exponent alpha/2 - 1.
#[derive(Debug, Clone)]
pub struct GradientPair {
    pub dx: CoefficientField,
    pub dy: CoefficientField,
}

/// Eigenvalue of the integral fractional Laplacian on the weighted basis:
/// lambda_{l,n} = 2^alpha Γ(n+1+α/2) Γ(n+1+α/2+l) / (Γ(n+1) Γ(n+1+l)).
pub fn frac_laplacian_eigenvalue(l: u32, n: u32, alpha: f64) -> f64 {
    let (l, n, h) = (l as f64, n as f64, alpha / 2.0);
    (alpha * std::f64::consts::LN_2 + ln_gamma(n + 1.0 + h) + ln_gamma(n + 1.0 + h + l)
        - ln_gamma(n + 1.0)
        - ln_gamma(n + 1.0 + l))
    .exp()
}

/// Result of the Riesz potential acting on one weighted basis function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RieszAction {
    /// Scalar multiplier in front of the output basis function.
    pub coefficient: f64,
    /// Radial index of the output Jacobi polynomial (n + 1 - s).
    pub out_n: u32,
    /// First Jacobi exponent of the output family (alpha/2 - 2 + s).
    pub out_jacobi_a: f64,
}

/// Action of (-Lap)^{(alpha-2)/2} on
/// (1-|x|^2)_+^{alpha/2-s} V_{l,mu} P_n^{(alpha/2-s, l)}(2|x|^2-1):
/// the result is `coefficient` times the unweighted
/// V_{l,mu} P_{out_n}^{(out_jacobi_a, l)}(2|x|^2-1), with
/// coefficient = (-1)^{1-s} 2^{alpha-2}
///   Γ(n+1-s+α/2) Γ(n+l+α/2) / (Γ(n+1) Γ(n+2-s+l)).
pub fn riesz_action(l: u32, n: u32, s: i32, alpha: f64) -> Result<RieszAction> {
    let h = alpha / 2.0;
    if h - s as f64 <= -1.0 {
        return Err(Error::Domain(format!(
            "riesz_action requires alpha/2 - s > -1 (alpha = {alpha}, s = {s})"
        )));
    }
    let out_n = n as i64 + 1 - s as i64;
    if out_n < 0 {
        return Err(Error::Domain(format!(
            "riesz_action requires n + 1 - s >= 0 (n = {n}, s = {s})"
        )));
    }
    let (lf, nf, sf) = (l as f64, n as f64, s as f64);
    let sign = if (1 - s).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let coefficient = sign
        * 2f64.powf(alpha - 2.0)
        * gamma_ratio2(nf + 1.0 - sf + h, nf + lf + h, nf + 1.0, nf + 2.0 - sf + lf);
    Ok(RieszAction { coefficient, out_n: out_n as u32, out_jacobi_a: h - 2.0 + sf })
}

fn assert_raw_alpha_half(c: &CoefficientField, alpha: f64, what: &str) {
    assert!(
        c.convention() == L0Convention::Raw,
        "{what} expects raw basis coefficients; convert with to_convention first"
    );
    assert!(
        (c.beta() - alpha / 2.0).abs() < 1e-12,
        "{what} expects a field in the alpha/2 Jacobi family (beta = {}, alpha = {alpha})",
        c.beta()
    );
}

/// Cartesian gradient of the weighted expansion
/// (1-r^2)^{alpha/2} sum c_{l,n,mu} V_{l,mu} P_n^{(alpha/2, l)}:
/// returns the coefficients of d/dx and d/dy in the weighted family
/// (1-r^2)^{alpha/2-1} V P^{(alpha/2-1, l')}.
///
/// Each input (l, n) with l >= 1 scatters with factor -(n+alpha/2) to
/// (l+1, n) and -(n+1) to (l-1, n+1); l = 0 inputs use the doubled
/// single-term rule. The input must use raw basis coefficients.
pub fn grad_weighted(c: &CoefficientField, alpha: f64) -> GradientPair {
    assert_raw_alpha_half(c, alpha, "grad_weighted");
    let h = alpha / 2.0;
    let beta_out = h - 1.0;
    let mut dx = CoefficientField::new(beta_out, L0Convention::Raw);
    let mut dy = CoefficientField::new(beta_out, L0Convention::Raw);

    for (idx, &v) in c.iter() {
        let (l, n, mu) = (idx.l, idx.n, idx.mu);
        let nf = n as f64;
        if l == 0 {
            let f = -2.0 * (nf + h) * v;
            dx.add(BasisIndex::at(1, n, Mu::Cos), f);
            dy.add(BasisIndex::at(1, n, Mu::Sin), f);
            continue;
        }
        let up = -(nf + h) * v;
        let down = -(nf + 1.0) * v;
        dx.add(BasisIndex::at(l + 1, n, mu), up);
        if !(l == 1 && mu == Mu::Sin) {
            dx.add(BasisIndex::at(l - 1, n + 1, mu), down);
        }
        let star = mu.star();
        dy.add(BasisIndex::at(l + 1, n, star), mu.sign() * up);
        if !(l == 1 && star == Mu::Sin) {
            dy.add(BasisIndex::at(l - 1, n + 1, star), -mu.sign() * down);
        }
    }
    GradientPair { dx, dy }
}

/// One target of an unweighted-derivative scatter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterTerm {
    pub index: BasisIndex,
    pub factor: f64,
    /// First Jacobi exponent of the target family (gamma + 1 except for the
    /// degree-zero targets, where any exponent denotes the constant 1).
    pub out_jacobi_a: f64,
}

/// Scatter stencils of both Cartesian derivatives of one unweighted basis
/// function V_{l,mu} P_n^{(gamma, l)}(2r^2-1).
#[derive(Debug, Clone, Default)]
pub struct GradScatter {
    pub dx: Vec<ScatterTerm>,
    pub dy: Vec<ScatterTerm>,
}

/// Cartesian derivatives of V_{l,mu} P_n^{(gamma, l)}(2r^2-1), expanded in
/// the gamma+1 Jacobi family:
/// for n, l >= 1, d/dx -> (n+l) (l-1, n) + (n+gamma+l+1) (l+1, n-1);
/// boundary rows (n = 0 or l = 0) follow the reduced single-term forms, and
/// the constant (n = l = 0) has zero derivatives.
pub fn grad_unweighted(l: u32, n: u32, mu: Mu, gamma: f64) -> GradScatter {
    let mut out = GradScatter::default();
    let (lf, nf) = (l as f64, n as f64);
    let star = mu.star();
    let push = |list: &mut Vec<ScatterTerm>, l: u32, n: u32, mu: Mu, factor: f64, a: f64| {
        if l == 0 && mu == Mu::Sin {
            return; // multiplies the identically-zero harmonic
        }
        if factor != 0.0 {
            list.push(ScatterTerm { index: BasisIndex::at(l, n, mu), factor, out_jacobi_a: a });
        }
    };

    match (l, n) {
        (0, 0) => {}
        (_, 0) => {
            // d/dx f = l V_{l-1,mu} P_0, d/dy f = -sign(mu) l V_{l-1,mu*} P_0.
            push(&mut out.dx, l - 1, 0, mu, lf, gamma);
            push(&mut out.dy, l - 1, 0, star, -mu.sign() * lf, gamma);
        }
        (0, _) => {
            let f = 2.0 * (nf + gamma + 1.0);
            push(&mut out.dx, 1, n - 1, Mu::Cos, f, gamma + 1.0);
            push(&mut out.dy, 1, n - 1, Mu::Sin, f, gamma + 1.0);
        }
        _ => {
            let low = nf + lf;
            let high = nf + gamma + lf + 1.0;
            push(&mut out.dx, l - 1, n, mu, low, gamma + 1.0);
            push(&mut out.dx, l + 1, n - 1, mu, high, gamma + 1.0);
            push(&mut out.dy, l - 1, n, star, -mu.sign() * low, gamma + 1.0);
            push(&mut out.dy, l + 1, n - 1, star, mu.sign() * high, gamma + 1.0);
        }
    }
    out
}

/// The C2 constant of the Riesz-potential/gradient composition:
/// C2 = -2^{alpha-2} Γ(n+1+α/2) Γ(n+α/2+l) / (Γ(n+1) Γ(n+2+l)).
fn c2_constant(l: u32, n: u32, alpha: f64) -> f64 {
    let h = alpha / 2.0;
    let (lf, nf) = (l as f64, n as f64);
    -2f64.powf(alpha - 2.0) * gamma_ratio2(nf + 1.0 + h, nf + h + lf, nf + 1.0, nf + 2.0 + lf)
}

/// (-Lap)^{(alpha-2)/2} of both Cartesian derivatives of the weighted
/// expansion of `c`, expanded in the unweighted family V P^{(alpha/2-1, l')}.
/// The x channel is scaled by k1, the y channel by k2.
///
/// Input (l, n) scatters with factor C2 (n+alpha/2+l) to (l+1, n) and
/// C2 (n+l+1) to (l-1, n+1); l = 0 inputs use the doubled single-term rule.
pub fn riesz_grad(c: &CoefficientField, params: OperatorParams) -> GradientPair {
    let alpha = params.alpha;
    assert_raw_alpha_half(c, alpha, "riesz_grad");
    let h = alpha / 2.0;
    let beta_out = h - 1.0;
    let mut dx = CoefficientField::new(beta_out, L0Convention::Raw);
    let mut dy = CoefficientField::new(beta_out, L0Convention::Raw);

    for (idx, &v) in c.iter() {
        let (l, n, mu) = (idx.l, idx.n, idx.mu);
        let (lf, nf) = (l as f64, n as f64);
        let c2 = c2_constant(l, n, alpha);
        if l == 0 {
            let f = 2.0 * c2 * (nf + h) * v;
            dx.add(BasisIndex::at(1, n, Mu::Cos), params.k1 * f);
            dy.add(BasisIndex::at(1, n, Mu::Sin), params.k2 * f);
            continue;
        }
        let up = c2 * (nf + h + lf) * v;
        let down = c2 * (nf + lf + 1.0) * v;
        dx.add(BasisIndex::at(l + 1, n, mu), params.k1 * up);
        if !(l == 1 && mu == Mu::Sin) {
            dx.add(BasisIndex::at(l - 1, n + 1, mu), params.k1 * down);
        }
        let star = mu.star();
        dy.add(BasisIndex::at(l + 1, n, star), params.k2 * mu.sign() * up);
        if !(l == 1 && star == Mu::Sin) {
            dy.add(BasisIndex::at(l - 1, n + 1, star), -params.k2 * mu.sign() * down);
        }
    }
    GradientPair { dx, dy }
}

/// The full forward operator in coefficient space:
/// f = -div (-Lap)^{(alpha-2)/2} K grad of the weighted expansion of `u`,
/// re-expanded in {V_{l,mu} P_n^{(alpha/2, l)}}.
///
/// `u` uses the halved l = 0 storage convention; the returned f stores raw
/// coefficients. Assembled by composing the scatter stencils (Riesz-potential
/// gradient followed by the unweighted divergence), never by transcribing
/// the determining equations; the transcription is kept on the verification
/// side as an independent check.
pub fn apply_forward(u: &CoefficientField, params: OperatorParams) -> CoefficientField {
    let alpha = params.alpha;
    let raw = u.to_convention(L0Convention::Raw);
    assert_raw_alpha_half(&raw, alpha, "apply_forward");
    let flux = riesz_grad(&raw, params);
    let gamma = alpha / 2.0 - 1.0;

    let mut f = CoefficientField::new(alpha / 2.0, L0Convention::Raw);
    for (idx, &v) in flux.dx.iter() {
        for term in grad_unweighted(idx.l, idx.n, idx.mu, gamma).dx {
            f.add(term.index, -term.factor * v);
        }
    }
    for (idx, &v) in flux.dy.iter() {
        for term in grad_unweighted(idx.l, idx.n, idx.mu, gamma).dy {
            f.add(term.index, -term.factor * v);
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Point;
    use crate::gamma::gamma;
    use crate::oracle::fd_gradient;
    use std::f64::consts::PI;

    #[test]
    fn eigenvalue_at_origin_index() {
        // lambda_{0,0} at alpha = 1 is 2 Γ(3/2)^2 = π/2.
        let v = frac_laplacian_eigenvalue(0, 0, 1.0);
        assert!((v - PI / 2.0).abs() < 1e-13);
        // General alpha: 2^alpha Γ(1+alpha/2)^2.
        for &alpha in &[0.3, 0.8, 1.7] {
            let v = frac_laplacian_eigenvalue(0, 0, alpha);
            let want = 2f64.powf(alpha) * gamma(1.0 + alpha / 2.0).powi(2);
            assert!((v - want).abs() / want < 1e-13);
        }
    }

    #[test]
    fn eigenvalue_matches_rising_factorial_product() {
        let (l, n, alpha) = (3u32, 2u32, 0.6);
        let h = alpha / 2.0;
        let mut want = 2f64.powf(alpha) * gamma(1.0 + h).powi(2);
        for j in 1..=n {
            want *= (j as f64 + h) / j as f64;
        }
        for j in 1..=(n + l) {
            want *= (j as f64 + h) / j as f64;
        }
        let got = frac_laplacian_eigenvalue(l, n, alpha);
        assert!((got - want).abs() / want < 1e-13, "{got} vs {want}");
    }

    #[test]
    fn riesz_action_quarter_pi_case() {
        // l=1, n=0, s=1, alpha=1: 2^{-1} Γ(1/2) Γ(3/2) / (Γ(1) Γ(2)) = π/4.
        let act = riesz_action(1, 0, 1, 1.0).unwrap();
        assert!((act.coefficient - PI / 4.0).abs() < 1e-14);
        assert_eq!(act.out_n, 0);
        assert!((act.out_jacobi_a + 0.5).abs() < 1e-15);
    }

    #[test]
    fn riesz_action_rejects_bad_s() {
        assert!(riesz_action(1, 0, 2, 1.0).is_err()); // alpha/2 - s = -1.5
        assert!(riesz_action(0, 0, -1, 1.0).is_ok()); // alpha/2 + 1 > -1
        assert!(riesz_action(0, 0, 2, 3.9).is_err()); // n + 1 - s < 0 (alpha/2 - s = -0.05 ok)
    }

    #[test]
    fn composition_reproduces_c2() {
        // -(n+alpha/2) * riesz(s=1) at (l+1, n) equals C2 (n+alpha/2+l).
        for &(l, n, alpha) in &[(1u32, 0u32, 1.0), (4, 3, 0.6), (2, 5, 1.8)] {
            let h = alpha / 2.0;
            let grad_factor = -(n as f64 + h);
            let riesz = riesz_action(l + 1, n, 1, alpha).unwrap();
            let lhs = grad_factor * riesz.coefficient;
            let rhs = c2_constant(l, n, alpha) * (n as f64 + h + l as f64);
            assert!((lhs - rhs).abs() / rhs.abs() < 1e-13, "l={l} n={n}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn grad_weighted_of_pure_weight() {
        // d/dx (1-r^2)^{alpha/2} = -alpha x (1-r^2)^{alpha/2-1}.
        let alpha = 1.2;
        let mut c = CoefficientField::new(alpha / 2.0, L0Convention::Raw);
        c.set(BasisIndex::at(0, 0, Mu::Cos), 1.0);
        let g = grad_weighted(&c, alpha);
        assert_eq!(g.dx.len(), 1);
        let got = g.dx.get(&BasisIndex::at(1, 0, Mu::Cos));
        assert!((got + alpha).abs() < 1e-15);
        let got_y = g.dy.get(&BasisIndex::at(1, 0, Mu::Sin));
        assert!((got_y + alpha).abs() < 1e-15);
    }

    #[test]
    fn grad_weighted_two_term_scatter() {
        let alpha = 1.0;
        let mut c = CoefficientField::new(0.5, L0Convention::Raw);
        c.set(BasisIndex::at(1, 0, Mu::Cos), 1.0);
        let g = grad_weighted(&c, alpha);
        assert!((g.dx.get(&BasisIndex::at(2, 0, Mu::Cos)) + 0.5).abs() < 1e-15);
        assert!((g.dx.get(&BasisIndex::at(0, 1, Mu::Cos)) + 1.0).abs() < 1e-15);
        assert_eq!(g.dx.len(), 2);
    }

    #[test]
    fn grad_weighted_matches_finite_differences() {
        let alpha = 0.8;
        let mut c = CoefficientField::new(alpha / 2.0, L0Convention::Raw);
        for (i, (l, n, mu)) in [(1u32, 1u32, Mu::Cos), (2, 0, Mu::Sin), (0, 2, Mu::Cos), (3, 1, Mu::Sin), (4, 0, Mu::Cos)]
            .into_iter()
            .enumerate()
        {
            c.set(BasisIndex::at(l, n, mu), 0.3 + 0.2 * i as f64);
        }
        let g = grad_weighted(&c, alpha);
        let p = Point::new(0.25, -0.35);
        let (fdx, fdy) = fd_gradient(|q| c.eval(q, true), p, 1e-6);
        let gx = g.dx.eval(p, true);
        let gy = g.dy.eval(p, true);
        assert!((fdx - gx).abs() < 1e-6 * gx.abs().max(1.0), "{fdx} vs {gx}");
        assert!((fdy - gy).abs() < 1e-6 * gy.abs().max(1.0), "{fdy} vs {gy}");
    }

    #[test]
    fn grad_unweighted_constant_vanishes() {
        let s = grad_unweighted(0, 0, Mu::Cos, -0.3);
        assert!(s.dx.is_empty() && s.dy.is_empty());
    }

    #[test]
    fn grad_unweighted_of_x_is_one() {
        let s = grad_unweighted(1, 0, Mu::Cos, 0.7);
        assert_eq!(s.dx.len(), 1);
        assert_eq!(s.dx[0].index, BasisIndex::at(0, 0, Mu::Cos));
        assert_eq!(s.dx[0].factor, 1.0);
        assert_eq!(s.dx[0].out_jacobi_a, 0.7);
        // d/dy of x has only the dropped (0, sine) target.
        assert!(s.dy.is_empty());
    }

    #[test]
    fn grad_unweighted_matches_finite_differences() {
        use crate::jacobi::{eval_jacobi, JacobiParams};
        let gamma = -0.5;
        let (l, n, mu) = (2u32, 1u32, Mu::Cos);
        let f = |p: Point| {
            let t = 2.0 * (p.x * p.x + p.y * p.y) - 1.0;
            crate::basis::eval_solid_harmonic(l, mu, p).unwrap()
                * eval_jacobi(n, JacobiParams::new(gamma, l as f64), t)
        };
        let p = Point::new(0.4, 0.1);
        let (fdx, fdy) = fd_gradient(f, p, 1e-6);
        let s = grad_unweighted(l, n, mu, gamma);
        let eval_terms = |terms: &[ScatterTerm]| {
            let t = 2.0 * (p.x * p.x + p.y * p.y) - 1.0;
            terms
                .iter()
                .map(|term| {
                    term.factor
                        * crate::basis::eval_solid_harmonic(term.index.l, term.index.mu, p).unwrap()
                        * eval_jacobi(
                            term.index.n,
                            JacobiParams::new(term.out_jacobi_a, term.index.l as f64),
                            t,
                        )
                })
                .sum::<f64>()
        };
        let gx = eval_terms(&s.dx);
        let gy = eval_terms(&s.dy);
        assert!((fdx - gx).abs() < 1e-7 * gx.abs().max(1.0), "{fdx} vs {gx}");
        assert!((fdy - gy).abs() < 1e-7 * gy.abs().max(1.0), "{fdy} vs {gy}");
    }

    #[test]
    fn riesz_grad_zero_field() {
        let params = OperatorParams::new(1.0, 2.0, 0.5).unwrap();
        let c = CoefficientField::new(0.5, L0Convention::Raw);
        let g = riesz_grad(&c, params);
        assert!(g.dx.is_empty() && g.dy.is_empty());
    }

    #[test]
    fn riesz_grad_doubled_l0_rule() {
        let alpha = 1.4;
        let params = OperatorParams::new(alpha, 1.0, 1.0).unwrap();
        let mut c = CoefficientField::new(alpha / 2.0, L0Convention::Raw);
        c.set(BasisIndex::at(0, 0, Mu::Cos), 1.0);
        let g = riesz_grad(&c, params);
        let want = 2.0 * c2_constant(0, 0, alpha) * (alpha / 2.0);
        let got = g.dx.get(&BasisIndex::at(1, 0, Mu::Cos));
        assert!((got - want).abs() < 1e-15);
        assert_eq!(g.dx.len(), 1);
    }

    #[test]
    fn riesz_grad_equals_riesz_of_grad() {
        // Coefficientwise identity riesz_action(s=1) ∘ grad_weighted = riesz_grad
        // on a random multi-index field.
        let alpha = 0.9;
        let params = OperatorParams::new(alpha, 1.0, 1.0).unwrap();
        let mut c = CoefficientField::new(alpha / 2.0, L0Convention::Raw);
        for (i, (l, n, mu)) in
            [(0u32, 1u32, Mu::Cos), (1, 0, Mu::Sin), (3, 2, Mu::Cos), (5, 4, Mu::Sin)]
                .into_iter()
                .enumerate()
        {
            c.set(BasisIndex::at(l, n, mu), 1.0 - 0.4 * i as f64);
        }
        let direct = riesz_grad(&c, params);
        let grad = grad_weighted(&c, alpha);
        let mut via_riesz_x = CoefficientField::new(alpha / 2.0 - 1.0, L0Convention::Raw);
        for (idx, &v) in grad.dx.iter() {
            let act = riesz_action(idx.l, idx.n, 1, alpha).unwrap();
            via_riesz_x.add(BasisIndex::at(idx.l, act.out_n, idx.mu), act.coefficient * v);
        }
        let mut via_riesz_y = CoefficientField::new(alpha / 2.0 - 1.0, L0Convention::Raw);
        for (idx, &v) in grad.dy.iter() {
            let act = riesz_action(idx.l, idx.n, 1, alpha).unwrap();
            via_riesz_y.add(BasisIndex::at(idx.l, act.out_n, idx.mu), act.coefficient * v);
        }
        assert!(direct.dx.max_abs_diff(&via_riesz_x) < 1e-14 * direct.dx.max_abs());
        assert!(direct.dy.max_abs_diff(&via_riesz_y) < 1e-14 * direct.dy.max_abs());
    }

    #[test]
    fn forward_of_constant_mode() {
        // u = {(0,0,+1) -> 1} halved: f = 2^{alpha-2}(k1+k2) Γ(1+alpha/2)^2.
        let alpha = 1.3;
        let params = OperatorParams::new(alpha, 2.0, 0.7).unwrap();
        let mut u = CoefficientField::new(alpha / 2.0, L0Convention::Halved);
        u.set(BasisIndex::at(0, 0, Mu::Cos), 1.0);
        let f = apply_forward(&u, params);
        let want =
            2f64.powf(alpha - 2.0) * (params.k1 + params.k2) * gamma(1.0 + alpha / 2.0).powi(2);
        assert_eq!(f.len(), 1);
        let got = f.get(&BasisIndex::at(0, 0, Mu::Cos));
        assert!((got - want).abs() / want < 1e-13, "{got} vs {want}");
    }

    #[test]
    fn forward_is_diagonal_for_isotropic_k() {
        let alpha = 0.7;
        let k = 1.9;
        let params = OperatorParams::new(alpha, k, k).unwrap();
        for (l, n, mu) in [(0u32, 3u32, Mu::Cos), (2, 0, Mu::Cos), (1, 2, Mu::Sin), (4, 4, Mu::Cos)] {
            let mut u_raw = CoefficientField::new(alpha / 2.0, L0Convention::Raw);
            u_raw.set(BasisIndex::at(l, n, mu), 1.0);
            let f = apply_forward(&u_raw.to_convention(L0Convention::Halved), params);
            let lambda = frac_laplacian_eigenvalue(l, n, alpha);
            let got = f.get(&BasisIndex::at(l, n, mu));
            assert!(
                (got - k * lambda).abs() / (k * lambda) < 1e-12,
                "(l,n)=({l},{n}): {got} vs {}",
                k * lambda
            );
            for (idx, &v) in f.iter() {
                if *idx != BasisIndex::at(l, n, mu) {
                    assert!(v.abs() < 1e-12 * k * lambda, "off-diagonal {idx}: {v}");
                }
            }
        }
    }

    #[test]
    fn forward_of_zero_is_zero() {
        let params = OperatorParams::new(0.5, 1.0, 3.0).unwrap();
        let u = CoefficientField::new(0.25, L0Convention::Halved);
        assert!(apply_forward(&u, params).is_empty());
    }
}
