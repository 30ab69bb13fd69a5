//! Jacobi polynomials P_n^{(a,b)}, their weighted norms, derivatives, and
//! Gauss–Jacobi quadrature rules.
//!
//! Evaluation uses the standard three-term recurrence in the degree, which is
//! stable over the whole parameter range used here (a, b > -2, a + b > -2).
//! The alternating explicit-sum definition suffers cancellation around degree
//! 15 and is kept only as a brute-force oracle in the test suites. Gamma
//! ratios go through log-gamma differences (see [`crate::gamma`]).

use crate::error::{Error, Result};
use crate::gamma::{gamma_ratio, ln_gamma};
use crate::linalg::{sym_eigen, SymMatrix};

/// Exponent pair (a, b) of the Jacobi weight (1-t)^a (1+t)^b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub a: f64,
    pub b: f64,
}

impl JacobiParams {
    pub fn new(a: f64, b: f64) -> Self {
        JacobiParams { a, b }
    }

    /// Orthogonality and norms require a, b > -1.
    fn check_orthogonality_domain(&self) -> Result<()> {
        if self.a <= -1.0 || self.b <= -1.0 {
            return Err(Error::Domain(format!(
                "Jacobi weight exponents must exceed -1 (got a = {}, b = {})",
                self.a, self.b
            )));
        }
        Ok(())
    }
}

/// Evaluate P_n^{(a,b)}(t) by the three-term recurrence in n.
///
/// Valid for a + b > -2 (all parameter families used by the disk operators);
/// t may be anywhere in [-1, 1], endpoints included.
pub fn eval_jacobi(n: u32, params: JacobiParams, t: f64) -> f64 {
    assert!(t.is_finite(), "eval_jacobi: non-finite t");
    let (a, b) = (params.a, params.b);
    debug_assert!(a + b > -2.0, "eval_jacobi: a + b must exceed -2");
    if n == 0 {
        return 1.0;
    }
    let mut p_prev = 1.0;
    let mut p = (a - b) / 2.0 + (a + b + 2.0) / 2.0 * t;
    for k in 1..n {
        let k = k as f64;
        let c = 2.0 * k + a + b;
        let denom = 2.0 * (k + 1.0) * (k + a + b + 1.0) * c;
        let c2 = (c + 1.0) * (a * a - b * b);
        let c3 = c * (c + 1.0) * (c + 2.0);
        let c4 = 2.0 * (k + a) * (k + b) * (c + 2.0);
        let p_next = ((c2 + c3 * t) * p - c4 * p_prev) / denom;
        p_prev = p;
        p = p_next;
    }
    p
}

/// Weighted L2 norm |||P_n^{(a,b)}||| of a Jacobi polynomial:
/// (2^{a+b+1}/(2n+a+b+1) * Γ(n+a+1)Γ(n+b+1)/(Γ(n+1)Γ(n+a+b+1)))^{1/2}.
pub fn jacobi_norm(n: u32, params: JacobiParams) -> Result<f64> {
    params.check_orthogonality_domain()?;
    let (a, b) = (params.a, params.b);
    let n = n as f64;
    let log_sq = (a + b + 1.0) * std::f64::consts::LN_2 - (2.0 * n + a + b + 1.0).ln()
        + ln_gamma(n + a + 1.0)
        + ln_gamma(n + b + 1.0)
        - ln_gamma(n + 1.0)
        - ln_gamma(n + a + b + 1.0);
    Ok((0.5 * log_sq).exp())
}

/// j-th derivative of P_k^{(a,b)} at t:
/// d^j/dt^j P_k = Γ(a+b+k+1+j)/(2^j Γ(a+b+k+1)) P_{k-j}^{(a+j, b+j)}.
/// Returns 0 when j exceeds the degree.
pub fn diff_jacobi(k: u32, j: u32, params: JacobiParams, t: f64) -> f64 {
    if j > k {
        return 0.0;
    }
    if j == 0 {
        return eval_jacobi(k, params, t);
    }
    let (a, b) = (params.a, params.b);
    let base = a + b + k as f64 + 1.0;
    let factor = gamma_ratio(base + j as f64, base) / 2f64.powi(j as i32);
    factor * eval_jacobi(k - j, JacobiParams::new(a + j as f64, b + j as f64), t)
}

/// A quadrature rule on [-1, 1] with respect to the weight (1-t)^a (1+t)^b.
#[derive(Debug, Clone)]
pub struct GaussJacobiRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussJacobiRule {
    /// Golub–Welsch construction: nodes are the eigenvalues of the symmetric
    /// Jacobi matrix of the recurrence coefficients, weights come from the
    /// first components of the eigenvectors scaled by the weight mass
    /// 2^{a+b+1} B(a+1, b+1).
    pub fn new(n_nodes: usize, params: JacobiParams) -> Result<Self> {
        params.check_orthogonality_domain()?;
        if n_nodes == 0 {
            return Err(Error::Resolution("quadrature rule needs at least one node".into()));
        }
        let (a, b) = (params.a, params.b);
        let mass = ((a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0)
            + ln_gamma(b + 1.0)
            - ln_gamma(a + b + 2.0))
        .exp();

        let mut m = SymMatrix::zeros(n_nodes);
        for k in 0..n_nodes {
            let kf = k as f64;
            let diag = if k == 0 {
                (b - a) / (a + b + 2.0)
            } else {
                (b * b - a * a) / ((2.0 * kf + a + b) * (2.0 * kf + a + b + 2.0))
            };
            m.set(k, k, diag);
        }
        for k in 1..n_nodes {
            let kf = k as f64;
            let beta = if k == 1 {
                4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0).powi(2) * (a + b + 3.0))
            } else {
                4.0 * kf * (kf + a) * (kf + b) * (kf + a + b)
                    / ((2.0 * kf + a + b).powi(2) * (2.0 * kf + a + b + 1.0) * (2.0 * kf + a + b - 1.0))
            };
            m.set(k - 1, k, beta.sqrt());
        }

        let (vals, vecs) = sym_eigen(&m);
        let mut nodes = Vec::with_capacity(n_nodes);
        let mut weights = Vec::with_capacity(n_nodes);
        for k in 0..n_nodes {
            let first = vecs[k * n_nodes];
            nodes.push(vals[k]);
            weights.push(mass * first * first);
        }
        Ok(GaussJacobiRule { nodes, weights })
    }

    /// Gauss–Legendre special case (a = b = 0).
    pub fn legendre(n_nodes: usize) -> Result<Self> {
        GaussJacobiRule::new(n_nodes, JacobiParams::new(0.0, 0.0))
    }

    /// Integrate g against the rule's weight: ∫ (1-t)^a (1+t)^b g(t) dt.
    pub fn integrate<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * g(t)).sum()
    }
}
