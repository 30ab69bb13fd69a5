//! The weighted orthogonal basis {V_{l,mu}(x) P_n^{(beta,l)}(2r^2-1)} of
//! L^2_beta on the unit disk: indexing, evaluation, closed-form norms,
//! projection by tensor quadrature, and the coefficient CSV file format.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::jacobi::{eval_jacobi, jacobi_norm, GaussJacobiRule, JacobiParams};

/// Angular branch of a solid harmonic: mu = +1 is the cosine branch,
/// mu = -1 the sine branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mu {
    Cos,
    Sin,
}

impl Mu {
    /// Numeric sign of the branch (+1 for cosine, -1 for sine).
    pub fn sign(self) -> f64 {
        match self {
            Mu::Cos => 1.0,
            Mu::Sin => -1.0,
        }
    }

    /// The swapped branch mu*, used by the y-derivative bookkeeping.
    pub fn star(self) -> Mu {
        match self {
            Mu::Cos => Mu::Sin,
            Mu::Sin => Mu::Cos,
        }
    }

    pub fn from_int(v: i32) -> Result<Mu> {
        match v {
            1 => Ok(Mu::Cos),
            -1 => Ok(Mu::Sin),
            _ => Err(Error::Format(format!("mu must be 1 or -1, got {v}"))),
        }
    }

    pub fn as_int(self) -> i32 {
        match self {
            Mu::Cos => 1,
            Mu::Sin => -1,
        }
    }
}

/// Index (l, n, mu) of one basis function V_{l,mu} P_n^{(beta,l)}(2r^2-1).
/// The sine branch at l = 0 is identically zero and therefore excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub l: u32,
    pub n: u32,
    pub mu: Mu,
}

impl BasisIndex {
    pub fn new(l: u32, n: u32, mu: Mu) -> Result<BasisIndex> {
        if l == 0 && mu == Mu::Sin {
            return Err(Error::ForbiddenIndex);
        }
        Ok(BasisIndex { l, n, mu })
    }

    /// Shorthand used throughout the tests; panics on the forbidden index.
    pub fn at(l: u32, n: u32, mu: Mu) -> BasisIndex {
        BasisIndex::new(l, n, mu).expect("valid basis index")
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {:+})", self.l, self.n, self.mu.as_int())
    }
}

// Canonical ordering: cosine branch first, then by l, then n. This fixes the
// coefficient file row order and every summation order in the library.
impl Ord for BasisIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.mu, self.l, self.n).cmp(&(other.mu, other.l, other.n))
    }
}

impl PartialOrd for BasisIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// How l = 0 entries of a coefficient map are stored.
///
/// `Halved` is the solver-facing convention: the stored value u_{0,n,1} is
/// twice the actual basis coefficient, so that the chain blocks come out
/// symmetric. `Raw` stores plain basis coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum L0Convention {
    Raw,
    Halved,
}

impl L0Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            L0Convention::Raw => "raw",
            L0Convention::Halved => "halved",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(L0Convention::Raw),
            "halved" => Ok(L0Convention::Halved),
            _ => Err(Error::Format(format!("unknown convention '{s}'"))),
        }
    }
}

/// A point of the plane in Cartesian coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Point {
        Point { x, y }
    }

    pub fn from_polar(r: f64, phi: f64) -> Point {
        Point { x: r * phi.cos(), y: r * phi.sin() }
    }

    pub fn r(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn phi(&self) -> f64 {
        self.y.atan2(self.x)
    }
}

/// Solid harmonic V_{l,mu}: r^l cos(l phi) for the cosine branch,
/// r^l sin(l phi) for the sine branch. Low degrees use the Cartesian
/// polynomial forms directly.
pub fn eval_solid_harmonic(l: u32, mu: Mu, p: Point) -> Result<f64> {
    BasisIndex::new(l, 0, mu)?;
    Ok(match (l, mu) {
        (0, Mu::Cos) => 1.0,
        (1, Mu::Cos) => p.x,
        (1, Mu::Sin) => p.y,
        (2, Mu::Cos) => p.x * p.x - p.y * p.y,
        (2, Mu::Sin) => 2.0 * p.x * p.y,
        _ => {
            let r = p.r();
            let phi = p.phi();
            let ang = l as f64 * phi;
            r.powi(l as i32)
                * match mu {
                    Mu::Cos => ang.cos(),
                    Mu::Sin => ang.sin(),
                }
        }
    })
}

/// Sparse real coefficient map over basis indices. Absent entries are zero.
///
/// `beta` records the Jacobi family exponent of the radial polynomials
/// P_n^{(beta, l)}; whether the weight (1-r^2)^beta multiplies the expansion
/// is decided at evaluation time.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientField {
    entries: BTreeMap<BasisIndex, f64>,
    beta: f64,
    convention: L0Convention,
}

impl CoefficientField {
    pub fn new(beta: f64, convention: L0Convention) -> Self {
        CoefficientField { entries: BTreeMap::new(), beta, convention }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn convention(&self) -> L0Convention {
        self.convention
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Set a coefficient; inserting an exact zero removes the entry.
    pub fn set(&mut self, idx: BasisIndex, value: f64) {
        debug_assert!(!(idx.l == 0 && idx.mu == Mu::Sin), "excluded basis index");
        if value == 0.0 {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, value);
        }
    }

    /// Accumulate into a coefficient.
    pub fn add(&mut self, idx: BasisIndex, value: f64) {
        debug_assert!(!(idx.l == 0 && idx.mu == Mu::Sin), "excluded basis index");
        let v = self.entries.entry(idx).or_insert(0.0);
        *v += value;
        if *v == 0.0 {
            self.entries.remove(&idx);
        }
    }

    pub fn get(&self, idx: &BasisIndex) -> f64 {
        self.entries.get(idx).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisIndex, &f64)> {
        self.entries.iter()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest absolute coefficient difference over the union support.
    pub fn max_abs_diff(&self, other: &CoefficientField) -> f64 {
        let mut m = 0.0f64;
        for (idx, v) in &self.entries {
            m = m.max((v - other.get(idx)).abs());
        }
        for (idx, v) in &other.entries {
            m = m.max((v - self.get(idx)).abs());
        }
        m
    }

    /// The raw basis coefficient at an index, resolving the l = 0 halving.
    pub fn raw_coefficient(&self, idx: &BasisIndex) -> f64 {
        let v = self.get(idx);
        if self.convention == L0Convention::Halved && idx.l == 0 {
            v / 2.0
        } else {
            v
        }
    }

    /// Convert between the raw and halved l = 0 storage conventions.
    pub fn to_convention(&self, convention: L0Convention) -> CoefficientField {
        let mut out = CoefficientField::new(self.beta, convention);
        for (idx, &v) in &self.entries {
            let raw = if self.convention == L0Convention::Halved && idx.l == 0 {
                v / 2.0
            } else {
                v
            };
            let stored = if convention == L0Convention::Halved && idx.l == 0 {
                raw * 2.0
            } else {
                raw
            };
            out.set(*idx, stored);
        }
        out
    }

    /// Evaluate the expansion at a point. With `weighted` set the result is
    /// multiplied by (1-r^2)^beta.
    pub fn eval(&self, p: Point, weighted: bool) -> f64 {
        let r2 = p.x * p.x + p.y * p.y;
        let t = 2.0 * r2 - 1.0;
        let mut sum = 0.0;
        for (idx, &v) in &self.entries {
            let coeff = if self.convention == L0Convention::Halved && idx.l == 0 {
                v / 2.0
            } else {
                v
            };
            let harmonic = eval_solid_harmonic(idx.l, idx.mu, p).expect("stored index is valid");
            let radial = eval_jacobi(idx.n, JacobiParams::new(self.beta, idx.l as f64), t);
            sum += coeff * harmonic * radial;
        }
        if weighted {
            sum * (1.0 - r2).powf(self.beta)
        } else {
            sum
        }
    }
}

/// Evaluate an expansion at a point (free-function form of
/// [`CoefficientField::eval`]).
pub fn eval_expansion(c: &CoefficientField, p: Point, weighted: bool) -> f64 {
    c.eval(p, weighted)
}

/// Closed-form L^2_beta norm h_{l,n} of the basis function
/// V_{l,mu} P_n^{(beta,l)}(2r^2-1) on the unit disk.
///
/// Derived with t = 2r^2-1 (so dA = (1/4) dt dphi, 1-r^2 = (1-t)/2,
/// r^2 = (1+t)/2): h^2 = c_l * (1/4) * 2^{-beta-l} * |||P_n^{(beta,l)}|||^2
/// with angular factor c_l = 2 pi for l = 0 and pi otherwise.
pub fn basis_norm_h(l: u32, n: u32, beta: f64) -> Result<f64> {
    let c_l = if l == 0 { 2.0 * std::f64::consts::PI } else { std::f64::consts::PI };
    let poly = jacobi_norm(n, JacobiParams::new(beta, l as f64))?;
    Ok((c_l * 0.25 * 2f64.powf(-beta - l as f64)).sqrt() * poly)
}

/// Node counts for the projection quadrature.
#[derive(Debug, Clone, Copy)]
pub struct ProjectionGrid {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
}

impl ProjectionGrid {
    /// Defaults leave headroom over the minimal exact counts:
    /// max_n + 8 radial nodes and 2 max_l + 8 angular nodes.
    pub fn for_degrees(max_l: u32, max_n: u32) -> ProjectionGrid {
        ProjectionGrid {
            radial_nodes: max_n as usize + 8,
            angular_nodes: 2 * max_l as usize + 8,
        }
    }
}

/// Orthogonal projection of a point-sampled function onto the basis
/// truncated to l <= max_l, n <= max_n:
/// f_{l,n,mu} = <f, B_{l,n,mu}>_beta / h_{l,n}^2.
///
/// The radial rule per angular degree l is Gauss–Jacobi with the weight
/// (1-t)^beta (1+t)^l matched to the substitution t = 2r^2-1; the angular
/// rule is a uniform trapezoid, exact for trigonometric degree below the
/// node count.
pub fn project<F: Fn(Point) -> f64>(
    f: F,
    beta: f64,
    max_l: u32,
    max_n: u32,
    grid: Option<ProjectionGrid>,
) -> Result<CoefficientField> {
    let grid = grid.unwrap_or_else(|| ProjectionGrid::for_degrees(max_l, max_n));
    if grid.radial_nodes < max_n as usize + 1 {
        return Err(Error::Resolution(format!(
            "{} radial nodes cannot resolve radial degree {max_n}",
            grid.radial_nodes
        )));
    }
    if grid.angular_nodes < 2 * max_l as usize + 2 {
        return Err(Error::Resolution(format!(
            "{} angular nodes cannot resolve angular degree {max_l}",
            grid.angular_nodes
        )));
    }

    let m_ang = grid.angular_nodes;
    let dphi = 2.0 * std::f64::consts::PI / m_ang as f64;
    let mut out = CoefficientField::new(beta, L0Convention::Raw);

    for l in 0..=max_l {
        let rule = GaussJacobiRule::new(grid.radial_nodes, JacobiParams::new(beta, l as f64))?;
        // Angular transforms of f at this l, per radial node.
        let mut cos_part = vec![0.0; rule.nodes.len()];
        let mut sin_part = vec![0.0; rule.nodes.len()];
        for (i, &t) in rule.nodes.iter().enumerate() {
            let r = ((1.0 + t) / 2.0).sqrt();
            let mut cs = 0.0;
            let mut sn = 0.0;
            for j in 0..m_ang {
                let phi = dphi * j as f64;
                let v = f(Point::from_polar(r, phi));
                let ang = l as f64 * phi;
                cs += v * ang.cos();
                sn += v * ang.sin();
            }
            cos_part[i] = cs * dphi;
            sin_part[i] = sn * dphi;
        }

        // Radial integral against each P_n, dividing out r^l so the
        // integrand matches the (beta, l) quadrature weight exactly for
        // band-limited f.
        let scale = 0.25 * 2f64.powf(-beta - l as f64);
        for n in 0..=max_n {
            let params = JacobiParams::new(beta, l as f64);
            let mut ip_cos = 0.0;
            let mut ip_sin = 0.0;
            for (i, (&t, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
                let r_pow_l = ((1.0 + t) / 2.0).powf(l as f64 / 2.0);
                let poly = eval_jacobi(n, params, t);
                ip_cos += w * poly * cos_part[i] / r_pow_l;
                ip_sin += w * poly * sin_part[i] / r_pow_l;
            }
            ip_cos *= scale;
            ip_sin *= scale;

            let h2 = basis_norm_h(l, n, beta)?.powi(2);
            out.set(BasisIndex::at(l, n, Mu::Cos), ip_cos / h2);
            if l >= 1 {
                out.set(BasisIndex::at(l, n, Mu::Sin), ip_sin / h2);
            }
        }
    }
    Ok(out)
}

const COEFF_HEADER: &str = "mu,l,n,value";

/// Write a coefficient field in the CSV interchange format: a metadata
/// comment line, the `mu,l,n,value` header, then one row per nonzero entry
/// in canonical order, full round-trip decimals, LF line endings.
pub fn write_coefficients<W: Write>(w: &mut W, c: &CoefficientField) -> Result<()> {
    writeln!(w, "# beta={} convention={}", c.beta, c.convention.as_str())?;
    writeln!(w, "{COEFF_HEADER}")?;
    for (idx, v) in c.iter() {
        writeln!(w, "{},{},{},{}", idx.mu.as_int(), idx.l, idx.n, v)?;
    }
    Ok(())
}

/// Read a coefficient field written by [`write_coefficients`]. Files without
/// the metadata comment fall back to the supplied defaults.
pub fn read_coefficients<R: BufRead>(
    r: &mut R,
    default_beta: f64,
    default_convention: L0Convention,
) -> Result<CoefficientField> {
    let mut beta = default_beta;
    let mut convention = default_convention;
    let mut out: Option<CoefficientField> = None;
    for (line_no, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            for tok in rest.split_whitespace() {
                if let Some(v) = tok.strip_prefix("beta=") {
                    beta = v
                        .parse()
                        .map_err(|_| Error::Format(format!("bad beta '{v}' on line {}", line_no + 1)))?;
                } else if let Some(v) = tok.strip_prefix("convention=") {
                    convention = L0Convention::from_name(v)?;
                }
            }
            continue;
        }
        if line == COEFF_HEADER {
            continue;
        }
        let field = out.get_or_insert_with(|| CoefficientField::new(beta, convention));
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::Format(format!(
                "expected 4 fields on line {}, got {}",
                line_no + 1,
                parts.len()
            )));
        }
        let mu = Mu::from_int(
            parts[0]
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("bad mu on line {}", line_no + 1)))?,
        )?;
        let l: u32 = parts[1]
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad l on line {}", line_no + 1)))?;
        let n: u32 = parts[2]
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad n on line {}", line_no + 1)))?;
        let value: f64 = parts[3]
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad value on line {}", line_no + 1)))?;
        if !value.is_finite() {
            return Err(Error::Format(format!("non-finite value on line {}", line_no + 1)));
        }
        field.set(BasisIndex::new(l, n, mu)?, value);
    }
    Ok(out.unwrap_or_else(|| CoefficientField::new(beta, convention)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forbidden_index_is_rejected() {
        assert!(matches!(BasisIndex::new(0, 3, Mu::Sin), Err(Error::ForbiddenIndex)));
        assert!(eval_solid_harmonic(0, Mu::Sin, Point::new(0.1, 0.2)).is_err());
    }

    #[test]
    fn solid_harmonic_low_degrees() {
        let p = Point::new(0.3, 0.4);
        assert_eq!(eval_solid_harmonic(0, Mu::Cos, p).unwrap(), 1.0);
        assert_eq!(eval_solid_harmonic(1, Mu::Cos, p).unwrap(), 0.3);
        assert_eq!(eval_solid_harmonic(1, Mu::Sin, p).unwrap(), 0.4);
        // 2xy = r^2 sin(2 phi).
        let v = eval_solid_harmonic(2, Mu::Sin, p).unwrap();
        assert!((v - 0.24).abs() < 1e-15);
    }

    #[test]
    fn cartesian_and_polar_forms_agree() {
        let p = Point::new(-0.35, 0.62);
        let r = p.r();
        let phi = p.phi();
        for l in 0..=2u32 {
            for mu in [Mu::Cos, Mu::Sin] {
                if l == 0 && mu == Mu::Sin {
                    continue;
                }
                let cart = eval_solid_harmonic(l, mu, p).unwrap();
                let ang = l as f64 * phi;
                let pol = r.powi(l as i32)
                    * match mu {
                        Mu::Cos => ang.cos(),
                        Mu::Sin => ang.sin(),
                    };
                assert!((cart - pol).abs() < 1e-15, "l={l} mu={mu:?}");
            }
        }
    }

    #[test]
    fn eval_honors_halved_convention() {
        let mut c = CoefficientField::new(0.5, L0Convention::Halved);
        c.set(BasisIndex::at(0, 0, Mu::Cos), 2.0);
        let v = c.eval(Point::new(0.2, -0.1), false);
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eval_degree_one_is_coordinate() {
        let mut c = CoefficientField::new(0.5, L0Convention::Raw);
        c.set(BasisIndex::at(1, 0, Mu::Cos), 1.0);
        let v = c.eval(Point::new(0.5, 0.0), false);
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn eval_matches_straight_line_sum() {
        let beta = 0.7;
        let entries = [
            (1u32, 0u32, Mu::Cos, 0.4),
            (1, 2, Mu::Sin, -1.3),
            (2, 1, Mu::Cos, 0.9),
            (3, 0, Mu::Sin, 2.1),
            (0, 3, Mu::Cos, -0.25),
            (4, 1, Mu::Sin, 0.05),
        ];
        let mut c = CoefficientField::new(beta, L0Convention::Raw);
        for &(l, n, mu, v) in &entries {
            c.set(BasisIndex::at(l, n, mu), v);
        }
        let p = Point::new(0.2, -0.6);
        let t = 2.0 * (p.x * p.x + p.y * p.y) - 1.0;
        let mut expect = 0.0;
        for &(l, n, mu, v) in &entries {
            expect += v
                * eval_solid_harmonic(l, mu, p).unwrap()
                * eval_jacobi(n, JacobiParams::new(beta, l as f64), t);
        }
        assert!((c.eval(p, false) - expect).abs() < 1e-13);
        let w = (1.0 - p.x * p.x - p.y * p.y).powf(beta);
        assert!((c.eval(p, true) - expect * w).abs() < 1e-13);
    }

    #[test]
    fn norm_of_unit_constant() {
        // l = 0, n = 0, beta = 0: the L2 norm of 1 on the unit disk.
        let h = basis_norm_h(0, 0, 0.0).unwrap();
        assert!((h - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    /// 2D tensor quadrature of ∫ (1-r^2)^beta g(x)^2 dA, sized for the given
    /// polynomial degrees.
    fn quad_norm_sq<F: Fn(Point) -> f64>(g: F, beta: f64, deg_r: usize, deg_ang: usize) -> f64 {
        let rule = GaussJacobiRule::new(deg_r + 6, JacobiParams::new(beta, 0.0)).unwrap();
        let m = 2 * deg_ang + 8;
        let dphi = 2.0 * std::f64::consts::PI / m as f64;
        let mut total = 0.0;
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let r = ((1.0 + t) / 2.0).sqrt();
            let mut ang = 0.0;
            for j in 0..m {
                let p = Point::from_polar(r, dphi * j as f64);
                let v = g(p);
                ang += v * v;
            }
            total += w * ang * dphi;
        }
        total * 0.25 * 2f64.powf(-beta)
    }

    #[test]
    fn norm_matches_2d_quadrature() {
        for &(l, n, beta) in &[(1u32, 0u32, 0.5), (2, 1, 0.5)] {
            let h = basis_norm_h(l, n, beta).unwrap();
            let params = JacobiParams::new(beta, l as f64);
            let num = quad_norm_sq(
                |p| {
                    let t = 2.0 * (p.x * p.x + p.y * p.y) - 1.0;
                    eval_solid_harmonic(l, Mu::Cos, p).unwrap() * eval_jacobi(n, params, t)
                },
                beta,
                2 * n as usize + 2 * l as usize + 4,
                l as usize,
            );
            assert!((h * h - num).abs() < 1e-10, "l={l} n={n}: {} vs {num}", h * h);
        }
    }

    #[test]
    fn norm_rejects_bad_beta() {
        assert!(basis_norm_h(1, 1, -1.0).is_err());
    }

    #[test]
    fn projection_recovers_single_basis_function() {
        let beta = 0.6;
        let target = BasisIndex::at(2, 1, Mu::Cos);
        let params = JacobiParams::new(beta, 2.0);
        let f = |p: Point| {
            let t = 2.0 * (p.x * p.x + p.y * p.y) - 1.0;
            eval_solid_harmonic(2, Mu::Cos, p).unwrap() * eval_jacobi(1, params, t)
        };
        let c = project(f, beta, 5, 4, None).unwrap();
        for (idx, &v) in c.iter() {
            if *idx == target {
                assert!((v - 1.0).abs() < 1e-10, "target coefficient {v}");
            } else {
                assert!(v.abs() < 1e-10, "spurious {idx}: {v}");
            }
        }
    }

    #[test]
    fn projection_of_constant() {
        let c = project(|_| 1.0, 0.4, 3, 3, None).unwrap();
        let v = c.get(&BasisIndex::at(0, 0, Mu::Cos));
        assert!(v.abs() > 0.5);
        for (idx, &w) in c.iter() {
            if idx.l != 0 || idx.n != 0 {
                assert!(w.abs() < 1e-10);
            }
        }
        // The projected field reproduces 1 at random points.
        for &(x, y) in &[(0.3, 0.1), (-0.5, 0.2), (0.0, 0.0)] {
            assert!((c.eval(Point::new(x, y), false) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn projection_is_linear_on_two_terms() {
        let beta = 0.5;
        let p1 = JacobiParams::new(beta, 1.0);
        let p4 = JacobiParams::new(beta, 4.0);
        let f = |p: Point| {
            let t = 2.0 * (p.x * p.x + p.y * p.y) - 1.0;
            3.0 * eval_solid_harmonic(1, Mu::Sin, p).unwrap() * eval_jacobi(0, p1, t)
                + 0.5 * eval_solid_harmonic(4, Mu::Cos, p).unwrap() * eval_jacobi(2, p4, t)
        };
        let c = project(f, beta, 6, 4, None).unwrap();
        assert!((c.get(&BasisIndex::at(1, 0, Mu::Sin)) - 3.0).abs() < 1e-10);
        assert!((c.get(&BasisIndex::at(4, 2, Mu::Cos)) - 0.5).abs() < 1e-10);
        let mut others = 0.0f64;
        for (idx, &v) in c.iter() {
            if *idx != BasisIndex::at(1, 0, Mu::Sin) && *idx != BasisIndex::at(4, 2, Mu::Cos) {
                others = others.max(v.abs());
            }
        }
        assert!(others < 1e-10);
    }

    #[test]
    fn projection_rejects_undersized_grid() {
        let grid = ProjectionGrid { radial_nodes: 2, angular_nodes: 64 };
        assert!(matches!(
            project(|_| 1.0, 0.5, 3, 4, Some(grid)),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn parseval_for_band_limited_field() {
        let beta = 0.5;
        let mut c = CoefficientField::new(beta, L0Convention::Raw);
        c.set(BasisIndex::at(1, 1, Mu::Cos), 0.7);
        c.set(BasisIndex::at(2, 0, Mu::Sin), -1.1);
        c.set(BasisIndex::at(0, 2, Mu::Cos), 0.3);
        let num = quad_norm_sq(|p| c.eval(p, false), beta, 12, 4);
        let mut sum = 0.0;
        for (idx, &v) in c.iter() {
            sum += v * v * basis_norm_h(idx.l, idx.n, beta).unwrap().powi(2);
        }
        assert!((num - sum).abs() / sum < 1e-8, "{num} vs {sum}");
    }

    #[test]
    fn convention_round_trip() {
        let mut c = CoefficientField::new(0.5, L0Convention::Halved);
        c.set(BasisIndex::at(0, 1, Mu::Cos), 2.5);
        c.set(BasisIndex::at(3, 0, Mu::Sin), -0.125);
        let raw = c.to_convention(L0Convention::Raw);
        assert!((raw.get(&BasisIndex::at(0, 1, Mu::Cos)) - 1.25).abs() < 1e-15);
        assert_eq!(raw.get(&BasisIndex::at(3, 0, Mu::Sin)), -0.125);
        let back = raw.to_convention(L0Convention::Halved);
        assert_eq!(back, c);
    }

    #[test]
    fn csv_round_trip() {
        let mut c = CoefficientField::new(0.75, L0Convention::Halved);
        c.set(BasisIndex::at(0, 0, Mu::Cos), 1.0 / 3.0);
        c.set(BasisIndex::at(5, 2, Mu::Sin), -std::f64::consts::E);
        c.set(BasisIndex::at(2, 7, Mu::Cos), 1e-17);
        let mut buf = Vec::new();
        write_coefficients(&mut buf, &c).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# beta=0.75 convention=halved\nmu,l,n,value\n"));
        assert!(!text.contains('\r'));
        let back = read_coefficients(&mut &buf[..], 0.0, L0Convention::Raw).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn csv_reader_accepts_empty_file() {
        let data = b"";
        let c = read_coefficients(&mut &data[..], 0.5, L0Convention::Raw).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.beta(), 0.5);
    }

    #[test]
    fn csv_reader_rejects_garbage() {
        let data = b"# beta=0.5 convention=raw\nmu,l,n,value\n1,2,x,0.5\n";
        assert!(read_coefficients(&mut &data[..], 0.0, L0Convention::Raw).is_err());
        let data = b"0,1,2,3\n";
        assert!(read_coefficients(&mut &data[..], 0.0, L0Convention::Raw).is_err());
    }
}
