//! Exact coefficient-space solve of L(u~) = f.
//!
//! After the gamma-ratio rescaling d_{l,n} = Γ(n+1+α/2)/Γ(n+1) u_{l,n,mu},
//! f~_{l,n} = 2^{-(α-2)} Γ(n+1+l)/Γ(n+1+α/2+l) f_{l,n,mu}, the determining
//! equations couple only along the chains (l, n) -> (l-2, n+1) and decouple
//! into finite symmetric tridiagonal blocks of sizes 1, 1, 2, 2, 3, 3, ...
//! with off-diagonal k1 - k2, interior diagonal 2(k1 + k2), and a terminal
//! diagonal depending on where the chain ends. Gershgorin keeps every block
//! uniformly positive definite for positive k1, k2.

use std::collections::BTreeMap;

use crate::basis::{BasisIndex, CoefficientField, L0Convention, Mu};
use crate::error::{Error, Result};
use crate::gamma::ln_gamma;
use crate::linalg::ldlt_tridiag_solve;
use crate::operators::OperatorParams;

/// Whether a chain starts on an even or odd angular degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ChainParity {
    Even,
    Odd,
}

/// One decoupled symmetric tridiagonal chain block.
#[derive(Debug, Clone)]
pub struct ChainBlock {
    pub mu: Mu,
    pub parity: ChainParity,
    /// Block size m.
    pub m: usize,
    /// The (l, n) indices along the chain, from the n = 0 start to the end.
    pub indices: Vec<(u32, u32)>,
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

/// Renumbering (l, n) -> j of the mu = +1 unknowns, bijective onto the
/// positive integers; each chain maps onto a contiguous range
/// ([m(m-1)+1, m^2] for even chains, [m^2+1, m(m+1)] for odd ones).
pub fn renumber(l: u32, n: u32) -> u64 {
    let (l, n) = (l as u64, n as u64);
    let s = (l + 2 * n) * (l + 2 * n) + 2 * (l + 4 * n + 2);
    if l % 2 == 0 {
        s / 4
    } else {
        (s + 1) / 4
    }
}

/// The chain coordinates of an index: parity, block size m of the chain it
/// lies on, and its position along the chain (= n).
pub fn chain_of(l: u32, n: u32, mu: Mu) -> (ChainParity, u32, u32) {
    match mu {
        Mu::Cos => {
            if l.is_multiple_of(2) {
                (ChainParity::Even, l / 2 + n + 1, n)
            } else {
                (ChainParity::Odd, (l - 1) / 2 + n + 1, n)
            }
        }
        Mu::Sin => {
            debug_assert!(l >= 1);
            if l.is_multiple_of(2) {
                (ChainParity::Even, l / 2 + n, n)
            } else {
                (ChainParity::Odd, (l - 1) / 2 + n + 1, n)
            }
        }
    }
}

/// Starting angular degree (at n = 0) of a chain.
fn chain_start(mu: Mu, parity: ChainParity, m: u32) -> u32 {
    match (mu, parity) {
        (Mu::Cos, ChainParity::Even) => 2 * m - 2,
        (Mu::Cos, ChainParity::Odd) | (Mu::Sin, ChainParity::Odd) => 2 * m - 1,
        (Mu::Sin, ChainParity::Even) => 2 * m,
    }
}

/// Diagonal entry of the terminal (chain-end) row.
fn terminal_diag(mu: Mu, parity: ChainParity, params: OperatorParams) -> f64 {
    let OperatorParams { k1, k2, .. } = params;
    match (mu, parity) {
        // Ends at l = 0.
        (Mu::Cos, ChainParity::Even) => k1 + k2,
        // Ends at l = 1.
        (Mu::Cos, ChainParity::Odd) => 2.0 * k1 + (k1 + k2),
        (Mu::Sin, ChainParity::Odd) => 2.0 * k2 + (k1 + k2),
        // Ends at l = 2 (the l = 0 sine index does not exist).
        (Mu::Sin, ChainParity::Even) => 2.0 * (k1 + k2),
    }
}

/// Assemble the m x m tridiagonal block of a chain: interior and start rows
/// carry 2(k1+k2) on the diagonal, the terminal row the branch-dependent
/// value, and every off-diagonal equals k1 - k2.
pub fn assemble_block(
    mu: Mu,
    parity: ChainParity,
    m: usize,
    params: OperatorParams,
) -> ChainBlock {
    assert!(m >= 1, "block size must be positive");
    let start = chain_start(mu, parity, m as u32);
    let indices: Vec<(u32, u32)> = (0..m as u32).map(|i| (start - 2 * i, i)).collect();
    let mut diag = vec![2.0 * (params.k1 + params.k2); m];
    diag[m - 1] = terminal_diag(mu, parity, params);
    let off = vec![params.k1 - params.k2; m.saturating_sub(1)];
    ChainBlock { mu, parity, m, indices, diag, off }
}

/// Solve one chain block by the root-free symmetric factorization.
pub fn solve_block(block: &ChainBlock, rhs: &[f64]) -> Result<Vec<f64>> {
    ldlt_tridiag_solve(&block.diag, &block.off, rhs)
}

/// Row-wise Gershgorin interval for the block spectrum.
pub fn gershgorin_bounds(block: &ChainBlock) -> (f64, f64) {
    let mut lower = f64::INFINITY;
    let mut upper = f64::NEG_INFINITY;
    for i in 0..block.m {
        let mut radius = 0.0;
        if i > 0 {
            radius += block.off[i - 1].abs();
        }
        if i + 1 < block.m {
            radius += block.off[i].abs();
        }
        lower = lower.min(block.diag[i] - radius);
        upper = upper.max(block.diag[i] + radius);
    }
    (lower, upper)
}

/// Solve L(u~) = f exactly in coefficient space.
///
/// `f` holds raw coefficients in the alpha/2 family. Every chain touching
/// the support of f must have size at most `max_chain`, otherwise the solve
/// reports a truncation error. Returns u in the halved l = 0 convention,
/// so that `apply_forward(&u, params)` reproduces f on its support.
pub fn solve(
    f: &CoefficientField,
    params: OperatorParams,
    max_chain: u32,
) -> Result<CoefficientField> {
    assert!(
        f.convention() == L0Convention::Raw,
        "solve expects the right-hand side with raw coefficients"
    );
    let alpha = params.alpha;
    assert!(
        (f.beta() - alpha / 2.0).abs() < 1e-12,
        "solve expects a right-hand side in the alpha/2 family"
    );
    let h = alpha / 2.0;

    // Gather the rescaled rhs per chain.
    let mut chains: BTreeMap<(Mu, ChainParity, u32), Vec<f64>> = BTreeMap::new();
    for (idx, &v) in f.iter() {
        let (parity, m, pos) = chain_of(idx.l, idx.n, idx.mu);
        if m > max_chain {
            return Err(Error::Truncation(format!(
                "rhs entry {idx} lies on chain {m} beyond max_chain = {max_chain}"
            )));
        }
        let (lf, nf) = (idx.l as f64, idx.n as f64);
        let scale = ((2.0 - alpha) * std::f64::consts::LN_2 + ln_gamma(nf + 1.0 + lf)
            - ln_gamma(nf + 1.0 + h + lf))
        .exp();
        let entry = chains
            .entry((idx.mu, parity, m))
            .or_insert_with(|| vec![0.0; m as usize]);
        entry[pos as usize] = scale * v;
    }

    let mut u = CoefficientField::new(h, L0Convention::Halved);
    for ((mu, parity, m), rhs) in chains {
        let block = assemble_block(mu, parity, m as usize, params);
        let d = solve_block(&block, &rhs)?;
        for ((l, n), d_val) in block.indices.iter().zip(d) {
            // Invert d_{l,n} = Γ(n+1+α/2)/Γ(n+1) u_{l,n,mu}.
            let nf = *n as f64;
            let unscale = (ln_gamma(nf + 1.0) - ln_gamma(nf + 1.0 + h)).exp();
            u.set(BasisIndex::at(*l, *n, mu), unscale * d_val);
        }
    }
    Ok(u)
}
