//! Property-based invariants over randomized inputs.

use proptest::prelude::*;

use fracdisk_core::basis::{
    basis_norm_h, read_coefficients, write_coefficients, BasisIndex, CoefficientField,
    L0Convention, Mu, Point,
};
use fracdisk_core::jacobi::{eval_jacobi, JacobiParams};
use fracdisk_core::operators::{apply_forward, OperatorParams};
use fracdisk_core::regularity::{besov_norm, besov_seminorm, BesovIndices};
use fracdisk_core::solver::{chain_of, renumber, solve};

fn sparse_field(beta: f64) -> impl Strategy<Value = CoefficientField> {
    prop::collection::vec(
        (0u32..8, 0u32..8, any::<bool>(), -2.0f64..2.0),
        1..8,
    )
    .prop_map(move |entries| {
        let mut c = CoefficientField::new(beta, L0Convention::Raw);
        for (l, n, sin, v) in entries {
            let mu = if sin && l >= 1 { Mu::Sin } else { Mu::Cos };
            c.add(BasisIndex::at(l, n, mu), v);
        }
        c
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Raising the first Jacobi exponent: (n + a/2 + b/2 + 1)(1-t) P_n^{(a+1,b)}
    // = (n+a+1) P_n^{(a,b)} - (n+1) P_{n+1}^{(a,b)}.
    #[test]
    fn jacobi_exponent_raising_recurrence(
        n in 0u32..12,
        a in -0.9f64..3.0,
        b in -0.9f64..3.0,
        t in -0.97f64..0.97,
    ) {
        let p = JacobiParams::new(a, b);
        let lhs = (n as f64 + a / 2.0 + b / 2.0 + 1.0) * (1.0 - t)
            * eval_jacobi(n, JacobiParams::new(a + 1.0, b), t);
        let t1 = (n as f64 + a + 1.0) * eval_jacobi(n, p, t);
        let t2 = (n as f64 + 1.0) * eval_jacobi(n + 1, p, t);
        let scale = lhs.abs().max(t1.abs()).max(t2.abs()).max(1.0);
        prop_assert!((lhs - (t1 - t2)).abs() / scale < 1e-10);
    }

    // The coefficient CSV format round-trips fields bit-exactly.
    #[test]
    fn coefficient_csv_round_trip(c in sparse_field(0.45)) {
        let mut buf = Vec::new();
        write_coefficients(&mut buf, &c).unwrap();
        let back = read_coefficients(&mut &buf[..], 0.0, L0Convention::Halved).unwrap();
        prop_assert_eq!(back, c);
    }

    // The chain renumbering maps chain steps to consecutive integers.
    #[test]
    fn renumbering_follows_chain_steps(l in 0u32..40, n in 0u32..20) {
        let j = renumber(l, n);
        prop_assert!(j >= 1);
        if l >= 2 {
            prop_assert_eq!(renumber(l - 2, n + 1), j + 1);
        }
        if n >= 1 {
            prop_assert_eq!(renumber(l + 2, n - 1), j - 1);
        }
    }

    // Forward after solve reproduces the right-hand side on its support.
    #[test]
    fn solve_is_inverted_by_apply_forward(
        c in sparse_field(0.0),
        alpha in 0.2f64..1.8,
        k1 in 0.1f64..10.0,
        k2 in 0.1f64..10.0,
    ) {
        // Rebuild the field under the right family exponent.
        let mut f = CoefficientField::new(alpha / 2.0, L0Convention::Raw);
        for (idx, &v) in c.iter() {
            f.set(*idx, v);
        }
        let params = OperatorParams::new(alpha, k1, k2).unwrap();
        let max_chain = f.iter().map(|(i, _)| chain_of(i.l, i.n, i.mu).1).max().unwrap_or(1);
        let u = solve(&f, params, max_chain).unwrap();
        let back = apply_forward(&u, params);
        let scale = f.max_abs().max(1.0);
        prop_assert!(back.max_abs_diff(&f) <= 1e-11 * scale);
    }

    // ...and solve after forward recovers the coefficients (the forward
    // scatter never leaves the chains of its input).
    #[test]
    fn apply_forward_is_inverted_by_solve(
        c in sparse_field(0.0),
        alpha in 0.2f64..1.8,
        k1 in 0.1f64..10.0,
        k2 in 0.1f64..10.0,
    ) {
        let mut u = CoefficientField::new(alpha / 2.0, L0Convention::Halved);
        for (idx, &v) in c.iter() {
            u.set(*idx, v);
        }
        let params = OperatorParams::new(alpha, k1, k2).unwrap();
        let f = apply_forward(&u, params);
        let max_chain = f.iter().map(|(i, _)| chain_of(i.l, i.n, i.mu).1).max().unwrap_or(1);
        let back = solve(&f, params, max_chain).unwrap();
        let scale = u.max_abs().max(1.0);
        prop_assert!(back.max_abs_diff(&u) <= 1e-11 * scale);
    }

    // Besov norms are monotone in the smoothness orders and dominate the
    // semi-norm.
    #[test]
    fn besov_norm_monotone_and_dominating(
        c in sparse_field(0.5),
        s1 in 0.0f64..2.0,
        s2 in 0.0f64..2.0,
        ds in 0.0f64..1.0,
    ) {
        let lo = BesovIndices::new(s1, s2).unwrap();
        let hi = BesovIndices::new(s1 + ds, s2 + ds).unwrap();
        let n_lo = besov_norm(&c, lo, 1.0).unwrap();
        let n_hi = besov_norm(&c, hi, 1.0).unwrap();
        prop_assert!(n_hi >= n_lo * (1.0 - 1e-12));
        let semi = besov_seminorm(&c, lo, 1.0).unwrap();
        prop_assert!(n_lo >= semi * (1.0 - 1e-12));
    }

    // Parseval: the quadrature L2 norm of a band-limited expansion matches
    // the coefficient-space sum.
    #[test]
    fn parseval_identity(c in sparse_field(0.6)) {
        use fracdisk_core::jacobi::GaussJacobiRule;
        let beta = c.beta();
        let rule = GaussJacobiRule::new(24, JacobiParams::new(beta, 0.0)).unwrap();
        let m = 40usize;
        let dphi = 2.0 * std::f64::consts::PI / m as f64;
        let mut total = 0.0;
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let r = ((1.0 + t) / 2.0).sqrt();
            for j in 0..m {
                let v = c.eval(Point::from_polar(r, dphi * j as f64), false);
                total += w * v * v * dphi;
            }
        }
        total *= 0.25 * 2f64.powf(-beta);
        let mut sum = 0.0;
        for (idx, &v) in c.iter() {
            sum += v * v * basis_norm_h(idx.l, idx.n, beta).unwrap().powi(2);
        }
        let scale = sum.max(1e-12);
        prop_assert!((total - sum).abs() / scale < 1e-8, "{} vs {}", total, sum);
    }
}
