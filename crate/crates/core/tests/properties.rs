use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use iqp_core::format::{emit_instance, parse_instance};
use iqp_core::generate::{generate_bounded_polytope, generate_instance, GenParams};
use iqp_core::ilp::bnb::{ilp_solve, IlpOptions, IlpStatus};
use iqp_core::ilp::lp::{lp_solve, LpStatus};
use iqp_core::instance::IqpInstance;
use iqp_core::linalg::det::Combinations;
use iqp_core::linalg::matrix::{bilinear, dot, quad_form};
use iqp_core::linalg::{
    adjugate_kernel_basis, determinant, inertia, integer_solvable, max_subdeterminant, rank, IntMatrix, LatticeFrame,
    SubdetMode,
};
use iqp_core::oracle::{enumerate_feasible, oracle_min};
use iqp_core::solver::{solve, Algorithm, SolveOptions};

fn matrix(rows: usize, cols: usize, l: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(-l..=l, cols), rows).prop_map(move |r| {
        IntMatrix::from_rows(cols, r.into_iter().map(|v| v.into_iter().map(BigInt::from).collect()).collect()).unwrap()
    })
}

fn symmetric(n: usize, l: i64) -> impl Strategy<Value = IntMatrix> {
    matrix(n, n, l).prop_map(move |m| {
        let mut q = m.clone();
        for i in 0..n {
            for j in 0..i {
                q.set(i, j, m.get(j, i).clone());
            }
        }
        q
    })
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// gcd of all `k × k` minors.
fn minor_gcd(m: &IntMatrix, k: usize) -> BigInt {
    let mut g = BigInt::zero();
    for rows in Combinations::new(m.rows(), k) {
        for cols in Combinations::new(m.cols(), k) {
            g = g.gcd(&determinant(&m.submatrix(&rows, &cols)));
        }
    }
    g
}

/// For full row rank `C`, `Cx = d` is solvable over ℤ iff the minor gcds of
/// `C` and `[C | d]` agree.
fn solvable_by_minors(c: &IntMatrix, d: &[BigInt]) -> bool {
    let k = c.rows();
    let mut aug = IntMatrix::empty(c.cols() + 1);
    for (row, di) in c.row_iter().zip(d) {
        let mut r = row.to_vec();
        r.push(di.clone());
        aug.push_row(&r);
    }
    minor_gcd(c, k) == minor_gcd(&aug, k)
}

fn stacked(c: &IntMatrix, a: &[BigInt]) -> IntMatrix {
    let mut m = c.clone();
    m.push_row(a);
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn adjugate_basis_invariants((k, c) in (1usize..=5).prop_flat_map(|n| (0..n, Just(n))).prop_flat_map(|(k, n)| (Just(k), matrix(k, n, 3)))) {
        prop_assume!(rank(&c) == k);
        let n = c.cols();
        let basis = adjugate_kernel_basis(&c).unwrap();
        prop_assert_eq!(basis.dim(), n - k);
        // with no rows the basis is the unit vectors
        let delta = if k == 0 { BigInt::from(1) } else { max_subdeterminant(&c, SubdetMode::Exact, 1_000_000).unwrap() };
        for y in &basis.vectors {
            prop_assert!(c.mul_vec(y).iter().all(Zero::is_zero));
            prop_assert!(y.iter().all(|v| v.abs() <= delta));
        }
        prop_assert_eq!(rank(&basis.as_columns(n)), n - k);
    }

    #[test]
    fn inertia_is_congruence_invariant(q in (1usize..=4).prop_flat_map(|n| symmetric(n, 3)), shear in prop::collection::vec(-2i64..=2, 16)) {
        let n = q.rows();
        let mut u = IntMatrix::identity(n);
        for i in 0..n {
            for j in i + 1..n {
                u.set(i, j, BigInt::from(shear[i * 4 + j]));
            }
        }
        let before = inertia(&q).unwrap();
        prop_assert_eq!(before.positive + before.negative + before.zero, n);
        prop_assert_eq!(inertia(&u.transpose().mul(&q).mul(&u)).unwrap(), before);
        let mut neg = q.clone();
        for i in 0..n {
            for j in 0..n {
                neg.set(i, j, -q.get(i, j));
            }
        }
        let flipped = inertia(&neg).unwrap();
        prop_assert_eq!((flipped.positive, flipped.negative), (before.negative, before.positive));
        prop_assert_eq!(before.zero, n - rank(&q));
    }

    #[test]
    fn hadamard_bounds_exact(m in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| matrix(r, c, 4))) {
        let exact = max_subdeterminant(&m, SubdetMode::Exact, 1_000_000).unwrap();
        let bound = max_subdeterminant(&m, SubdetMode::Hadamard, 1_000_000).unwrap();
        prop_assert!(bound >= exact);
    }

    #[test]
    fn ilp_matches_enumeration(seed in any::<u64>(), n in 1usize..=3, extra in 1usize..=3, obj in prop::collection::vec(-3i64..=3, 3)) {
        let p = generate_bounded_polytope(seed, n, n + extra, 3).unwrap();
        let c = big(&obj[..n]);
        let region = p.relaxation().with_objective(c.clone());
        let out = ilp_solve(&region, &IlpOptions::default()).unwrap();
        let mut best: Option<(BigInt, Vec<BigInt>)> = None;
        for x in enumerate_feasible(&p, None, 1_000_000).unwrap() {
            let v = dot(&c, &x);
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, x));
            }
        }
        match best {
            None => prop_assert_eq!(out.status, IlpStatus::Infeasible),
            Some((v, x)) => {
                prop_assert_eq!(out.status, IlpStatus::Optimal);
                prop_assert_eq!(out.value, Some(v));
                prop_assert_eq!(out.point, Some(x));
            }
        }
    }

    #[test]
    fn lp_relaxation_is_consistent(seed in any::<u64>(), n in 1usize..=3, extra in 1usize..=3, obj in prop::collection::vec(-3i64..=3, 3)) {
        let p = generate_bounded_polytope(seed, n, n + extra, 3).unwrap();
        let c = big(&obj[..n]);
        let lp = lp_solve(&p.relaxation().with_objective(c.clone()));
        // the generator always places an integer point inside
        prop_assert_eq!(lp.status, LpStatus::Optimal);
        let x = lp.point.unwrap();
        prop_assert!(p.relaxation().contains_point(&x));
        for z in enumerate_feasible(&p, None, 1_000_000).unwrap() {
            prop_assert!(lp.value.as_ref().unwrap() <= &num_rational::BigRational::from_integer(dot(&c, &z)));
        }
    }

    #[test]
    fn pruning_is_sound(seed in any::<u64>(), n in 1usize..=3, m in 0usize..=2) {
        let inst = generate_instance(seed, &GenParams { n, l: 3, m, box_width: 2 }).unwrap();
        let expected = oracle_min(&inst, 1_000_000).unwrap();
        for alg in [Algorithm::Batch, Algorithm::Sequential] {
            for parity_filter in [true, false] {
                let opts = SolveOptions { algorithm: alg, parity_filter, ..SolveOptions::default() };
                let r = solve(&inst, &opts).unwrap();
                prop_assert_eq!(&r.value, &expected.value);
                prop_assert_eq!(&r.witness, &expected.witness);
            }
        }
    }

    #[test]
    fn optimum_satisfies_local_curvature_bounds(seed in any::<u64>(), n in 1usize..=3) {
        let inst = generate_instance(seed, &GenParams { n, l: 3, m: 1, box_width: 2 }).unwrap();
        let r = oracle_min(&inst, 1_000_000).unwrap();
        let x = r.witness.unwrap();
        let mut dirs = Vec::new();
        for i in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::from(1);
            dirs.push(e.clone());
            for j in i + 1..n {
                for s in [-1, 1] {
                    let mut f = e.clone();
                    f[j] = BigInt::from(s);
                    dirs.push(f);
                }
            }
        }
        for y in dirs {
            let plus: Vec<BigInt> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            let minus: Vec<BigInt> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
            if inst.is_feasible(&plus) && inst.is_feasible(&minus) {
                let curv = quad_form(&inst.q, &y);
                let grad = BigInt::from(2) * bilinear(&inst.q, &y, &x) + dot(&inst.c, &y);
                prop_assert!(curv >= BigInt::zero());
                prop_assert!(grad.abs() <= curv);
            }
        }
    }

    #[test]
    fn instance_json_round_trip(seed in any::<u64>(), n in 1usize..=5, m in 0usize..=4, l in 0i64..=50) {
        let inst = generate_instance(seed, &GenParams { n, l, m, box_width: 4 }).unwrap();
        prop_assert_eq!(parse_instance(&emit_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn lattice_tests_match_minor_criterion((c, d, a) in (2usize..=4).prop_flat_map(|n| (1..n, Just(n))).prop_flat_map(|(k, n)| (matrix(k, n, 3), prop::collection::vec(-4i64..=4, k), prop::collection::vec(-3i64..=3, n))), beta in -6i64..=6) {
        let k = c.rows();
        prop_assume!(rank(&c) == k);
        let d = big(&d);
        let expected = solvable_by_minors(&c, &d);
        prop_assert_eq!(integer_solvable(&c, &d), expected);
        let frame = LatticeFrame::new(&c, &d);
        prop_assert_eq!(frame.is_some(), expected);
        let a = big(&a);
        let ext = stacked(&c, &a);
        if let Some(frame) = frame {
            if rank(&ext) == k + 1 {
                let mut dd = d.clone();
                dd.push(BigInt::from(beta));
                let want = solvable_by_minors(&ext, &dd);
                prop_assert_eq!(frame.prepare(&a).admits(&BigInt::from(beta)), want);
                prop_assert_eq!(frame.admits(&[(a.clone(), BigInt::from(beta))]), want);
            }
        }
    }
}

#[test]
fn minor_criterion_sanity() {
    // 2x + 4y = 3 has no integer solution, 2x + 3y = 1 does
    let c = IntMatrix::from_i64(&[&[2, 4]]);
    assert!(!solvable_by_minors(&c, &big(&[3])));
    assert!(solvable_by_minors(&IntMatrix::from_i64(&[&[2, 3]]), &big(&[1])));
    let inst = IqpInstance::from_i64(&[&[0]], &[0], &[&[2], &[-2]], &[1, -1]).unwrap();
    assert!(oracle_min(&inst, 10).unwrap().value.is_none());
}
