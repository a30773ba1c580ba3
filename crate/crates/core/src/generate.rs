//! Reproducible random instances.
//!
//! Draw order from a ChaCha8 stream seeded by `seed`: the upper triangle of
//! `Q` row by row, then `c`, then the interior point `x₀`, then the random
//! rows of `A`, then one slack per random row.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::IqpInstance;
use crate::linalg::matrix::dot;
use crate::linalg::IntMatrix;
use crate::polytope::Polytope;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub n: usize,
    /// Entries of `Q`, `c` and the random rows lie in `[−L, L]`.
    pub l: i64,
    /// Random rows beyond the box.
    pub m: usize,
    /// Half-width of the box `[−box, box]ⁿ`.
    pub box_width: i64,
}

impl GenParams {
    fn check(&self) -> Result<()> {
        if self.n == 0 || self.l < 0 || self.box_width < 0 {
            return Err(Error::InvalidInstance(format!("bad generator parameters {self:?}")));
        }
        Ok(())
    }
}

fn draw(rng: &mut ChaCha8Rng, l: i64) -> BigInt {
    BigInt::from(rng.gen_range(-l..=l))
}

/// Box rows plus `m` random rows through a random interior point `x₀`:
/// `b_j = a_jᵀx₀ + s_j` with slack `s_j ∈ [1, 2L]` (or `1` when `L = 0`).
fn random_region(rng: &mut ChaCha8Rng, p: &GenParams) -> (IntMatrix, Vec<BigInt>) {
    let (mut a, mut b) = IqpInstance::box_rows(p.n, p.box_width);
    let x0: Vec<BigInt> = (0..p.n).map(|_| draw(rng, p.box_width)).collect();
    let rows: Vec<Vec<BigInt>> = (0..p.m)
        .map(|_| (0..p.n).map(|_| draw(rng, p.l)).collect())
        .collect();
    for row in rows {
        let slack = BigInt::from(rng.gen_range(1..=(2 * p.l).max(1)));
        b.push(dot(&row, &x0) + slack);
        a.push_row(&row);
    }
    (a, b)
}

pub fn generate_instance(seed: u64, p: &GenParams) -> Result<IqpInstance> {
    p.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = IntMatrix::zeros(p.n, p.n);
    for i in 0..p.n {
        for j in i..p.n {
            let v = draw(&mut rng, p.l);
            q.set(i, j, v.clone());
            q.set(j, i, v);
        }
    }
    let c: Vec<BigInt> = (0..p.n).map(|_| draw(&mut rng, p.l)).collect();
    let (a, b) = random_region(&mut rng, p);
    IqpInstance::new(q, c, a, b)
}

/// A bounded polytope drawn like the region of [`generate_instance`].
pub fn generate_polytope(seed: u64, p: &GenParams) -> Result<Polytope> {
    p.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = random_region(&mut rng, p);
    Polytope::new(a, b)
}

/// `m` random rows with entries in `[−l, l]` through an interior point
/// `x₀ ∈ [−l, l]ⁿ` with slacks in `[1, l]`, redrawn until bounded.
pub fn generate_bounded_polytope(seed: u64, n: usize, m: usize, l: i64) -> Result<Polytope> {
    if n == 0 || m <= n || l < 1 {
        return Err(Error::InvalidInstance(format!(
            "a bounded polytope needs n ≥ 1, m > n and l ≥ 1 (got n = {n}, m = {m}, l = {l})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0: Vec<BigInt> = (0..n).map(|_| draw(&mut rng, l)).collect();
    loop {
        let mut a = IntMatrix::empty(n);
        let mut b = Vec::with_capacity(m);
        for _ in 0..m {
            let row: Vec<BigInt> = (0..n).map(|_| draw(&mut rng, l)).collect();
            b.push(dot(&row, &x0) + rng.gen_range(1..=l));
            a.push_row(&row);
        }
        let p = Polytope::new(a, b)?;
        if p.is_bounded() {
            return Ok(p);
        }
    }
}

/// A concave objective `(Q, c)`: `Q` from [`generate_concave_form`] with a
/// random rank in `[0, n]`, and `c` with entries in `[−l, l]`.
pub fn generate_concave_objective(seed: u64, n: usize, l: i64) -> (IntMatrix, Vec<BigInt>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = rng.gen_range(0..=n);
    let c = (0..n).map(|_| draw(&mut rng, l)).collect();
    (generate_concave_form(rng.gen(), n, rank, l), c)
}

/// A symmetric negative semidefinite matrix `−Σᵢ uᵢuᵢᵀ` built from `rank`
/// random integer vectors with entries in `[−l, l]`.
pub fn generate_concave_form(seed: u64, n: usize, rank: usize, l: i64) -> IntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = IntMatrix::zeros(n, n);
    for _ in 0..rank {
        let u: Vec<BigInt> = (0..n).map(|_| draw(&mut rng, l)).collect();
        for i in 0..n {
            for j in 0..n {
                let v = q.get(i, j) - &u[i] * &u[j];
                q.set(i, j, v);
            }
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inertia;
    use crate::solver::check_bounded;

    #[test]
    fn deterministic_and_well_formed() {
        let p = GenParams {
            n: 3,
            l: 2,
            m: 2,
            box_width: 3,
        };
        let a = generate_instance(7, &p).unwrap();
        let b = generate_instance(7, &p).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate_instance(8, &p).unwrap());
        assert!(a.q.is_symmetric());
        assert!(check_bounded(&a));
        assert_eq!(a.m(), 2 * 3 + 2);
    }

    #[test]
    fn concave_forms_have_no_positive_eigenvalue() {
        for seed in 0..20 {
            let q = generate_concave_form(seed, 3, 2, 2);
            assert_eq!(inertia(&q).unwrap().positive, 0);
            let (q, c) = generate_concave_objective(seed, 3, 3);
            assert_eq!(inertia(&q).unwrap().positive, 0);
            assert_eq!(c.len(), 3);
        }
    }

    #[test]
    fn bounded_polytopes() {
        for seed in 0..30 {
            let p = generate_bounded_polytope(seed, 3, 6, 3).unwrap();
            assert!(p.is_bounded());
            assert_eq!(p.m(), 6);
            assert_eq!(p, generate_bounded_polytope(seed, 3, 6, 3).unwrap());
        }
        assert!(generate_bounded_polytope(0, 2, 2, 3).is_err());
    }
}
