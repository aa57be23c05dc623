//! Random matrices for the Smith normal form checks.

use motsplit::witt::{snf, IntMatrix};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::minors::invariant_factors;
use super::{unimodular, Mat};

/// Up to 6×6 with entries in `[-20, 20]`; some rows are zeroed or repeated
/// so rank deficiency shows up often.
pub fn random_matrix(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let rows = rng.gen_range(1..=6);
    let cols = rng.gen_range(1..=6);
    let mut a: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-20..=20)).collect())
        .collect();
    if rows > 1 && rng.gen_bool(0.3) {
        let i = rng.gen_range(0..rows);
        let j = rng.gen_range(0..rows);
        a[i] = if i == j { vec![0; cols] } else { a[j].clone() };
    }
    a
}

fn int(a: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(a, a[0].len()).unwrap()
}

/// Checks `U·A·V = D`, unimodularity, the divisibility chain and agreement
/// with the determinantal-divisor oracle.
pub fn check_decomposition(a: &[Vec<i64>]) -> Result<(), String> {
    let m = int(a);
    let s = snf(&m);
    if &(&s.u * &m) * &s.v != s.d {
        return Err(format!("U·A·V != D for {a:?}"));
    }
    for (x, y, what) in [(&s.u, &s.u_inv, "U"), (&s.v, &s.v_inv, "V")] {
        if x * y != IntMatrix::identity(x.rows()) {
            return Err(format!("{what}·{what}⁻¹ != I for {a:?}"));
        }
        if x.det().abs() != BigInt::from(1) {
            return Err(format!("|det {what}| != 1 for {a:?}"));
        }
    }
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            let on_diag = i == j && i < s.rank;
            if on_diag != !s.d[(i, j)].is_zero() {
                return Err(format!("D is not rank-{} diagonal for {a:?}", s.rank));
            }
        }
    }
    let f = s.invariant_factors();
    if f.iter().any(|x| !x.is_positive()) || f.windows(2).any(|w| !(&w[1] % &w[0]).is_zero()) {
        return Err(format!("factors {f:?} break the divisibility chain"));
    }
    let oracle: Vec<BigInt> = invariant_factors(a, a[0].len()).into_iter().map(BigInt::from).collect();
    if f != oracle {
        return Err(format!("factors {f:?}, minors give {oracle:?} for {a:?}"));
    }
    Ok(())
}

/// `P·A·Q` with random unimodular `P`, `Q` has the same invariant factors.
pub fn check_conjugation(rng: &mut ChaCha8Rng, a: &[Vec<i64>]) -> Result<(), String> {
    let (p, _) = unimodular(rng, a.len());
    let (q, _) = unimodular(rng, a[0].len());
    let am = Mat { rows: a.len(), cols: a[0].len(), m: a.to_vec() };
    let b = p.mul(&am).mul(&q);
    let before = snf(&int(a)).invariant_factors();
    let after = snf(&b.to_int_matrix()).invariant_factors();
    if before != after {
        return Err(format!("factors moved from {before:?} to {after:?} for {a:?}"));
    }
    Ok(())
}
