//! The power-sum identity behind the variety `W`: for `u = x^d`,
//! `sum u_i^3 = e1^3 - 3 e1 e2 + 3 e3` with `e_k` elementary symmetric.
//!
//! Evaluation runs in checked `i128` and redoes the work with big integers
//! whenever a step would overflow.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Entries of the random tuples are drawn from `-RANGE..=RANGE`.
pub const RANGE: i64 = 10;

/// Both sides of the identity at `x`, as `(power sum, symmetric side)`.
pub fn newton_sides(x: &[i64], d: u32) -> (BigInt, BigInt) {
    match sides_i128(x, d) {
        Some((l, r)) => (BigInt::from(l), BigInt::from(r)),
        None => sides_big(x, d),
    }
}

fn elementary<T>(u: &[T], zero: T, add: impl Fn(&T, &T) -> Option<T>, mul: impl Fn(&T, &T) -> Option<T>) -> Option<[T; 3]>
where
    T: Clone,
{
    // e[k] after each new variable: e_k += u * e_{k-1}.
    let mut e = [zero.clone(), zero.clone(), zero];
    for v in u {
        e[2] = add(&e[2], &mul(v, &e[1])?)?;
        e[1] = add(&e[1], &mul(v, &e[0])?)?;
        e[0] = add(&e[0], v)?;
    }
    Some(e)
}

fn sides_i128(x: &[i64], d: u32) -> Option<(i128, i128)> {
    let u: Vec<i128> = x.iter().map(|&v| (v as i128).checked_pow(d)).collect::<Option<_>>()?;
    let [e1, e2, e3] = elementary(&u, 0i128, |a, b| a.checked_add(*b), |a, b| a.checked_mul(*b))?;
    let lhs = u.iter().try_fold(0i128, |s, v| s.checked_add(v.checked_pow(3)?))?;
    let rhs = e1.checked_pow(3)?.checked_sub(e1.checked_mul(e2)?.checked_mul(3)?)?.checked_add(e3.checked_mul(3)?)?;
    Some((lhs, rhs))
}

fn sides_big(x: &[i64], d: u32) -> (BigInt, BigInt) {
    let u: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v).pow(d)).collect();
    let [e1, e2, e3] = elementary(&u, BigInt::from(0), |a, b| Some(a + b), |a, b| Some(a * b)).expect("exact");
    let lhs: BigInt = u.iter().map(|v| v.pow(3)).sum();
    let rhs = e1.pow(3) - 3 * &e1 * &e2 + 3 * &e3;
    (lhs, rhs)
}

/// Checks the identity on `trials` seeded random 6-tuples.
pub fn newton_identity_check(d: u32, trials: u32, seed: u64) -> Result<bool> {
    if d == 0 || trials == 0 {
        return Err(Error::InvalidArgument("d and trials must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let x: [i64; 6] = std::array::from_fn(|_| rng.gen_range(-RANGE..=RANGE));
        let (l, r) = newton_sides(&x, d);
        if l != r {
            return Ok(false);
        }
    }
    Ok(true)
}
