//! Small numerical kernels in high precision.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

/// Value at `x = 0` of the polynomial through `(x_i, y_i)` (Neville).
pub fn extrapolate_to_zero(xs: &[Float], ys: &[Float]) -> Float {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty());
    let prec = ys[0].prec();
    let mut p: Vec<Float> = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (&xs[i], &xs[i + level]);
            // p_i = (x_j p_i - x_i p_{i+1}) / (x_j - x_i), evaluated at 0
            let num = Float::with_val(prec, xj * &p[i]) - Float::with_val(prec, xi * &p[i + 1]);
            let den = Float::with_val(prec, xj - xi);
            p[i] = num / den;
        }
    }
    p.swap_remove(0)
}

/// Bernoulli numbers `B_2, B_4, ..., B_20`.
fn bernoulli_even() -> [Rational; 10] {
    [
        Rational::from((1, 6)),
        Rational::from((-1, 30)),
        Rational::from((1, 42)),
        Rational::from((-1, 30)),
        Rational::from((5, 66)),
        Rational::from((-691, 2730)),
        Rational::from((7, 6)),
        Rational::from((-3617, 510)),
        Rational::from((43867, 798)),
        Rational::from((-174611, 330)),
    ]
}

/// Hurwitz zeta `sum_{k >= 0} (a + k)^(-s)` for `s > 1`, `a > 0`, by
/// Euler-Maclaurin after shifting `a` past a safe threshold.
pub fn hurwitz_zeta(s: &Float, a: &Float) -> Float {
    let prec = s.prec().max(a.prec());
    let mut head = Float::new(prec);
    let mut x = Float::with_val(prec, a);
    // Shift until x is large enough for the Bernoulli tail to be tiny.
    let threshold = Float::with_val(prec, prec as f64 / 2.0 + 20.0);
    while x < threshold {
        head += Float::with_val(prec, (&x).pow(-Float::with_val(prec, s)));
        x += 1;
    }
    let s_minus_1 = Float::with_val(prec, s - 1u32);
    let mut total = head;
    total += Float::with_val(prec, (&x).pow(-Float::with_val(prec, &s_minus_1))) / &s_minus_1;
    let x_pow_s = Float::with_val(prec, (&x).pow(-Float::with_val(prec, s)));
    total += Float::with_val(prec, &x_pow_s / 2u32);
    // term_j = B_2j / (2j)! * s (s+1) ... (s+2j-2) * x^(-s-2j+1)
    let mut rising = Float::with_val(prec, s); // s (s+1) ... (s + 2j - 2)
    let mut x_pow = Float::with_val(prec, &x_pow_s / &x); // x^(-s-1)
    let x2 = Float::with_val(prec, &x * &x);
    let mut factorial = Integer::from(2); // (2j)!
    for (j, b) in bernoulli_even().iter().enumerate() {
        let j = j as u32 + 1;
        let term = Float::with_val(prec, b) * &rising * &x_pow / Float::with_val(prec, &factorial);
        total += term;
        rising *= Float::with_val(prec, s + (2 * j - 1));
        rising *= Float::with_val(prec, s + 2 * j);
        x_pow /= &x2;
        factorial *= (2 * j + 1) * (2 * j + 2);
    }
    total
}

/// Least-squares solution of `A c = y` by normal equations with Gaussian
/// elimination (small systems only).
pub fn least_squares(rows: &[Vec<Float>], y: &[Float]) -> Option<Vec<Float>> {
    let k = rows.first()?.len();
    let prec = y[0].prec();
    let mut ata = vec![vec![Float::new(prec); k]; k];
    let mut aty = vec![Float::new(prec); k];
    for (row, yi) in rows.iter().zip(y) {
        for i in 0..k {
            aty[i] += Float::with_val(prec, &row[i] * yi);
            for j in 0..k {
                ata[i][j] += Float::with_val(prec, &row[i] * &row[j]);
            }
        }
    }
    solve_linear(ata, aty)
}

/// Gaussian elimination with partial pivoting.
pub fn solve_linear(mut a: Vec<Vec<Float>>, mut b: Vec<Float>) -> Option<Vec<Float>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .clone()
                .abs()
                .partial_cmp(&a[j][col].clone().abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].is_zero() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = Float::with_val(b[0].prec(), &a[row][col] / &a[col][col]);
            for c in col..n {
                let t = Float::with_val(b[0].prec(), &f * &a[col][c]);
                a[row][c] -= t;
            }
            let t = Float::with_val(b[0].prec(), &f * &b[col]);
            b[row] -= t;
        }
    }
    let mut x = vec![Float::new(b[0].prec()); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for c in row + 1..n {
            acc -= Float::with_val(acc.prec(), &a[row][c] * &x[c]);
        }
        x[row] = acc / &a[row][row];
    }
    Some(x)
}

/// Best rational approximation with denominator at most `max_den` from the
/// continued fraction of `x`.
pub fn rationalize(x: &Float, max_den: u64) -> Rational {
    let prec = x.prec();
    let mut rest = x.clone();
    let (mut p0, mut q0, mut p1, mut q1) = (Integer::from(0), Integer::from(1), Integer::from(1), Integer::from(0));
    for _ in 0..64 {
        let a = rest
            .to_integer_round(rug::float::Round::Down)
            .map(|(i, _)| i)
            .unwrap_or_default();
        let p2 = Integer::from(&a * &p1) + &p0;
        let q2 = Integer::from(&a * &q1) + &q0;
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = Float::with_val(prec, &rest - &a);
        if frac.is_zero() || frac < Float::with_val(prec, 1e-60) {
            break;
        }
        rest = Float::with_val(prec, frac.recip_ref());
    }
    if q1 == 0 {
        return Rational::from(p0);
    }
    Rational::from((p1, q1))
}

/// Relative difference `|a - b| / |b|`.
pub fn rel_err(a: &Float, b: &Float) -> f64 {
    let diff = Float::with_val(a.prec(), a - b).abs();
    if b.is_zero() {
        return diff.to_f64();
    }
    (diff / Float::with_val(a.prec(), b.abs_ref())).to_f64()
}
