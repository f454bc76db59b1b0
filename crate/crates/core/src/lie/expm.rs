//! Matrix exponential and principal logarithm.

use nalgebra::DMatrix;

use super::LieError;

pub type Mat = DMatrix<f64>;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Largest 1-norm handled by the degree-13 Padé approximant without scaling.
pub const THETA13: f64 = 5.371920351148152;

pub fn norm1(a: &Mat) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &Mat, b: &Mat) -> Mat {
    a * b - b * a
}

/// Matrix exponential by scaling and squaring with a degree-13 Padé
/// approximant.
pub fn expm(a: &Mat) -> Mat {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.nrows();
    let norm = norm1(a);
    if norm == 0.0 {
        return Mat::identity(n, n);
    }
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let a = a / 2f64.powi(s);
    let b = &PADE13;
    let ident = Mat::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]);
    let u = &a * (u_inner + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &ident * b[1]);
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8])
        + &a6 * b[6]
        + &a4 * b[4]
        + &a2 * b[2]
        + &ident * b[0];
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .expect("Padé denominator is nonsingular for scaled arguments");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

pub fn inverse(a: &Mat) -> Result<Mat, LieError> {
    let inv = a.clone().try_inverse().ok_or(LieError::SingularMatrix)?;
    if inv.iter().all(|v| v.is_finite()) {
        Ok(inv)
    } else {
        Err(LieError::SingularMatrix)
    }
}

/// Principal matrix logarithm by inverse scaling and squaring.
///
/// Square roots come from the Denman–Beavers iteration; once the argument is
/// within 0.1 of the identity the `atanh` series of the logarithm is summed.
pub fn logm(a: &Mat) -> Result<Mat, LieError> {
    let n = a.nrows();
    let ident = Mat::identity(n, n);
    let mut x = a.clone();
    let mut k = 0;
    while norm1(&(&x - &ident)) > 0.1 {
        x = sqrtm(&x)?;
        k += 1;
        if k > 60 {
            return Err(LieError::NoLogarithm);
        }
    }
    // log x = 2 atanh(z), z = (x - I)(x + I)^{-1}
    let z = (&x - &ident) * inverse(&(&x + &ident))?;
    let z2 = &z * &z;
    let mut term = z.clone();
    let mut sum = z.clone();
    for j in 1..40 {
        term = &term * &z2;
        let add = &term / (2 * j + 1) as f64;
        sum += &add;
        if norm1(&add) < 1e-18 * norm1(&sum).max(1e-300) {
            break;
        }
    }
    Ok(sum * (2.0 * 2f64.powi(k)))
}

fn sqrtm(a: &Mat) -> Result<Mat, LieError> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = Mat::identity(n, n);
    for _ in 0..100 {
        let yi = inverse(&y).map_err(|_| LieError::NoLogarithm)?;
        let zi = inverse(&z).map_err(|_| LieError::NoLogarithm)?;
        let y_next = (&y + &zi) * 0.5;
        let z_next = (&z + &yi) * 0.5;
        let delta = norm1(&(&y_next - &y));
        y = y_next;
        z = z_next;
        if delta <= 1e-15 * norm1(&y) {
            return Ok(y);
        }
    }
    Err(LieError::NoLogarithm)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Truncated power series with scaling; independent of the Padé route.
    fn series_exp(a: &Mat) -> Mat {
        let n = a.nrows();
        let s = 6;
        let a = a / 2f64.powi(s);
        let mut term = Mat::identity(n, n);
        let mut sum = term.clone();
        for k in 1..30 {
            term = &term * &a / k as f64;
            sum += &term;
        }
        for _ in 0..s {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn rotation_generator() {
        let j = Mat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let r = expm(&j);
        let expected = Mat::from_row_slice(2, 2, &[1f64.cos(), -1f64.sin(), 1f64.sin(), 1f64.cos()]);
        assert!((r - expected).amax() < 1e-15);
    }

    #[test]
    fn agrees_with_power_series() {
        let a = Mat::from_row_slice(
            3,
            3,
            &[0.3, -1.2, 0.7, 2.1, -0.4, 0.05, -0.8, 1.6, 0.9],
        );
        for scale in [0.01, 1.0, 4.0, 12.0] {
            let m = &a * scale;
            let (e, s) = (expm(&m), series_exp(&m));
            assert!((&e - &s).amax() <= 1e-12 * s.amax(), "scale {scale}");
        }
    }

    #[test]
    fn log_inverts_exp() {
        let a = Mat::from_row_slice(3, 3, &[0.0, -0.9, 0.4, 0.9, 0.0, -1.3, -0.4, 1.3, 0.0]);
        let l = logm(&expm(&a)).unwrap();
        assert!((l - a).amax() < 1e-12);
        let small = Mat::from_row_slice(2, 2, &[1e-3, 2e-3, -5e-4, -1e-3]);
        let err = (logm(&expm(&small)).unwrap() - &small).amax();
        assert!(err < 1e-15, "{err:e}");
    }

    #[test]
    fn negative_eigenvalue_has_no_real_log() {
        let m = Mat::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 2.0]);
        assert!(logm(&m).is_err());
    }
}
