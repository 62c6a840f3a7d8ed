use crate::error::{Error, Result};
use crate::linalg::{solve, Matrix};

/// Coefficients of the degree-13 diagonal Padé approximant to `exp`.
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

/// Largest 1-norm for which the unscaled [13/13] approximant is accurate
/// to double precision.
pub const THETA_13: f64 = 5.371920351148152;

const MAX_SQUARINGS: i32 = 1000;

/// Matrix exponential by scaling and squaring with a [13/13] Padé approximant.
pub fn expm(x: &Matrix) -> Result<Matrix> {
    let n = x.ensure_square()?;
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    let norm = x.norm_one();
    let s = if norm > THETA_13 { (norm / THETA_13).log2().ceil() as i32 } else { 0 };
    if s > MAX_SQUARINGS {
        return Err(Error::Overflow { norm });
    }
    let a = x.scale(2f64.powi(-s));
    let b = &PADE13;
    let ident = Matrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &(&a6.scale(b[13]) + &a4.scale(b[11])) + &a2.scale(b[9]);
    let u_tail = &(&(&a6.scale(b[7]) + &a4.scale(b[5])) + &a2.scale(b[3])) + &ident.scale(b[1]);
    let u = &a * &(&(&a6 * &u_inner) + &u_tail);

    let v_inner = &(&a6.scale(b[12]) + &a4.scale(b[10])) + &a2.scale(b[8]);
    let v_tail = &(&(&a6.scale(b[6]) + &a4.scale(b[4])) + &a2.scale(b[2])) + &ident.scale(b[0]);
    let v = &(&a6 * &v_inner) + &v_tail;

    let mut r = solve(&(&v - &u), &(&v + &u)).map_err(|_| Error::Overflow { norm })?;
    for _ in 0..s {
        r = &r * &r;
        if !r.is_finite() {
            return Err(Error::Overflow { norm });
        }
    }
    if !r.is_finite() {
        return Err(Error::Overflow { norm });
    }
    Ok(r)
}
