use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

pub type CMatrix = DMatrix<C64>;

const PADE_ORDER: usize = 6;

fn one_norm(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a diagonal [6/6] Padé
/// approximant; the scaled matrix has 1-norm at most 1/2.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    let norm = one_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * C64::new(0.5f64.powi(squarings), 0.0);

    let mut coeff = 1.0;
    let mut power = CMatrix::identity(n, n);
    let mut num = CMatrix::identity(n, n);
    let mut den = CMatrix::identity(n, n);
    for k in 1..=PADE_ORDER {
        coeff *= (PADE_ORDER - k + 1) as f64 / (k * (2 * PADE_ORDER - k + 1)) as f64;
        power = &power * &scaled;
        let term = &power * C64::new(coeff, 0.0);
        num += &term;
        if k % 2 == 0 {
            den += &term;
        } else {
            den -= &term;
        }
    }
    let mut result = den
        .lu()
        .solve(&num)
        .expect("Padé denominator is well conditioned for norm <= 1/2");
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}
