use nalgebra::DMatrix;

use crate::{HalfInt, SpinValue};

/// `d_{m̄ m}(θ) = <m̄| exp(-iθ S_y) |m>`, rows `m̄` and columns `m` both
/// descending from `+S`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerDMatrix {
    pub spin: SpinValue,
    pub theta: f64,
    pub entries: DMatrix<f64>,
}

impl WignerDMatrix {
    pub fn get(&self, m_bar: HalfInt, m: HalfInt) -> f64 {
        let r = self.spin.index_of(m_bar).expect("row projection in range");
        let c = self.spin.index_of(m).expect("column projection in range");
        self.entries[(r, c)]
    }
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut table = vec![0.0; n + 1];
    for k in 1..=n {
        table[k] = table[k - 1] + (k as f64).ln();
    }
    table
}

fn sorted_sum(mut terms: [f64; 4]) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

pub fn wigner_d(spin: SpinValue, theta: f64) -> WignerDMatrix {
    let d = spin.dim();
    let two_j = spin.two_s as i64;
    let lf = ln_factorials(spin.two_s as usize + 1);
    let (sin_h, cos_h) = (0.5 * theta).sin_cos();
    let mut entries = DMatrix::zeros(d, d);
    for r in 0..d {
        // All quantities below are integers: j ± m etc. with j, m half-integers.
        let jp_mb = two_j - r as i64; // j + m̄
        let jm_mb = r as i64; // j - m̄
        for c in 0..d {
            let jp_m = two_j - c as i64; // j + m
            let jm_m = c as i64; // j - m
            let mb_minus_m = jp_mb - jp_m;
            let ln_norm = 0.5
                * sorted_sum([
                    lf[jp_m as usize],
                    lf[jm_m as usize],
                    lf[jp_mb as usize],
                    lf[jm_mb as usize],
                ]);
            let k_min = 0.max(-mb_minus_m);
            let k_max = jp_m.min(jm_mb);
            let mut sum = 0.0;
            for k in k_min..=k_max {
                let ln_den = sorted_sum([
                    lf[(jp_m - k) as usize],
                    lf[k as usize],
                    lf[(jm_mb - k) as usize],
                    lf[(k + mb_minus_m) as usize],
                ]);
                let cos_pow = (two_j + (jp_m - jp_mb) - 2 * k) as i32;
                let sin_pow = (2 * k + mb_minus_m) as i32;
                let sign = if (k + mb_minus_m) % 2 == 0 { 1.0 } else { -1.0 };
                sum += sign * (ln_norm - ln_den).exp() * cos_h.powi(cos_pow) * sin_h.powi(sin_pow);
            }
            entries[(r, c)] = sum;
        }
    }
    WignerDMatrix {
        spin,
        theta,
        entries,
    }
}
