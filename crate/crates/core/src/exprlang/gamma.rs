//! Gamma function via the Lanczos approximation (g = 7, 9 terms) with the
//! reflection formula below 1/2.

use crate::scalar::Scalar;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Γ(x)`. Returns NaN at the poles `x ∈ {0, −1, −2, …}`.
pub fn gamma<S: Scalar>(x: S) -> S {
    if x.is_nan() {
        return x;
    }
    if x <= S::zero() && x == x.floor() {
        return S::nan();
    }
    if x >= S::one() && x <= S::lit(23.0) && x == x.floor() {
        // exact factorials while they fit the mantissa
        let mut acc = S::one();
        let mut k = S::lit(2.0);
        while k < x {
            acc = acc * k;
            k = k + S::one();
        }
        return acc;
    }
    let pi = S::PI();
    if x < S::lit(0.5) {
        // Γ(x) Γ(1 − x) = π / sin(πx)
        return pi / ((pi * x).sin() * gamma(S::one() - x));
    }
    let x = x - S::one();
    let mut acc = S::lit(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc = acc + S::lit(c) / (x + S::lit(i as f64));
    }
    let t = x + S::lit(LANCZOS_G + 0.5);
    let sqrt_two_pi = (S::lit(2.0) * pi).sqrt();
    // t^(x+1/2) e^(-t) split in two halves to delay overflow.
    let half = t.powf((x + S::lit(0.5)) / S::lit(2.0));
    sqrt_two_pi * half * (half * (-t).exp()) * acc
}
