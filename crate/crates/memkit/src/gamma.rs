//! Gamma function in double precision.
//!
//! Lanczos approximation (g = 7, 9 coefficients) with the reflection formula
//! for arguments below 1/2. Poles at nonpositive integers return signed
//! infinity, so reciprocals of pole values are exactly zero; series code
//! relies on that to drop terms whose gamma argument sits on a pole.

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// sin(pi x) with the argument reduced exactly to [-1/2, 1/2].
///
/// Exact zeros at integer x, which is what makes `gamma` return a clean
/// infinity on its poles.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n; // exact for |x| < 2^52
    let s = (std::f64::consts::PI * r).sin();
    // round() to even n keeps the sign flip consistent: sin(pi(x)) = (-1)^n sin(pi r)
    if (n as i64) & 1 == 0 {
        s
    } else {
        -s
    }
}

// (n-1)! for n = 1..=23; every entry is exactly representable in f64.
const SMALL_FACTORIALS: [f64; 23] = [
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
    20922789888000.0,
    355687428096000.0,
    6402373705728000.0,
    121645100408832000.0,
    2432902008176640000.0,
    51090942171709440000.0,
    1124000727777607680000.0,
];

/// Gamma function.
///
/// Returns signed infinity at nonpositive integers and NaN for NaN input.
/// Exact at integer arguments up to 23; relative accuracy is about 1e-14
/// elsewhere away from the poles.
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == x.floor() && x >= 1.0 && x <= 23.0 {
        return SMALL_FACTORIALS[x as usize - 1];
    }
    if x < 0.5 {
        // Reflection: Gamma(x) = pi / (sin(pi x) Gamma(1 - x)).
        let s = sin_pi(x);
        if s == 0.0 {
            // Pole. Sign chosen to match the limit from the right of each pole:
            // positive just above even nonpositive integers, negative above odd.
            return if ((-x.round()) as i64) & 1 == 0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
        }
        return std::f64::consts::PI / (s * gamma(1.0 - x));
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let sqrt_two_pi = (2.0 * std::f64::consts::PI).sqrt();
    sqrt_two_pi * t.powf(z + 0.5) * (-t).exp() * acc
}
