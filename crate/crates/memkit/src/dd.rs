//! Minimal double-double arithmetic (~31 significant digits).
//!
//! Used internally by the Mittag-Leffler evaluator: the alternating power
//! series develops up to ~15 digits of cancellation in the regime where the
//! asymptotic expansion is not yet accurate, so both the series coefficients
//! and the accumulator need more than f64 precision there.
//!
//! Products use Dekker splitting rather than `mul_add`, so the code is exact
//! on targets where fused multiply-add lowers to a libm call.

#[derive(Clone, Copy, Debug)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Requires |a| >= |b| (or a == 0).
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1

#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

impl Dd {
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub const fn new(hi: f64, lo: f64) -> Dd {
        Dd { hi, lo }
    }

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact product of two f64 values.
    pub fn from_prod(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    pub fn add_f64(self, b: f64) -> Dd {
        let (s1, s2) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s1, s2 + self.lo);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn sub_f64(self, b: f64) -> Dd {
        self.add_f64(-b)
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(p1, p2 + (self.hi * o.lo + self.lo * o.hi));
        Dd { hi, lo }
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p1, p2 + self.lo * b);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f64(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_f64(q2));
        let q3 = r.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e }.add_f64(q3)
    }

    pub fn div_f64(self, b: f64) -> Dd {
        self.div(Dd::from_f64(b))
    }

    pub fn recip(self) -> Dd {
        Dd::ONE.div(self)
    }

    pub fn abs_hi(self) -> f64 {
        self.hi.abs()
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// exp(x) for |x| up to ~700, via range reduction x = m ln2 + r.
    pub fn exp(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ONE;
        }
        let m = (self.hi / LN2.hi).round();
        let r = self.sub(LN2.mul_f64(m));
        // |r| <= ln2/2; Taylor converges past dd precision within ~26 terms.
        let mut term = r;
        let mut sum = Dd::ONE.add(r);
        let mut n = 2.0;
        loop {
            term = term.mul(r).div_f64(n);
            sum = sum.add(term);
            if term.abs_hi() < 1e-35 * sum.abs_hi() || n > 40.0 {
                break;
            }
            n += 1.0;
        }
        let scale = (m as i32).max(-1070).min(1070);
        let factor = pow2(scale);
        Dd { hi: sum.hi * factor, lo: sum.lo * factor }
    }

    /// ln(x) for x > 0, one Newton step on exp from an f64 seed.
    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0);
        let y0 = self.hi.ln();
        let t = self.mul(Dd::from_f64(-y0).exp());
        Dd::from_f64(y0).add(t.sub_f64(1.0))
    }
}

/// 2^k as an exact f64 (|k| <= 1070).
fn pow2(k: i32) -> f64 {
    f64::from_bits(((1023 + k.max(-1022)) as u64) << 52)
}

pub(crate) const LN2: Dd = Dd::new(0.6931471805599453, 2.3190468138462996e-17);
const HALF_LN_2PI: Dd = Dd::new(0.9189385332046728, -3.878294158067242e-17);

/// B_{2m} / (2m (2m-1)) for m = 1..=15: Stirling series coefficients.
const STIRLING: [Dd; 15] = [
    Dd::new(0.08333333333333333, 4.625929269271485e-18),
    Dd::new(-0.002777777777777778, 1.0601087908747154e-19),
    Dd::new(0.0007936507936507937, 6.883823317368282e-22),
    Dd::new(-0.0005952380952380953, 5.36938218754726e-20),
    Dd::new(0.0008417508417508417, 3.6870174889237694e-20),
    Dd::new(-0.0019175269175269176, 1.0675702776872475e-19),
    Dd::new(0.00641025641025641, 2.2240044563805217e-19),
    Dd::new(-0.029550653594771242, 4.861760957508855e-19),
    Dd::new(0.17964437236883057, -6.401600482710946e-19),
    Dd::new(-1.3924322169059011, 1.5837056989230303e-17),
    Dd::new(13.402864044168393, -6.154114101993966e-16),
    Dd::new(-156.84828462600203, 9.391823141715389e-15),
    Dd::new(2193.1033333333335, -1.3339255626002948e-13),
    Dd::new(-36108.77125372499, 5.897583353514365e-13),
    Dd::new(691472.268851313, 2.5585296305158e-11),
];

/// ln Gamma(x) for x > 0 in double-double precision.
///
/// Arguments below 30 are lifted with the recurrence
/// Gamma(x) = Gamma(x + n) / (x (x+1) ... (x+n-1)); the Stirling series with
/// 15 Bernoulli terms then has remainder below 1e-37 relative.
pub(crate) fn ln_gamma_dd(x: Dd) -> Dd {
    debug_assert!(x.hi > 0.0);
    let mut xx = x;
    let mut shift = Dd::ONE;
    let mut lifted = false;
    while xx.hi < 30.0 {
        shift = shift.mul(xx);
        xx = xx.add_f64(1.0);
        lifted = true;
    }
    let ln_x = xx.ln();
    let mut s = xx.sub_f64(0.5).mul(ln_x).sub(xx).add(HALF_LN_2PI);
    let inv = xx.recip();
    let inv2 = inv.mul(inv);
    let mut p = inv;
    for c in STIRLING {
        s = s.add(c.mul(p));
        p = p.mul(inv2);
    }
    if lifted {
        s = s.sub(shift.ln());
    }
    s
}
