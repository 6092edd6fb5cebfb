//! Double-double arithmetic: an unevaluated sum `hi + lo` with `|lo| <=
//! ulp(hi)/2`, giving roughly 106 bits of significand.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact for `|x| < 2^106`.
    pub fn from_i128(x: i128) -> Self {
        let hi = x as f64;
        let lo = (x - hi as i128) as f64;
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn recip(self) -> Self {
        Dd::ONE / self
    }
}

impl Div for Dd {
    type Output = Dd;

    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::from_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::from_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ZERO: CDd = CDd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    pub const ONE: CDd = CDd {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    pub fn new(re: Dd, im: Dd) -> Self {
        Self { re, im }
    }

    pub fn conj(self) -> Self {
        Self {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }

    pub fn powu(self, k: u32) -> Self {
        let mut acc = CDd::ONE;
        for _ in 0..k {
            acc = acc * self;
        }
        acc
    }

    /// `exp(2 pi i / n)`, refined from the `f64` value by Newton steps on
    /// `z^n = 1`.
    pub fn root_of_unity(n: u32) -> Self {
        let t = std::f64::consts::TAU / n as f64;
        let mut z = CDd::new(Dd::from_f64(t.cos()), Dd::from_f64(t.sin()));
        let nn = Dd::from_f64(n as f64);
        for _ in 0..2 {
            // z <- z - (z^n - 1) / (n z^{n-1})
            let w = z.powu(n - 1);
            let f = w * z - CDd::ONE;
            let inv_den = nn * w.norm_sqr();
            let corr = f * w.conj();
            let inv = inv_den.recip();
            z = z - CDd::new(corr.re * inv, corr.im * inv);
        }
        z
    }
}

impl Add for CDd {
    type Output = CDd;
    fn add(self, b: CDd) -> CDd {
        CDd::new(self.re + b.re, self.im + b.im)
    }
}

impl Sub for CDd {
    type Output = CDd;
    fn sub(self, b: CDd) -> CDd {
        CDd::new(self.re - b.re, self.im - b.im)
    }
}

impl Neg for CDd {
    type Output = CDd;
    fn neg(self) -> CDd {
        CDd::new(-self.re, -self.im)
    }
}

impl Mul for CDd {
    type Output = CDd;
    fn mul(self, b: CDd) -> CDd {
        CDd::new(
            self.re * b.re - self.im * b.im,
            self.re * b.im + self.im * b.re,
        )
    }
}

/// Multiplies the polynomial `coeffs` (lowest degree first) by `x - root` in
/// place.
pub fn mul_linear(coeffs: &mut Vec<CDd>, root: CDd) {
    coeffs.push(CDd::ZERO);
    for k in (0..coeffs.len()).rev() {
        let shifted = if k > 0 { coeffs[k - 1] } else { CDd::ZERO };
        coeffs[k] = shifted - root * coeffs[k];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_is_accurate() {
        let third = Dd::ONE / Dd::from_f64(3.0);
        let back = third * Dd::from_f64(3.0) - Dd::ONE;
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn sqrt2_squared() {
        let s = Dd {
            hi: std::f64::consts::SQRT_2,
            lo: -9.667293313452913e-17,
        };
        assert!((s * s - Dd::from_f64(2.0)).to_f64().abs() < 1e-31);
    }

    #[test]
    fn root_of_unity_closes() {
        for n in [3, 7, 14, 32] {
            let z = CDd::root_of_unity(n);
            let e = z.powu(n) - CDd::ONE;
            assert!(
                e.re.to_f64().abs() < 1e-29 && e.im.to_f64().abs() < 1e-29,
                "{n}"
            );
        }
    }

    #[test]
    fn i128_roundtrip() {
        let x: i128 = (1 << 90) + 12345;
        let d = Dd::from_i128(x);
        assert_eq!(d.hi as i128 + d.lo as i128, x);
    }

    #[test]
    fn linear_factors() {
        let mut p = vec![CDd::ONE];
        mul_linear(&mut p, CDd::new(Dd::from_f64(2.0), Dd::ZERO));
        mul_linear(&mut p, CDd::new(Dd::from_f64(-3.0), Dd::ZERO));
        let re: Vec<f64> = p.iter().map(|c| c.re.to_f64()).collect();
        assert_eq!(re, vec![-6.0, 1.0, 1.0]);
    }
}
