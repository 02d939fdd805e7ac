//! Scalar fields the holomorphic maps can be evaluated over.
//!
//! Every map kind is evaluated through rational operations only, so the same
//! evaluation code runs over plain complex numbers and over bicomplex numbers
//! `a + b·j` (`j² = −1`, `j` commuting with `i`). Pushing `z + h·j·e_k` through a
//! holomorphic map yields `h·∂f/∂z_k` in the `j` part with no subtractive
//! cancellation, which is the complex-step derivative for holomorphic maps.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub};

use num_complex::Complex64;

pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + MulAssign
    + From<Complex64>
    + Send
    + Sync
{
    fn zero() -> Self {
        Self::from(Complex64::new(0.0, 0.0))
    }

    fn one() -> Self {
        Self::from(Complex64::new(1.0, 0.0))
    }

    fn recip(self) -> Self {
        Self::one() / self
    }

    /// Integer power by repeated squaring.
    fn powi(self, k: i32) -> Self {
        let mut base = if k < 0 { self.recip() } else { self };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    fn scale(self, c: Complex64) -> Self {
        self * Self::from(c)
    }
}

impl Scalar for Complex64 {
    fn powi(self, k: i32) -> Self {
        Complex64::powi(&self, k)
    }
}

/// `re + im·j` with complex parts and `j² = −1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bicomplex {
    pub re: Complex64,
    pub im: Complex64,
}

impl Bicomplex {
    pub fn new(re: Complex64, im: Complex64) -> Self {
        Self { re, im }
    }

    /// The `j`-conjugate `re − im·j`.
    fn conj_j(self) -> Self {
        Self::new(self.re, -self.im)
    }
}

impl From<Complex64> for Bicomplex {
    fn from(c: Complex64) -> Self {
        Self::new(c, Complex64::new(0.0, 0.0))
    }
}

impl Add for Bicomplex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Bicomplex {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for Bicomplex {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Div for Bicomplex {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        // (x)(ō)/(o ō) with o ō = re² + im² ∈ C
        let den = o.re * o.re + o.im * o.im;
        let num = self * o.conj_j();
        Self::new(num.re / den, num.im / den)
    }
}

impl Neg for Bicomplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl AddAssign for Bicomplex {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl MulAssign for Bicomplex {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl Scalar for Bicomplex {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_step_of_cube() {
        // d/dz z³ at z = 0.3 is 0.27
        let h = 1e-30;
        let z = Bicomplex::new(Complex64::new(0.3, 0.0), Complex64::new(h, 0.0));
        let y = z.powi(3);
        assert!((y.im / h - Complex64::new(0.27, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = Bicomplex::new(Complex64::new(0.3, -1.2), Complex64::new(0.7, 0.1));
        let b = Bicomplex::new(Complex64::new(-0.4, 0.5), Complex64::new(0.2, 0.9));
        let back = (a * b) / b;
        assert!((back.re - a.re).norm() < 1e-14);
        assert!((back.im - a.im).norm() < 1e-14);
    }

    #[test]
    fn powi_negative_exponent() {
        let z = Complex64::new(0.5, 0.25);
        let expected = Complex64::new(1.0, 0.0) / (z * z * z);
        assert!((Scalar::powi(z, -3) - expected).norm() < 1e-13);
        let b = Bicomplex::from(z);
        assert!((b.powi(-3).re - expected).norm() < 1e-13);
    }
}
