//! Field abstraction so the Hamiltonian and the Lanczos solver run on real
//! vectors when all amplitudes are real and on complex vectors otherwise.

use std::fmt::Debug;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use rand::Rng;

pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum
    + 'static
{
    const IS_COMPLEX: bool;

    fn zero() -> Self;
    fn from_real(x: f64) -> Self;
    fn conj(self) -> Self;
    fn re(self) -> f64;
    fn abs(self) -> f64;
    fn norm_sqr(self) -> f64;
    fn scale(self, x: f64) -> Self;

    /// `e^{iθ}`, or `None` when the value is not representable.
    fn phase(theta: f64) -> Option<Self>;

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Scalar for f64 {
    const IS_COMPLEX: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn conj(self) -> Self {
        self
    }
    fn re(self) -> f64 {
        self
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn norm_sqr(self) -> f64 {
        self * self
    }
    fn scale(self, x: f64) -> Self {
        self * x
    }
    fn phase(theta: f64) -> Option<Self> {
        (theta == 0.0).then_some(1.0)
    }
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen::<f64>() - 0.5
    }
}

impl Scalar for Complex64 {
    const IS_COMPLEX: bool = true;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn abs(self) -> f64 {
        self.norm()
    }
    fn norm_sqr(self) -> f64 {
        Complex64::norm_sqr(&self)
    }
    fn scale(self, x: f64) -> Self {
        self * x
    }
    fn phase(theta: f64) -> Option<Self> {
        Some(Complex64::from_polar(1.0, theta))
    }
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    }
}

/// `⟨u, v⟩ = Σ conj(u_i) v_i`.
pub fn dot<S: Scalar>(u: &[S], v: &[S]) -> S {
    u.iter().zip(v).map(|(&a, &b)| a.conj() * b).sum()
}

pub fn norm<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `y += a x`
pub fn axpy<S: Scalar>(a: S, x: &[S], y: &mut [S]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub fn normalize<S: Scalar>(v: &mut [S]) -> f64 {
    let n = norm(v);
    if n > 0.0 {
        let inv = 1.0 / n;
        for x in v.iter_mut() {
            *x = x.scale(inv);
        }
    }
    n
}
