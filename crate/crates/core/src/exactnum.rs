//! Exact scalar substrate: rationals, points on the unit circle with rational
//! angle, and a small complex float wrapper with explicit tolerances.
//!
//! Unit-circle values are stored as the rational angle `x` of `e^{2πi·x}`,
//! canonicalized into `[0,1)`. Products add angles, so Weyl-sum cancellations
//! between character values stay exact; conversion to floating point happens
//! once, at the end of a computation.

use num_rational::Ratio;
use num_traits::Zero;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Exact rational number. Always reduced, denominator positive.
pub type Rat = Ratio<i64>;

/// Convenience constructor.
pub fn rat(num: i64, den: i64) -> Rat {
    Ratio::new(num, den)
}

/// A point on the unit circle, `e^{2πi·angle}`, with `angle ∈ [0,1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Circle {
    angle: Rat,
}

impl Circle {
    pub fn new(angle: Rat) -> Self {
        Circle { angle: angle - angle.floor() }
    }

    pub fn one() -> Self {
        Circle { angle: Rat::zero() }
    }

    /// `-1`, the half turn.
    pub fn minus_one() -> Self {
        Circle::new(rat(1, 2))
    }

    /// Primitive n-th root of unity `e^{2πi/n}`.
    pub fn root_of_unity(n: i64) -> Self {
        Circle::new(rat(1, n))
    }

    pub fn angle(&self) -> Rat {
        self.angle
    }

    pub fn is_one(&self) -> bool {
        self.angle.is_zero()
    }

    pub fn inv(&self) -> Self {
        Circle::new(-self.angle)
    }

    pub fn pow(&self, k: i64) -> Self {
        Circle::new(self.angle * Rat::from_integer(k))
    }

    /// Sign as a circle factor: `+1 ↦ 1`, `-1 ↦ e^{πi}`.
    pub fn from_sign(sign: i64) -> Self {
        if sign >= 0 { Circle::one() } else { Circle::minus_one() }
    }

    pub fn to_cx(&self) -> Cx {
        circle_to_cx(*self)
    }
}

impl Mul for Circle {
    type Output = Circle;
    #[allow(clippy::suspicious_arithmetic_impl)] // products add angles
    fn mul(self, rhs: Circle) -> Circle {
        Circle::new(self.angle + rhs.angle)
    }
}

impl fmt::Debug for Circle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e(2πi·{})", self.angle)
    }
}

impl fmt::Display for Circle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^(2πi·{})", self.angle)
    }
}

/// Complex number over `f64`. Comparisons only through [`Cx::approx_eq`]
/// with a caller-supplied tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl Cx {
    pub fn new(re: f64, im: f64) -> Self {
        Cx { re, im }
    }

    pub fn zero() -> Self {
        Cx::new(0.0, 0.0)
    }

    pub fn one() -> Self {
        Cx::new(1.0, 0.0)
    }

    pub fn i() -> Self {
        Cx::new(0.0, 1.0)
    }

    pub fn real(x: f64) -> Self {
        Cx::new(x, 0.0)
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn conj(&self) -> Self {
        Cx::new(self.re, -self.im)
    }

    pub fn inv(&self) -> Self {
        let n = self.re * self.re + self.im * self.im;
        Cx::new(self.re / n, -self.im / n)
    }

    pub fn scale(&self, t: f64) -> Self {
        Cx::new(self.re * t, self.im * t)
    }

    pub fn approx_eq(&self, other: &Cx, tol: f64) -> bool {
        (*self - *other).abs() <= tol
    }

    /// `i^k` for integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Cx::one(),
            1 => Cx::i(),
            2 => Cx::new(-1.0, 0.0),
            _ => Cx::new(0.0, -1.0),
        }
    }
}

impl Add for Cx {
    type Output = Cx;
    fn add(self, rhs: Cx) -> Cx {
        Cx::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Cx {
    type Output = Cx;
    fn sub(self, rhs: Cx) -> Cx {
        Cx::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Cx {
    type Output = Cx;
    fn mul(self, rhs: Cx) -> Cx {
        Cx::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Div for Cx {
    type Output = Cx;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Cx) -> Cx {
        self * rhs.inv()
    }
}

impl Neg for Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx::new(-self.re, -self.im)
    }
}

impl fmt::Display for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+.12e}{:+.12e}i", self.re, self.im)
    }
}

/// Evaluate `e^{2πi·angle}` as a complex float. Deterministic rounding from
/// the canonical angle representative.
pub fn circle_to_cx(c: Circle) -> Cx {
    let a = c.angle();
    // Exact values at the quarter turns avoid spurious 1e-17 residues.
    if *a.denom() == 1 {
        return Cx::one();
    }
    if *a.denom() == 2 {
        return Cx::new(-1.0, 0.0);
    }
    if *a.denom() == 4 {
        return if *a.numer() == 1 { Cx::i() } else { Cx::new(0.0, -1.0) };
    }
    let theta = 2.0 * std::f64::consts::PI * (*a.numer() as f64) / (*a.denom() as f64);
    Cx::new(theta.cos(), theta.sin())
}

/// `1 − e^{2πi·angle}`. Its modulus is `2|sin(π·angle)|`.
pub fn one_minus(c: Circle) -> Cx {
    Cx::one() - circle_to_cx(c)
}

/// `sgn_C(z) = z/|z|` for nonzero `z`, exactly, for the arguments that occur
/// in transfer-factor products: `z = (v−1)/i` and `z = v+1` with `v` on the
/// unit circle. Both are circle points up to a positive real factor, so the
/// result is an exact [`Circle`].
pub mod csign {
    use super::*;

    /// `sgn_C((v − 1)/i)` for `v = e^{2πiθ}`, `v ≠ 1`.
    ///
    /// `v − 1 = e^{πiθ}·2i·sin(πθ)`, so the sign is `e^{πiθ}·sgn(sin πθ)`.
    pub fn of_v_minus_one_over_i(v: Circle) -> Circle {
        let theta = v.angle();
        debug_assert!(!theta.is_zero(), "sgn_C of zero");
        // sin(πθ) > 0 exactly when θ ∈ (0,1), which holds for the canonical
        // representative of a nontrivial circle point.
        Circle::new(theta / Rat::from_integer(2))
    }

    /// `sgn_C(v + 1)` for `v = e^{2πiθ}`, `v ≠ -1`.
    ///
    /// `v + 1 = e^{πiθ}·2cos(πθ)`; `cos(πθ)` is positive for θ ∈ [0,1/2) and
    /// negative for θ ∈ (1/2,1).
    pub fn of_v_plus_one(v: Circle) -> Circle {
        let theta = v.angle();
        debug_assert!(theta != rat(1, 2), "sgn_C of zero");
        let half = Circle::new(theta / Rat::from_integer(2));
        if theta < rat(1, 2) {
            half
        } else {
            half * Circle::minus_one()
        }
    }
}

/// `2|sin(π·angle)| = |1 − e^{2πi·angle}|` as a float.
pub fn abs_one_minus(c: Circle) -> f64 {
    let a = c.angle();
    let x = std::f64::consts::PI * (*a.numer() as f64) / (*a.denom() as f64);
    2.0 * x.sin().abs()
}

/// A complex number in polar form with an exact root-of-unity phase and a
/// nonnegative float radius. Products of `1 − v` factors over circle points
/// keep their phases exact this way; only the radii multiply in floating
/// point.
#[derive(Clone, Copy, Debug)]
pub struct Polar {
    pub phase: Circle,
    pub radius: f64,
}

impl Polar {
    pub fn one() -> Self {
        Polar { phase: Circle::one(), radius: 1.0 }
    }

    pub fn from_circle(c: Circle) -> Self {
        Polar { phase: c, radius: 1.0 }
    }

    pub fn to_cx(&self) -> Cx {
        self.phase.to_cx().scale(self.radius)
    }

    pub fn inv(&self) -> Self {
        Polar { phase: self.phase.inv(), radius: 1.0 / self.radius }
    }

    pub fn abs(&self) -> f64 {
        self.radius
    }
}

impl Mul for Polar {
    type Output = Polar;
    fn mul(self, rhs: Polar) -> Polar {
        Polar { phase: self.phase * rhs.phase, radius: self.radius * rhs.radius }
    }
}

/// `1 − v` in polar form for a circle point `v = e^{2πiθ}`, `v ≠ 1`:
/// `1 − v = 2 sin(πθ) · e^{2πi(θ/2 − 1/4)}`, and `sin(πθ) > 0` for the
/// canonical representative `θ ∈ (0,1)`.
pub fn one_minus_polar(v: Circle) -> Polar {
    let theta = v.angle();
    debug_assert!(!theta.is_zero(), "1 − v vanishes");
    let phase = Circle::new(theta / Rat::from_integer(2) - rat(1, 4));
    Polar { phase, radius: abs_one_minus(v) }
}
