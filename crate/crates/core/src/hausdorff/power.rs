//! Exact sums of dyadic side lengths raised to a rational power.
//!
//! For `β = p/q` in lowest terms put `x = 2^(−p/q)`. A cube at level `k` costs
//! `x^k`, and every cover cost lies in `Q[x] = Q ⊕ Qx ⊕ … ⊕ Qx^(q−1)` via
//! `x^q = 2^(−p)`. Since `y^q − 2^p` is irreducible when `gcd(p, q) = 1`,
//! these coordinates are unique: two costs are equal exactly when their
//! coefficient vectors are. Strict comparisons are then settled by interval
//! evaluation of `x` with doubling precision, which always terminates.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::number::{pow2, render, Rational};

/// Largest accepted denominator of `β`.
pub const MAX_BETA_DENOMINATOR: u32 = 256;

const START_BITS: u32 = 64;

/// An element `Σ_j c_j x^j` of `Q[x]` with `x = 2^(−p/q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContentValue {
    p: u32,
    q: u32,
    coeffs: Vec<Rational>,
}

impl ContentValue {
    pub fn zero(beta: &Beta) -> Self {
        ContentValue { p: beta.p, q: beta.q, coeffs: vec![Rational::zero(); beta.q as usize] }
    }

    /// `2^(−level·β)`, the cost of one cube of side `2^(−level)`.
    pub fn side_power(beta: &Beta, level: u32) -> Self {
        let mut value = Self::zero(beta);
        let (whole, rest) = (level / beta.q, level % beta.q);
        value.coeffs[rest as usize] = pow2(-i64::from(whole) * i64::from(beta.p));
        value
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational, when it is one.
    pub fn exact_rational(&self) -> Option<Rational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    fn check_field(&self, other: &Self) {
        assert_eq!((self.p, self.q), (other.p, other.q), "values over different exponents");
    }

    /// Encloses `Σ c_j x^j` in `[lo, hi]` using `x` to `bits` binary digits.
    fn enclose(&self, bits: u32) -> (Rational, Rational) {
        let (x_lo, x_hi) = root_interval(self.p, self.q, bits);
        let (mut lo, mut hi) = (Rational::zero(), Rational::zero());
        let (mut pow_lo, mut pow_hi) = (Rational::one(), Rational::one());
        for c in &self.coeffs {
            if c.is_positive() {
                lo += c * &pow_lo;
                hi += c * &pow_hi;
            } else if c.is_negative() {
                lo += c * &pow_hi;
                hi += c * &pow_lo;
            }
            pow_lo *= &x_lo;
            pow_hi *= &x_hi;
        }
        (lo, hi)
    }

    fn sign(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if let Some(r) = self.exact_rational() {
            return r.cmp(&Rational::zero());
        }
        let mut bits = START_BITS;
        loop {
            let (lo, hi) = self.enclose(bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    /// A rational `r` with `r ≤ value < r + 2^(−bits)`, a multiple of `2^(−bits)`.
    pub fn lower_bound(&self, bits: u32) -> Rational {
        if let Some(r) = self.exact_rational() {
            return r;
        }
        let grid = pow2(-i64::from(bits));
        let mut precision = bits + START_BITS;
        loop {
            let (lo, hi) = self.enclose(precision);
            let floor_lo = (&lo / &grid).floor() * &grid;
            // Accept once the whole enclosure sits in one grid cell.
            if hi < &floor_lo + &grid {
                return floor_lo;
            }
            precision *= 2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.lower_bound(80).to_f64().unwrap_or(f64::NAN)
    }
}

/// `[⌊2^(bits − p/q)⌋, ⌊2^(bits − p/q)⌋ + 1] / 2^bits ∋ 2^(−p/q)`.
fn root_interval(p: u32, q: u32, bits: u32) -> (Rational, Rational) {
    let bits = bits.max(p / q + 1);
    let radicand = BigInt::one() << (u64::from(bits) * u64::from(q) - u64::from(p));
    let r = radicand.nth_root(q);
    let scale = BigInt::one() << bits;
    (Rational::new(r.clone(), scale.clone()), Rational::new(r + 1, scale))
}

impl PartialOrd for ContentValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ContentValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.check_field(other);
        let diff = ContentValue {
            p: self.p,
            q: self.q,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        };
        diff.sign()
    }
}

impl Add for &ContentValue {
    type Output = ContentValue;

    fn add(self, other: &ContentValue) -> ContentValue {
        self.check_field(other);
        ContentValue {
            p: self.p,
            q: self.q,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl crate::capacity::SetValue for ContentValue {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
}

/// Renders `Σ c_j·2^(−j·p/q)`, e.g. `1/2 + 2^(-1/2)`.
impl fmt::Display for ContentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if j == 0 {
                terms.push(render(c));
                continue;
            }
            let exponent = render(&Rational::new(BigInt::from(j as u64 * u64::from(self.p)), BigInt::from(self.q)));
            let power = format!("2^(-{exponent})");
            terms.push(if c.is_one() { power } else { format!("{}*{power}", render(c)) });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// A positive rational exponent `β = p/q` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Beta {
    p: u32,
    q: u32,
}

impl Beta {
    pub fn new(beta: &Rational) -> Result<Self> {
        if !beta.is_positive() {
            return Err(Error::Invalid(format!("β must be positive, got {}", render(beta))));
        }
        let (p, q) = (beta.numer().to_u32(), beta.denom().to_u32());
        match (p, q) {
            (Some(p), Some(q)) if q <= MAX_BETA_DENOMINATOR && p <= 4096 => Ok(Beta { p, q }),
            _ => Err(Error::SizeGuard(format!(
                "β = {} needs a denominator ≤ {MAX_BETA_DENOMINATOR} and a numerator ≤ 4096",
                render(beta)
            ))),
        }
    }

    pub fn value(&self) -> Rational {
        Rational::new(BigInt::from(self.p), BigInt::from(self.q))
    }

    pub fn is_integer(&self) -> bool {
        self.q == 1
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render(&self.value()))
    }
}
