//! Exact coefficient domains.
//!
//! Everything downstream (polynomials, truncated power series, formal group
//! laws, certification) is built over one of two coefficient domains:
//!
//! * [`Rational`] — arbitrary-precision rationals, always stored reduced with
//!   a positive denominator. This is the reference domain: no floating point
//!   appears anywhere in this crate.
//! * [`PrimeFieldElement`] — an element of 𝔽_p with the modulus carried
//!   alongside the canonical residue in `[0, p)`.
//!
//! The p-local subring ℤ_(p) ⊂ ℚ is not a separate type: a rational is
//! p-local when its denominator is prime to p, and [`p_valuation`] /
//! [`reduce_mod_p`] make that check explicit at the points where it matters.
//! [`PLocalTag`] names a prime for such checks, optionally restricted to the
//! primes that split as required by the genus constructions (p ≡ 1 mod 3).

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;

/// Errors from coefficient-domain operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoeffError {
    /// The denominator is divisible by p, so the value has no image in 𝔽_p.
    #[error("value {value} is not {prime}-local: denominator divisible by {prime}")]
    NotPLocal { value: String, prime: u64 },
    /// A modulus that is not prime was supplied where a prime is required.
    #[error("{0} is not prime")]
    NotPrime(u64),
    /// A prime outside the residue class required by the genus constructions.
    #[error("prime {0} is not congruent to 1 mod 3")]
    NotSplitPrime(u64),
    /// Mixed-modulus arithmetic was attempted.
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    /// Inversion of zero.
    #[error("zero is not invertible")]
    NotInvertible,
    /// A malformed literal was fed to a parser.
    #[error("cannot parse {0:?} as a rational")]
    BadLiteral(String),
}

// ---------------------------------------------------------------------------
// Rational
// ---------------------------------------------------------------------------

/// An arbitrary-precision rational number.
///
/// Invariants (maintained by `num`'s `BigRational` and preserved by every
/// constructor here): numerator and denominator are coprime and the
/// denominator is positive. The canonical text form is `"n"` when the
/// denominator is 1 and `"n/d"` otherwise.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_i64(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den` reduced. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rational(BigRational::new(num, den))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn add(&self, other: &Self) -> Self {
        Rational(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Rational(&self.0 - &other.0)
    }

    pub fn neg(&self) -> Self {
        Rational(-&self.0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Rational(&self.0 * &other.0)
    }

    pub fn div(&self, other: &Self) -> Result<Self, CoeffError> {
        if other.is_zero() {
            return Err(CoeffError::NotInvertible);
        }
        Ok(Rational(&self.0 / &other.0))
    }

    pub fn inv(&self) -> Result<Self, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::NotInvertible);
        }
        Ok(Rational(self.0.recip()))
    }

    /// Integer power with negative exponents allowed for nonzero values.
    pub fn pow(&self, k: i64) -> Result<Self, CoeffError> {
        if k < 0 && self.is_zero() {
            return Err(CoeffError::NotInvertible);
        }
        Ok(Rational(self.0.pow(
            i32::try_from(k).expect("exponent fits in i32"),
        )))
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        Rational(&self.0 * BigInt::from(n))
    }

    /// Exact division by a nonzero machine integer.
    pub fn div_i64(&self, n: i64) -> Self {
        assert!(n != 0, "division by zero");
        Rational(&self.0 / BigInt::from(n))
    }

    /// Parse the canonical text form: an optional sign, digits, and an
    /// optional `/digits` suffix.
    pub fn parse(s: &str) -> Result<Self, CoeffError> {
        let bad = || CoeffError::BadLiteral(s.to_string());
        let (num_str, den_str) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s.trim(), None),
        };
        let num: BigInt = num_str.parse().map_err(|_| bad())?;
        let den: BigInt = match den_str {
            Some(d) => d.parse().map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }

    pub fn as_inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// ---------------------------------------------------------------------------
// Valuations and reduction
// ---------------------------------------------------------------------------

/// The p-adic valuation of a rational: finite for nonzero values, `Infinite`
/// for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_nonnegative(&self) -> bool {
        match self {
            Valuation::Finite(v) => *v >= 0,
            Valuation::Infinite => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

fn bigint_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut m = n.abs();
    loop {
        let (q, r) = num::Integer::div_rem(&m, &p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        m = q;
    }
}

/// The p-adic valuation of `x`. `p` must be prime.
pub fn p_valuation(x: &Rational, p: u64) -> Result<Valuation, CoeffError> {
    if !is_prime_u64(p) {
        return Err(CoeffError::NotPrime(p));
    }
    if x.is_zero() {
        return Ok(Valuation::Infinite);
    }
    Ok(Valuation::Finite(
        bigint_valuation(x.numer(), p) - bigint_valuation(x.denom(), p),
    ))
}

fn bigint_mod_u64(n: &BigInt, p: u64) -> u64 {
    let r = n % BigInt::from(p);
    let (sign, digits) = r.to_u64_digits();
    let mag = digits.first().copied().unwrap_or(0);
    match sign {
        Sign::Minus => p - mag,
        _ => mag % p,
    }
}

/// Reduce a p-local rational to its canonical residue in 𝔽_p.
///
/// Fails with [`CoeffError::NotPLocal`] when the denominator is divisible by
/// p (the value lies outside ℤ_(p)) and with [`CoeffError::NotPrime`] for a
/// composite modulus.
pub fn reduce_mod_p(x: &Rational, p: u64) -> Result<PrimeFieldElement, CoeffError> {
    if !is_prime_u64(p) {
        return Err(CoeffError::NotPrime(p));
    }
    let den = bigint_mod_u64(x.denom(), p);
    if den == 0 {
        return Err(CoeffError::NotPLocal {
            value: x.to_string(),
            prime: p,
        });
    }
    let num = bigint_mod_u64(x.numer(), p);
    let den_inv = mod_inverse(den, p).expect("denominator unit mod prime");
    Ok(PrimeFieldElement::new(mul_mod(num, den_inv, p), p))
}

// ---------------------------------------------------------------------------
// Prime fields
// ---------------------------------------------------------------------------

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    Some(pow_mod(a, p - 2, p))
}

/// Deterministic Miller-Rabin for 64-bit inputs: the listed witness set is
/// known to be exact for all n < 2^64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// An element of 𝔽_p: the canonical residue in `[0, p)` plus the modulus.
///
/// Arithmetic between elements of different moduli is a programming error
/// and panics; the only sanctioned crossing between ℚ and 𝔽_p is
/// [`reduce_mod_p`] (applied coefficientwise by the polynomial layer).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeFieldElement {
    residue: u64,
    modulus: u64,
}

impl PrimeFieldElement {
    /// Canonical element. Panics if `modulus` is not prime; residues are
    /// reduced into `[0, p)`.
    pub fn new(residue: u64, modulus: u64) -> Self {
        assert!(is_prime_u64(modulus), "{modulus} is not prime");
        PrimeFieldElement {
            residue: residue % modulus,
            modulus,
        }
    }

    pub fn from_i64(n: i64, modulus: u64) -> Self {
        let m = modulus as i128;
        let r = ((n as i128 % m) + m) % m;
        Self::new(r as u64, modulus)
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    /// The representative of smallest absolute value, in `(-p/2, p/2]`.
    /// Convenient for reporting constants like -1 rather than p-1.
    pub fn signed_residue(&self) -> i64 {
        if self.residue > self.modulus / 2 {
            self.residue as i64 - self.modulus as i64
        } else {
            self.residue as i64
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    fn check(&self, other: &Self) {
        assert_eq!(
            self.modulus, other.modulus,
            "modulus mismatch: {} vs {}",
            self.modulus, other.modulus
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let mut r = self.residue + other.residue;
        if r >= self.modulus {
            r -= self.modulus;
        }
        PrimeFieldElement {
            residue: r,
            modulus: self.modulus,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let r = if self.residue >= other.residue {
            self.residue - other.residue
        } else {
            self.residue + self.modulus - other.residue
        };
        PrimeFieldElement {
            residue: r,
            modulus: self.modulus,
        }
    }

    pub fn neg(&self) -> Self {
        let r = if self.residue == 0 {
            0
        } else {
            self.modulus - self.residue
        };
        PrimeFieldElement {
            residue: r,
            modulus: self.modulus,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        PrimeFieldElement {
            residue: mul_mod(self.residue, other.residue, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn inv(&self) -> Result<Self, CoeffError> {
        mod_inverse(self.residue, self.modulus)
            .map(|r| PrimeFieldElement {
                residue: r,
                modulus: self.modulus,
            })
            .ok_or(CoeffError::NotInvertible)
    }

    pub fn pow(&self, k: u64) -> Self {
        PrimeFieldElement {
            residue: pow_mod(self.residue, k, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for PrimeFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl fmt::Debug for PrimeFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus)
    }
}

// ---------------------------------------------------------------------------
// p-local tags
// ---------------------------------------------------------------------------

/// A named prime for p-locality bookkeeping.
///
/// `new` accepts any prime (valuations and reductions make sense for all of
/// them); `new_split` additionally requires p ≡ 1 mod 3, the congruence
/// needed by every genus construction in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PLocalTag {
    prime: u64,
}

impl PLocalTag {
    pub fn new(prime: u64) -> Result<Self, CoeffError> {
        if !is_prime_u64(prime) {
            return Err(CoeffError::NotPrime(prime));
        }
        Ok(PLocalTag { prime })
    }

    pub fn new_split(prime: u64) -> Result<Self, CoeffError> {
        let tag = Self::new(prime)?;
        if prime % 3 != 1 {
            return Err(CoeffError::NotSplitPrime(prime));
        }
        Ok(tag)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }
}

// ---------------------------------------------------------------------------
// The generic coefficient interface
// ---------------------------------------------------------------------------

/// Operations the polynomial and series layers need from a coefficient
/// domain. Implemented by [`Rational`] and [`PrimeFieldElement`].
///
/// The `*_like` constructors take a witness element so that domains with
/// runtime context (the modulus of 𝔽_p) can produce constants without a
/// global registry of moduli.
pub trait Coeff: Clone + PartialEq + Send + Sync + fmt::Display + 'static {
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn inv_ref(&self) -> Result<Self, CoeffError>;
    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.add_ref(other);
    }
    /// Multiply by a small nonnegative integer (derivative exponents).
    fn mul_u64_ref(&self, n: u64) -> Self;
    /// Canonical text used by the polynomial printer.
    fn coeff_text(&self) -> String {
        self.to_string()
    }
    /// True when this is the multiplicative identity (used to suppress
    /// `1*` in printed monomials).
    fn is_one_value(&self) -> bool;
    /// True when the printer should render `-c` via a leading minus and
    /// `|c|`; prime-field residues are canonical and never signed.
    fn display_negative(&self) -> Option<Self>;
}

impl Coeff for Rational {
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn inv_ref(&self) -> Result<Self, CoeffError> {
        self.inv()
    }
    fn mul_u64_ref(&self, n: u64) -> Self {
        debug_assert!(n <= i64::MAX as u64);
        self.mul_i64(n as i64)
    }
    fn is_one_value(&self) -> bool {
        self.is_one()
    }
    fn display_negative(&self) -> Option<Self> {
        if self.as_inner().is_negative() {
            Some(self.neg())
        } else {
            None
        }
    }
}

impl Coeff for PrimeFieldElement {
    fn is_zero(&self) -> bool {
        PrimeFieldElement::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        PrimeFieldElement {
            residue: 0,
            modulus: self.modulus,
        }
    }
    fn one_like(&self) -> Self {
        PrimeFieldElement {
            residue: 1 % self.modulus,
            modulus: self.modulus,
        }
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn inv_ref(&self) -> Result<Self, CoeffError> {
        self.inv()
    }
    fn mul_u64_ref(&self, n: u64) -> Self {
        self.mul(&PrimeFieldElement {
            residue: n % self.modulus,
            modulus: self.modulus,
        })
    }
    fn is_one_value(&self) -> bool {
        self.residue == 1
    }
    fn display_negative(&self) -> Option<Self> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_canonical_form() {
        let x = Rational::new(49, 3);
        assert_eq!(x.to_string(), "49/3");
        assert_eq!(Rational::new(-4, -6), Rational::new(2, 3));
        assert_eq!(Rational::new(4, -6).to_string(), "-2/3");
        assert_eq!(Rational::from_i64(-7).to_string(), "-7");
    }

    #[test]
    fn rational_parse_round_trip() {
        for s in ["0", "-1", "49/3", "-2147/93312", "10946/4181"] {
            assert_eq!(Rational::parse(s).unwrap().to_string(), s);
        }
        assert!(Rational::parse("1/0").is_err());
        assert!(Rational::parse("x").is_err());
        assert_eq!(Rational::parse("-4/6").unwrap(), Rational::new(-2, 3));
    }

    #[test]
    fn p_valuation_examples() {
        // Frozen from the contract: val_7(49/3) = 2, val_13(0) = +inf,
        // val_7(-2147/93312) = 0.
        assert_eq!(
            p_valuation(&Rational::new(49, 3), 7).unwrap(),
            Valuation::Finite(2)
        );
        assert_eq!(p_valuation(&Rational::zero(), 13).unwrap(), Valuation::Infinite);
        assert_eq!(
            p_valuation(&Rational::new(-2147, 93312), 7).unwrap(),
            Valuation::Finite(0)
        );
        assert_eq!(
            p_valuation(&Rational::new(3, 98), 7).unwrap(),
            Valuation::Finite(-2)
        );
        assert!(p_valuation(&Rational::one(), 6).is_err());
    }

    #[test]
    fn reduce_mod_p_examples() {
        // Frozen: -1/3 ≡ 2 (mod 7), -162 ≡ 6 (mod 7).
        assert_eq!(reduce_mod_p(&Rational::new(-1, 3), 7).unwrap().residue(), 2);
        assert_eq!(reduce_mod_p(&Rational::from_i64(-162), 7).unwrap().residue(), 6);
        // -2147/93312 ≡ 1 (mod 7): the height-2 unit for the hyperelliptic genus.
        assert_eq!(
            reduce_mod_p(&Rational::new(-2147, 93312), 7).unwrap().residue(),
            1
        );
        match reduce_mod_p(&Rational::new(1, 7), 7) {
            Err(CoeffError::NotPLocal { prime: 7, .. }) => {}
            other => panic!("expected NotPLocal, got {other:?}"),
        }
    }

    #[test]
    fn prime_field_arithmetic() {
        let a = PrimeFieldElement::new(5, 13);
        let b = PrimeFieldElement::new(11, 13);
        assert_eq!(a.add(&b).residue(), 3);
        assert_eq!(a.sub(&b).residue(), 7);
        assert_eq!(a.mul(&b).residue(), 3);
        assert_eq!(a.inv().unwrap().mul(&a).residue(), 1);
        assert_eq!(PrimeFieldElement::new(0, 13).inv(), Err(CoeffError::NotInvertible));
        assert_eq!(PrimeFieldElement::from_i64(-30, 13).residue(), 9);
        assert_eq!(PrimeFieldElement::new(12, 13).signed_residue(), -1);
        assert_eq!(PrimeFieldElement::new(6, 13).signed_residue(), 6);
    }

    #[test]
    #[should_panic(expected = "modulus mismatch")]
    fn mixed_modulus_panics() {
        let _ = PrimeFieldElement::new(1, 7).add(&PrimeFieldElement::new(1, 13));
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(7));
        assert!(is_prime_u64(13));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(91));
        assert!(!is_prime_u64(93312));
    }

    #[test]
    fn plocal_tags() {
        assert!(PLocalTag::new(5).is_ok());
        assert!(PLocalTag::new_split(5).is_err());
        assert_eq!(PLocalTag::new_split(7).unwrap().prime(), 7);
        assert_eq!(PLocalTag::new_split(13).unwrap().prime(), 13);
        assert!(PLocalTag::new(12).is_err());
    }
}
