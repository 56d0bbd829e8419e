//! Sparse multivariate polynomials over a weighted variable registry.
//!
//! A [`VarRegistry`] fixes an ordered set of at most four variables, each
//! with a positive even weight (its topological degree). Monomials pack the
//! four exponents into a single `u64` (16 bits per variable, variable 0 in
//! the most significant lane), so monomial multiplication is lane-wise
//! addition and the natural `u64` ordering is already lexicographic.
//! Polynomials are hash maps from packed monomials to nonzero coefficients.
//!
//! The weighted grading drives all degree bookkeeping downstream: genus
//! logarithms are homogeneous once `u` is given weight −2, and the
//! Hazewinkel images vₙ come out homogeneous of weighted degree 2(pⁿ−1).
//!
//! Division by one divisor — or by several whose leading monomials are
//! pairwise coprime — produces canonical normal forms; that is exactly the
//! generality the certification layer needs, and no more (no Gröbner
//! engine lives here).

mod symmetric;
mod text;
mod univar;

pub use symmetric::{elementary_symmetric, expand_elementary, express_in_elementary, is_symmetric};
pub use univar::{discriminant, resultant, UniPoly};

use crate::coeff::{reduce_mod_p, Coeff, CoeffError, PrimeFieldElement, Rational};
use num::{BigInt, BigRational, One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{BuildHasher, Hasher};
use std::sync::Arc;

/// Errors from the polynomial layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MpolyError {
    #[error("registry mismatch: {0} vs {1}")]
    RegistryMismatch(String, String),
    #[error("bad registry: {0}")]
    BadRegistry(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("divisor leading monomials {0} and {1} are not coprime; remainder would not be canonical")]
    UniquenessNotGuaranteed(String, String),
    #[error("inexact division: remainder has {0} terms")]
    InexactDivision(usize),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous (max weighted degree {max})")]
    NotHomogeneous { max: u64 },
    #[error("variable {0} occurs with odd exponent; even-power substitution impossible")]
    OddExponent(String),
    #[error("polynomial is not symmetric under variable permutations")]
    NotSymmetric,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

// ---------------------------------------------------------------------------
// Variable registries
// ---------------------------------------------------------------------------

/// Maximum number of variables a registry may hold (one `u64` of packed
/// 16-bit exponents).
pub const MAX_ARITY: usize = 4;

/// An ordered set of named variables with positive even weights.
///
/// Weights are topological degrees: κ↦6, λ↦12, Δ₆↦12, G₂↦12, G₃↦18,
/// G₄↦24, ξᵢ↦6, σᵢ↦6i, E₁↦2, E₃↦6 in the canonical registries below.
/// Registries compare by content, so two independently built copies of the
/// same registry are interchangeable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarRegistry {
    names: Vec<String>,
    weights: Vec<u64>,
}

impl VarRegistry {
    /// Build a registry from `(name, weight)` pairs. Names must be unique
    /// identifiers; weights positive and even; at most [`MAX_ARITY`]
    /// variables. Zero variables is allowed (a constants-only registry).
    pub fn new(vars: &[(&str, u64)]) -> Result<Arc<Self>, MpolyError> {
        if vars.len() > MAX_ARITY {
            return Err(MpolyError::BadRegistry(format!(
                "at most {MAX_ARITY} variables supported, got {}",
                vars.len()
            )));
        }
        let mut names = Vec::with_capacity(vars.len());
        let mut weights = Vec::with_capacity(vars.len());
        for &(name, w) in vars {
            if name.is_empty()
                || !name.chars().next().unwrap().is_ascii_alphabetic()
                || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                return Err(MpolyError::BadRegistry(format!(
                    "variable name {name:?} is not an identifier"
                )));
            }
            if names.iter().any(|n| n == name) {
                return Err(MpolyError::BadRegistry(format!("duplicate variable {name:?}")));
            }
            if w == 0 || w % 2 != 0 {
                return Err(MpolyError::BadRegistry(format!(
                    "weight of {name} must be positive and even, got {w}"
                )));
            }
            names.push(name.to_string());
            weights.push(w);
        }
        Ok(Arc::new(VarRegistry { names, weights }))
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn weight(&self, i: usize) -> u64 {
        self.weights[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Short description used in error messages.
    pub fn describe(&self) -> String {
        self.names.join(",")
    }

    // Canonical registries of the curve families and modular forms.

    /// κ (weight 6), λ (weight 12) — the hyperelliptic sextic family.
    pub fn kappa_lambda() -> Arc<Self> {
        Self::new(&[("kappa", 6), ("lambda", 12)]).unwrap()
    }

    /// G₂, G₃, G₄ (weights 12, 18, 24) — the Picard quartic family.
    pub fn picard() -> Arc<Self> {
        Self::new(&[("G2", 12), ("G3", 18), ("G4", 24)]).unwrap()
    }

    /// ξ₀, ξ₁, ξ₂ (weight 6 each) — split quartic roots.
    pub fn xi() -> Arc<Self> {
        Self::new(&[("xi0", 6), ("xi1", 6), ("xi2", 6)]).unwrap()
    }

    /// σ₁, σ₂, σ₃ (weights 6, 12, 18) — elementary symmetric functions of ξ.
    pub fn sigma() -> Arc<Self> {
        Self::new(&[("sigma1", 6), ("sigma2", 12), ("sigma3", 18)]).unwrap()
    }

    /// λ, Δ₆ (weights 12, 12) — the even coordinate ring of the
    /// hyperelliptic family, target of κ² ↦ λ − 108Δ₆.
    pub fn lambda_delta6() -> Arc<Self> {
        Self::new(&[("lambda", 12), ("Delta6", 12)]).unwrap()
    }

    /// E₁, E₃ (weights 2, 6) — Eisenstein generators for the restricted
    /// model computations (only cubes of E₁ appear there).
    pub fn eisenstein() -> Arc<Self> {
        Self::new(&[("E1", 2), ("E3", 6)]).unwrap()
    }

    /// Constants-only registry (arity 0).
    pub fn constants() -> Arc<Self> {
        Self::new(&[]).unwrap()
    }
}

fn check_same_registry(a: &VarRegistry, b: &VarRegistry) -> Result<(), MpolyError> {
    if a == b {
        Ok(())
    } else {
        Err(MpolyError::RegistryMismatch(a.describe(), b.describe()))
    }
}

// ---------------------------------------------------------------------------
// Packed monomials
// ---------------------------------------------------------------------------

/// A monomial: four 16-bit exponents packed into a `u64`, variable 0 in the
/// most significant lane. The derived `Ord` is therefore plain
/// lexicographic order with the registry's natural variable priority.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono(u64);

impl Mono {
    pub const ONE: Mono = Mono(0);

    #[inline]
    fn shift(var: usize) -> u32 {
        debug_assert!(var < MAX_ARITY);
        48 - 16 * var as u32
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        assert!(exps.len() <= MAX_ARITY, "too many exponents");
        let mut packed = 0u64;
        for (i, &e) in exps.iter().enumerate() {
            packed |= (e as u64) << Self::shift(i);
        }
        Mono(packed)
    }

    pub fn var(i: usize) -> Self {
        Mono(1u64 << Self::shift(i))
    }

    pub fn var_pow(i: usize, e: u16) -> Self {
        Mono((e as u64) << Self::shift(i))
    }

    #[inline]
    pub fn exp(self, var: usize) -> u16 {
        (self.0 >> Self::shift(var)) as u16
    }

    pub fn exps(self, arity: usize) -> Vec<u16> {
        (0..arity).map(|i| self.exp(i)).collect()
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    /// Lane-wise exponent sum; panics on 16-bit overflow (the largest
    /// exponent in any in-scope computation is 4392, far below 2¹⁶).
    #[inline]
    pub fn mul(self, other: Mono) -> Mono {
        let mut out = 0u64;
        for i in 0..MAX_ARITY {
            let s = Self::shift(i);
            let sum = ((self.0 >> s) & 0xFFFF) + ((other.0 >> s) & 0xFFFF);
            assert!(sum <= 0xFFFF, "monomial exponent overflow");
            out |= sum << s;
        }
        Mono(out)
    }

    /// True when `self` divides `other` (lane-wise ≤).
    #[inline]
    pub fn divides(self, other: Mono) -> bool {
        for i in 0..MAX_ARITY {
            let s = Self::shift(i);
            if (self.0 >> s) & 0xFFFF > (other.0 >> s) & 0xFFFF {
                return false;
            }
        }
        true
    }

    /// `self / other`; requires `other.divides(self)`.
    #[inline]
    pub fn quotient(self, other: Mono) -> Mono {
        debug_assert!(other.divides(self));
        let mut out = 0u64;
        for i in 0..MAX_ARITY {
            let s = Self::shift(i);
            let d = ((self.0 >> s) & 0xFFFF) - ((other.0 >> s) & 0xFFFF);
            out |= d << s;
        }
        Mono(out)
    }

    /// True when the lane-wise minimum with `other` is the empty monomial.
    pub fn coprime_with(self, other: Mono) -> bool {
        for i in 0..MAX_ARITY {
            let s = Self::shift(i);
            if (self.0 >> s) & 0xFFFF != 0 && (other.0 >> s) & 0xFFFF != 0 {
                return false;
            }
        }
        true
    }

    pub fn weighted_degree(self, reg: &VarRegistry) -> u64 {
        (0..reg.arity())
            .map(|i| self.exp(i) as u64 * reg.weight(i))
            .sum()
    }

    pub fn total_degree(self) -> u32 {
        (0..MAX_ARITY).map(|i| self.exp(i) as u32).sum()
    }

    pub fn text(self, reg: &VarRegistry) -> String {
        let mut parts = Vec::new();
        for i in 0..reg.arity() {
            match self.exp(i) {
                0 => {}
                1 => parts.push(reg.name(i).to_string()),
                e => parts.push(format!("{}^{}", reg.name(i), e)),
            }
        }
        parts.join("*")
    }
}

// ---------------------------------------------------------------------------
// Hashing
// ---------------------------------------------------------------------------

/// A multiply-rotate hasher specialized for packed-monomial keys: one
/// multiplication per `u64`, no byte-stream bookkeeping. The top-degree
/// 𝔽₁₃ computation hashes millions of monomials, so this path stays lean.
#[derive(Clone, Copy, Default)]
pub struct MonoHasher(u64);

const HASH_K: u64 = 0x517c_c1b7_2722_0a95;

impl Hasher for MonoHasher {
    #[inline]
    fn finish(&self) -> u64 {
        self.0
    }
    #[inline]
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ b as u64).wrapping_mul(HASH_K);
        }
    }
    #[inline]
    fn write_u64(&mut self, n: u64) {
        self.0 = (self.0 ^ n).wrapping_mul(HASH_K);
    }
    #[inline]
    fn write_u16(&mut self, n: u16) {
        self.write_u64(n as u64);
    }
    #[inline]
    fn write_u32(&mut self, n: u32) {
        self.write_u64(n as u64);
    }
    #[inline]
    fn write_u8(&mut self, n: u8) {
        self.write_u64(n as u64);
    }
    #[inline]
    fn write_usize(&mut self, n: usize) {
        self.write_u64(n as u64);
    }
}

#[derive(Clone, Copy, Default)]
pub struct MonoHashBuilder;

impl BuildHasher for MonoHashBuilder {
    type Hasher = MonoHasher;
    #[inline]
    fn build_hasher(&self) -> MonoHasher {
        MonoHasher(0x9e37_79b9_7f4a_7c15)
    }
}

pub(crate) type TermMap<C> = HashMap<Mono, C, MonoHashBuilder>;

// ---------------------------------------------------------------------------
// Monomial orders
// ---------------------------------------------------------------------------

/// The two order kinds in use: plain lexicographic, and weighted-graded
/// lexicographic (weighted degree first, lex tie-break).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    Lex,
    WeightedGradedLex,
}

/// A total monomial order: an order kind plus a variable priority
/// permutation. Orders are captured as injective `u128` sort keys so the
/// division loop can keep its working polynomial in a `BTreeMap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoOrder {
    kind: OrderKind,
    priority: Vec<usize>,
    weights: Vec<u64>,
}

impl MonoOrder {
    fn build(reg: &VarRegistry, kind: OrderKind, priority: Vec<usize>) -> Self {
        debug_assert_eq!(priority.len(), reg.arity());
        let weights = (0..reg.arity()).map(|i| reg.weight(i)).collect();
        MonoOrder {
            kind,
            priority,
            weights,
        }
    }

    /// Lexicographic with the registry's natural variable priority.
    pub fn lex(reg: &VarRegistry) -> Self {
        Self::build(reg, OrderKind::Lex, (0..reg.arity()).collect())
    }

    /// Weighted-graded-lex with natural priority — the canonical display
    /// and serialization order.
    pub fn graded(reg: &VarRegistry) -> Self {
        Self::build(reg, OrderKind::WeightedGradedLex, (0..reg.arity()).collect())
    }

    /// Same as [`MonoOrder::lex`] but with `first` promoted to the highest
    /// priority (the elimination variable of a principal divisor).
    pub fn lex_leading(reg: &VarRegistry, first: usize) -> Self {
        let mut priority = vec![first];
        priority.extend((0..reg.arity()).filter(|&i| i != first));
        Self::build(reg, OrderKind::Lex, priority)
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    /// Strictly monotone injective key: greater key = greater monomial.
    #[inline]
    pub fn key(&self, m: Mono) -> u128 {
        let mut packed: u128 = 0;
        for &v in &self.priority {
            packed = (packed << 16) | m.exp(v) as u128;
        }
        match self.kind {
            OrderKind::Lex => packed,
            OrderKind::WeightedGradedLex => {
                let wd: u64 = self
                    .priority
                    .iter()
                    .map(|&v| m.exp(v) as u64 * self.weights[v])
                    .sum();
                ((wd as u128) << 64) | packed
            }
        }
    }

    pub fn cmp(&self, a: Mono, b: Mono) -> std::cmp::Ordering {
        self.key(a).cmp(&self.key(b))
    }
}

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// Weighted degree report: every nonzero polynomial is either homogeneous
/// of one weighted degree or mixed, with the maximum recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightedDegree {
    Homogeneous(u64),
    Mixed { max: u64 },
}

impl WeightedDegree {
    pub fn max(&self) -> u64 {
        match *self {
            WeightedDegree::Homogeneous(d) => d,
            WeightedDegree::Mixed { max } => max,
        }
    }
}

/// Variable image for [`MultiPoly::map_vars_with_squares`]: either a direct
/// substitution for the variable, or an image of its square (requiring all
/// exponents of that variable to be even).
pub enum VarImage<'a, C: Coeff> {
    Direct(&'a MultiPoly<C>),
    Square(&'a MultiPoly<C>),
}

/// A sparse multivariate polynomial: a registry plus a map from packed
/// monomials to nonzero coefficients. Zero coefficients are never stored.
#[derive(Clone)]
pub struct MultiPoly<C: Coeff> {
    reg: Arc<VarRegistry>,
    terms: TermMap<C>,
}

impl<C: Coeff> PartialEq for MultiPoly<C> {
    fn eq(&self, other: &Self) -> bool {
        *self.reg == *other.reg && self.terms == other.terms
    }
}

impl<C: Coeff> Eq for MultiPoly<C> {}

impl<C: Coeff> MultiPoly<C> {
    pub fn zero(reg: Arc<VarRegistry>) -> Self {
        MultiPoly {
            reg,
            terms: TermMap::default(),
        }
    }

    pub fn constant(reg: Arc<VarRegistry>, c: C) -> Self {
        let mut p = Self::zero(reg);
        if !c.is_zero() {
            p.terms.insert(Mono::ONE, c);
        }
        p
    }

    /// The monomial `c·m`.
    pub fn term(reg: Arc<VarRegistry>, m: Mono, c: C) -> Self {
        let mut p = Self::zero(reg);
        p.add_term(m, c);
        p
    }

    /// The variable `x_i`, with coefficient `like.one_like()`.
    pub fn variable(reg: Arc<VarRegistry>, i: usize, like: &C) -> Self {
        assert!(i < reg.arity(), "variable index out of range");
        Self::term(reg, Mono::var(i), like.one_like())
    }

    pub fn from_terms(reg: Arc<VarRegistry>, terms: Vec<(Mono, C)>) -> Self {
        let mut p = Self::zero(reg);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (Mono, &C)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn coeff(&self, m: Mono) -> Option<&C> {
        self.terms.get(&m)
    }

    /// Coefficient at the given exponent vector (testing convenience).
    pub fn coeff_at(&self, exps: &[u16]) -> Option<&C> {
        self.coeff(Mono::from_exps(exps))
    }

    /// For constant polynomials: the constant coefficient, if any.
    pub fn constant_value(&self) -> Option<&C> {
        self.coeff(Mono::ONE)
    }

    /// A witness coefficient (any term), used to mint 0/1 in the right
    /// domain instance.
    pub fn witness(&self) -> Option<&C> {
        self.terms.values().next()
    }

    /// Accumulate `c·m`, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, m: Mono, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_same_registry(self, other);
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (m, c) in small.iter_terms() {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_same_registry(self, other);
        let mut out = self.clone();
        for (m, c) in other.iter_terms() {
            out.add_term(m, c.neg_ref());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg_ref();
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.reg.clone());
        }
        let mut out = Self::zero(self.reg.clone());
        for (m, a) in self.iter_terms() {
            out.add_term(m, a.mul_ref(c));
        }
        out
    }

    /// Multiply by the single term `c·m`.
    pub fn mul_term(&self, m: Mono, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.reg.clone());
        }
        let mut out = Self::zero(self.reg.clone());
        for (m1, a) in self.iter_terms() {
            out.add_term(m1.mul(m), a.mul_ref(c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_same_registry(self, other);
        let mut out = Self::zero(self.reg.clone());
        if self.is_zero() || other.is_zero() {
            return out;
        }
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        out.terms.reserve(big.terms.len());
        for (m2, c2) in small.iter_terms() {
            for (m1, c1) in big.iter_terms() {
                out.add_term(m1.mul(m2), c1.mul_ref(c2));
            }
        }
        out
    }

    /// `self^k` by repeated squaring. `k = 0` yields the constant 1 (the
    /// polynomial must be nonzero so a coefficient witness exists).
    pub fn pow(&self, k: u32) -> Self {
        if k == 0 {
            let one = self
                .witness()
                .expect("pow(0) of the zero polynomial")
                .one_like();
            return Self::constant(self.reg.clone(), one);
        }
        if self.is_zero() {
            return Self::zero(self.reg.clone());
        }
        let mut base = self.clone();
        let mut k = k;
        let mut acc: Option<Self> = None;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.mul(&base);
        }
        acc.unwrap()
    }

    /// Weighted degree report; error on the zero polynomial.
    pub fn weighted_degree(&self) -> Result<WeightedDegree, MpolyError> {
        let mut degrees = self.iter_terms().map(|(m, _)| m.weighted_degree(&self.reg));
        let first = degrees.next().ok_or(MpolyError::ZeroPolynomial)?;
        let mut max = first;
        let mut homogeneous = true;
        for d in degrees {
            if d != first {
                homogeneous = false;
            }
            max = max.max(d);
        }
        Ok(if homogeneous {
            WeightedDegree::Homogeneous(first)
        } else {
            WeightedDegree::Mixed { max }
        })
    }

    /// The common weighted degree; error if zero or inhomogeneous.
    pub fn homogeneous_degree(&self) -> Result<u64, MpolyError> {
        match self.weighted_degree()? {
            WeightedDegree::Homogeneous(d) => Ok(d),
            WeightedDegree::Mixed { max } => Err(MpolyError::NotHomogeneous { max }),
        }
    }

    /// Highest exponent of variable `i` across all terms (0 for the zero
    /// polynomial).
    pub fn degree_in(&self, i: usize) -> u16 {
        self.iter_terms().map(|(m, _)| m.exp(i)).max().unwrap_or(0)
    }

    pub fn leading(&self, order: &MonoOrder) -> Option<(Mono, &C)> {
        self.iter_terms().max_by_key(|&(m, _)| order.key(m))
    }

    /// Terms sorted descending under `order`.
    pub fn sorted_terms(&self, order: &MonoOrder) -> Vec<(Mono, &C)> {
        let mut v: Vec<(Mono, &C)> = self.iter_terms().collect();
        v.sort_by(|a, b| order.key(b.0).cmp(&order.key(a.0)));
        v
    }

    /// Map coefficients into another domain; zero images are dropped (so a
    /// ℚ→𝔽_p reduction of a p-divisible coefficient simply erases the term).
    pub fn map_coeffs<D: Coeff>(
        &self,
        f: impl Fn(&C) -> Result<D, CoeffError>,
    ) -> Result<MultiPoly<D>, MpolyError> {
        let mut out = MultiPoly::<D>::zero(self.reg.clone());
        for (m, c) in self.iter_terms() {
            out.add_term(m, f(c)?);
        }
        Ok(out)
    }

    /// Substitute `image` (same registry) for variable `var`.
    pub fn substitute(&self, var: usize, image: &Self) -> Self {
        assert_same_registry(self, image);
        assert!(var < self.reg.arity());
        // Sort terms by the exponent of `var` so powers of the image can be
        // built incrementally.
        let mut by_exp: BTreeMap<u16, Vec<(Mono, &C)>> = BTreeMap::new();
        for (m, c) in self.iter_terms() {
            by_exp.entry(m.exp(var)).or_default().push((m, c));
        }
        let mut out = Self::zero(self.reg.clone());
        let mut power: Option<Self> = None; // image^current_exp
        let mut current_exp = 0u16;
        for (e, terms) in by_exp {
            if e > 0 {
                let mut p = match power.take() {
                    None => {
                        current_exp = 1;
                        let mut first = image.clone();
                        for _ in 1..e {
                            first = first.mul(image);
                            current_exp += 1;
                        }
                        first
                    }
                    Some(p) => p,
                };
                while current_exp < e {
                    p = p.mul(image);
                    current_exp += 1;
                }
                power = Some(p);
            }
            for (m, c) in terms {
                let stripped = strip_var(m, var);
                match (e, &power) {
                    (0, _) => out.add_term(m, c.clone()),
                    (_, Some(p)) => {
                        for (pm, pc) in p.iter_terms() {
                            out.add_term(stripped.mul(pm), c.mul_ref(pc));
                        }
                    }
                    _ => unreachable!(),
                }
            }
        }
        out
    }

    /// Apply the ring homomorphism sending variable `i` to `images[i]`
    /// (all images over one common target registry).
    pub fn map_vars(
        &self,
        target: Arc<VarRegistry>,
        images: &[&MultiPoly<C>],
    ) -> Result<MultiPoly<C>, MpolyError> {
        let wrapped: Vec<VarImage<'_, C>> = images.iter().map(|p| VarImage::Direct(p)).collect();
        self.map_vars_with_squares(target, &wrapped)
    }

    /// Generalized variable mapping where some variables are substituted
    /// through their squares: `VarImage::Square(g)` sends `xᵢ² ↦ g` and
    /// rejects odd exponents of `xᵢ`. This is how κ² ↦ λ − 108Δ₆ moves
    /// even polynomials from ℚ[κ,λ] into ℚ[λ,Δ₆].
    pub fn map_vars_with_squares(
        &self,
        target: Arc<VarRegistry>,
        images: &[VarImage<'_, C>],
    ) -> Result<MultiPoly<C>, MpolyError> {
        if images.len() != self.reg.arity() {
            return Err(MpolyError::BadRegistry(format!(
                "expected {} images, got {}",
                self.reg.arity(),
                images.len()
            )));
        }
        for img in images {
            let p = match img {
                VarImage::Direct(p) | VarImage::Square(p) => p,
            };
            check_same_registry(&target, &p.reg)?;
        }
        let mut out = MultiPoly::zero(target.clone());
        let mut pow_cache: Vec<HashMap<u16, MultiPoly<C>>> =
            (0..images.len()).map(|_| HashMap::new()).collect();
        for (m, c) in self.iter_terms() {
            let mut acc = MultiPoly::constant(target.clone(), c.clone());
            for (i, img) in images.iter().enumerate() {
                let e = m.exp(i);
                if e == 0 {
                    continue;
                }
                let (base, pow_exp) = match img {
                    VarImage::Direct(p) => (*p, e),
                    VarImage::Square(p) => {
                        if e % 2 != 0 {
                            return Err(MpolyError::OddExponent(self.reg.name(i).to_string()));
                        }
                        (*p, e / 2)
                    }
                };
                let powed = pow_cache[i]
                    .entry(pow_exp)
                    .or_insert_with(|| base.pow(pow_exp as u32));
                acc = acc.mul(powed);
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// Replace variable `var` by the constant `value`, staying in the same
    /// registry (the variable simply no longer occurs).
    pub fn specialize(&self, var: usize, value: &C) -> Self {
        let mut out = Self::zero(self.reg.clone());
        for (m, c) in self.iter_terms() {
            let e = m.exp(var);
            let coeff = if e == 0 {
                c.clone()
            } else {
                c.mul_ref(&coeff_pow(value, e as u64))
            };
            out.add_term(strip_var(m, var), coeff);
        }
        out
    }

    /// Full evaluation at `vals` (one value per registry variable).
    pub fn eval(&self, vals: &[C]) -> C {
        assert_eq!(vals.len(), self.reg.arity(), "wrong number of values");
        let zero = vals
            .first()
            .map(|v| v.zero_like())
            .or_else(|| self.witness().map(|w| w.zero_like()))
            .expect("cannot evaluate a constant-registry zero polynomial without a witness");
        let mut acc = zero;
        for (m, c) in self.iter_terms() {
            let mut t = c.clone();
            for (i, v) in vals.iter().enumerate() {
                let e = m.exp(i);
                if e > 0 {
                    t = t.mul_ref(&coeff_pow(v, e as u64));
                }
            }
            acc.add_assign_ref(&t);
        }
        acc
    }

    /// Multi-divisor division with remainder: `self = Σ qᵢ·dᵢ + r` where no
    /// term of `r` is divisible by any divisor's leading monomial.
    ///
    /// With a single divisor the remainder is canonical. With several, the
    /// remainder is canonical only when the divisors' leading monomials are
    /// pairwise coprime; other configurations are rejected with
    /// [`MpolyError::UniquenessNotGuaranteed`] — callers must triangularize
    /// first (see the certification layer's elimination plans).
    pub fn divide(
        &self,
        divisors: &[&Self],
        order: &MonoOrder,
    ) -> Result<(Vec<Self>, Self), MpolyError> {
        struct Prepped<'a, C: Coeff> {
            lm: Mono,
            lc_inv: C,
            rest: Vec<(Mono, &'a C)>,
        }
        let mut prepped = Vec::with_capacity(divisors.len());
        for d in divisors {
            check_same_registry(&self.reg, &d.reg)?;
            let (lm, lc) = d.leading(order).ok_or(MpolyError::DivisionByZeroPoly)?;
            let rest = d
                .iter_terms()
                .filter(|&(m, _)| m != lm)
                .collect::<Vec<_>>();
            prepped.push(Prepped {
                lm,
                lc_inv: lc.inv_ref()?,
                rest,
            });
        }
        if prepped.len() > 1 {
            for i in 0..prepped.len() {
                for j in i + 1..prepped.len() {
                    if !prepped[i].lm.coprime_with(prepped[j].lm) {
                        return Err(MpolyError::UniquenessNotGuaranteed(
                            prepped[i].lm.text(&self.reg),
                            prepped[j].lm.text(&self.reg),
                        ));
                    }
                }
            }
        }

        let mut work: BTreeMap<u128, (Mono, C)> = self
            .iter_terms()
            .map(|(m, c)| (order.key(m), (m, c.clone())))
            .collect();
        let mut quotients = vec![Self::zero(self.reg.clone()); divisors.len()];
        let mut remainder = Self::zero(self.reg.clone());

        while let Some((&key, _)) = work.last_key_value() {
            let (m, c) = work.remove(&key).unwrap();
            debug_assert!(!c.is_zero());
            match prepped.iter().position(|p| p.lm.divides(m)) {
                None => remainder.add_term(m, c),
                Some(i) => {
                    let t = m.quotient(prepped[i].lm);
                    let tc = c.mul_ref(&prepped[i].lc_inv);
                    quotients[i].add_term(t, tc.clone());
                    for &(dm, dc) in &prepped[i].rest {
                        let mm = t.mul(dm);
                        let delta = tc.mul_ref(dc).neg_ref();
                        use std::collections::btree_map::Entry;
                        match work.entry(order.key(mm)) {
                            Entry::Vacant(v) => {
                                v.insert((mm, delta));
                            }
                            Entry::Occupied(mut o) => {
                                o.get_mut().1.add_assign_ref(&delta);
                                if o.get().1.is_zero() {
                                    o.remove();
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok((quotients, remainder))
    }

    /// Exact division by one divisor; error if a nonzero remainder is left.
    pub fn div_exact(&self, divisor: &Self, order: &MonoOrder) -> Result<Self, MpolyError> {
        let (mut q, r) = self.divide(&[divisor], order)?;
        if r.is_zero() {
            Ok(q.remove(0))
        } else {
            Err(MpolyError::InexactDivision(r.num_terms()))
        }
    }
}

fn assert_same_registry<C: Coeff>(a: &MultiPoly<C>, b: &MultiPoly<C>) {
    assert!(
        *a.reg == *b.reg,
        "registry mismatch: [{}] vs [{}]",
        a.reg.describe(),
        b.reg.describe()
    );
}

#[inline]
fn strip_var(m: Mono, var: usize) -> Mono {
    let mut exps = [0u16; MAX_ARITY];
    for (i, e) in exps.iter_mut().enumerate() {
        *e = if i == var { 0 } else { m.exp(i) };
    }
    Mono::from_exps(&exps)
}

/// `base^e` in the coefficient domain by repeated squaring.
pub fn coeff_pow<C: Coeff>(base: &C, e: u64) -> C {
    if e == 0 {
        return base.one_like();
    }
    let mut acc: Option<C> = None;
    let mut b = base.clone();
    let mut e = e;
    loop {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => b.clone(),
                Some(a) => a.mul_ref(&b),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        b = b.mul_ref(&b);
    }
    acc.unwrap()
}

// ---------------------------------------------------------------------------
// Rational-specific conveniences and the scaled power kernel
// ---------------------------------------------------------------------------

impl MultiPoly<Rational> {
    /// The variable `x_i` over ℚ.
    pub fn var(reg: Arc<VarRegistry>, i: usize) -> Self {
        Self::variable(reg, i, &Rational::one())
    }

    pub fn one(reg: Arc<VarRegistry>) -> Self {
        Self::constant(reg, Rational::one())
    }

    /// Build from `(exponent-vector, numerator, denominator)` triples —
    /// the workhorse constructor of the test suites.
    pub fn from_int_terms(reg: Arc<VarRegistry>, terms: &[(&[u16], i64, i64)]) -> Self {
        let mut p = Self::zero(reg);
        for &(exps, num, den) in terms {
            p.add_term(Mono::from_exps(exps), Rational::new(num, den));
        }
        p
    }

    /// Coefficient-wise reduction to 𝔽_p; fails if any denominator is
    /// divisible by p.
    pub fn reduce_mod(&self, p: u64) -> Result<MultiPoly<PrimeFieldElement>, MpolyError> {
        self.map_coeffs(|c| reduce_mod_p(c, p))
    }

    /// `self^k` through an integer-scaled kernel: denominators are cleared
    /// once up front, the squaring chain runs over big integers (no gcd
    /// normalization per product), and the accumulated denominator power is
    /// divided back out at the end. On the homogeneous power chains of the
    /// Hazewinkel recursion this is substantially faster than rational
    /// repeated squaring.
    pub fn pow_scaled(&self, k: u32) -> Self {
        if k == 0 {
            return Self::one(self.reg.clone());
        }
        if self.is_zero() {
            return Self::zero(self.reg.clone());
        }
        let mut den_lcm = BigInt::one();
        for (_, c) in self.iter_terms() {
            den_lcm = num::Integer::lcm(&den_lcm, c.denom());
        }
        let scaled: HashMap<Mono, BigInt, MonoHashBuilder> = self
            .iter_terms()
            .map(|(m, c)| (m, c.numer() * (&den_lcm / c.denom())))
            .collect();

        fn int_mul(
            a: &HashMap<Mono, BigInt, MonoHashBuilder>,
            b: &HashMap<Mono, BigInt, MonoHashBuilder>,
        ) -> HashMap<Mono, BigInt, MonoHashBuilder> {
            let mut out: HashMap<Mono, BigInt, MonoHashBuilder> = HashMap::default();
            out.reserve(a.len().max(b.len()));
            let (big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
            for (m2, c2) in small {
                for (m1, c1) in big {
                    let m = m1.mul(*m2);
                    let prod = c1 * c2;
                    use std::collections::hash_map::Entry;
                    match out.entry(m) {
                        Entry::Vacant(v) => {
                            v.insert(prod);
                        }
                        Entry::Occupied(mut o) => {
                            *o.get_mut() += prod;
                            if o.get().is_zero() {
                                o.remove();
                            }
                        }
                    }
                }
            }
            out
        }

        let mut base = scaled;
        let mut kk = k;
        let mut acc: Option<HashMap<Mono, BigInt, MonoHashBuilder>> = None;
        loop {
            if kk & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => int_mul(&a, &base),
                });
            }
            kk >>= 1;
            if kk == 0 {
                break;
            }
            base = int_mul(&base, &base);
        }
        let denom = num::pow::pow(den_lcm, k as usize);
        let mut out = Self::zero(self.reg.clone());
        for (m, n) in acc.unwrap() {
            out.add_term(m, Rational::from(BigRational::new(n, denom.clone())));
        }
        out
    }

    /// Evaluate with the square of variable `var` specialized to
    /// `var_square` (all exponents of `var` must be even) and the remaining
    /// variables at `vals` (the slot for `var` in `vals` is ignored).
    pub fn eval_even(
        &self,
        var: usize,
        var_square: &Rational,
        vals: &[Rational],
    ) -> Result<Rational, MpolyError> {
        let mut acc = Rational::zero();
        for (m, c) in self.iter_terms() {
            let mut t = c.clone();
            for i in 0..self.reg.arity() {
                let e = m.exp(i);
                if e == 0 {
                    continue;
                }
                if i == var {
                    if e % 2 != 0 {
                        return Err(MpolyError::OddExponent(self.reg.name(i).to_string()));
                    }
                    t = t.mul(&coeff_pow(var_square, (e / 2) as u64));
                } else {
                    t = t.mul(&coeff_pow(&vals[i], e as u64));
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Minimum p-adic valuation over all coefficients, with the monomial
    /// attaining it; `None` for the zero polynomial.
    pub fn min_p_valuation(&self, p: u64) -> Result<Option<(i64, Mono)>, CoeffError> {
        let mut best: Option<(i64, Mono)> = None;
        for (m, c) in self.iter_terms() {
            if let crate::coeff::Valuation::Finite(v) = crate::coeff::p_valuation(c, p)? {
                if best.map_or(true, |(bv, _)| v < bv) {
                    best = Some((v, m));
                }
            }
        }
        Ok(best)
    }
}

impl MultiPoly<PrimeFieldElement> {
    /// The variable `x_i` over 𝔽_p.
    pub fn fp_var(reg: Arc<VarRegistry>, i: usize, p: u64) -> Self {
        Self::variable(reg, i, &PrimeFieldElement::new(1, p))
    }

    pub fn fp_constant(reg: Arc<VarRegistry>, n: i64, p: u64) -> Self {
        Self::constant(reg, PrimeFieldElement::from_i64(n, p))
    }

    /// Build from `(exponent-vector, signed integer)` pairs reduced mod p.
    pub fn from_fp_terms(reg: Arc<VarRegistry>, terms: &[(&[u16], i64)], p: u64) -> Self {
        let mut out = Self::zero(reg);
        for &(exps, n) in terms {
            out.add_term(Mono::from_exps(exps), PrimeFieldElement::from_i64(n, p));
        }
        out
    }
}

impl<C: Coeff> fmt::Debug for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
