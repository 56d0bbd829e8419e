//! Truncated univariate power series with multivariate polynomial
//! coefficients, over ℚ.
//!
//! A series is known modulo `u^trunc`. All operations propagate the
//! weakest truncation involved. The coefficient domain is fixed to
//! [`Rational`]-coefficient polynomials because the two operations the
//! genus layer lives on — integration and fractional powers — need
//! denominators; reductions mod p happen downstream on polynomial
//! coefficients, never on series.
//!
//! The genus layer extracts single deep coefficients (the `u^{p³−1}`
//! coefficient of a logarithm derivative, for p = 13 that is degree 2196)
//! via [`isolated_coeff_fractional_power`], which walks the finitely many
//! exponent compositions of the target instead of expanding the series —
//! the full expansion would hold millions of irrelevant coefficients.

use crate::coeff::{CoeffError, Rational};
use crate::mpoly::{MpolyError, MultiPoly, VarRegistry};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Errors from series arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PseriesError {
    #[error("constant term is not an invertible constant")]
    ConstantNotUnit,
    #[error("inner series of a composition must have valuation ≥ 1")]
    PositiveValuationRequired,
    #[error("reversion needs the form u + O(u^2) with linear coefficient exactly 1")]
    NotNormalizedForReversion,
    #[error("fractional power requires constant term exactly 1")]
    FractionalPowerBase,
    #[error("truncation {0} is too small for this operation")]
    TruncationTooSmall(u32),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Mpoly(#[from] MpolyError),
}

/// A power series `Σ_{k < trunc} c_k·u^k + O(u^trunc)` with
/// `c_k ∈ ℚ[registry]`. Zero coefficients are not stored.
#[derive(Clone, PartialEq)]
pub struct TruncatedSeries {
    trunc: u32,
    reg: Arc<VarRegistry>,
    coeffs: BTreeMap<u32, MultiPoly<Rational>>,
}

impl TruncatedSeries {
    pub fn zero(reg: Arc<VarRegistry>, trunc: u32) -> Self {
        TruncatedSeries {
            trunc,
            reg,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(reg: Arc<VarRegistry>, trunc: u32) -> Self {
        let mut s = Self::zero(reg.clone(), trunc);
        s.set_coeff(0, MultiPoly::one(reg));
        s
    }

    /// The identity series `u`.
    pub fn identity(reg: Arc<VarRegistry>, trunc: u32) -> Self {
        let mut s = Self::zero(reg.clone(), trunc);
        s.set_coeff(1, MultiPoly::one(reg));
        s
    }

    /// The constant series with a given polynomial value.
    pub fn constant(value: MultiPoly<Rational>, trunc: u32) -> Self {
        let mut s = Self::zero(value.registry().clone(), trunc);
        s.set_coeff(0, value);
        s
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn truncation(&self) -> u32 {
        self.trunc
    }

    pub fn coeff(&self, k: u32) -> MultiPoly<Rational> {
        assert!(k < self.trunc, "coefficient {k} beyond truncation {}", self.trunc);
        self.coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(self.reg.clone()))
    }

    pub fn coeff_ref(&self, k: u32) -> Option<&MultiPoly<Rational>> {
        self.coeffs.get(&k)
    }

    pub fn set_coeff(&mut self, k: u32, c: MultiPoly<Rational>) {
        assert!(k < self.trunc, "coefficient {k} beyond truncation {}", self.trunc);
        if c.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
    }

    pub fn iter_coeffs(&self) -> impl Iterator<Item = (u32, &MultiPoly<Rational>)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order of vanishing in `u` (`None` when zero to this truncation).
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    /// Restrict to a lower truncation.
    pub fn truncate(&self, trunc: u32) -> Self {
        let trunc = trunc.min(self.trunc);
        TruncatedSeries {
            trunc,
            reg: self.reg.clone(),
            coeffs: self
                .coeffs
                .range(..trunc)
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let mut out = self.truncate(trunc);
        for (k, c) in other.coeffs.range(..trunc) {
            let sum = out.coeff(*k).add(c);
            out.set_coeff(*k, sum);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            trunc: self.trunc,
            reg: self.reg.clone(),
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let poly = MultiPoly::constant(self.reg.clone(), c.clone());
        self.scale_poly(&poly)
    }

    pub fn scale_poly(&self, p: &MultiPoly<Rational>) -> Self {
        let mut out = Self::zero(self.reg.clone(), self.trunc);
        if p.is_zero() {
            return out;
        }
        for (&k, c) in &self.coeffs {
            out.set_coeff(k, c.mul(p));
        }
        out
    }

    /// Shift by `u^n`: multiply the whole series by a monomial in `u`.
    pub fn shift_u(&self, n: u32) -> Self {
        let trunc = self.trunc.saturating_add(n);
        let mut out = Self::zero(self.reg.clone(), trunc);
        for (&k, c) in &self.coeffs {
            out.set_coeff(k + n, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let mut out = Self::zero(self.reg.clone(), trunc);
        for (&i, a) in &self.coeffs {
            if i >= trunc {
                break;
            }
            for (&j, b) in other.coeffs.range(..trunc - i) {
                let k = i + j;
                let prod = a.mul(b);
                let cur = match out.coeffs.remove(&k) {
                    Some(c) => c.add(&prod),
                    None => prod,
                };
                out.set_coeff(k, cur);
            }
        }
        out
    }

    /// `self^k` by repeated squaring (k = 0 gives 1).
    pub fn pow(&self, k: u32) -> Self {
        if k == 0 {
            return Self::one(self.reg.clone(), self.trunc);
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

    /// Composition `self ∘ inner` (Horner). `inner` must have valuation ≥ 1.
    pub fn compose(&self, inner: &Self) -> Result<Self, PseriesError> {
        if !inner.is_zero() && inner.valuation() == Some(0) {
            return Err(PseriesError::PositiveValuationRequired);
        }
        let trunc = self.trunc.min(inner.trunc);
        let mut acc = Self::zero(self.reg.clone(), trunc);
        let max_k = match self.coeffs.keys().next_back() {
            None => return Ok(acc),
            Some(&k) => k.min(trunc.saturating_sub(1)),
        };
        for k in (0..=max_k).rev() {
            acc = acc.mul(inner);
            if let Some(c) = self.coeffs.get(&k) {
                let cur = acc.coeff(0).add(c);
                acc.set_coeff(0, cur);
            }
        }
        Ok(acc)
    }

    /// Multiplicative inverse; the constant term must be a nonzero
    /// constant polynomial.
    pub fn recip(&self) -> Result<Self, PseriesError> {
        let c0 = self.coeff_ref(0).ok_or(PseriesError::ConstantNotUnit)?;
        if c0.num_terms() != 1 || c0.constant_value().is_none() {
            return Err(PseriesError::ConstantNotUnit);
        }
        let c0_inv = c0.constant_value().unwrap().inv()?;
        // g₀ = 1/f₀; g_k = −(1/f₀)·Σ_{j=1..k} f_j·g_{k−j}
        let mut out = Self::zero(self.reg.clone(), self.trunc);
        out.set_coeff(0, MultiPoly::constant(self.reg.clone(), c0_inv.clone()));
        for k in 1..self.trunc {
            let mut s = MultiPoly::zero(self.reg.clone());
            for (&j, fj) in self.coeffs.range(1..=k) {
                if let Some(g) = out.coeff_ref(k - j) {
                    s = s.add(&fj.mul(g));
                }
            }
            if !s.is_zero() {
                out.set_coeff(k, s.scale(&c0_inv.neg()));
            }
        }
        Ok(out)
    }

    /// Coefficient-wise derivative d/du; truncation drops by one.
    pub fn derivative(&self) -> Self {
        let trunc = self.trunc.saturating_sub(1);
        let mut out = Self::zero(self.reg.clone(), trunc);
        for (&k, c) in self.coeffs.range(1..) {
            if k - 1 < trunc {
                out.set_coeff(k - 1, c.scale(&Rational::from_i64(k as i64)));
            }
        }
        out
    }

    /// Term-wise integral with zero constant term; truncation rises by one.
    pub fn integrate(&self) -> Self {
        let trunc = self.trunc + 1;
        let mut out = Self::zero(self.reg.clone(), trunc);
        for (&k, c) in &self.coeffs {
            out.set_coeff(k + 1, c.scale(&Rational::new(1, (k + 1) as i64)));
        }
        out
    }

    /// `self^e` for rational `e`, via the binomial series; requires the
    /// constant term to be exactly 1:
    /// `(1+g)^e = Σ_k C(e,k)·g^k` with `C(e,k+1) = C(e,k)·(e−k)/(k+1)`.
    pub fn fractional_power(&self, e: &Rational) -> Result<Self, PseriesError> {
        match self.coeff_ref(0) {
            Some(c0) if c0.num_terms() == 1 && c0.constant_value().is_some_and(|v| v.is_one()) => {}
            _ => return Err(PseriesError::FractionalPowerBase),
        }
        let mut g = self.clone();
        g.set_coeff(0, MultiPoly::zero(self.reg.clone()));
        let mut out = Self::one(self.reg.clone(), self.trunc);
        let mut g_pow = Self::one(self.reg.clone(), self.trunc);
        let mut binom = Rational::one();
        let min_val = g.valuation().unwrap_or(self.trunc).max(1);
        let mut k: u32 = 0;
        while (k + 1) * min_val < self.trunc {
            binom = binom
                .mul(&e.sub(&Rational::from_i64(k as i64)))
                .div_i64((k + 1) as i64);
            g_pow = g_pow.mul(&g);
            if binom.is_zero() || g_pow.is_zero() {
                break;
            }
            out = out.add(&g_pow.scale(&binom));
            k += 1;
        }
        Ok(out)
    }

    /// Reinterpret with a higher truncation, treating the unwritten
    /// coefficients as zero. Only sound when the caller can prove those
    /// coefficients cannot influence the result (see `revert`).
    fn pad_trunc(&self, trunc: u32) -> Self {
        debug_assert!(trunc >= self.trunc);
        TruncatedSeries {
            trunc,
            reg: self.reg.clone(),
            coeffs: self.coeffs.clone(),
        }
    }

    /// Compositional inverse of `u + O(u²)` with linear coefficient
    /// exactly 1, by Newton iteration with precision doubling. The result
    /// `g` satisfies `self(g) = u` (checked) to the common truncation.
    pub fn revert(&self) -> Result<Self, PseriesError> {
        if self.trunc < 2 {
            return Err(PseriesError::TruncationTooSmall(self.trunc));
        }
        if self.valuation() != Some(1)
            || !(self.coeff(1).num_terms() == 1
                && self.coeff(1).constant_value().is_some_and(|v| v.is_one()))
        {
            return Err(PseriesError::NotNormalizedForReversion);
        }
        let n = self.trunc;
        let fprime = self.derivative(); // known mod u^{n−1}
        let mut g = Self::identity(self.reg.clone(), 2);
        let mut prec: u32 = 2;
        while prec < n {
            prec = (2 * prec).min(n);
            // Zero-padding g is the Newton guess for the new digits.
            let gp = g.pad_trunc(prec);
            let fg = self.truncate(prec).compose(&gp)?;
            let num = fg.sub(&Self::identity(self.reg.clone(), prec));
            if num.is_zero() {
                g = gp;
                continue;
            }
            // num vanishes to the previous precision (≥ 2), so the top
            // coefficient of 1/f′(g) — not known when prec exceeds the
            // derivative's truncation — never meets a nonzero factor, and
            // padding the reciprocal is exact.
            debug_assert!(num.valuation().unwrap_or(prec) >= 2);
            let denom = fprime.truncate(prec).compose(&gp.truncate(fprime.trunc.min(prec)))?;
            let r = denom.recip()?.pad_trunc(prec);
            g = gp.sub(&num.mul(&r));
        }
        // Safety net: reversion is load-bearing for every formal group law.
        let check = self.compose(&g)?;
        if check != Self::identity(self.reg.clone(), check.truncation()) {
            return Err(PseriesError::NotNormalizedForReversion);
        }
        Ok(g)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&k, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            let is_unit = c.num_terms() == 1 && c.constant_value().is_some_and(|v| v.is_one());
            match (k, is_unit) {
                (0, _) => write!(f, "({c})")?,
                (1, true) => write!(f, "u")?,
                (1, false) => write!(f, "({c})*u")?,
                (_, true) => write!(f, "u^{k}")?,
                (_, false) => write!(f, "({c})*u^{k}")?,
            }
            first = false;
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O(u^{})", self.trunc)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// ---------------------------------------------------------------------------
// Isolated deep coefficients
// ---------------------------------------------------------------------------

/// The `u^target` coefficient of `(1 + Σ_d table[d]·u^d)^e`, computed by
/// enumerating exponent compositions of `target` over the table's support
/// instead of expanding the series.
///
/// For a composition `target = Σ dᵢkᵢ` with `K = Σkᵢ`, the contribution is
/// `C(e,K) · K!/(Πkᵢ!) · Π table[dᵢ]^{kᵢ}`; the multinomial factor is
/// accumulated as a product of integer binomials.
pub fn isolated_coeff_fractional_power(
    table: &BTreeMap<u32, MultiPoly<Rational>>,
    reg: &Arc<VarRegistry>,
    e: &Rational,
    target: u32,
) -> MultiPoly<Rational> {
    if target == 0 {
        return MultiPoly::one(reg.clone());
    }
    let entries: Vec<(u32, &MultiPoly<Rational>)> = table
        .iter()
        .filter(|&(&d, c)| {
            assert!(d >= 1, "table exponents must be ≥ 1");
            !c.is_zero()
        })
        .map(|(&d, c)| (d, c))
        .collect();
    if entries.is_empty() {
        return MultiPoly::zero(reg.clone());
    }
    // C(e, K) for all K up to the deepest possible composition.
    let min_d = entries.iter().map(|&(d, _)| d).min().unwrap();
    let k_max = (target / min_d) as usize;
    let mut binom_e = Vec::with_capacity(k_max + 1);
    binom_e.push(Rational::one());
    for k in 0..k_max {
        let next = binom_e[k]
            .mul(&e.sub(&Rational::from_i64(k as i64)))
            .div_i64((k + 1) as i64);
        binom_e.push(next);
    }

    struct Walk<'a> {
        entries: &'a [(u32, &'a MultiPoly<Rational>)],
        binom_e: &'a [Rational],
        reg: &'a Arc<VarRegistry>,
        acc: MultiPoly<Rational>,
    }
    // `multinom` carries K!/(Πkᵢ!) for the exponents chosen so far, as a
    // product Π C(k₁+…+kᵢ, kᵢ) of integer binomials.
    fn walk(
        w: &mut Walk<'_>,
        idx: usize,
        remaining: u32,
        k_total: usize,
        multinom: &Rational,
        product: &MultiPoly<Rational>,
    ) {
        if remaining == 0 {
            let c = w.binom_e[k_total].mul(multinom);
            if !c.is_zero() {
                w.acc = w.acc.add(&product.scale(&c));
            }
            return;
        }
        if idx == w.entries.len() {
            return;
        }
        let (d, poly) = w.entries[idx];
        // Last entry: the exponent is forced if divisible.
        if idx + 1 == w.entries.len() {
            if remaining % d == 0 {
                let k = (remaining / d) as usize;
                let mut m = multinom.clone();
                let mut prod = product.clone();
                for i in 1..=k {
                    m = m.mul_i64((k_total + i) as i64).div_i64(i as i64);
                    prod = prod.mul(poly);
                }
                walk(w, idx + 1, 0, k_total + k, &m, &prod);
            }
            return;
        }
        let mut m = multinom.clone();
        let mut prod = product.clone();
        let mut k = 0usize;
        loop {
            walk(w, idx + 1, remaining - k as u32 * d, k_total + k, &m, &prod);
            k += 1;
            if k as u32 * d > remaining {
                break;
            }
            m = m.mul_i64((k_total + k) as i64).div_i64(k as i64);
            prod = prod.mul(poly);
        }
    }

    let mut w = Walk {
        entries: &entries,
        binom_e: &binom_e,
        reg,
        acc: MultiPoly::zero(reg.clone()),
    };
    let one = MultiPoly::one(w.reg.clone());
    walk(&mut w, 0, target, 0, &Rational::one(), &one);
    w.acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::Mono;

    fn kl() -> Arc<VarRegistry> {
        VarRegistry::kappa_lambda()
    }

    fn series_from(reg: &Arc<VarRegistry>, entries: &[(u32, &str)], trunc: u32) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(reg.clone(), trunc);
        for &(k, text) in entries {
            s.set_coeff(k, MultiPoly::parse(reg, text).unwrap());
        }
        s
    }

    #[test]
    fn mul_and_compose_basics() {
        let reg = kl();
        // (1 + u)·(1 − u) = 1 − u²
        let a = series_from(&reg, &[(0, "1"), (1, "1")], 8);
        let b = series_from(&reg, &[(0, "1"), (1, "-1")], 8);
        let p = a.mul(&b);
        assert_eq!(p.coeff(0).to_string(), "1");
        assert!(p.coeff(1).is_zero());
        assert_eq!(p.coeff(2).to_string(), "-1");

        // compose (1+u)² at inner u²: 1 + 2u² + u⁴
        let sq = a.mul(&a);
        let inner = series_from(&reg, &[(2, "1")], 8);
        let c = sq.compose(&inner).unwrap();
        assert_eq!(c.coeff(0).to_string(), "1");
        assert_eq!(c.coeff(2).to_string(), "2");
        assert_eq!(c.coeff(4).to_string(), "1");
        assert!(c.coeff(6).is_zero());

        // constant-term inner is rejected
        let bad = series_from(&reg, &[(0, "1")], 8);
        assert!(matches!(
            sq.compose(&bad),
            Err(PseriesError::PositiveValuationRequired)
        ));
    }

    #[test]
    fn recip_geometric_series() {
        let reg = kl();
        // 1/(1 − κu) = Σ κ^k u^k
        let f = series_from(&reg, &[(0, "1"), (1, "-kappa")], 10);
        let g = f.recip().unwrap();
        for k in 0..10u32 {
            let c = g.coeff(k);
            assert_eq!(c.num_terms(), 1);
            assert_eq!(
                c.coeff(Mono::var_pow(0, k as u16)).unwrap(),
                &Rational::one(),
                "k={k}"
            );
        }
        assert_eq!(f.mul(&g), TruncatedSeries::one(reg, 10));
    }

    #[test]
    fn derivative_integrate_round_trip() {
        let reg = kl();
        let f = series_from(&reg, &[(1, "kappa"), (3, "-1/2*lambda"), (6, "7")], 12);
        let back = f.derivative().integrate();
        assert_eq!(back, f.truncate(back.truncation()));
    }

    #[test]
    fn fractional_power_square_root() {
        let reg = kl();
        // (1 + u)^{1/2} squared returns 1 + u.
        let f = series_from(&reg, &[(0, "1"), (1, "1")], 16);
        let r = f.fractional_power(&Rational::new(1, 2)).unwrap();
        assert_eq!(r.mul(&r), f);
        // First coefficients: 1, 1/2, −1/8, 1/16, −5/128.
        assert_eq!(r.coeff(1).to_string(), "1/2");
        assert_eq!(r.coeff(2).to_string(), "-1/8");
        assert_eq!(r.coeff(3).to_string(), "1/16");
        assert_eq!(r.coeff(4).to_string(), "-5/128");
        // Integer exponent terminates exactly: (1+u)^3.
        let cube = f.fractional_power(&Rational::from_i64(3)).unwrap();
        assert_eq!(cube, f.pow(3));
        // Non-unit constant term rejected.
        let bad = series_from(&reg, &[(0, "kappa")], 8);
        assert!(matches!(
            bad.fractional_power(&Rational::new(1, 2)),
            Err(PseriesError::FractionalPowerBase)
        ));
    }

    #[test]
    fn fractional_power_of_sextic_slope() {
        // (1 − 2κu + λu²)^{−1/2} begins 1 + κu + (3/2κ² − 1/2λ)u²:
        // the u²-coefficient is the first nontrivial Legendre-type value.
        let reg = kl();
        let f = series_from(&reg, &[(0, "1"), (1, "-2*kappa"), (2, "lambda")], 8);
        let g = f.fractional_power(&Rational::new(-1, 2)).unwrap();
        assert_eq!(g.coeff(1).to_string(), "kappa");
        assert_eq!(g.coeff(2).to_string(), "3/2*kappa^2 - 1/2*lambda");
        // Sanity: g²·f = 1.
        assert_eq!(g.mul(&g).mul(&f), TruncatedSeries::one(reg, 8));
    }

    #[test]
    fn reversion_of_logarithm_shape() {
        let reg = kl();
        // f = u + κu⁴ + λu⁷ (the support pattern of a genus logarithm).
        let f = series_from(&reg, &[(1, "1"), (4, "kappa"), (7, "lambda")], 20);
        let g = f.revert().unwrap();
        assert_eq!(f.compose(&g).unwrap(), TruncatedSeries::identity(reg.clone(), 20));
        assert_eq!(g.compose(&f).unwrap(), TruncatedSeries::identity(reg.clone(), 20));
        // Leading corrections: g = u − κu⁴ + 4κ²u⁷ − λu⁷ + …
        assert_eq!(g.coeff(4).to_string(), "-kappa");
        assert_eq!(g.coeff(7).to_string(), "4*kappa^2 - lambda");

        // Non-normalized inputs are rejected.
        let bad = series_from(&reg, &[(1, "2")], 8);
        assert!(matches!(
            bad.revert(),
            Err(PseriesError::NotNormalizedForReversion)
        ));
    }

    #[test]
    fn isolated_coeff_matches_full_expansion_below_60() {
        // φᴾ-shaped table: 1 + G₂u⁶ + G₃u⁹ + G₄u¹², exponent −1/3.
        let reg = VarRegistry::picard();
        let mut table = BTreeMap::new();
        table.insert(6u32, MultiPoly::var(reg.clone(), 0));
        table.insert(9u32, MultiPoly::var(reg.clone(), 1));
        table.insert(12u32, MultiPoly::var(reg.clone(), 2));
        let e = Rational::new(-1, 3);

        let mut series = TruncatedSeries::one(reg.clone(), 60);
        for (&d, c) in &table {
            series.set_coeff(d, c.clone());
        }
        let full = series.fractional_power(&e).unwrap();
        for target in 0..60u32 {
            let isolated = isolated_coeff_fractional_power(&table, &reg, &e, target);
            assert_eq!(isolated, full.coeff(target), "target {target}");
        }
    }

    #[test]
    fn isolated_coeff_deep_constant_table() {
        // (1 − u⁹)^{−1/3}: coefficient of u^
        // 342 is C(−1/3, 38)·(−1)³⁸ — compare against the direct product
        // Π_{j<38}(1/3 + j)/38!.
        let reg = VarRegistry::constants();
        let mut table = BTreeMap::new();
        table.insert(
            9u32,
            MultiPoly::constant(reg.clone(), Rational::from_i64(-1)),
        );
        let e = Rational::new(-1, 3);
        let got = isolated_coeff_fractional_power(&table, &reg, &e, 342);
        let mut expect = Rational::one();
        for j in 0..38 {
            expect = expect.mul(&Rational::new(1 + 3 * j, 3)).div_i64(j + 1);
        }
        assert_eq!(got.constant_value().unwrap(), &expect);
    }

    #[test]
    fn display_format() {
        let reg = kl();
        let f = series_from(&reg, &[(1, "1"), (4, "kappa"), (7, "-1/2*lambda")], 10);
        assert_eq!(f.to_string(), "u + (kappa)*u^4 + (-1/2*lambda)*u^7 + O(u^10)");
        assert_eq!(
            TruncatedSeries::zero(reg, 5).to_string(),
            "O(u^5)"
        );
    }
}
