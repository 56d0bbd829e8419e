//! Formal group laws from logarithms.
//!
//! Given a normalized logarithm `log = u + O(u²)` over ℚ[registry], the
//! associated one-dimensional law is `F(x,y) = exp(log x + log y)` with
//! `exp` the compositional inverse of `log`. The law is held as a bivariate
//! coefficient table `F_{ij} ∈ ℚ[registry]` truncated in total degree.
//!
//! On top of the law: n-series `[n](u)`, the formal inverse
//! `ι(u) = exp(−log u)`, axiom verification (unit and commutativity are
//! table reads; associativity is a trivariate expansion, optionally after
//! specializing the family parameters to rationals so the degree-20 check
//! stays cheap), strict isomorphisms `θ = exp₂ ∘ log₁` with p-integrality
//! reports, and the Hazewinkel recursion
//! `vₙ = p·ℓₙ − Σ_{i=1}^{n−1} ℓᵢ·v_{n−i}^{pⁱ}`.

use crate::coeff::{CoeffError, Rational, Valuation};
use crate::mpoly::{MonoHashBuilder, MpolyError, MultiPoly, VarRegistry, WeightedDegree};
use crate::pseries::{PseriesError, TruncatedSeries};
use serde_json::json;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// Errors from formal-group-law construction and verification.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FglError {
    #[error("truncation {0} too small to build a law (need ≥ 2)")]
    TruncationTooSmall(u32),
    #[error("logarithm must be u + O(u²) with linear coefficient exactly 1")]
    NotNormalizedLog,
    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(u32, u32),
    #[error("registry mismatch between laws")]
    RegistryMismatch,
    #[error("axiom failed: {0}")]
    AxiomFailed(String),
    #[error("isomorphism is not a homomorphism within truncation")]
    NotHomomorphic,
    #[error(transparent)]
    Pseries(#[from] PseriesError),
    #[error(transparent)]
    Mpoly(#[from] MpolyError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

// ---------------------------------------------------------------------------
// Multivariate truncated series (series in K formal variables)
// ---------------------------------------------------------------------------

/// A series in `K` formal variables truncated in total degree, with
/// polynomial coefficients: `Σ_{|e| < trunc} c_e·x₀^{e₀}···`.
#[derive(Clone, PartialEq)]
pub struct MultiSeries<const K: usize> {
    trunc: u32,
    reg: Arc<VarRegistry>,
    terms: HashMap<[u16; K], MultiPoly<Rational>, MonoHashBuilder>,
}

impl<const K: usize> MultiSeries<K> {
    pub fn zero(reg: Arc<VarRegistry>, trunc: u32) -> Self {
        MultiSeries {
            trunc,
            reg,
            terms: HashMap::default(),
        }
    }

    pub fn constant(value: MultiPoly<Rational>, trunc: u32) -> Self {
        let mut s = Self::zero(value.registry().clone(), trunc);
        s.add_term([0; K], value);
        s
    }

    /// The formal variable on `axis`.
    pub fn axis_var(reg: Arc<VarRegistry>, axis: usize, trunc: u32) -> Self {
        let mut e = [0u16; K];
        e[axis] = 1;
        let mut s = Self::zero(reg.clone(), trunc);
        s.add_term(e, MultiPoly::one(reg));
        s
    }

    /// Embed a univariate series onto one axis.
    pub fn embed(series: &TruncatedSeries, axis: usize, trunc: u32) -> Self {
        let trunc = trunc.min(series.truncation());
        let mut s = Self::zero(series.registry().clone(), trunc);
        for (k, c) in series.iter_coeffs() {
            if k < trunc {
                let mut e = [0u16; K];
                e[axis] = k as u16;
                s.add_term(e, c.clone());
            }
        }
        s
    }

    pub fn truncation(&self) -> u32 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn total_degree(e: &[u16; K]) -> u32 {
        e.iter().map(|&x| x as u32).sum()
    }

    pub fn add_term(&mut self, e: [u16; K], c: MultiPoly<Rational>) {
        if c.is_zero() || Self::total_degree(&e) >= self.trunc {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn coeff(&self, e: [u16; K]) -> MultiPoly<Rational> {
        self.terms
            .get(&e)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(self.reg.clone()))
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&[u16; K], &MultiPoly<Rational>)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let mut out = self.truncate(trunc);
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.reg.clone(), self.trunc);
        for (e, c) in &self.terms {
            out.terms.insert(*e, c.neg());
        }
        out
    }

    pub fn truncate(&self, trunc: u32) -> Self {
        let trunc = trunc.min(self.trunc);
        let mut out = Self::zero(self.reg.clone(), trunc);
        for (e, c) in &self.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn scale_poly(&self, p: &MultiPoly<Rational>) -> Self {
        let mut out = Self::zero(self.reg.clone(), self.trunc);
        if p.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.add_term(*e, c.mul(p));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let mut out = Self::zero(self.reg.clone(), trunc);
        for (e1, c1) in &self.terms {
            let d1 = Self::total_degree(e1);
            if d1 >= trunc {
                continue;
            }
            for (e2, c2) in &other.terms {
                if d1 + Self::total_degree(e2) >= trunc {
                    continue;
                }
                let mut e = [0u16; K];
                for i in 0..K {
                    e[i] = e1[i] + e2[i];
                }
                out.add_term(e, c1.mul(c2));
            }
        }
        out
    }

    /// Compose a univariate outer series with this series (which must have
    /// zero constant term): generalized Horner over the outer support with
    /// cached gap powers, so sparse outers (genus logs live on exponents
    /// ≡ 1 mod 3) cost ~⅓ of the dense Horner.
    pub fn compose_outer(&self, outer: &TruncatedSeries) -> Result<Self, FglError> {
        if self.terms.contains_key(&[0; K]) {
            return Err(FglError::Pseries(PseriesError::PositiveValuationRequired));
        }
        let trunc = self.trunc.min(outer.truncation());
        let exps: Vec<u32> = outer
            .iter_coeffs()
            .map(|(k, _)| k)
            .filter(|&k| k < trunc)
            .collect();
        let mut acc = Self::zero(self.reg.clone(), trunc);
        if exps.is_empty() {
            return Ok(acc);
        }
        let mut powers: Vec<Self> = vec![self.truncate(trunc)]; // self^1
        let power = |powers: &mut Vec<Self>, g: usize| -> Self {
            while powers.len() < g {
                let next = powers.last().unwrap().mul(&powers[0]);
                powers.push(next);
            }
            powers[g - 1].clone()
        };
        // Horner from the top exponent down, jumping by support gaps.
        acc.add_term([0; K], outer.coeff(*exps.last().unwrap()));
        for w in exps.windows(2).rev() {
            let gap = (w[1] - w[0]) as usize;
            acc = acc.mul(&power(&mut powers, gap));
            acc.add_term([0; K], outer.coeff(w[0]));
        }
        if exps[0] > 0 {
            acc = acc.mul(&power(&mut powers, exps[0] as usize));
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// The law
// ---------------------------------------------------------------------------

/// A one-dimensional formal group law truncated in total degree:
/// logarithm, exponential, and the coefficient table of
/// `F(x,y) = Σ F_{ij} xⁱyʲ`.
#[derive(Clone)]
pub struct FormalGroupLaw {
    trunc: u32,
    reg: Arc<VarRegistry>,
    log: TruncatedSeries,
    exp: TruncatedSeries,
    table: BTreeMap<(u16, u16), MultiPoly<Rational>>,
}

/// Build the law `F(x,y) = exp(log x + log y)` from a normalized
/// logarithm.
pub fn fgl_from_log(log: &TruncatedSeries) -> Result<FormalGroupLaw, FglError> {
    let n = log.truncation();
    if n < 2 {
        return Err(FglError::TruncationTooSmall(n));
    }
    if log.valuation() != Some(1)
        || !(log.coeff(1).num_terms() == 1
            && log.coeff(1).constant_value().is_some_and(|v| v.is_one()))
    {
        return Err(FglError::NotNormalizedLog);
    }
    let reg = log.registry().clone();
    let exp = log.revert()?;
    let w = MultiSeries::<2>::embed(log, 0, n).add(&MultiSeries::<2>::embed(log, 1, n));
    let f = w.compose_outer(&exp)?;
    let mut table = BTreeMap::new();
    for (e, c) in f.iter_terms() {
        table.insert((e[0], e[1]), c.clone());
    }
    Ok(FormalGroupLaw {
        trunc: n,
        reg,
        log: log.clone(),
        exp,
        table,
    })
}

impl FormalGroupLaw {
    pub fn truncation(&self) -> u32 {
        self.trunc
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn log(&self) -> &TruncatedSeries {
        &self.log
    }

    pub fn exp(&self) -> &TruncatedSeries {
        &self.exp
    }

    /// The coefficient `F_{ij}`.
    pub fn coeff(&self, i: u16, j: u16) -> MultiPoly<Rational> {
        self.table
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(self.reg.clone()))
    }

    pub fn table(&self) -> &BTreeMap<(u16, u16), MultiPoly<Rational>> {
        &self.table
    }

    /// Evaluate `F(a, b)` for two series in the same variable `u`
    /// (the n-series recursion): `Σ_i u-shifts of Σ_j F_{ij}·bʲ`.
    pub fn eval_univariate(
        &self,
        a: &TruncatedSeries,
        b: &TruncatedSeries,
    ) -> Result<TruncatedSeries, FglError> {
        for s in [a, b] {
            if !s.is_zero() && s.valuation() == Some(0) {
                return Err(FglError::Pseries(PseriesError::PositiveValuationRequired));
            }
        }
        let trunc = self.trunc.min(a.truncation()).min(b.truncation());
        // Cache powers of b (and a) up to what the table needs.
        let max_j = self.table.keys().map(|&(_, j)| j).max().unwrap_or(0) as usize;
        let mut b_pows: Vec<TruncatedSeries> =
            vec![TruncatedSeries::one(self.reg.clone(), trunc)];
        for _ in 0..max_j {
            let next = b_pows.last().unwrap().mul(&b.truncate(trunc));
            b_pows.push(next);
        }
        // Rows: R_i(b) = Σ_j F_{ij} bʲ, then Σ_i aⁱ·R_i.
        let mut rows: BTreeMap<u16, TruncatedSeries> = BTreeMap::new();
        for (&(i, j), c) in &self.table {
            let contrib = b_pows[j as usize].scale_poly(c);
            rows.entry(i)
                .and_modify(|r| *r = r.add(&contrib))
                .or_insert(contrib);
        }
        let mut a_pow = TruncatedSeries::one(self.reg.clone(), trunc);
        let mut last_i = 0u16;
        let mut acc = TruncatedSeries::zero(self.reg.clone(), trunc);
        for (i, row) in rows {
            for _ in last_i..i {
                a_pow = a_pow.mul(&a.truncate(trunc));
            }
            last_i = i;
            acc = acc.add(&a_pow.mul(&row));
        }
        Ok(acc)
    }

    /// The n-series: `[0]=0`, `[1]=u`, `[n]=F(u,[n−1])` for n ≥ 2, and
    /// `[−n] = ι([n])` with `ι = exp(−log u)` the formal inverse.
    pub fn n_series(&self, n: i64) -> Result<TruncatedSeries, FglError> {
        let u = TruncatedSeries::identity(self.reg.clone(), self.trunc);
        match n {
            0 => Ok(TruncatedSeries::zero(self.reg.clone(), self.trunc)),
            1 => Ok(u),
            n if n > 1 => {
                let mut acc = u.clone();
                for _ in 2..=n {
                    acc = self.eval_univariate(&u, &acc)?;
                }
                Ok(acc)
            }
            n => {
                let pos = self.n_series(-n)?;
                // ι ∘ [−n]: exp(−log([−n](u))) = exp(n·log u).
                let log_pos = self.log.compose(&pos)?;
                Ok(self.exp.compose(&log_pos.neg())?)
            }
        }
    }

    /// The formal inverse `ι(u) = exp(−log u)`, satisfying `F(u, ι(u)) = 0`.
    pub fn inverse_series(&self) -> Result<TruncatedSeries, FglError> {
        Ok(self.exp.compose(&self.log.neg())?)
    }

    /// Unit axiom `F(x,0) = x` — a table read.
    pub fn verify_unit(&self) -> Result<(), FglError> {
        for (&(i, j), c) in &self.table {
            if j == 0 {
                let ok = i == 1
                    && c.num_terms() == 1
                    && c.constant_value().is_some_and(|v| v.is_one());
                if !ok {
                    return Err(FglError::AxiomFailed(format!(
                        "unit: F_{{{i},0}} = {c}"
                    )));
                }
            }
        }
        if self
            .table
            .get(&(1, 0))
            .is_none_or(|c| !(c.num_terms() == 1 && c.constant_value().is_some_and(|v| v.is_one())))
        {
            return Err(FglError::AxiomFailed("unit: F_{1,0} ≠ 1".into()));
        }
        Ok(())
    }

    /// Commutativity `F(x,y) = F(y,x)` — a table read.
    pub fn verify_commutative(&self) -> Result<(), FglError> {
        for (&(i, j), c) in &self.table {
            if self.coeff(j, i) != *c {
                return Err(FglError::AxiomFailed(format!(
                    "commutativity: F_{{{i},{j}}} ≠ F_{{{j},{i}}}"
                )));
            }
        }
        Ok(())
    }

    /// Associativity `F(F(x,y),z) = F(x,F(y,z))` as an exact trivariate
    /// identity up to total degree `order` (capped by the truncation).
    pub fn verify_associative(&self, order: u32) -> Result<(), FglError> {
        let order = order.min(self.trunc);
        let fxy = self.as_ms3(0, 1, order);
        let fyz = self.as_ms3(1, 2, order);
        let z = MultiSeries::<3>::axis_var(self.reg.clone(), 2, order);
        let x = MultiSeries::<3>::axis_var(self.reg.clone(), 0, order);
        let lhs = self.eval_ms3(&fxy, &z)?;
        let rhs = self.eval_ms3(&x, &fyz)?;
        if lhs != rhs {
            return Err(FglError::AxiomFailed(format!(
                "associativity to degree {order}"
            )));
        }
        Ok(())
    }

    /// Associativity after specializing every registry variable to a
    /// seeded random rational — the full-precision companion to the
    /// symbolic check, cheap enough to run at total degree 20.
    pub fn verify_associative_specialized(&self, order: u32, seed: u64) -> Result<(), FglError> {
        let mut state = seed | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let vals: Vec<Rational> = (0..self.reg.arity())
            .map(|_| Rational::new((next() % 13) as i64 - 6, 1 + (next() % 4) as i64))
            .collect();
        let creg = VarRegistry::constants();
        let mut spec = FormalGroupLaw {
            trunc: self.trunc.min(order),
            reg: creg.clone(),
            // log/exp are not used by the associativity expansion; store
            // specialized copies for coherence.
            log: specialize_series(&self.log, &creg, &vals),
            exp: specialize_series(&self.exp, &creg, &vals),
            table: BTreeMap::new(),
        };
        for (&(i, j), c) in &self.table {
            let v = if self.reg.arity() == 0 {
                c.constant_value().cloned().unwrap_or_else(Rational::zero)
            } else {
                c.eval(&vals)
            };
            if !v.is_zero() {
                spec.table
                    .insert((i, j), MultiPoly::constant(creg.clone(), v));
            }
        }
        spec.verify_associative(order)
    }

    fn as_ms3(&self, axis_a: usize, axis_b: usize, order: u32) -> MultiSeries<3> {
        let mut out = MultiSeries::<3>::zero(self.reg.clone(), order);
        for (&(i, j), c) in &self.table {
            let mut e = [0u16; 3];
            e[axis_a] = i;
            e[axis_b] = j;
            out.add_term(e, c.clone());
        }
        out
    }

    /// `Σ F_{ij}·Aⁱ·Bʲ` for trivariate arguments: powers of each argument
    /// are cached, rows assembled by direct sums.
    fn eval_ms3(
        &self,
        a: &MultiSeries<3>,
        b: &MultiSeries<3>,
    ) -> Result<MultiSeries<3>, FglError> {
        let trunc = a.truncation().min(b.truncation());
        let mut a_pows: Vec<MultiSeries<3>> = Vec::new(); // a^1, a^2, ...
        let mut b_pows: Vec<MultiSeries<3>> = Vec::new();
        let mut acc = MultiSeries::<3>::zero(self.reg.clone(), trunc);
        for (&(i, j), c) in &self.table {
            if i as u32 + j as u32 >= trunc {
                continue;
            }
            let mut term = MultiSeries::<3>::constant(MultiPoly::one(self.reg.clone()), trunc)
                .scale_poly(c);
            if i > 0 {
                term = term.mul(power_of(&mut a_pows, a, i as usize));
            }
            if j > 0 {
                term = term.mul(power_of(&mut b_pows, b, j as usize));
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// JSON form: `{truncation, log, law: [{i, j, coeff}]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let law: Vec<serde_json::Value> = self
            .table
            .iter()
            .map(|(&(i, j), c)| json!({"i": i, "j": j, "coeff": c.to_string()}))
            .collect();
        json!({
            "truncation": self.trunc,
            "log": self.log.to_string(),
            "law": law,
        })
    }
}

fn power_of<'a>(
    cache: &'a mut Vec<MultiSeries<3>>,
    base: &MultiSeries<3>,
    k: usize,
) -> &'a MultiSeries<3> {
    while cache.len() < k {
        let next = match cache.last() {
            None => base.clone(),
            Some(p) => p.mul(base),
        };
        cache.push(next);
    }
    &cache[k - 1]
}

fn specialize_series(
    s: &TruncatedSeries,
    creg: &Arc<VarRegistry>,
    vals: &[Rational],
) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(creg.clone(), s.truncation());
    for (k, c) in s.iter_coeffs() {
        let v = if vals.is_empty() {
            c.constant_value().cloned().unwrap_or_else(Rational::zero)
        } else {
            c.eval(vals)
        };
        out.set_coeff(k, MultiPoly::constant(creg.clone(), v));
    }
    out
}

// ---------------------------------------------------------------------------
// Strict isomorphisms
// ---------------------------------------------------------------------------

/// p-integrality report for the coefficients of a strict isomorphism:
/// for each series degree with a nonzero coefficient, the minimum p-adic
/// valuation over that polynomial's coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoValuationReport {
    pub prime: u64,
    pub truncation: u32,
    /// `(series degree, min valuation at that degree)`.
    pub per_degree: Vec<(u32, i64)>,
    pub all_p_local: bool,
}

impl IsoValuationReport {
    /// The worst (smallest) valuation over all degrees, with its degree.
    pub fn worst(&self) -> Option<(u32, i64)> {
        self.per_degree
            .iter()
            .copied()
            .min_by_key(|&(_, v)| v)
            .map(|(k, v)| (k, v))
    }
}

/// The strict isomorphism `θ = exp_{F₂} ∘ log_{F₁}` from `F₁` to `F₂`,
/// with the homomorphism property `θ(F₁(x,y)) = F₂(θx, θy)` verified as a
/// bivariate identity and a p-integrality report on θ's coefficients.
pub fn strict_iso(
    f1: &FormalGroupLaw,
    f2: &FormalGroupLaw,
    p: u64,
) -> Result<(TruncatedSeries, IsoValuationReport), FglError> {
    if f1.trunc != f2.trunc {
        return Err(FglError::TruncationMismatch(f1.trunc, f2.trunc));
    }
    if f1.reg != f2.reg {
        return Err(FglError::RegistryMismatch);
    }
    let n = f1.trunc;
    // θ(u) = exp₂(log₁(u)).
    let theta = f2.exp.compose(&f1.log)?;

    // Homomorphism: θ(F₁(x,y)) as a composition, F₂(θx,θy) by separated
    // outer products (θx depends only on x, θy only on y).
    let f1_ms = f1.as_ms2(n);
    let lhs = f1_ms.compose_outer(&theta)?;
    let rhs = eval_separated(f2, &theta, &theta, n)?;
    if lhs != rhs {
        return Err(FglError::NotHomomorphic);
    }

    let mut per_degree = Vec::new();
    let mut all = true;
    for (k, c) in theta.iter_coeffs() {
        if let Some((v, _)) = c.min_p_valuation(p)? {
            per_degree.push((k, v));
            if v < 0 {
                all = false;
            }
        }
    }
    Ok((
        theta,
        IsoValuationReport {
            prime: p,
            truncation: n,
            per_degree,
            all_p_local: all,
        },
    ))
}

impl FormalGroupLaw {
    fn as_ms2(&self, order: u32) -> MultiSeries<2> {
        let mut out = MultiSeries::<2>::zero(self.reg.clone(), order);
        for (&(i, j), c) in &self.table {
            out.add_term([i, j], c.clone());
        }
        out
    }
}

/// `F(a(x), b(y))` where `a` depends only on the first axis and `b` only
/// on the second: rows `R_i(b)` are univariate series in `y`, and the
/// result is a sum of outer products `aⁱ ⊗ R_i` — no bivariate
/// multiplications at all.
fn eval_separated(
    f: &FormalGroupLaw,
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    trunc: u32,
) -> Result<MultiSeries<2>, FglError> {
    let reg = f.reg.clone();
    let max_j = f.table.keys().map(|&(_, j)| j).max().unwrap_or(0) as usize;
    let mut b_pows: Vec<TruncatedSeries> = vec![TruncatedSeries::one(reg.clone(), trunc)];
    for _ in 0..max_j {
        let next = b_pows.last().unwrap().mul(&b.truncate(trunc));
        b_pows.push(next);
    }
    let mut rows: BTreeMap<u16, TruncatedSeries> = BTreeMap::new();
    for (&(i, j), c) in &f.table {
        let contrib = b_pows[j as usize].scale_poly(c);
        rows.entry(i)
            .and_modify(|r| *r = r.add(&contrib))
            .or_insert(contrib);
    }
    let mut out = MultiSeries::<2>::zero(reg.clone(), trunc);
    let mut a_pow = TruncatedSeries::one(reg.clone(), trunc);
    let mut last_i = 0u16;
    for (i, row) in rows {
        for _ in last_i..i {
            a_pow = a_pow.mul(&a.truncate(trunc));
        }
        last_i = i;
        // Outer product: (Σ_k a_k x^k)·(Σ_m r_m y^m).
        for (k, ac) in a_pow.iter_coeffs() {
            for (m, rc) in row.iter_coeffs() {
                if k + m < trunc {
                    out.add_term([k as u16, m as u16], ac.mul(rc));
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Hazewinkel images
// ---------------------------------------------------------------------------

/// Integrality of one Hazewinkel image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VIntegrality {
    pub n: usize,
    pub weighted_degree: Option<WeightedDegree>,
    pub min_valuation: Valuation,
    pub p_local: bool,
}

/// The images v₁..vₙ of the Hazewinkel generators under a genus, with a
/// p-integrality report.
#[derive(Debug, Clone)]
pub struct HazewinkelImages {
    pub prime: u64,
    pub v: Vec<MultiPoly<Rational>>,
    pub report: Vec<VIntegrality>,
}

/// Run the Hazewinkel recursion `vₙ = p·ℓₙ − Σ_{i=1}^{n−1} ℓᵢ·v_{n−i}^{pⁱ}`
/// (with ℓ₀ = 1) from the logarithm coefficients ℓₖ = [u^{pᵏ}] log.
/// Integrality failures are reported, never raised.
pub fn hazewinkel_images(
    ell: &[MultiPoly<Rational>],
    p: u64,
) -> Result<HazewinkelImages, FglError> {
    let mut v: Vec<MultiPoly<Rational>> = Vec::with_capacity(ell.len());
    let p_rat = Rational::from_i64(p as i64);
    for n in 1..=ell.len() {
        let mut acc = ell[n - 1].scale(&p_rat);
        for i in 1..n {
            let power = (p as u64).pow(i as u32);
            assert!(power <= u32::MAX as u64, "p^i exponent too large");
            let term = ell[i - 1].mul(&v[n - i - 1].pow_scaled(power as u32));
            acc = acc.sub(&term);
        }
        v.push(acc);
    }
    let mut report = Vec::with_capacity(v.len());
    for (idx, vi) in v.iter().enumerate() {
        let min_valuation = match vi.min_p_valuation(p)? {
            None => Valuation::Infinite,
            Some((val, _)) => Valuation::Finite(val),
        };
        report.push(VIntegrality {
            n: idx + 1,
            weighted_degree: vi.weighted_degree().ok(),
            min_valuation,
            p_local: min_valuation.is_nonnegative(),
        });
    }
    Ok(HazewinkelImages {
        prime: p,
        v,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::VarRegistry;

    /// Logarithm of the sextic-slope genus: ∫ (1−2κu³+λu⁶)^{−1/2}.
    fn legendre_log(n: u32) -> TruncatedSeries {
        let reg = VarRegistry::kappa_lambda();
        let mut base = TruncatedSeries::one(reg.clone(), (n - 1).max(7));
        base.set_coeff(3, MultiPoly::parse(&reg, "-2*kappa").unwrap());
        base.set_coeff(6, MultiPoly::parse(&reg, "lambda").unwrap());
        base.fractional_power(&Rational::new(-1, 2))
            .unwrap()
            .integrate()
            .truncate(n)
    }

    #[test]
    fn additive_law_from_identity_log() {
        let reg = VarRegistry::kappa_lambda();
        let log = TruncatedSeries::identity(reg, 12);
        let f = fgl_from_log(&log).unwrap();
        assert_eq!(f.coeff(1, 0).to_string(), "1");
        assert_eq!(f.coeff(0, 1).to_string(), "1");
        assert_eq!(f.table().len(), 2, "additive law has no mixed terms");
        // n-series of the additive law: [5] = 5u.
        let five = f.n_series(5).unwrap();
        assert_eq!(five.coeff(1).to_string(), "5");
        assert_eq!(five.iter_coeffs().count(), 1);
    }

    #[test]
    fn sextic_slope_law_to_degree_seven() {
        // F = x + y − κ(x³y + 3/2·x²y² + xy³) + O(deg 7).
        let f = fgl_from_log(&legendre_log(7)).unwrap();
        assert_eq!(f.coeff(1, 0).to_string(), "1");
        assert_eq!(f.coeff(3, 1).to_string(), "-kappa");
        assert_eq!(f.coeff(2, 2).to_string(), "-3/2*kappa");
        assert_eq!(f.coeff(1, 3).to_string(), "-kappa");
        // No other mixed terms below degree 7.
        for (&(i, j), _) in f.table() {
            assert!(
                matches!((i, j), (1, 0) | (0, 1) | (3, 1) | (2, 2) | (1, 3)),
                "unexpected term F_{{{i},{j}}}"
            );
        }
        f.verify_unit().unwrap();
        f.verify_commutative().unwrap();
        f.verify_associative(7).unwrap();
    }

    #[test]
    fn sparse_constant_log_law_has_no_low_mixed_terms() {
        // log′ = (1−u⁹)^{−1/3} → F = x + y + O(deg 10).
        let reg = VarRegistry::constants();
        let mut base = TruncatedSeries::one(reg.clone(), 10);
        base.set_coeff(9, MultiPoly::constant(reg.clone(), Rational::from_i64(-1)));
        let log = base
            .fractional_power(&Rational::new(-1, 3))
            .unwrap()
            .integrate()
            .truncate(10);
        let f = fgl_from_log(&log).unwrap();
        for (&(i, j), _) in f.table() {
            assert!(
                (i, j) == (1, 0) || (i, j) == (0, 1),
                "mixed term F_{{{i},{j}}} below degree 10"
            );
        }
    }

    #[test]
    fn n_series_and_inverse() {
        let f = fgl_from_log(&legendre_log(13)).unwrap();
        let u = TruncatedSeries::identity(f.registry().clone(), 13);
        assert_eq!(f.n_series(1).unwrap(), u);
        assert!(f.n_series(0).unwrap().is_zero());

        // log([n]) = n·log(u) for n = 2, 3, −1.
        for n in [2i64, 3, -1] {
            let series = f.n_series(n).unwrap();
            let lhs = f.log().compose(&series).unwrap();
            let rhs = f.log().scale(&Rational::from_i64(n));
            assert_eq!(lhs, rhs.truncate(lhs.truncation()), "n = {n}");
        }

        // F(u, ι(u)) = 0.
        let inv = f.inverse_series().unwrap();
        let sum = f.eval_univariate(&u, &inv).unwrap();
        assert!(sum.is_zero(), "F(u, ι(u)) = {sum}");
    }

    #[test]
    fn associativity_specialized_and_symbolic() {
        let f = fgl_from_log(&legendre_log(10)).unwrap();
        f.verify_associative(10).unwrap();
        f.verify_associative_specialized(10, 0xA5A5_5A5A).unwrap();
    }

    #[test]
    fn hazewinkel_legendre_values() {
        // ℓₖ from the logarithm directly: ℓ₁ = [u⁷] log, ℓ₂ = [u⁴⁹] log.
        let log = legendre_log(50);
        let ell = vec![log.coeff(7), log.coeff(49)];
        let h = hazewinkel_images(&ell, 7).unwrap();
        // v₁ = P₂ = 3/2κ² − 1/2λ.
        assert_eq!(h.v[0].to_string(), "3/2*kappa^2 - 1/2*lambda");
        // Weighted degrees 2(p−1), 2(p²−1).
        assert_eq!(
            h.report[0].weighted_degree,
            Some(WeightedDegree::Homogeneous(12))
        );
        assert_eq!(
            h.report[1].weighted_degree,
            Some(WeightedDegree::Homogeneous(96))
        );
        // Both 7-local.
        assert!(h.report[0].p_local);
        assert!(h.report[1].p_local);
        // v₂ at the point κ² = 1/3, λ = 1 — an exact rational with
        // 7-valuation 0 that reduces to 1 mod 7.
        let val = h.v[1]
            .eval_even(0, &Rational::new(1, 3), &[Rational::zero(), Rational::one()])
            .unwrap();
        assert_eq!(val, Rational::new(-2147, 93312));
        // All κ-exponents even (the even-subring property).
        for (m, _) in h.v[0].iter_terms().chain(h.v[1].iter_terms()) {
            assert_eq!(m.exp(0) % 2, 0, "odd κ-exponent in a Hazewinkel image");
        }
    }

    #[test]
    fn strict_iso_identity_and_valuations() {
        let f = fgl_from_log(&legendre_log(13)).unwrap();
        let (theta, report) = strict_iso(&f, &f, 7).unwrap();
        assert_eq!(
            theta,
            TruncatedSeries::identity(f.registry().clone(), 13)
        );
        assert!(report.all_p_local);
        assert_eq!(report.per_degree, vec![(1, 0)]);
    }

    #[test]
    fn strict_iso_between_different_logs() {
        // Second law over the same registry: log₂ = u + κu⁴.
        let reg = VarRegistry::kappa_lambda();
        let mut log2 = TruncatedSeries::identity(reg.clone(), 13);
        log2.set_coeff(4, MultiPoly::parse(&reg, "kappa").unwrap());
        let f1 = fgl_from_log(&legendre_log(13)).unwrap();
        let f2 = fgl_from_log(&log2).unwrap();
        let (theta, report) = strict_iso(&f1, &f2, 7).unwrap();
        // θ = exp₂(log₁(u)): log₁ = u + ¼κu⁴ + …, exp₂ = u − κu⁴ + …,
        // so θ₄ = ¼κ − κ = −¾κ and θ₇ = 45/14κ² − 1/14λ.
        assert_eq!(theta.coeff(4).to_string(), "-3/4*kappa");
        assert_eq!(theta.coeff(7).to_string(), "45/14*kappa^2 - 1/14*lambda");
        // An arbitrary pair of laws is NOT 7-locally isomorphic: the
        // degree-7 coefficient has 7-valuation −1, and the report says so.
        assert!(!report.all_p_local);
        assert!(report.per_degree.contains(&(7, -1)));
        assert_eq!(report.per_degree[0], (1, 0));
        assert_eq!(report.worst().unwrap().1, -1);
        // Mismatched truncations are rejected.
        let f3 = fgl_from_log(&legendre_log(10)).unwrap();
        assert!(matches!(
            strict_iso(&f1, &f3, 7),
            Err(FglError::TruncationMismatch(_, _))
        ));
    }

    #[test]
    fn law_json_shape() {
        let f = fgl_from_log(&legendre_log(7)).unwrap();
        let j = f.to_json();
        assert_eq!(j["truncation"], 7);
        assert!(j["log"].as_str().unwrap().starts_with("u + "));
        let law = j["law"].as_array().unwrap();
        assert!(law.iter().any(|t| t["i"] == 3 && t["j"] == 1 && t["coeff"] == "-kappa"));
    }
}
