//! Univariate polynomials over a multivariate coefficient ring, with
//! resultants and discriminants by fraction-free (Bareiss) elimination of
//! the Sylvester matrix.
//!
//! The main variable `x` is positional and carries no weight; coefficients
//! live in a [`MultiPoly`] ring over the family registry. Every division
//! performed by the Bareiss sweep is exact over the coefficient domain, so
//! resultants of integer-coefficient inputs come out with integer
//! coefficients — the quartic discriminant
//! `16*G2^4*G4 - 4*G2^3*G3^2 - 128*G2^2*G4^2 + 144*G2*G3^2*G4 - 27*G3^4 + 256*G4^3`
//! is produced exactly, not as a cleared-denominator approximation.

use super::{MonoOrder, MpolyError, MultiPoly, VarRegistry};
use crate::coeff::Coeff;
use std::fmt;
use std::sync::Arc;

/// A univariate polynomial `Σ coeffs[i]·xⁱ` with multivariate coefficients.
/// The coefficient vector never ends in a zero polynomial.
#[derive(Clone, PartialEq)]
pub struct UniPoly<C: Coeff> {
    reg: Arc<VarRegistry>,
    coeffs: Vec<MultiPoly<C>>,
}

impl<C: Coeff> UniPoly<C> {
    pub fn zero(reg: Arc<VarRegistry>) -> Self {
        UniPoly {
            reg,
            coeffs: Vec::new(),
        }
    }

    /// Build from coefficients listed low degree first; trailing zeros are
    /// trimmed.
    pub fn new(reg: Arc<VarRegistry>, coeffs: Vec<MultiPoly<C>>) -> Self {
        for c in &coeffs {
            assert!(
                **c.registry() == *reg,
                "coefficient registry mismatch in UniPoly"
            );
        }
        let mut p = UniPoly { reg, coeffs };
        p.trim();
        p
    }

    /// The monomial `c·xᵉ`.
    pub fn monomial(e: usize, c: MultiPoly<C>) -> Self {
        let reg = c.registry().clone();
        let mut coeffs = vec![MultiPoly::zero(reg.clone()); e];
        coeffs.push(c);
        Self::new(reg, coeffs)
    }

    /// The linear factor `x − r`.
    pub fn x_minus(r: &MultiPoly<C>) -> Self {
        let reg = r.registry().clone();
        let one = match r.witness() {
            Some(w) => w.one_like(),
            None => panic!("x_minus needs a nonzero root or use x_var"),
        };
        Self::new(reg.clone(), vec![r.neg(), MultiPoly::constant(reg, one)])
    }

    /// The bare variable `x` (coefficient 1 minted from `like`).
    pub fn x_var(reg: Arc<VarRegistry>, like: &C) -> Self {
        Self::new(
            reg.clone(),
            vec![
                MultiPoly::zero(reg.clone()),
                MultiPoly::constant(reg, like.one_like()),
            ],
        )
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `x`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `xⁱ` (zero polynomial beyond the degree).
    pub fn coeff(&self, i: usize) -> MultiPoly<C> {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(self.reg.clone()))
    }

    pub fn leading_coeff(&self) -> Option<&MultiPoly<C>> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i).add(&other.coeff(i)));
        }
        Self::new(self.reg.clone(), coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i).sub(&other.coeff(i)));
        }
        Self::new(self.reg.clone(), coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.reg.clone());
        }
        let mut coeffs =
            vec![MultiPoly::zero(self.reg.clone()); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Self::new(self.reg.clone(), coeffs)
    }

    /// Multiply every coefficient by `s`.
    pub fn scale(&self, s: &MultiPoly<C>) -> Self {
        Self::new(
            self.reg.clone(),
            self.coeffs.iter().map(|c| c.mul(s)).collect(),
        )
    }

    /// Formal derivative in `x`.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(self.reg.clone());
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| scale_u64(c, i as u64))
            .collect();
        Self::new(self.reg.clone(), coeffs)
    }

    /// Evaluate at a multivariate polynomial (Horner).
    pub fn eval_poly(&self, at: &MultiPoly<C>) -> MultiPoly<C> {
        let mut acc = MultiPoly::zero(self.reg.clone());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(at).add(c);
        }
        acc
    }

    /// `f(x + a)` — composition with a translation of the main variable.
    pub fn compose_shift(&self, a: &MultiPoly<C>) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let one = self
            .coeffs
            .iter()
            .find_map(|c| c.witness())
            .expect("nonzero UniPoly has a witness")
            .one_like();
        // x + a
        let shift = Self::new(
            self.reg.clone(),
            vec![a.clone(), MultiPoly::constant(self.reg.clone(), one)],
        );
        let mut result = Self::zero(self.reg.clone());
        let mut power = Self::new(
            self.reg.clone(),
            vec![MultiPoly::constant(
                self.reg.clone(),
                self.coeffs
                    .iter()
                    .find_map(|c| c.witness())
                    .unwrap()
                    .one_like(),
            )],
        );
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                result = result.add(&power.scale(c));
            }
            if i + 1 < self.coeffs.len() {
                power = power.mul(&shift);
            }
        }
        result
    }
}

fn scale_u64<C: Coeff>(p: &MultiPoly<C>, n: u64) -> MultiPoly<C> {
    let mut out = MultiPoly::zero(p.registry().clone());
    for (m, c) in p.iter_terms() {
        out.add_term(m, c.mul_u64_ref(n));
    }
    out
}

impl<C: Coeff> fmt::Debug for UniPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Resultants and discriminants
// ---------------------------------------------------------------------------

/// Resultant of `f` and `g` in `x`: the determinant of the Sylvester
/// matrix, computed by Bareiss fraction-free elimination so every interior
/// division is exact. Requires `deg f ≥ 1` and `deg g ≥ 1`.
pub fn resultant<C: Coeff>(f: &UniPoly<C>, g: &UniPoly<C>) -> Result<MultiPoly<C>, MpolyError> {
    let m = f.degree().ok_or(MpolyError::ZeroPolynomial)?;
    let n = g.degree().ok_or(MpolyError::ZeroPolynomial)?;
    if m == 0 || n == 0 {
        // Res(f, c) = c^{deg f}; both degree 0 gives 1 — callers here
        // always pass positive degrees, but handle the constant cases.
        if m == 0 {
            return Ok(f.coeff(0).pow(n as u32));
        }
        return Ok(g.coeff(0).pow(m as u32));
    }
    let reg = f.registry().clone();
    let size = m + n;
    let zero = || MultiPoly::<C>::zero(reg.clone());

    // Sylvester matrix: n shifted rows of f's coefficients (descending),
    // then m shifted rows of g's.
    let mut mat: Vec<Vec<MultiPoly<C>>> = vec![vec![zero(); size]; size];
    for r in 0..n {
        for k in 0..=m {
            mat[r][r + k] = f.coeff(m - k);
        }
    }
    for r in 0..m {
        for k in 0..=n {
            mat[n + r][r + k] = g.coeff(n - k);
        }
    }

    let order = MonoOrder::graded(&reg);
    let mut sign_flip = false;
    let mut prev: Option<MultiPoly<C>> = None; // previous pivot, None = 1
    for k in 0..size - 1 {
        if mat[k][k].is_zero() {
            match (k + 1..size).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => {
                    mat.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return Ok(zero()), // singular: resultant vanishes
            }
        }
        let pivot = mat[k][k].clone();
        for i in k + 1..size {
            let factor = mat[i][k].clone();
            for j in k + 1..size {
                let num = pivot.mul(&mat[i][j]).sub(&factor.mul(&mat[k][j]));
                mat[i][j] = match &prev {
                    None => num,
                    Some(p) => num.div_exact(p, &order)?,
                };
            }
            mat[i][k] = zero();
        }
        prev = Some(pivot);
    }
    let det = mat[size - 1][size - 1].clone();
    Ok(if sign_flip { det.neg() } else { det })
}

/// Discriminant of `f` in `x`:
/// `disc(f) = (−1)^{n(n−1)/2} · Res(f, f′) / lc(f)` for `n = deg f ≥ 1`.
pub fn discriminant<C: Coeff>(f: &UniPoly<C>) -> Result<MultiPoly<C>, MpolyError> {
    let n = f.degree().ok_or(MpolyError::ZeroPolynomial)?;
    if n == 0 {
        return Err(MpolyError::ZeroPolynomial);
    }
    let fp = f.derivative();
    if fp.is_zero() {
        return Err(MpolyError::ZeroPolynomial);
    }
    let res = resultant(f, &fp)?;
    let lc = f.leading_coeff().unwrap();
    let order = MonoOrder::graded(f.registry());
    let quotient = res.div_exact(lc, &order)?;
    Ok(if (n * (n - 1) / 2) % 2 == 1 {
        quotient.neg()
    } else {
        quotient
    })
}

#[cfg(test)]
mod tests {
    use super::super::VarRegistry;
    use super::*;
    use crate::coeff::Rational;

    fn quartic_picard() -> UniPoly<Rational> {
        // x⁴ + G₂x² + G₃x + G₄
        let reg = VarRegistry::picard();
        UniPoly::new(
            reg.clone(),
            vec![
                MultiPoly::var(reg.clone(), 2),
                MultiPoly::var(reg.clone(), 1),
                MultiPoly::var(reg.clone(), 0),
                MultiPoly::zero(reg.clone()),
                MultiPoly::one(reg),
            ],
        )
    }

    #[test]
    fn derivative_and_shift() {
        let f = quartic_picard();
        let fp = f.derivative(); // 4x³ + 2G₂x + G₃
        assert_eq!(fp.degree(), Some(3));
        assert_eq!(fp.coeff(3), MultiPoly::parse(f.registry(), "4").unwrap());
        assert_eq!(fp.coeff(1), MultiPoly::parse(f.registry(), "2*G2").unwrap());
        assert_eq!(fp.coeff(0), MultiPoly::parse(f.registry(), "G3").unwrap());

        // (x+a)² − shift back: f(x+G₂) then x ↦ x−G₂ restores f.
        let a = MultiPoly::var(f.registry().clone(), 0);
        let shifted = f.compose_shift(&a);
        let restored = shifted.compose_shift(&a.neg());
        assert_eq!(restored, f);
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res(x−ξ₀, x−ξ₁) = ξ₀ − ξ₁.
        let reg = VarRegistry::xi();
        let f = UniPoly::x_minus(&MultiPoly::var(reg.clone(), 0));
        let g = UniPoly::x_minus(&MultiPoly::var(reg.clone(), 1));
        let r = resultant(&f, &g).unwrap();
        assert_eq!(r, MultiPoly::parse(&reg, "xi0 - xi1").unwrap());
    }

    #[test]
    fn discriminant_quadratic_and_cubic() {
        // disc(x² + κx + λ) = κ² − 4λ.
        let reg = VarRegistry::kappa_lambda();
        let f = UniPoly::new(
            reg.clone(),
            vec![
                MultiPoly::var(reg.clone(), 1),
                MultiPoly::var(reg.clone(), 0),
                MultiPoly::one(reg.clone()),
            ],
        );
        assert_eq!(
            discriminant(&f).unwrap(),
            MultiPoly::parse(&reg, "kappa^2 - 4*lambda").unwrap()
        );

        // disc(x³ + κx + λ) = −4κ³ − 27λ².
        let g = UniPoly::new(
            reg.clone(),
            vec![
                MultiPoly::var(reg.clone(), 1),
                MultiPoly::var(reg.clone(), 0),
                MultiPoly::zero(reg.clone()),
                MultiPoly::one(reg.clone()),
            ],
        );
        assert_eq!(
            discriminant(&g).unwrap(),
            MultiPoly::parse(&reg, "-4*kappa^3 - 27*lambda^2").unwrap()
        );
    }

    #[test]
    fn discriminant_depressed_quartic() {
        // The classical depressed-quartic discriminant in (G₂,G₃,G₄).
        let f = quartic_picard();
        let disc = discriminant(&f).unwrap();
        let expect = MultiPoly::parse(
            f.registry(),
            "16*G2^4*G4 - 4*G2^3*G3^2 - 128*G2^2*G4^2 + 144*G2*G3^2*G4 - 27*G3^4 + 256*G4^3",
        )
        .unwrap();
        assert_eq!(disc, expect);
    }

    #[test]
    fn discriminant_vanishes_on_repeated_roots() {
        // x³ − x² = x²(x−1) has a repeated root: disc = 0.
        let reg = VarRegistry::kappa_lambda();
        let f = UniPoly::new(
            reg.clone(),
            vec![
                MultiPoly::zero(reg.clone()),
                MultiPoly::zero(reg.clone()),
                MultiPoly::one(reg.clone()).neg(),
                MultiPoly::one(reg.clone()),
            ],
        );
        assert!(discriminant(&f).unwrap().is_zero());
    }

    #[test]
    fn discriminant_matches_gcd_criterion_on_specializations() {
        // disc(f) = 0 exactly when gcd(f, f′) is nonconstant, for seeded
        // random integer quartics (constant coefficients).
        fn rat_gcd_degree(mut a: Vec<Rational>, mut b: Vec<Rational>) -> usize {
            fn deg(v: &[Rational]) -> Option<usize> {
                v.iter().rposition(|c| !c.is_zero())
            }
            fn rem(mut num: Vec<Rational>, den: &[Rational]) -> Vec<Rational> {
                let dd = deg(den).unwrap();
                let lc = den[dd].clone();
                while let Some(nd) = deg(&num) {
                    if nd < dd {
                        break;
                    }
                    let q = num[nd].div(&lc).unwrap();
                    for k in 0..=dd {
                        let delta = q.mul(&den[k]);
                        num[nd - dd + k] = num[nd - dd + k].sub(&delta);
                    }
                    num[nd] = Rational::zero();
                }
                num
            }
            loop {
                match deg(&b) {
                    None => return deg(&a).unwrap_or(0),
                    Some(_) => {
                        let r = rem(a, &b);
                        a = b;
                        b = r;
                    }
                }
            }
        }

        let reg = VarRegistry::constants();
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut saw_zero = false;
        let mut saw_nonzero = false;
        for trial in 0..20 {
            // Half the trials get an engineered repeated root.
            let coeffs: Vec<i64> = (0..3).map(|_| (next() % 11) as i64 - 5).collect();
            let f = if trial % 2 == 0 {
                // (x − a)²(x² + bx + c)
                let a = coeffs[0];
                let sq = UniPoly::new(
                    reg.clone(),
                    vec![
                        MultiPoly::constant(reg.clone(), Rational::from_i64(a * a)),
                        MultiPoly::constant(reg.clone(), Rational::from_i64(-2 * a)),
                        MultiPoly::constant(reg.clone(), Rational::from_i64(1)),
                    ],
                );
                let rest = UniPoly::new(
                    reg.clone(),
                    vec![
                        MultiPoly::constant(reg.clone(), Rational::from_i64(coeffs[2])),
                        MultiPoly::constant(reg.clone(), Rational::from_i64(coeffs[1])),
                        MultiPoly::constant(reg.clone(), Rational::from_i64(1)),
                    ],
                );
                sq.mul(&rest)
            } else {
                UniPoly::new(
                    reg.clone(),
                    vec![
                        MultiPoly::constant(reg.clone(), Rational::from_i64(coeffs[0])),
                        MultiPoly::constant(reg.clone(), Rational::from_i64(coeffs[1])),
                        MultiPoly::constant(reg.clone(), Rational::from_i64(coeffs[2])),
                        MultiPoly::zero(reg.clone()),
                        MultiPoly::constant(reg.clone(), Rational::from_i64(1)),
                    ],
                )
            };
            let disc = discriminant(&f).unwrap();
            let fv: Vec<Rational> = (0..=f.degree().unwrap())
                .map(|i| {
                    f.coeff(i)
                        .constant_value()
                        .cloned()
                        .unwrap_or_else(Rational::zero)
                })
                .collect();
            let fpv: Vec<Rational> = {
                let fp = f.derivative();
                (0..=fp.degree().unwrap())
                    .map(|i| {
                        fp.coeff(i)
                            .constant_value()
                            .cloned()
                            .unwrap_or_else(Rational::zero)
                    })
                    .collect()
            };
            let gcd_deg = rat_gcd_degree(fv, fpv);
            assert_eq!(
                disc.is_zero(),
                gcd_deg > 0,
                "trial {trial}: discriminant/gcd disagreement"
            );
            if disc.is_zero() {
                saw_zero = true;
            } else {
                saw_nonzero = true;
            }
        }
        assert!(saw_zero && saw_nonzero, "test must exercise both branches");
    }
}
