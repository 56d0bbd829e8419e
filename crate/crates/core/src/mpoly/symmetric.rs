//! Symmetric-function conversion between split roots ξᵢ and elementary
//! symmetric coordinates σₖ.
//!
//! `express_in_elementary` is the classical leading-term subtraction: a
//! symmetric polynomial's lex-leading exponent vector is weakly decreasing,
//! so peeling off `c·e₁^{a₁−a₂}·e₂^{a₂−a₃}·…` strictly lowers the leading
//! monomial and terminates with the (unique) σ-coordinates. The split-root
//! discriminant `Π_{i<j}(ξᵢ−ξⱼ)²` coming out as
//! `σ₁²σ₂² − 4σ₂³ − 4σ₁³σ₃ + 18σ₁σ₂σ₃ − 27σ₃²` is the canonical example.

use super::{Mono, MonoOrder, MpolyError, MultiPoly, VarRegistry};
use crate::coeff::Rational;
use std::sync::Arc;

/// The elementary symmetric polynomial `e_k` in all variables of `reg`
/// (`e_0 = 1`).
pub fn elementary_symmetric(reg: &Arc<VarRegistry>, k: usize) -> MultiPoly<Rational> {
    let n = reg.arity();
    assert!(k <= n, "e_{k} of {n} variables");
    let mut out = MultiPoly::zero(reg.clone());
    // Iterate over k-subsets of {0..n} (n ≤ 4, so brute force over masks).
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let mut exps = [0u16; super::MAX_ARITY];
        for (i, e) in exps.iter_mut().enumerate().take(n) {
            if mask & (1 << i) != 0 {
                *e = 1;
            }
        }
        out.add_term(Mono::from_exps(&exps[..n]), Rational::one());
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            go(prefix, rest, out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}

fn apply_permutation(f: &MultiPoly<Rational>, perm: &[usize]) -> MultiPoly<Rational> {
    let n = f.registry().arity();
    let mut out = MultiPoly::zero(f.registry().clone());
    for (m, c) in f.iter_terms() {
        let mut exps = vec![0u16; n];
        for (i, &target) in perm.iter().enumerate() {
            exps[target] = m.exp(i);
        }
        out.add_term(Mono::from_exps(&exps), c.clone());
    }
    out
}

/// True when `f` is invariant under every permutation of its variables.
pub fn is_symmetric(f: &MultiPoly<Rational>) -> bool {
    permutations(f.registry().arity())
        .iter()
        .all(|p| apply_permutation(f, p) == *f)
}

/// Rewrite a symmetric polynomial in the ξ-variables as a polynomial in
/// the elementary symmetric coordinates of `sigma_reg` (σₖ ↦ e_k).
/// Fails with [`MpolyError::NotSymmetric`] if `f` is not symmetric.
pub fn express_in_elementary(
    f: &MultiPoly<Rational>,
    sigma_reg: &Arc<VarRegistry>,
) -> Result<MultiPoly<Rational>, MpolyError> {
    let n = f.registry().arity();
    if sigma_reg.arity() != n {
        return Err(MpolyError::BadRegistry(format!(
            "σ-registry arity {} does not match {} roots",
            sigma_reg.arity(),
            n
        )));
    }
    if !is_symmetric(f) {
        return Err(MpolyError::NotSymmetric);
    }
    let e: Vec<MultiPoly<Rational>> = (1..=n)
        .map(|k| elementary_symmetric(f.registry(), k))
        .collect();
    let lex = MonoOrder::lex(f.registry());
    let mut rest = f.clone();
    let mut out = MultiPoly::zero(sigma_reg.clone());
    while let Some((lm, lc)) = rest.leading(&lex) {
        let c = lc.clone();
        // Symmetric ⇒ the lex-leading exponents are weakly decreasing.
        let exps: Vec<u16> = (0..n).map(|i| lm.exp(i)).collect();
        debug_assert!(exps.windows(2).all(|w| w[0] >= w[1]));
        let mut sigma_exps = vec![0u16; n];
        for i in 0..n {
            let next = if i + 1 < n { exps[i + 1] } else { 0 };
            sigma_exps[i] = exps[i] - next;
        }
        out.add_term(Mono::from_exps(&sigma_exps), c.clone());
        // rest −= c · Π e_{i+1}^{sigma_exps[i]}
        let mut product = MultiPoly::constant(f.registry().clone(), c);
        for (i, &se) in sigma_exps.iter().enumerate() {
            if se > 0 {
                product = product.mul(&e[i].pow(se as u32));
            }
        }
        rest = rest.sub(&product);
    }
    Ok(out)
}

/// Substitute σₖ ↦ e_k(ξ): the inverse direction of
/// [`express_in_elementary`].
pub fn expand_elementary(
    g: &MultiPoly<Rational>,
    xi_reg: &Arc<VarRegistry>,
) -> Result<MultiPoly<Rational>, MpolyError> {
    let n = g.registry().arity();
    if xi_reg.arity() != n {
        return Err(MpolyError::BadRegistry(format!(
            "ξ-registry arity {} does not match {} elementary coordinates",
            xi_reg.arity(),
            n
        )));
    }
    let e: Vec<MultiPoly<Rational>> = (1..=n)
        .map(|k| elementary_symmetric(xi_reg, k))
        .collect();
    let refs: Vec<&MultiPoly<Rational>> = e.iter().collect();
    g.map_vars(xi_reg.clone(), &refs)
}
