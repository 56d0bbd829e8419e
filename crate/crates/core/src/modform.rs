//! q-expansions of the weight-one and weight-three Eisenstein series with
//! character of conductor 3, the classical weight-four Eisenstein series,
//! and the derived forms κ, λ, Δ₆, j_G and the A₂ theta series — together
//! with exact verification of the identities relating them.
//!
//! All series live in ℚ[[q]] truncated at a chosen order, with exact
//! rational coefficients; the identity checks compare expansions
//! coefficient by coefficient.

use crate::coeff::{CoeffError, Rational};
use crate::curves::IdentityReport;

/// Errors from q-expansion construction and identity verification.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModformError {
    #[error("unknown form name `{0}`")]
    UnknownForm(String),
    #[error("unknown identity id `{0}`")]
    UnknownIdentity(String),
    #[error("order {requested} outside supported range {min}..={max}")]
    BadOrder { requested: u32, min: u32, max: u32 },
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Default truncation order for identity checks.
pub const DEFAULT_ORDER: u32 = 200;

/// A truncated q-expansion `Σ_{n < order} aₙ qⁿ` with exact rational
/// coefficients and a weight tag. The topological degree of a weight-w
/// form is 2w.
#[derive(Debug, Clone, PartialEq)]
pub struct QExpansion {
    coeffs: Vec<Rational>,
    weight: i64,
}

impl QExpansion {
    /// Build from explicit coefficients.
    pub fn new(coeffs: Vec<Rational>, weight: i64) -> Self {
        assert!(!coeffs.is_empty(), "order must be at least 1");
        QExpansion { coeffs, weight }
    }

    /// The constant series 1, of the given weight (weight 0 for a true
    /// constant; nonzero weights tag intermediate factors).
    pub fn one(order: u32, weight: i64) -> Self {
        let mut coeffs = vec![Rational::zero(); order as usize];
        coeffs[0] = Rational::one();
        QExpansion { coeffs, weight }
    }

    pub fn order(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// Coefficient of qⁿ (n < order).
    pub fn coeff(&self, n: u32) -> &Rational {
        &self.coeffs[n as usize]
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.weight, other.weight, "weights must agree for sums");
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.coeffs[i].add(&other.coeffs[i]))
            .collect();
        QExpansion {
            coeffs,
            weight: self.weight,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.weight, other.weight, "weights must agree for sums");
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.coeffs[i].sub(&other.coeffs[i]))
            .collect();
        QExpansion {
            coeffs,
            weight: self.weight,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QExpansion {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
            weight: self.weight,
        }
    }

    /// Cauchy product, truncated at the shorter order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut coeffs = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        QExpansion {
            coeffs,
            weight: self.weight + other.weight,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = QExpansion::one(self.order(), 0);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc.weight = self.weight * k as i64;
        acc
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inverse(&self) -> Result<Self, ModformError> {
        let inv0 = self.coeffs[0].inv()?;
        let n = self.coeffs.len();
        let mut coeffs = vec![Rational::zero(); n];
        coeffs[0] = inv0.clone();
        for k in 1..n {
            let mut s = Rational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    s = s.add(&self.coeffs[j].mul(&coeffs[k - j]));
                }
            }
            coeffs[k] = s.neg().mul(&inv0);
        }
        Ok(QExpansion {
            coeffs,
            weight: -self.weight,
        })
    }

    /// Substitute q ↦ q^k (the expansion of f(kτ)).
    pub fn dilate(&self, k: u32) -> Self {
        assert!(k >= 1);
        let n = self.coeffs.len();
        let mut coeffs = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            let j = i * k as usize;
            if j >= n {
                break;
            }
            coeffs[j] = a.clone();
        }
        QExpansion {
            coeffs,
            weight: self.weight,
        }
    }

    /// Every coefficient an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|a| a.is_integer())
    }

    /// The coefficients as a comma-separated list "a0, a1, ...".
    pub fn comma_list(&self) -> String {
        self.coeffs
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// The quadratic character of conductor 3 on d.
fn chi3(d: u64) -> i64 {
    match d % 3 {
        1 => 1,
        2 => -1,
        _ => 0,
    }
}

/// Twisted divisor sums `Σ_{d|n} χ(d)·d^r` for all n < order, by sieve.
fn sieved_divisor_sums(order: u32, r: u32, twisted: bool) -> Vec<i64> {
    let n = order as usize;
    let mut acc = vec![0i64; n];
    for d in 1..n {
        let weight = if twisted { chi3(d as u64) } else { 1 } * (d as i64).pow(r);
        if weight == 0 {
            continue;
        }
        let mut m = d;
        while m < n {
            acc[m] += weight;
            m += d;
        }
    }
    acc
}

fn eisenstein(order: u32, r: u32, twisted: bool, factor: i64, weight: i64) -> QExpansion {
    let sums = sieved_divisor_sums(order, r, twisted);
    let mut coeffs: Vec<Rational> = sums
        .iter()
        .map(|&s| Rational::from_i64(s * factor))
        .collect();
    coeffs[0] = Rational::one();
    QExpansion::new(coeffs, weight)
}

/// `E₁ = 1 + 6 Σ_{n≥1} (Σ_{d|n} χ(d)) qⁿ`, weight 1.
pub fn e1(order: u32) -> QExpansion {
    eisenstein(order, 0, true, 6, 1)
}

/// `E₃ = 1 − 9 Σ_{n≥1} (Σ_{d|n} χ(d)d²) qⁿ`, weight 3.
pub fn e3(order: u32) -> QExpansion {
    eisenstein(order, 2, true, -9, 3)
}

/// The classical `E₄ = 1 + 240 Σ σ₃(n) qⁿ`, weight 4.
pub fn e4(order: u32) -> QExpansion {
    eisenstein(order, 3, false, 240, 4)
}

/// `κ = 2E₃ − E₁³`, weight 3.
pub fn kappa_q(order: u32) -> QExpansion {
    e3(order)
        .scale(&Rational::from_i64(2))
        .sub(&e1(order).pow(3))
}

/// `λ = E₁⁶`, weight 6.
pub fn lambda_q(order: u32) -> QExpansion {
    e1(order).pow(6)
}

/// `Δ₆ = E₃(E₁³ − E₃)/27 = q + O(q²)`, weight 6.
pub fn delta6_q(order: u32) -> QExpansion {
    let e3 = e3(order);
    let cube = e1(order).pow(3);
    e3.mul(&cube.sub(&e3)).scale(&Rational::new(1, 27))
}

/// The hauptmodul-normalized invariant `j_G = λ/(2κ)²`, weight 0, with
/// value ¼ at the cusp.
pub fn j_g(order: u32) -> Result<QExpansion, ModformError> {
    let two_kappa = kappa_q(order).scale(&Rational::from_i64(-2));
    Ok(lambda_q(order).mul(&two_kappa.pow(2).inverse()?))
}

/// Theta series of the hexagonal lattice: `Σ_{(m,n)∈ℤ²} q^{m²+mn+n²}`,
/// weight 1, computed by direct lattice enumeration.
pub fn theta_a2(order: u32) -> QExpansion {
    let n = order as usize;
    let mut counts = vec![0i64; n];
    // Q(m, k) = m² + mk + k² = (m + k/2)² + 3k²/4 ≥ 3·max(m,k)²/4, so a
    // radius of ⌈2√(order/3)⌉ + 1 ≤ isqrt(4·order/3) + 2 covers every
    // value below order.
    let radius = (4 * order as u64 / 3).isqrt() as i64 + 2;
    for m in -radius..=radius {
        for k in -radius..=radius {
            let q = m * m + m * k + k * k;
            if (q as u64) < order as u64 {
                counts[q as usize] += 1;
            }
        }
    }
    QExpansion::new(counts.into_iter().map(Rational::from_i64).collect(), 1)
}

/// Named forms accepted by [`form_by_name`] (and the CLI).
pub const FORM_NAMES: &[&str] = &[
    "E1", "E3", "E4", "e4", "kappa", "lambda", "Delta6", "jG", "thetaA2",
];

/// Look up a form by name. `e4` is the level-3 combination
/// `9E₄(3τ) − E₄(τ)`; the capitalized `E4` is the classical series.
pub fn form_by_name(name: &str, order: u32) -> Result<QExpansion, ModformError> {
    if !(2..=2000).contains(&order) {
        return Err(ModformError::BadOrder {
            requested: order,
            min: 2,
            max: 2000,
        });
    }
    match name {
        "E1" => Ok(e1(order)),
        "E3" => Ok(e3(order)),
        "E4" => Ok(e4(order)),
        "e4" => Ok(e4(order)
            .dilate(3)
            .scale(&Rational::from_i64(9))
            .sub(&e4(order))),
        "kappa" => Ok(kappa_q(order)),
        "lambda" => Ok(lambda_q(order)),
        "Delta6" => Ok(delta6_q(order)),
        "jG" => j_g(order),
        "thetaA2" => Ok(theta_a2(order)),
        other => Err(ModformError::UnknownForm(other.to_string())),
    }
}

/// Identity ids accepted by [`check_modform_identity`].
pub const MODFORM_IDENTITY_IDS: &[&str] = &[
    "e4-eisenstein",
    "kappa-square",
    "theta-a2",
    "delta6-integral",
    "j-at-cusp",
];

/// Verify one named q-expansion identity exactly at the default order
/// (Δ₆ integrality is checked deeper, through q⁵⁰⁰).
pub fn check_modform_identity(id: &str) -> Result<IdentityReport, ModformError> {
    let order = DEFAULT_ORDER;
    let head = |f: &QExpansion| {
        let k = f.order().min(6);
        let prefix = (0..k)
            .map(|n| f.coeff(n).to_string())
            .collect::<Vec<_>>()
            .join(", ");
        format!("{prefix}, ... ({} terms)", f.order())
    };
    let report = |pass: bool, lhs: String, rhs: String, witness: Option<String>| IdentityReport {
        id: id.to_string(),
        pass,
        lhs,
        rhs,
        witness,
    };
    match id {
        "e4-eisenstein" => {
            // 9E₄(3τ) − E₄(τ) = 8E₁(2E₃ − E₁³): the level-3 Eisenstein
            // combination in terms of the character-3 series.
            let e4 = e4(order);
            let lhs = e4.dilate(3).scale(&Rational::from_i64(9)).sub(&e4);
            let e1 = e1(order);
            let rhs = e1
                .mul(
                    &e3(order)
                        .scale(&Rational::from_i64(2))
                        .sub(&e1.pow(3)),
                )
                .scale(&Rational::from_i64(8));
            Ok(report(lhs == rhs, head(&lhs), head(&rhs), None))
        }
        "kappa-square" => {
            // κ² = λ − 108Δ₆ as q-expansions.
            let lhs = kappa_q(order).pow(2);
            let rhs = lambda_q(order).sub(&delta6_q(order).scale(&Rational::from_i64(108)));
            Ok(report(lhs == rhs, head(&lhs), head(&rhs), None))
        }
        "theta-a2" => {
            // The hexagonal lattice theta series is E₁.
            let lhs = theta_a2(order);
            let rhs = e1(order);
            Ok(report(lhs == rhs, head(&lhs), head(&rhs), None))
        }
        "delta6-integral" => {
            // Δ₆ ∈ ℤ[[q]] with Δ₆ = q + O(q²), checked through q⁵⁰⁰.
            let d = delta6_q(500);
            let pass = d.is_integral() && d.coeff(0).is_zero() && d.coeff(1).is_one();
            Ok(report(
                pass,
                head(&d),
                "integer coefficients, a0 = 0, a1 = 1".to_string(),
                None,
            ))
        }
        "j-at-cusp" => {
            // j_G = λ/(2κ)² takes the value ¼ at the cusp q = 0.
            let j = j_g(order)?;
            let quarter = Rational::new(1, 4);
            Ok(report(
                *j.coeff(0) == quarter,
                j.coeff(0).to_string(),
                quarter.to_string(),
                None,
            ))
        }
        _ => Err(ModformError::UnknownIdentity(id.to_string())),
    }
}

/// Leading-coefficient matrix of the weight-6k monomials in λ and Δ₆:
/// row b holds the first k+1 coefficients of `λ^{k−b} Δ₆^b`. The basis is
/// triangular with unit diagonal, certifying that the forms expand
/// integrally and independently degree by degree.
pub fn integral_basis_matrix(k: u32) -> Result<Vec<Vec<Rational>>, ModformError> {
    if !(1..=10).contains(&k) {
        return Err(ModformError::BadOrder {
            requested: k,
            min: 1,
            max: 10,
        });
    }
    let order = k + 1;
    let lam = lambda_q(order);
    let del = delta6_q(order);
    let mut rows = Vec::with_capacity(order as usize);
    for b in 0..=k {
        let f = lam.pow(k - b).mul(&del.pow(b));
        rows.push((0..order).map(|n| f.coeff(n).clone()).collect());
    }
    Ok(rows)
}

/// True when the matrix of [`integral_basis_matrix`] is upper triangular
/// with unit diagonal and integer entries.
pub fn integral_basis_check(k: u32) -> Result<bool, ModformError> {
    let rows = integral_basis_matrix(k)?;
    for (b, row) in rows.iter().enumerate() {
        for (n, entry) in row.iter().enumerate() {
            if n < b && !entry.is_zero() {
                return Ok(false);
            }
            if n == b && !entry.is_one() {
                return Ok(false);
            }
            if !entry.is_integer() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn eisenstein_low_coefficients() {
        let e1 = e1(12);
        assert_eq!(*e1.coeff(0), r(1));
        assert_eq!(*e1.coeff(1), r(6));
        assert_eq!(*e1.coeff(2), r(0));
        assert_eq!(*e1.coeff(3), r(6));
        assert_eq!(*e1.coeff(4), r(6));
        assert_eq!(*e1.coeff(7), r(12));
        let e3 = e3(12);
        assert_eq!(*e3.coeff(0), r(1));
        assert_eq!(*e3.coeff(1), r(-9));
        assert_eq!(*e3.coeff(2), r(27));
        assert_eq!(*e3.coeff(3), r(-9));
        let e4 = e4(12);
        assert_eq!(*e4.coeff(1), r(240));
        assert_eq!(*e4.coeff(2), r(240 * 9));
    }

    #[test]
    fn sieve_matches_naive_divisor_sums() {
        let order = 50u32;
        let twisted = sieved_divisor_sums(order, 2, true);
        let plain = sieved_divisor_sums(order, 3, false);
        for n in 1..order as usize {
            let mut t = 0i64;
            let mut p = 0i64;
            for d in 1..=n {
                if n % d == 0 {
                    t += chi3(d as u64) * (d as i64).pow(2);
                    p += (d as i64).pow(3);
                }
            }
            assert_eq!(twisted[n], t, "twisted sum at {n}");
            assert_eq!(plain[n], p, "sigma_3 at {n}");
        }
    }

    #[test]
    fn product_matches_direct_convolution() {
        let a = e1(50);
        let b = e3(50);
        let prod = a.mul(&b);
        for n in 0..50u32 {
            let mut s = Rational::zero();
            for i in 0..=n {
                s = s.add(&a.coeff(i).mul(b.coeff(n - i)));
            }
            assert_eq!(*prod.coeff(n), s, "coefficient {n}");
        }
        assert_eq!(prod.weight(), 4);
    }

    #[test]
    fn inverse_is_a_two_sided_unit() {
        let f = e1(40);
        let g = f.inverse().unwrap();
        let prod = f.mul(&g);
        assert_eq!(*prod.coeff(0), r(1));
        for n in 1..40 {
            assert!(prod.coeff(n).is_zero(), "coefficient {n} nonzero");
        }
        assert_eq!(prod.weight(), 0);
    }

    #[test]
    fn named_identities_hold() {
        for id in MODFORM_IDENTITY_IDS {
            let report = check_modform_identity(id).unwrap();
            assert!(report.pass, "{id}: {} vs {}", report.lhs, report.rhs);
        }
        assert!(matches!(
            check_modform_identity("nope"),
            Err(ModformError::UnknownIdentity(_))
        ));
    }

    #[test]
    fn cusp_values_and_lambda_head() {
        assert_eq!(*kappa_q(8).coeff(0), r(1));
        let lam = lambda_q(8);
        assert_eq!(*lam.coeff(0), r(1));
        assert_eq!(*lam.coeff(1), r(36));
        let del = delta6_q(8);
        assert!(del.coeff(0).is_zero());
        assert_eq!(*del.coeff(1), r(1));
    }

    #[test]
    fn integral_basis_is_triangular() {
        let m = integral_basis_matrix(1).unwrap();
        assert_eq!(m, vec![vec![r(1), r(36)], vec![r(0), r(1)]]);
        for k in 1..=10 {
            assert!(integral_basis_check(k).unwrap(), "k = {k}");
        }
        assert!(integral_basis_matrix(0).is_err());
        assert!(integral_basis_matrix(11).is_err());
    }

    #[test]
    fn forms_resolve_by_name() {
        for name in FORM_NAMES {
            let f = form_by_name(name, 16).unwrap();
            assert_eq!(f.order(), 16);
        }
        assert!(matches!(
            form_by_name("E2", 16),
            Err(ModformError::UnknownForm(_))
        ));
        assert!(matches!(
            form_by_name("E1", 1),
            Err(ModformError::BadOrder { .. })
        ));
        // The comma format drives the expansion printer; the head of Δ₆
        // doubles as a cross-check against its eta-product expansion
        // q·Π(1−qⁿ)⁶(1−q³ⁿ)⁶ = q − 6q² + 9q³ + 4q⁴ + O(q⁵).
        let d = form_by_name("Delta6", 5).unwrap();
        assert_eq!(d.comma_list(), "0, 1, -6, 9, 4");
    }

    #[test]
    fn weights_track_topological_degree() {
        // Topological degree 2w: κ ↦ 6, λ ↦ 12, Δ₆ ↦ 12 match the
        // variable registry weights used on the polynomial side.
        assert_eq!(2 * kappa_q(4).weight(), 6);
        assert_eq!(2 * lambda_q(4).weight(), 12);
        assert_eq!(2 * delta6_q(4).weight(), 12);
        assert_eq!(j_g(4).unwrap().weight(), 0);
    }
}
