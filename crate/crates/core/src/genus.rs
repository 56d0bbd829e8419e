//! The four genus families and their Hazewinkel generator images.
//!
//! Each family is described by the derivative of its formal logarithm,
//! `log′ = (1 + Σₖ cₖuᵏ)^e`, given as the exponent table `{k ↦ cₖ}` and the
//! fractional exponent `e`:
//!
//! * `legendre`: `(1 − 2κu³ + λu⁶)^{−1/2}` over ℚ[κ,λ] — the generating
//!   function of the homogeneous Legendre polynomials in `u³`;
//! * `picard`: `(1 + G₂u⁶ + G₃u⁹ + G₄u¹²)^{−1/3}` over ℚ[G₂,G₃,G₄];
//! * `shiga`: `((1−ξ₀u³)(1−ξ₁u³)(1−ξ₂u³))^{−1/3}`, expanded into
//!   elementary symmetric functions σ₁,σ₂,σ₃ of the roots;
//! * `supersingular`: `(1 − u⁹)^{−1/3}` with constant coefficients.
//!
//! `log′` is homogeneous of weighted degree 0 when `u` carries weight −2,
//! so the coefficient of `uᵏ` has weighted degree `2k` and the Hazewinkel
//! images vₙ land in weighted degree `2(pⁿ−1)`.

use crate::coeff::{p_valuation, Rational, Valuation};
use crate::fgl::{hazewinkel_images, FglError, HazewinkelImages};
use crate::mpoly::express_in_elementary;
use crate::mpoly::{MpolyError, MultiPoly, VarImage, VarRegistry};
use crate::pseries::{isolated_coeff_fractional_power, PseriesError, TruncatedSeries};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Errors from genus constructions.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenusError {
    #[error("unsupported prime {0}: need a prime ≡ 1 mod 3, not 2 or 3")]
    BadPrime(u64),
    #[error("unsupported prime {0}: the supersingular probe needs 9 ∤ p − 1 (else v₁ ≠ 0)")]
    SupersingularSlope(u64),
    #[error("height {0} out of range (1..=3)")]
    BadHeight(usize),
    #[error("v_{index} is not {p}-local: coefficient of {monomial} has valuation {valuation}")]
    IntegralityViolation {
        p: u64,
        index: usize,
        monomial: String,
        valuation: i64,
    },
    #[error(transparent)]
    Fgl(#[from] FglError),
    #[error(transparent)]
    Mpoly(#[from] MpolyError),
    #[error(transparent)]
    Pseries(#[from] PseriesError),
}

/// The four families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenusFamily {
    Legendre,
    Picard,
    Shiga,
    Supersingular,
}

impl GenusFamily {
    pub const ALL: [GenusFamily; 4] = [
        GenusFamily::Legendre,
        GenusFamily::Picard,
        GenusFamily::Shiga,
        GenusFamily::Supersingular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GenusFamily::Legendre => "legendre",
            GenusFamily::Picard => "picard",
            GenusFamily::Shiga => "shiga",
            GenusFamily::Supersingular => "supersingular",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        GenusFamily::ALL.into_iter().find(|f| f.name() == s)
    }
}

impl std::fmt::Display for GenusFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A genus presented through its logarithm derivative
/// `log′ = (1 + Σ table[k]·uᵏ)^e`.
#[derive(Debug, Clone)]
pub struct GenusSpec {
    family: GenusFamily,
    reg: Arc<VarRegistry>,
    table: BTreeMap<u32, MultiPoly<Rational>>,
    exponent: Rational,
}

impl GenusSpec {
    /// The canonical spec for a family.
    pub fn new(family: GenusFamily) -> Self {
        match family {
            GenusFamily::Legendre => {
                let reg = VarRegistry::kappa_lambda();
                let mut table = BTreeMap::new();
                table.insert(3, MultiPoly::parse(&reg, "-2*kappa").unwrap());
                table.insert(6, MultiPoly::parse(&reg, "lambda").unwrap());
                GenusSpec {
                    family,
                    reg,
                    table,
                    exponent: Rational::new(-1, 2),
                }
            }
            GenusFamily::Picard => {
                let reg = VarRegistry::picard();
                let mut table = BTreeMap::new();
                table.insert(6, MultiPoly::parse(&reg, "G2").unwrap());
                table.insert(9, MultiPoly::parse(&reg, "G3").unwrap());
                table.insert(12, MultiPoly::parse(&reg, "G4").unwrap());
                GenusSpec {
                    family,
                    reg,
                    table,
                    exponent: Rational::new(-1, 3),
                }
            }
            GenusFamily::Shiga => {
                // Expand Π(1 − ξᵢu³) over the roots and push each u-coefficient
                // through the elementary-symmetric identification ξ ↦ σ.
                let xi = VarRegistry::xi();
                let sigma = VarRegistry::sigma();
                let mut product: BTreeMap<u32, MultiPoly<Rational>> = BTreeMap::new();
                product.insert(0, MultiPoly::one(xi.clone()));
                for i in 0..3 {
                    let root = MultiPoly::variable(xi.clone(), i, &Rational::one());
                    let mut next: BTreeMap<u32, MultiPoly<Rational>> = BTreeMap::new();
                    for (&d, c) in &product {
                        next.entry(d)
                            .and_modify(|acc: &mut MultiPoly<Rational>| *acc = acc.add(c))
                            .or_insert_with(|| c.clone());
                        let shifted = c.mul(&root).neg();
                        next.entry(d + 3)
                            .and_modify(|acc| *acc = acc.add(&shifted))
                            .or_insert(shifted);
                    }
                    product = next;
                }
                let mut table = BTreeMap::new();
                for (d, c) in product {
                    if d == 0 {
                        continue;
                    }
                    let in_sigma = express_in_elementary(&c, &sigma)
                        .expect("product coefficients are symmetric");
                    table.insert(d, in_sigma);
                }
                GenusSpec {
                    family,
                    reg: sigma,
                    table,
                    exponent: Rational::new(-1, 3),
                }
            }
            GenusFamily::Supersingular => {
                let reg = VarRegistry::constants();
                let mut table = BTreeMap::new();
                table.insert(9, MultiPoly::constant(reg.clone(), Rational::from_i64(-1)));
                GenusSpec {
                    family,
                    reg,
                    table,
                    exponent: Rational::new(-1, 3),
                }
            }
        }
    }

    pub fn family(&self) -> GenusFamily {
        self.family
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn exponent(&self) -> &Rational {
        &self.exponent
    }

    pub fn table(&self) -> &BTreeMap<u32, MultiPoly<Rational>> {
        &self.table
    }

    /// The full logarithm `∫ log′` to the given truncation.
    pub fn log_series(&self, trunc: u32) -> Result<TruncatedSeries, GenusError> {
        let base_trunc = (trunc.saturating_sub(1)).max(1);
        let need = self.table.keys().max().copied().unwrap_or(0) + 1;
        let mut base = TruncatedSeries::one(self.reg.clone(), base_trunc.max(need));
        for (&d, c) in &self.table {
            base.set_coeff(d, c.clone());
        }
        Ok(base
            .fractional_power(&self.exponent)?
            .integrate()
            .truncate(trunc))
    }
}

/// The homogeneous Legendre polynomial `P_k(κ,λ)` via the recurrence
/// `(k+1)P_{k+1} = (2k+1)κP_k − kλP_{k−1}` with `P₀ = 1`, `P₁ = κ`. These
/// are the coefficients of the generating function `(1−2κt+λt²)^{−1/2}`.
pub fn legendre_poly(k: usize) -> MultiPoly<Rational> {
    let reg = VarRegistry::kappa_lambda();
    let kappa = MultiPoly::variable(reg.clone(), 0, &Rational::one());
    let lambda = MultiPoly::variable(reg.clone(), 1, &Rational::one());
    let mut prev = MultiPoly::one(reg.clone()); // P₀
    if k == 0 {
        return prev;
    }
    let mut cur = kappa.clone(); // P₁
    for m in 1..k {
        let m_i = m as i64;
        let a = cur
            .mul(&kappa)
            .scale(&Rational::from_i64(2 * m_i + 1));
        let b = prev.mul(&lambda).scale(&Rational::from_i64(m_i));
        let next = a.sub(&b).scale(&Rational::new(1, m_i + 1));
        prev = cur;
        cur = next;
    }
    cur
}

/// The coefficient of `u^exponent` in `log′_φ`, computed by the isolated
/// composition walk (no full series expansion).
pub fn genus_log_coeff(spec: &GenusSpec, exponent: u32) -> MultiPoly<Rational> {
    isolated_coeff_fractional_power(&spec.table, &spec.reg, &spec.exponent, exponent)
}

/// The logarithm coefficients `ℓₖ = [u^{pᵏ}] log_φ = [u^{pᵏ−1}] log′_φ / pᵏ`
/// for `k = 1..=n`.
pub fn ell_list(spec: &GenusSpec, p: u64, n: usize) -> Result<Vec<MultiPoly<Rational>>, GenusError> {
    check_prime(p)?;
    if n == 0 || n > 3 {
        return Err(GenusError::BadHeight(n));
    }
    let mut out = Vec::with_capacity(n);
    for k in 1..=n as u32 {
        let pk = p.pow(k);
        let coeff = genus_log_coeff(spec, (pk - 1) as u32);
        out.push(coeff.scale(&Rational::new(1, pk as i64)));
    }
    Ok(out)
}

/// The images of the Hazewinkel generators v₁..vₙ under the genus. The
/// image theorems make every vᵢ p-local, so a non-p-local coefficient is
/// reported as a hard error (it would signal an implementation bug).
pub fn genus_v(spec: &GenusSpec, p: u64, n: usize) -> Result<HazewinkelImages, GenusError> {
    let ell = ell_list(spec, p, n)?;
    let images = hazewinkel_images(&ell, p)?;
    for (idx, vi) in images.v.iter().enumerate() {
        if let Some((val, mono)) = vi.min_p_valuation(p).map_err(FglError::from)? {
            if val < 0 {
                return Err(GenusError::IntegralityViolation {
                    p,
                    index: idx + 1,
                    monomial: mono.text(spec.reg.as_ref()),
                    valuation: val,
                });
            }
        }
    }
    Ok(images)
}

/// Move an even polynomial from ℚ[κ,λ] to ℚ[λ,Δ₆] through
/// `κ² ↦ λ − 108Δ₆` (and `λ ↦ λ`). Odd κ-exponents are rejected.
pub fn legendre_to_lambda_delta(
    f: &MultiPoly<Rational>,
) -> Result<MultiPoly<Rational>, MpolyError> {
    let target = VarRegistry::lambda_delta6();
    let image = MultiPoly::parse(&target, "lambda - 108*Delta6")?;
    let lambda = MultiPoly::variable(target.clone(), 0, &Rational::one());
    f.map_vars_with_squares(
        target.clone(),
        &[VarImage::Square(&image), VarImage::Direct(&lambda)],
    )
}

/// Outcome of the supersingular height probe at a prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupersingularProbe {
    pub prime: u64,
    pub v1_is_zero: bool,
    pub v2_is_zero: bool,
    /// `val_p` of the coefficient of `u^{p³−1}` in `(1−u⁹)^{−1/3}`.
    pub valuation: Valuation,
    /// Height is exactly 3 iff the valuation is 2 (then v₃ = p·ℓ₃ is a
    /// p-adic unit).
    pub height_three: bool,
}

/// Probe the supersingular family at `p`: requires `p ≡ 1 mod 3` and
/// `9 ∤ p−1` (so `u⁹` has the right slope), checks `v₁ = v₂ = 0` exactly,
/// and measures the valuation that decides height 3.
pub fn supersingular_height_probe(p: u64) -> Result<SupersingularProbe, GenusError> {
    check_prime(p)?;
    if (p - 1) % 9 == 0 {
        return Err(GenusError::SupersingularSlope(p));
    }
    let spec = GenusSpec::new(GenusFamily::Supersingular);
    let images = genus_v(&spec, p, 3)?;
    let v1_is_zero = images.v[0].is_zero();
    let v2_is_zero = images.v[1].is_zero();
    // v₃ = p·ℓ₃ once v₁ = v₂ = 0, so probe the raw series coefficient.
    let coeff = genus_log_coeff(&spec, (p.pow(3) - 1) as u32);
    let valuation = match coeff.constant_value() {
        None => Valuation::Infinite,
        Some(c) => p_valuation(c, p).map_err(FglError::from)?,
    };
    Ok(SupersingularProbe {
        prime: p,
        v1_is_zero,
        v2_is_zero,
        valuation,
        height_three: v1_is_zero && v2_is_zero && valuation == Valuation::Finite(2),
    })
}

fn check_prime(p: u64) -> Result<(), GenusError> {
    if p < 5 || !crate::coeff::is_prime_u64(p) || p % 3 != 1 {
        return Err(GenusError::BadPrime(p));
    }
    Ok(())
}
