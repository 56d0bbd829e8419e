//! taf-core: exact-arithmetic formal group laws for curve families, and
//! Landweber exactness certification.
//!
//! The crate builds one-dimensional formal group laws from the logarithms
//! attached to four genera — a hyperelliptic (Legendre-type) family, the
//! Picard family, a level-structure family, and a fixed supersingular
//! probe — computes their Hazewinkel generator images v₁, v₂, v₃, and
//! certifies Landweber exactness of the resulting MU-module functors at the
//! split primes 7 and 13. Side chapters verify the q-expansion identities
//! behind the hyperelliptic family and the discriminant / degeneration /
//! restriction identities tying the three curve families together.
//!
//! Everything is exact: coefficients are arbitrary-precision rationals or
//! prime-field residues, and every check is an identity of such objects.
//! No floating point, no probabilistic identity testing.
//!
//! Module map (each layer only depends on the ones before it):
//!
//! * [`coeff`] — rationals, 𝔽_p, p-adic valuations.
//! * [`mpoly`] — sparse multivariate polynomials over a weighted variable
//!   registry; division, resultants, symmetric-function tools.
//! * [`pseries`] — truncated power series with polynomial coefficients;
//!   composition, reversion, fractional powers, isolated coefficients.
//! * [`fgl`] — formal group laws from logarithms; n-series, strict
//!   isomorphisms, Hazewinkel generator images.
//! * [`genus`] — the four genera: logarithm tables, ℓ-coefficients, vₙ.
//! * [`landweber`] — triangular reduction plans over 𝔽_p, the regularity
//!   ladder, unit-power relations, certification.
//! * [`modform`] — q-expansions of the Eisenstein-type forms of level 3,
//!   theta series, and the identities among them.
//! * [`curves`] — discriminants, degenerations, the restriction map from
//!   the Picard to the hyperelliptic family, and supersingular counts.

pub mod coeff;
pub mod curves;
pub mod fgl;
pub mod genus;
pub mod landweber;
pub mod modform;
pub mod mpoly;
pub mod pseries;

pub use coeff::{
    is_prime_u64, p_valuation, reduce_mod_p, Coeff, CoeffError, PLocalTag, PrimeFieldElement,
    Rational, Valuation,
};
pub use mpoly::{
    discriminant, resultant, Mono, MonoOrder, MpolyError, MultiPoly, UniPoly, VarRegistry,
};
pub use fgl::{
    fgl_from_log, hazewinkel_images, strict_iso, FglError, FormalGroupLaw, HazewinkelImages,
    IsoValuationReport, MultiSeries, VIntegrality,
};
pub use genus::{
    ell_list, genus_log_coeff, genus_v, legendre_poly, legendre_to_lambda_delta,
    supersingular_height_probe, GenusError, GenusFamily, GenusSpec, SupersingularProbe,
};
pub use pseries::{isolated_coeff_fractional_power, PseriesError, TruncatedSeries};
pub use landweber::{
    build_plan, certify, check_regular, check_unit_power, default_inverted, family_height,
    inverted_element, ladder_from_images, nf_pow, reduce_mod_ideal, reduce_rational_mod_ideal,
    CheckResult, LandweberCertificate, LandweberError, PlanStep, RegularityStep, TriangularIdeal,
    UnitPowerRelation, A_MAX,
};
pub use curves::{
    check_curve_identity, degenerate_211, degenerate_22_check, degenerate_31_check,
    fgl_iso_integrality, legendre_sextic, legendre_sextic_discriminant, picard_discriminant,
    picard_quartic, restrict, restricted_model_check, restriction_images,
    shiga_discriminant_sigma, CurvesError, Degeneration211, Degeneration22, Degeneration31,
    IdentityReport, RestrictedModelReport, CURVE_IDENTITY_IDS,
};
pub use modform::{
    check_modform_identity, delta6_q, e1, e3, e4, form_by_name, integral_basis_check,
    integral_basis_matrix, j_g, kappa_q, lambda_q, theta_a2, ModformError, QExpansion,
    DEFAULT_ORDER, FORM_NAMES, MODFORM_IDENTITY_IDS,
};
