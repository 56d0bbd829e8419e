//! `taf` — exact certification of the genus formal group laws on the
//! command line.
//!
//! Everything the library proves is reachable from here: Landweber
//! certificates as versioned JSON (`certify`), the whole battery of
//! certified results as a table (`reproduce`), q-expansions (`qexp`),
//! Hazewinkel generator images (`genus`), named polynomial and
//! q-expansion identities (`identity`), restriction to the hyperelliptic
//! locus (`restrict`), the valuation profile of the connecting strict
//! isomorphism (`iso`), and the supersingular height probe
//! (`supersingular`).
//!
//! Exit codes are stable: 0 = everything checked out; 1 = a check ran to
//! completion and failed; 2 = invalid input (unknown family, form,
//! identity, element, a malformed polynomial, or an unsupported prime or
//! order); 3 = internal failure (an ideal the triangularizer cannot
//! handle, or an arithmetic invariant violated).
//!
//! Certificates printed without `--timings` are byte-identical across
//! runs with identical flags.

use clap::{Parser, Subcommand};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use taf_core::{
    certify, check_curve_identity, check_modform_identity, degenerate_211, degenerate_22_check,
    degenerate_31_check, fgl_iso_integrality, form_by_name, genus_v, integral_basis_check,
    is_prime_u64, picard_discriminant, restrict, restricted_model_check,
    supersingular_height_probe, CurvesError, GenusError, GenusFamily, GenusSpec,
    LandweberCertificate, LandweberError, ModformError, MultiPoly, Rational, Valuation,
    VarRegistry, CURVE_IDENTITY_IDS, DEFAULT_ORDER, MODFORM_IDENTITY_IDS,
};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

/// Default truncation order for the strict-isomorphism valuation profile.
const ISO_DEFAULT_ORDER: u32 = 40;

#[derive(Parser)]
#[command(
    name = "taf",
    version,
    about = "Exact certification toolkit for genus formal group laws"
)]
struct Cli {
    /// Worker threads for parallel batteries (fallback: TAF_THREADS).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify Landweber exactness for a family at a prime; emits the
    /// JSON certificate.
    Certify {
        /// Family: legendre, picard, or shiga.
        #[arg(long)]
        family: String,
        /// Prime with a certified corollary suite (7 or 13).
        #[arg(long)]
        prime: u64,
        /// Element to invert: Delta_C, G3, Delta6, or sigma3 (default:
        /// the family's discriminant-like element).
        #[arg(long, value_name = "ELEMENT")]
        invert: Option<String>,
        /// Record wall-clock timings inside the certificate (makes the
        /// JSON non-reproducible byte-for-byte).
        #[arg(long)]
        timings: bool,
        /// Write the certificate to this file and the summary to
        /// standard output (default: certificate on standard output,
        /// summary on standard error).
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Re-run the battery of certified results and print a table.
    Reproduce {
        /// Run only rows whose tag matches exactly or by prefix
        /// (e.g. `picard-p13`, `modform`, `curve`).
        #[arg(long, value_name = "TAG")]
        only: Option<String>,
        /// Run the whole battery (the default; spelled out for scripts).
        #[arg(long, conflicts_with = "only")]
        all: bool,
    },
    /// Print the q-expansion of a named modular form.
    Qexp {
        /// One of: E1, E3, E4, e4, kappa, lambda, Delta6, jG, thetaA2.
        #[arg(long)]
        form: String,
        /// Number of coefficients printed (a_0 through a_{order-1}).
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: u32,
    },
    /// Print the image of a Hazewinkel generator under a genus.
    Genus {
        /// Family: legendre, picard, shiga, or supersingular.
        #[arg(long)]
        family: String,
        /// Prime p = 1 mod 3 (not 2 or 3).
        #[arg(long)]
        prime: u64,
        /// Which generator v_n (1..=3).
        #[arg(long)]
        n: usize,
        /// Reduce the image modulo p (default: exact over the rationals).
        #[arg(long)]
        modp: bool,
    },
    /// Check a named polynomial or q-expansion identity.
    Identity {
        /// Identity id (see --list for the registry).
        #[arg(long, required_unless_present_any = ["all", "list"])]
        id: Option<String>,
        /// Check every registered identity.
        #[arg(long)]
        all: bool,
        /// List the registered identity ids.
        #[arg(long)]
        list: bool,
    },
    /// Restrict a polynomial in G2, G3, G4 to the hyperelliptic locus.
    Restrict {
        /// Polynomial text, e.g. "G3^2 + 4*G4*G2 - 2*G2^4".
        #[arg(long, value_name = "TEXT")]
        poly: String,
    },
    /// Valuation profile of the strict isomorphism between the
    /// hyperelliptic law and the restricted quartic law.
    Iso {
        /// Prime at which to measure valuations.
        #[arg(long)]
        prime: u64,
        /// Series truncation order (8..=60).
        #[arg(long, default_value_t = ISO_DEFAULT_ORDER)]
        order: u32,
    },
    /// Probe the supersingular specialization: v1 = v2 = 0 exactly and
    /// the valuation that decides height three.
    Supersingular {
        /// Prime p = 1 mod 3 with 9 not dividing p - 1.
        #[arg(long)]
        prime: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads(cli.threads);
    let code = match cli.command {
        Command::Certify {
            family,
            prime,
            invert,
            timings,
            out,
        } => cmd_certify(&family, prime, invert.as_deref(), timings, out.as_deref()),
        Command::Reproduce { only, all: _ } => cmd_reproduce(only.as_deref()),
        Command::Qexp { form, order } => cmd_qexp(&form, order),
        Command::Genus {
            family,
            prime,
            n,
            modp,
        } => cmd_genus(&family, prime, n, modp),
        Command::Identity { id, all, list } => cmd_identity(id.as_deref(), all, list),
        Command::Restrict { poly } => cmd_restrict(&poly),
        Command::Iso { prime, order } => cmd_iso(prime, order),
        Command::Supersingular { prime } => cmd_supersingular(prime),
    };
    ExitCode::from(code)
}

/// Install the global worker pool. `--threads` wins over `TAF_THREADS`;
/// with neither, rayon's default (one per core) applies.
fn configure_threads(flag: Option<usize>) {
    let n = flag.or_else(|| {
        std::env::var("TAF_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    if let Some(n) = n {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

// ---------------------------------------------------------------------------
// Exit-code mapping
// ---------------------------------------------------------------------------

fn exit_for_genus(e: &GenusError) -> u8 {
    match e {
        GenusError::BadPrime(_)
        | GenusError::SupersingularSlope(_)
        | GenusError::BadHeight(_) => EXIT_BAD_INPUT,
        _ => EXIT_INTERNAL,
    }
}

fn exit_for_landweber(e: &LandweberError) -> u8 {
    match e {
        LandweberError::NotTriangularizable(_) => EXIT_INTERNAL,
        // The search ran to completion without certifying the relation.
        LandweberError::NoRelationFound { .. } => EXIT_CHECK_FAILED,
        LandweberError::UnsupportedCase(_) | LandweberError::UnknownInverted(_) => EXIT_BAD_INPUT,
        LandweberError::Genus(g) => exit_for_genus(g),
        LandweberError::Mpoly(_) | LandweberError::Coeff(_) => EXIT_INTERNAL,
    }
}

fn exit_for_curves(e: &CurvesError) -> u8 {
    match e {
        CurvesError::UnknownIdentity(_) | CurvesError::BadTruncation { .. } => EXIT_BAD_INPUT,
        CurvesError::Genus(g) => exit_for_genus(g),
        _ => EXIT_INTERNAL,
    }
}

fn exit_for_modform(e: &ModformError) -> u8 {
    match e {
        ModformError::UnknownForm(_)
        | ModformError::UnknownIdentity(_)
        | ModformError::BadOrder { .. } => EXIT_BAD_INPUT,
        ModformError::Coeff(_) => EXIT_INTERNAL,
    }
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

fn cmd_certify(
    family: &str,
    prime: u64,
    invert: Option<&str>,
    timings: bool,
    out: Option<&Path>,
) -> u8 {
    let fam = match parse_family(family) {
        Ok(f) => f,
        Err(code) => return code,
    };
    if fam == GenusFamily::Supersingular {
        eprintln!(
            "certify: the supersingular specialization is a probe, not a presentation ring; \
             run `taf supersingular --prime {prime}`"
        );
        return EXIT_BAD_INPUT;
    }
    match certify(fam, prime, invert, timings) {
        Ok(cert) => {
            let mut json =
                serde_json::to_string_pretty(&cert.to_json()).expect("certificate serializes");
            json.push('\n');
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &json) {
                        eprintln!("certify: cannot write {}: {e}", path.display());
                        return EXIT_INTERNAL;
                    }
                    write_certificate_summary(std::io::stdout().lock(), &cert);
                }
                None => {
                    print!("{json}");
                    write_certificate_summary(std::io::stderr().lock(), &cert);
                }
            }
            if cert.passed {
                0
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("certify: {e}");
            exit_for_landweber(&e)
        }
    }
}

fn write_certificate_summary<W: Write>(mut w: W, cert: &LandweberCertificate) {
    let _ = writeln!(
        w,
        "certificate: {} at p = {}, inverting {}",
        cert.family, cert.prime, cert.inverted
    );
    for s in &cert.regularity {
        let name = if s.index == 0 {
            "regular-p".to_string()
        } else {
            format!("regular-v{}", s.index)
        };
        let _ = writeln!(w, "  {:<22} {}", name, verdict(s.pass));
    }
    for c in &cert.checks {
        let _ = writeln!(w, "  {:<22} {}", c.name, verdict(c.status));
    }
    let _ = writeln!(
        w,
        "  relation: v{}^{} = {} * {}^{}",
        cert.height, cert.relation.a, cert.relation.c, cert.inverted, cert.relation.e
    );
    let _ = writeln!(w, "verdict: {}", if cert.passed { "PASS" } else { "FAIL" });
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn parse_family(name: &str) -> Result<GenusFamily, u8> {
    GenusFamily::parse(name).ok_or_else(|| {
        eprintln!(
            "unknown family `{name}`: expected legendre, picard, shiga, or supersingular"
        );
        EXIT_BAD_INPUT
    })
}

// ---------------------------------------------------------------------------
// reproduce
// ---------------------------------------------------------------------------

/// One battery row: what is being re-established, stated neutrally.
struct Row {
    tag: &'static str,
    claim: &'static str,
    task: Task,
}

enum Task {
    Certificate(GenusFamily, u64),
    Supersingular(u64),
    Iso(u64),
    CurveIdentity(&'static str),
    /// `disc-sextic` fails by design: the tabulated closed form differs
    /// from the computed discriminant by a cofactor. The row passes when
    /// the checker reports exactly that, with its witness verified.
    RecordedMismatch(&'static str),
    ModformIdentity(&'static str),
    IntegralBases,
    RestrictedModel,
    RestrictionKernel,
    Collision211,
    Collision22,
    Collision31,
}

fn battery() -> Vec<Row> {
    use GenusFamily::*;
    let row = |tag, claim, task| Row { tag, claim, task };
    vec![
        row(
            "legendre-p7",
            "regular ladder and unit power at p=7 inverting Delta6; v2 = Delta6^8 mod (7, v1)",
            Task::Certificate(Legendre, 7),
        ),
        row(
            "legendre-p13",
            "regular ladder and unit power at p=13 inverting Delta6; v2 = lambda^28 = Delta6^28",
            Task::Certificate(Legendre, 13),
        ),
        row(
            "picard-p7",
            "regular ladder and unit power at p=7 inverting Delta_C; v3^2 = Delta_C^19",
            Task::Certificate(Picard, 7),
        ),
        row(
            "picard-p13",
            "regular ladder and unit power at p=13 inverting Delta_C; v3^18 = -G3^4392",
            Task::Certificate(Picard, 13),
        ),
        row(
            "shiga-p7",
            "regular ladder and unit power at p=7 inverting sigma3; v3^3 = -sigma3^114",
            Task::Certificate(Shiga, 7),
        ),
        row(
            "supersingular-p7",
            "v1 = v2 = 0 exactly; the [u^342] valuation equals 2, forcing height exactly 3",
            Task::Supersingular(7),
        ),
        row(
            "supersingular-p13",
            "v1 = v2 = 0 exactly; the [u^2196] valuation equals 2, forcing height exactly 3",
            Task::Supersingular(13),
        ),
        row(
            "iso-p7",
            "the strict isomorphism onto the restricted quartic law is 7-integral to degree 40",
            Task::Iso(7),
        ),
        row(
            "iso-p13",
            "the strict isomorphism onto the restricted quartic law is 13-integral to degree 40",
            Task::Iso(13),
        ),
        row(
            "curve-disc-sextic",
            "computed sextic discriminant = tabulated form * (kappa^2 - lambda), witnessed",
            Task::RecordedMismatch("disc-sextic"),
        ),
        row(
            "curve-disc-quartic",
            "quartic discriminant equals its six-term closed form",
            Task::CurveIdentity("disc-quartic"),
        ),
        row(
            "curve-shiga-disc",
            "split-quartic discriminant is (xi0 xi1 xi2)^2 times the squared root differences",
            Task::CurveIdentity("shiga-disc"),
        ),
        row(
            "curve-shiga-disc-sigma",
            "the split-quartic discriminant in elementary symmetric coordinates is the sigma form",
            Task::CurveIdentity("shiga-disc-sigma"),
        ),
        row(
            "curve-g3-factor",
            "the depressed quartic's linear coefficient factors into the three signed xi sums",
            Task::CurveIdentity("g3-factor"),
        ),
        row(
            "curve-local-param-hyp",
            "near (0,1) on the sextic model: (v-1)(v+1) = u^3(-2 kappa + lambda u^3), unit 2",
            Task::CurveIdentity("local-param-hyp"),
        ),
        row(
            "curve-local-param-picard",
            "near (0,1) on the quartic model: v^3 - 1 = u^6(G2 + G3 u^3 + G4 u^6), unit 3",
            Task::CurveIdentity("local-param-picard"),
        ),
        row(
            "curve-disc-product",
            "under kappa^2 = lambda - 108 Delta6 the tabulated form is 2^10 3^12 lambda^2 Delta6^2",
            Task::CurveIdentity("disc-product"),
        ),
        row(
            "modform-e4-eisenstein",
            "e4 = 8 E1 (2 E3 - E1^3) to q-order 200",
            Task::ModformIdentity("e4-eisenstein"),
        ),
        row(
            "modform-kappa-square",
            "kappa^2 = lambda - 108 Delta6 to q-order 200",
            Task::ModformIdentity("kappa-square"),
        ),
        row(
            "modform-theta-a2",
            "E1 is the theta series of the hexagonal lattice to q-order 200",
            Task::ModformIdentity("theta-a2"),
        ),
        row(
            "modform-delta6-integral",
            "Delta6 = q - 6q^2 + ... has integer coefficients to q-order 500",
            Task::ModformIdentity("delta6-integral"),
        ),
        row(
            "modform-j-at-cusp",
            "j_G = lambda/(2 kappa)^2 takes the value 1/4 at the cusp",
            Task::ModformIdentity("j-at-cusp"),
        ),
        row(
            "modform-basis",
            "weight-k integral bases are unipotent upper-triangular in the Delta6 filtration, k <= 10",
            Task::IntegralBases,
        ),
        row(
            "restricted-model",
            "the restricted quartic factors with a double root and returns (kappa, lambda)",
            Task::RestrictedModel,
        ),
        row(
            "restriction-kernel",
            "the quartic discriminant restricts to 0 on the hyperelliptic locus",
            Task::RestrictionKernel,
        ),
        row(
            "degeneration-211",
            "colliding two quartic roots gives s^2 = t^6 - 2 kappa' t^3 + lambda', dx/y = 3t dt/s",
            Task::Collision211,
        ),
        row(
            "degeneration-22",
            "the (2,2) collision lies in the stated ideal, with golden cofactors and an oracle",
            Task::Collision22,
        ),
        row(
            "degeneration-31",
            "the (3,1) collision is exactly parametrized by t = u^2, x = u^3, y = u(u^3 - xi0)",
            Task::Collision31,
        ),
    ]
}

fn run_task(task: &Task) -> Result<bool, String> {
    match task {
        Task::Certificate(family, p) => certify(*family, *p, None, false)
            .map(|c| c.passed)
            .map_err(|e| e.to_string()),
        Task::Supersingular(p) => supersingular_height_probe(*p)
            .map(|r| r.v1_is_zero && r.v2_is_zero && r.height_three)
            .map_err(|e| e.to_string()),
        Task::Iso(p) => fgl_iso_integrality(*p, ISO_DEFAULT_ORDER)
            .map(|r| r.all_p_local)
            .map_err(|e| e.to_string()),
        Task::CurveIdentity(id) => check_curve_identity(id)
            .map(|r| r.pass)
            .map_err(|e| e.to_string()),
        Task::RecordedMismatch(id) => check_curve_identity(id)
            .map(|r| !r.pass && r.witness.is_some())
            .map_err(|e| e.to_string()),
        Task::ModformIdentity(id) => check_modform_identity(id)
            .map(|r| r.pass)
            .map_err(|e| e.to_string()),
        Task::IntegralBases => {
            for k in 1..=10 {
                if !integral_basis_check(k).map_err(|e| e.to_string())? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Task::RestrictedModel => restricted_model_check()
            .map(|r| r.pass)
            .map_err(|e| e.to_string()),
        Task::RestrictionKernel => restrict(&picard_discriminant())
            .map(|r| r.is_zero())
            .map_err(|e| e.to_string()),
        Task::Collision211 => degenerate_211().map(|r| r.pass).map_err(|e| e.to_string()),
        Task::Collision22 => degenerate_22_check()
            .map(|r| r.pass)
            .map_err(|e| e.to_string()),
        Task::Collision31 => degenerate_31_check()
            .map(|r| r.pass)
            .map_err(|e| e.to_string()),
    }
}

fn cmd_reproduce(only: Option<&str>) -> u8 {
    let rows = battery();
    let selected: Vec<&Row> = match only {
        None => rows.iter().collect(),
        Some(pat) => rows
            .iter()
            .filter(|r| r.tag == pat || r.tag.starts_with(&format!("{pat}-")))
            .collect(),
    };
    if selected.is_empty() {
        eprintln!("reproduce: no battery row matches `{}`", only.unwrap_or(""));
        eprintln!("available tags:");
        for r in &rows {
            eprintln!("  {}", r.tag);
        }
        return EXIT_BAD_INPUT;
    }

    use rayon::prelude::*;
    let results: Vec<(Result<bool, String>, u128)> = selected
        .par_iter()
        .map(|row| {
            let t = Instant::now();
            let outcome = run_task(&row.task);
            (outcome, t.elapsed().as_millis())
        })
        .collect();

    let tag_width = selected.iter().map(|r| r.tag.len()).max().unwrap_or(4);
    println!(
        "{:<tw$}  {:<6}  {:>8}  claim",
        "tag",
        "status",
        "ms",
        tw = tag_width
    );
    let mut passed = 0usize;
    for (row, (outcome, ms)) in selected.iter().zip(&results) {
        let status = match outcome {
            Ok(true) => {
                passed += 1;
                "pass"
            }
            Ok(false) => "FAIL",
            Err(_) => "ERROR",
        };
        println!(
            "{:<tw$}  {:<6}  {:>8}  {}",
            row.tag,
            status,
            ms,
            row.claim,
            tw = tag_width
        );
        if let Err(msg) = outcome {
            eprintln!("  {}: {msg}", row.tag);
        }
    }
    println!("battery: {passed}/{} passed", selected.len());
    if passed == selected.len() {
        0
    } else {
        EXIT_CHECK_FAILED
    }
}

// ---------------------------------------------------------------------------
// qexp, genus, identity, restrict, iso, supersingular
// ---------------------------------------------------------------------------

fn cmd_qexp(form: &str, order: u32) -> u8 {
    match form_by_name(form, order) {
        Ok(f) => {
            println!("{}", f.comma_list());
            0
        }
        Err(e) => {
            eprintln!("qexp: {e}");
            exit_for_modform(&e)
        }
    }
}

fn cmd_genus(family: &str, prime: u64, n: usize, modp: bool) -> u8 {
    let fam = match parse_family(family) {
        Ok(f) => f,
        Err(code) => return code,
    };
    match genus_v(&GenusSpec::new(fam), prime, n) {
        Ok(images) => {
            let v = &images.v[n - 1];
            if modp {
                match v.reduce_mod(prime) {
                    Ok(r) => println!("{r}"),
                    Err(e) => {
                        eprintln!("genus: {e}");
                        return EXIT_INTERNAL;
                    }
                }
            } else {
                println!("{v}");
            }
            0
        }
        Err(e) => {
            eprintln!("genus: {e}");
            exit_for_genus(&e)
        }
    }
}

fn cmd_identity(id: Option<&str>, all: bool, list: bool) -> u8 {
    if list {
        for id in CURVE_IDENTITY_IDS {
            println!("{id}");
        }
        for id in MODFORM_IDENTITY_IDS {
            println!("{id}");
        }
        return 0;
    }
    if all {
        use rayon::prelude::*;
        let ids: Vec<&str> = CURVE_IDENTITY_IDS
            .iter()
            .chain(MODFORM_IDENTITY_IDS)
            .copied()
            .collect();
        let outcomes: Vec<Result<bool, (String, u8)>> = ids
            .par_iter()
            .map(|id| run_identity(id).map(|r| r.0))
            .collect();
        let mut failed = 0usize;
        let mut internal = false;
        for (id, outcome) in ids.iter().zip(&outcomes) {
            match outcome {
                Ok(pass) => {
                    println!("{id}: {}", if *pass { "PASS" } else { "FAIL" });
                    if !pass {
                        failed += 1;
                    }
                }
                Err((msg, code)) => {
                    println!("{id}: ERROR");
                    eprintln!("identity: {msg}");
                    if *code == EXIT_INTERNAL {
                        internal = true;
                    }
                    failed += 1;
                }
            }
        }
        println!("identities: {}/{} passed", ids.len() - failed, ids.len());
        return if internal {
            EXIT_INTERNAL
        } else if failed > 0 {
            EXIT_CHECK_FAILED
        } else {
            0
        };
    }
    let id = id.expect("clap enforces an id when neither --all nor --list is given");
    match run_identity(id) {
        Ok((pass, witness)) => {
            if pass {
                println!("PASS");
                0
            } else {
                println!("FAIL");
                if let Some(w) = witness {
                    eprintln!("identity {id}: {w}");
                }
                EXIT_CHECK_FAILED
            }
        }
        Err((msg, code)) => {
            eprintln!("identity: {msg}");
            code
        }
    }
}

/// Dispatch an identity id to its registry. Returns (pass, witness) or a
/// printable message with the exit code.
fn run_identity(id: &str) -> Result<(bool, Option<String>), (String, u8)> {
    if CURVE_IDENTITY_IDS.contains(&id) {
        check_curve_identity(id)
            .map(|r| (r.pass, r.witness))
            .map_err(|e| {
                let code = exit_for_curves(&e);
                (e.to_string(), code)
            })
    } else if MODFORM_IDENTITY_IDS.contains(&id) {
        check_modform_identity(id)
            .map(|r| (r.pass, r.witness))
            .map_err(|e| {
                let code = exit_for_modform(&e);
                (e.to_string(), code)
            })
    } else {
        Err((
            format!("unknown identity id `{id}` (try --list)"),
            EXIT_BAD_INPUT,
        ))
    }
}

fn cmd_restrict(poly: &str) -> u8 {
    let reg = VarRegistry::picard();
    let f = match MultiPoly::<Rational>::parse(&reg, poly) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("restrict: cannot parse polynomial in G2, G3, G4: {e}");
            return EXIT_BAD_INPUT;
        }
    };
    match restrict(&f) {
        Ok(r) => {
            println!("{r}");
            0
        }
        Err(e) => {
            eprintln!("restrict: {e}");
            exit_for_curves(&e)
        }
    }
}

fn cmd_iso(prime: u64, order: u32) -> u8 {
    if !is_prime_u64(prime) {
        eprintln!("iso: {prime} is not prime");
        return EXIT_BAD_INPUT;
    }
    match fgl_iso_integrality(prime, order) {
        Ok(rep) => {
            println!(
                "strict isomorphism: hyperelliptic law vs restricted quartic law, \
                 p = {}, truncation {}",
                rep.prime, rep.truncation
            );
            for (degree, val) in &rep.per_degree {
                println!("  degree {degree:>3}: min {}-adic valuation {val}", rep.prime);
            }
            if let Some((degree, val)) = rep.worst() {
                println!("worst valuation: {val} at degree {degree}");
            }
            println!(
                "all coefficients {}-local: {}",
                rep.prime, rep.all_p_local
            );
            if rep.all_p_local {
                0
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("iso: {e}");
            exit_for_curves(&e)
        }
    }
}

fn cmd_supersingular(prime: u64) -> u8 {
    match supersingular_height_probe(prime) {
        Ok(probe) => {
            let exponent = prime.pow(3) - 1;
            println!("supersingular probe at p = {prime}");
            println!("  v1 = 0 exactly: {}", probe.v1_is_zero);
            println!("  v2 = 0 exactly: {}", probe.v2_is_zero);
            let val = match probe.valuation {
                Valuation::Finite(v) => v.to_string(),
                Valuation::Infinite => "infinite".to_string(),
            };
            println!(
                "  {prime}-adic valuation of [u^{exponent}] (1 - u^9)^(-1/3): {val}"
            );
            println!("  height exactly three: {}", probe.height_three);
            if probe.v1_is_zero && probe.v2_is_zero && probe.height_three {
                0
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("supersingular: {e}");
            exit_for_genus(&e)
        }
    }
}
