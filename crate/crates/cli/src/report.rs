//! The analysis report: construction from `(K, p, a)`, rendering, and
//! re-verification from a serialized copy.

use std::time::Instant;

use hopf_radical::base::{is_prime_u64, Rat};
use hopf_radical::dedekind::dedekind_maximality_oracle;
use hopf_radical::extension::MAX_DEGREE;
use hopf_radical::freeness::{
    change_radicand, criterion_check_with, verify_generator, FreenessCertificate, Obstruction,
    VerificationReport,
};
use hopf_radical::hopf::local_generator;
use hopf_radical::integral::{
    expected_index, global_integral_basis, lattice_discriminant, lattice_index, local_basis,
    poly_discriminant,
};
use hopf_radical::radical::{associated_ideals, ramification_type, tameness_test, WildWitness};
use hopf_radical::{BaseElem, BaseField, Error, LElem, RadicandContext};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::json::{
    DedekindJson, ElemJson, FactorJson, FormJson, IdealJson, LElemJson, PrimeJson,
};
use crate::SchemaError;

pub const SCHEMA_VERSION: u32 = 1;

/// Number of failed unit tuples kept in a congruence-obstruction transcript.
pub const MAX_PROBES_RECORDED: usize = 1024;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputEcho {
    pub base: String,
    pub p: u64,
    pub a: ElemJson,
    pub max_norm: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WildJson {
    Valuation { prime: PrimeJson, valuation: i64 },
    NoPthPowerResidue { residue: ElemJson, candidates: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TamenessJson {
    pub tame: bool,
    pub stripped: ElemJson,
    pub strip_factor: ElemJson,
    pub ell: Option<u64>,
    pub c: Option<ElemJson>,
    pub normalized: Option<ElemJson>,
    pub wild: Option<WildJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RamificationRow {
    pub prime: PrimeJson,
    pub valuation: i64,
    pub kind: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssociatedIdealJson {
    pub j: usize,
    pub ideal: IdealJson,
    /// Class of the inverse ideal.
    pub inverse_class: FormJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalJson {
    pub prime: PrimeJson,
    pub uniformizer: Option<ElemJson>,
    pub exponents: Vec<i64>,
    pub basis: Vec<LElemJson>,
    pub generator: LElemJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureJson {
    pub prime: PrimeJson,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeJson {
    pub units: Vec<ElemJson>,
    pub failure: Option<FailureJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ObstructionJson {
    Class {
        j: usize,
        class: FormJson,
    },
    Congruence {
        probes_total: usize,
        probes: Vec<ProbeJson>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreenessJson {
    pub verdict: String,
    pub b: Vec<Option<ElemJson>>,
    pub units: Option<Vec<ElemJson>>,
    /// In powers of the normalized radical `a' ^ (1/p)`.
    pub generator: Option<LElemJson>,
    /// The same element in powers of the input radical `a ^ (1/p)`.
    pub generator_input: Option<LElemJson>,
    pub class_tuple: Vec<FormJson>,
    pub obstruction: Option<ObstructionJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalSpanJson {
    pub prime: PrimeJson,
    pub det_valuation: Option<i64>,
    pub contained: bool,
    pub generates: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorCheckJson {
    pub passed: bool,
    pub hnf_equal: Option<bool>,
    pub local: Vec<LocalSpanJson>,
    pub note: Option<String>,
}

impl GeneratorCheckJson {
    fn new(v: &VerificationReport) -> Self {
        GeneratorCheckJson {
            passed: v.passed,
            hnf_equal: v.hnf_equal,
            local: v
                .local
                .iter()
                .map(|c| LocalSpanJson {
                    prime: PrimeJson::new(&c.prime),
                    det_valuation: c.det_valuation,
                    contained: c.contained,
                    generates: c.generates(),
                })
                .collect(),
            note: v.note.clone(),
        }
    }
}

/// `O_L` over `Q`: the HNF basis `(1/den) rows` in powers of `a'^(1/p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlobalJson {
    pub den: String,
    pub rows: Vec<Vec<String>>,
    pub discriminant: String,
    pub polynomial_discriminant: String,
    pub index: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationJson {
    pub generator: Option<GeneratorCheckJson>,
    pub dedekind: Vec<DedekindJson>,
    pub global: Option<GlobalJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingJson {
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub input: InputEcho,
    /// `free`, `not-free-class-obstruction`, `not-free-congruence-obstruction`
    /// or `wild`.
    pub verdict: String,
    pub tameness: TamenessJson,
    pub ramification: Vec<RamificationRow>,
    pub associated_ideals: Vec<AssociatedIdealJson>,
    pub local: Vec<LocalJson>,
    pub freeness: Option<FreenessJson>,
    pub verification: VerificationJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<TimingJson>,
}

impl AnalysisReport {
    pub fn exit_code(&self) -> u8 {
        match self.verdict.as_str() {
            "free" => 0,
            "wild" => 20,
            _ => 10,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

pub fn parse_base(base: &str, max_norm: Option<u128>) -> Result<BaseField, Error> {
    let k = BaseField::parse_label(base)?;
    match max_norm {
        Some(n) => k.with_max_norm(n),
        None => Ok(k),
    }
}

/// Parses the flags and runs [`analyze`].
pub fn analyze_args(
    base: &str,
    p: u64,
    a: &str,
    max_norm: Option<u128>,
    timing: bool,
) -> Result<AnalysisReport, Error> {
    let k = parse_base(base, max_norm)?;
    let a = k.parse_elem(a)?;
    analyze(&k, p, &a, timing)
}

pub fn analyze(k: &BaseField, p: u64, a: &BaseElem, timing: bool) -> Result<AnalysisReport, Error> {
    let start = Instant::now();
    let ctx_in = RadicandContext::new(k, p, a)?;
    let tv = tameness_test(k, p, a)?;
    let tameness = TamenessJson {
        tame: tv.tame,
        stripped: ElemJson::new(&tv.stripped),
        strip_factor: ElemJson::new(&tv.strip_factor),
        ell: tv.ell,
        c: tv.c.as_ref().map(ElemJson::new),
        normalized: tv.normalized.as_ref().map(ElemJson::new),
        wild: tv.wild.as_ref().map(|w| match w {
            WildWitness::Valuation { prime, valuation } => WildJson::Valuation {
                prime: PrimeJson::new(prime),
                valuation: *valuation,
            },
            WildWitness::NoPthPowerResidue {
                residue,
                candidates,
            } => WildJson::NoPthPowerResidue {
                residue: ElemJson::new(residue),
                candidates: *candidates,
            },
        }),
    };
    let input = InputEcho {
        base: k.label(),
        p,
        a: ElemJson::new(a),
        max_norm: k.max_norm().to_string(),
    };
    let mut report = AnalysisReport {
        schema_version: SCHEMA_VERSION,
        input,
        verdict: "wild".into(),
        tameness,
        ramification: Vec::new(),
        associated_ideals: Vec::new(),
        local: Vec::new(),
        freeness: None,
        verification: VerificationJson {
            generator: None,
            dedekind: Vec::new(),
            global: None,
        },
        timing: None,
    };
    let Some(normalized) = &tv.normalized else {
        // Over Q with p not dividing the stripped radicand, the Dedekind
        // criterion at p corroborates the wildness verdict.
        if let Some(a0) = k.as_integer(&tv.stripped) {
            if !(&a0 % BigInt::from(p)).is_zero() {
                report.verification.dedekind =
                    vec![DedekindJson::new(&dedekind_maximality_oracle(p, p, &a0))];
            }
        }
        if timing {
            report.timing = Some(TimingJson {
                elapsed_ms: start.elapsed().as_millis() as u64,
            });
        }
        return Ok(report);
    };

    let ctx = ctx_in.with_radicand(normalized)?;
    let support = ctx.support();
    for q in &support {
        let kind = if q.lies_above(p) {
            "tame-above-p"
        } else {
            ramification_type(&ctx, q)?.as_str()
        };
        report.ramification.push(RamificationRow {
            prime: PrimeJson::new(q),
            valuation: ctx.valuation_of_a(q),
            kind: kind.into(),
        });
        let lb = local_basis(&ctx, q)?;
        report.local.push(LocalJson {
            prime: PrimeJson::new(q),
            uniformizer: lb.uniformizer.as_ref().map(ElemJson::new),
            exponents: lb.exponents.clone(),
            basis: lb.basis.iter().map(LElemJson::new).collect(),
            generator: LElemJson::new(&local_generator(&ctx, q)?),
        });
    }

    let assoc = associated_ideals(&ctx)?;
    let cert = criterion_check_with(&ctx, &assoc)?;
    for (j, ideal) in assoc.ideals.iter().enumerate() {
        let factors: Vec<_> = assoc
            .table
            .iter()
            .map(|row| (row.prime.clone(), row.r[j]))
            .collect();
        report.associated_ideals.push(AssociatedIdealJson {
            j,
            ideal: IdealJson::new(k, ideal, &factors),
            inverse_class: FormJson::new(&cert.class_tuple.classes[j]),
        });
    }
    report.verdict = cert.verdict.as_str().into();
    let generator_input = input_generator(&ctx_in, &tv.ell, &tv.c, &cert)?;
    report.freeness = Some(freeness_json(&cert, generator_input.as_ref()));
    report.verification.generator = cert.verification.as_ref().map(GeneratorCheckJson::new);

    if let Some(a_int) = k.as_integer(normalized).filter(|_| k.is_rationals()) {
        let pa: BigInt = &a_int * BigInt::from(p);
        for (q, _) in k.factor_norm(&pa)? {
            report
                .verification
                .dedekind
                .push(DedekindJson::new(&dedekind_maximality_oracle(q, p, &a_int)));
        }
        let lattice = global_integral_basis(&ctx)?;
        let index = lattice_index(&lattice);
        if index != expected_index(&ctx)? {
            return Err(Error::Degenerate(format!(
                "integral basis index {index} disagrees with the associated ideals"
            )));
        }
        report.verification.global = Some(GlobalJson {
            den: lattice.denominator().to_string(),
            rows: lattice
                .int_rows()
                .iter()
                .map(|r| r.iter().map(BigInt::to_string).collect())
                .collect(),
            discriminant: lattice_discriminant(&ctx, &lattice)?.to_string(),
            polynomial_discriminant: poly_discriminant(p, &a_int).to_string(),
            index: index.to_string(),
        });
    }
    if timing {
        report.timing = Some(TimingJson {
            elapsed_ms: start.elapsed().as_millis() as u64,
        });
    }
    Ok(report)
}

/// Rewrites the free generator in powers of the input radical, once by
/// substituting `alpha' = c alpha^l` and once through the change of
/// radicand on the associated-ideal generators; both must agree.
fn input_generator(
    ctx_in: &RadicandContext,
    ell: &Option<u64>,
    c: &Option<BaseElem>,
    cert: &FreenessCertificate,
) -> Result<Option<LElem>, Error> {
    let (Some(x), Some(units), Some(ell), Some(c)) = (&cert.generator, &cert.units, ell, c) else {
        return Ok(None);
    };
    let k = ctx_in.field();
    let p = ctx_in.p();
    let beta = ctx_in.scale(c, &ctx_in.alpha_pow(*ell as usize));
    let mut by_substitution = ctx_in.zero();
    let mut power = ctx_in.one();
    for coord in x.coords() {
        by_substitution = &by_substitution + &ctx_in.scale(coord, &power);
        power = ctx_in.l_mul(&power, &beta)?;
    }
    let scaled_b: Vec<BaseElem> = cert
        .b
        .iter()
        .zip(units)
        .map(|(b, u)| k.mul(b.as_ref().expect("free implies principal"), u))
        .collect();
    let a_j = change_radicand(ctx_in, *ell, c, &scaled_b)?;
    let inv_p = Rat::new(BigInt::one(), BigInt::from(p));
    let by_change = LElem::new(
        a_j.iter()
            .map(|aj| k.inv(aj).map(|v| v.scale(&inv_p)))
            .collect::<Result<_, _>>()?,
    );
    if by_change != by_substitution {
        return Err(Error::Degenerate(format!(
            "generator in input radical: {by_substitution} by substitution, {by_change} by change of radicand"
        )));
    }
    Ok(Some(by_substitution))
}

fn freeness_json(cert: &FreenessCertificate, generator_input: Option<&LElem>) -> FreenessJson {
    FreenessJson {
        verdict: cert.verdict.as_str().into(),
        b: cert.b.iter().map(|b| b.as_ref().map(ElemJson::new)).collect(),
        units: cert
            .units
            .as_ref()
            .map(|u| u.iter().map(ElemJson::new).collect()),
        generator: cert.generator.as_ref().map(LElemJson::new),
        generator_input: generator_input.map(LElemJson::new),
        class_tuple: cert.class_tuple.classes.iter().map(FormJson::new).collect(),
        obstruction: cert.obstruction.as_ref().map(|o| match o {
            Obstruction::Class { j, class } => ObstructionJson::Class {
                j: *j,
                class: FormJson::new(class),
            },
            Obstruction::Congruence { probes } => ObstructionJson::Congruence {
                probes_total: probes.len(),
                probes: probes
                    .iter()
                    .take(MAX_PROBES_RECORDED)
                    .map(|pr| ProbeJson {
                        units: pr.units.iter().map(ElemJson::new).collect(),
                        failure: pr.failure.as_ref().map(|(q, i)| FailureJson {
                            prime: PrimeJson::new(q),
                            index: *i,
                        }),
                    })
                    .collect(),
            },
        }),
    }
}

/// Why verification could not run at all.
#[derive(Debug)]
pub enum VerifyError {
    Schema(SchemaError),
    Core(Error),
}

impl From<SchemaError> for VerifyError {
    fn from(e: SchemaError) -> Self {
        VerifyError::Schema(e)
    }
}

impl From<Error> for VerifyError {
    fn from(e: Error) -> Self {
        VerifyError::Core(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub checks: Vec<(String, bool)>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// Parses a serialized report, checking the schema version first.
pub fn parse_report(text: &str) -> Result<AnalysisReport, SchemaError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| SchemaError(format!("not JSON: {e}")))?;
    match value.get("schema_version").and_then(Value::as_u64) {
        Some(v) if v == SCHEMA_VERSION as u64 => {}
        Some(v) => {
            return Err(SchemaError(format!(
                "schema version {v} is not supported (expected {SCHEMA_VERSION})"
            )))
        }
        None => return Err(SchemaError("missing schema_version".into())),
    }
    serde_json::from_value(value).map_err(|e| SchemaError(format!("schema violation: {e}")))
}

/// Re-checks a serialized report: the stored generator and Dedekind
/// transcripts are verified as given, then every field is recomputed from
/// the echoed input and compared.
pub fn verify(text: &str) -> Result<VerifyOutcome, VerifyError> {
    let stored = parse_report(text)?;
    let input = &stored.input;
    let max_norm: u128 = input
        .max_norm
        .parse()
        .map_err(|_| SchemaError(format!("bad max_norm '{}'", input.max_norm)))?;
    if !is_prime_u64(input.p) || input.p > MAX_DEGREE {
        return Err(SchemaError(format!("p = {} is out of range", input.p)).into());
    }
    let k = parse_base(&input.base, Some(max_norm))?;
    let a = input.a.parse()?;
    let mut checks = Vec::new();

    for w in &stored.verification.dedekind {
        let witness = w.parse()?;
        let ok = is_prime_u64(witness.q) && is_prime_u64(witness.p) && witness.recheck();
        checks.push((format!("dedekind transcript at q = {}", w.q), ok));
    }

    let stored_generator = stored
        .freeness
        .as_ref()
        .and_then(|f| f.generator.as_ref());
    if stored.verdict == "free" || stored_generator.is_some() {
        let ok = match (stored_generator, &stored.tameness.normalized) {
            (Some(g), Some(n)) => {
                let ctx = RadicandContext::new(&k, input.p, &n.parse()?)?;
                let x = g.parse()?;
                x.len() == ctx.degree() && verify_generator(&ctx, &x)?.passed
            }
            _ => false,
        };
        checks.push(("stored generator spans O_L".into(), ok));
    }

    let fresh = analyze(&k, input.p, &a, false)?;
    let mut stored_cmp = stored.clone();
    stored_cmp.timing = None;
    let fresh_v = serde_json::to_value(&fresh).expect("serializable");
    let stored_v = serde_json::to_value(&stored_cmp).expect("serializable");
    for key in [
        "input",
        "verdict",
        "tameness",
        "ramification",
        "associated_ideals",
        "local",
        "freeness",
        "verification",
    ] {
        checks.push((
            format!("recomputed {key} matches"),
            fresh_v.get(key) == stored_v.get(key),
        ));
    }
    Ok(VerifyOutcome { checks })
}

/// Human-readable summary.
pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!(
        "K = {}, p = {}, a = {}",
        r.input.base, r.input.p, r.input.a.text
    ));
    line(format!("verdict: {}", r.verdict));
    let t = &r.tameness;
    if t.tame {
        line(format!(
            "tame: a' = a^{} * ({})^{} = {}",
            t.ell.unwrap_or(1),
            t.c.as_ref().map(|c| c.text.as_str()).unwrap_or("1"),
            r.input.p,
            t.normalized.as_ref().map(|n| n.text.as_str()).unwrap_or("?")
        ));
    } else {
        let why = match &t.wild {
            Some(WildJson::Valuation { prime, valuation }) => {
                format!("v at {} is {valuation}", prime.label)
            }
            Some(WildJson::NoPthPowerResidue { residue, .. }) => {
                format!("no a^l c^p = 1 mod p^2 (a = {} mod p^2)", residue.text)
            }
            None => String::new(),
        };
        line(format!("wild: {why}"));
    }
    for row in &r.ramification {
        line(format!(
            "  {} v = {} {}",
            row.prime.label, row.valuation, row.kind
        ));
    }
    for b in &r.associated_ideals {
        let f: Vec<String> = b
            .ideal
            .factorization
            .iter()
            .map(|FactorJson { prime, exponent }| format!("{}^{exponent}", prime.label))
            .collect();
        let f = if f.is_empty() { "(1)".to_string() } else { f.join(" ") };
        let class = if b.ideal.class.principal {
            "principal".to_string()
        } else {
            format!("class ({}, {}, {})", b.ideal.class.a, b.ideal.class.b, b.ideal.class.c)
        };
        line(format!("  b_{} = {f}, {class}", b.j));
    }
    if let Some(f) = &r.freeness {
        if let Some(g) = &f.generator {
            line(format!("generator: {}", g.text));
        }
        if let Some(g) = &f.generator_input {
            line(format!("generator (input radical): {}", g.text));
        }
        match &f.obstruction {
            Some(ObstructionJson::Class { j, class }) => line(format!(
                "obstruction: b_{j} not principal, class of inverse ({}, {}, {})",
                class.a, class.b, class.c
            )),
            Some(ObstructionJson::Congruence { probes_total, .. }) => line(format!(
                "obstruction: none of {probes_total} unit tuples gives an integral generator"
            )),
            None => {}
        }
    }
    if let Some(g) = &r.verification.global {
        line(format!(
            "disc(O_L) = {}, disc(x^p - a') = {}, index = {}",
            g.discriminant, g.polynomial_discriminant, g.index
        ));
    }
    if let Some(g) = &r.verification.generator {
        line(format!("generator verified: {}", g.passed));
    }
    if let Some(t) = &r.timing {
        line(format!("elapsed: {} ms", t.elapsed_ms));
    }
    out
}

pub const CSV_HEADER: &str = "base,p,a,tame,verdict,normalized,generator";

pub fn render_csv_row(r: &AnalysisReport) -> String {
    let gen = r
        .freeness
        .as_ref()
        .and_then(|f| f.generator.as_ref())
        .map(|g| g.text.clone())
        .unwrap_or_default();
    let norm = r
        .tameness
        .normalized
        .as_ref()
        .map(|n| n.text.clone())
        .unwrap_or_default();
    [
        r.input.base.clone(),
        r.input.p.to_string(),
        r.input.a.text.clone(),
        r.tameness.tame.to_string(),
        r.verdict.clone(),
        norm,
        gen,
    ]
    .iter()
    .map(|f| crate::csv_field(f))
    .collect::<Vec<_>>()
    .join(",")
}
