use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use gamma_lab::format::{parse_unvalidated, ParseError};
use gamma_lab::{
    all_filters, check_claim, check_congruence, class_order, enumerate_semilattice_congruences, hasse_dot,
    principal_filter, quotient, quotient_upset_t, relation_n, search_counterexamples, serialize_structure,
    smallest_semilattice_congruence, structural_profile, up_set, validate, ClaimId, ClaimKind, ClaimVerdict,
    ElementSet, Kind, Partition, PoGammaStructure, StructuralProfile, Violation,
};

use crate::Command;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// An axiom violation, or a proved claim that failed.
    Failed,
    Usage,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> ExitCode {
        match s {
            Status::Ok => ExitCode::SUCCESS,
            Status::Failed => ExitCode::from(1),
            Status::Usage => ExitCode::from(2),
        }
    }
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Semigroup => "po-Γ-semigroup",
        Kind::Groupoid => "po-Γ-groupoid",
    }
}

fn emit<T: Serialize>(json: bool, report: &T, text: impl FnOnce() -> String) -> Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(report)?);
    } else {
        print!("{}", text());
    }
    Ok(())
}

enum Loaded {
    Valid(PoGammaStructure),
    Invalid(PoGammaStructure, Vec<Violation>),
}

fn read(path: &Path) -> Result<Loaded> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let s = parse_unvalidated(&text).map_err(|e: ParseError| anyhow::anyhow!("{}: {e}", path.display()))?;
    let report = validate(&s);
    Ok(if report.is_valid() {
        Loaded::Valid(s)
    } else {
        Loaded::Invalid(s, report.violations)
    })
}

fn load(path: &Path) -> Result<std::result::Result<PoGammaStructure, Status>> {
    match read(path)? {
        Loaded::Valid(s) => Ok(Ok(s)),
        Loaded::Invalid(_, violations) => {
            eprintln!("{}: axiom violation: {}", path.display(), violations[0]);
            Ok(Err(Status::Failed))
        }
    }
}

macro_rules! load_or_exit {
    ($path:expr) => {
        match load($path)? {
            Ok(s) => s,
            Err(status) => return Ok(status),
        }
    };
}

pub fn run(command: &Command, json: bool) -> Result<Status> {
    match command {
        Command::Validate { file } => validate_cmd(file, json),
        Command::Profile { file } => {
            let s = load_or_exit!(file);
            profile_cmd(&s, json)
        }
        Command::Filters { file, element } => {
            let s = load_or_exit!(file);
            filters_cmd(&s, *element, json)
        }
        Command::Nrel { file } => {
            let s = load_or_exit!(file);
            nrel_cmd(&s, json)
        }
        Command::Congruences { file } => {
            let s = load_or_exit!(file);
            congruences_cmd(&s, json)
        }
        Command::Quotient {
            file,
            partition,
            element,
        } => {
            let s = load_or_exit!(file);
            quotient_cmd(&s, partition.as_deref(), *element, json)
        }
        Command::Claims { file, claim } => {
            let s = load_or_exit!(file);
            claims_cmd(&s, claim.as_deref(), json)
        }
        Command::Search { claim, corpus, limit } => search_cmd(claim, &corpus.corpus(), *limit, json),
        Command::Gen { corpus, out } => gen_cmd(&corpus.corpus(), out.as_deref(), json),
        Command::Hasse { file } => {
            let s = load_or_exit!(file);
            let dot = hasse_dot(&s);
            #[derive(Serialize)]
            struct Hasse<'a> {
                dot: &'a str,
            }
            emit(json, &Hasse { dot: &dot }, || dot.clone())?;
            Ok(Status::Ok)
        }
    }
}

#[derive(Serialize)]
struct ValidateReport {
    valid: bool,
    n: usize,
    g: usize,
    kind: Kind,
    violations: Vec<Violation>,
}

fn validate_cmd(path: &Path, json: bool) -> Result<Status> {
    let (s, violations) = match read(path)? {
        Loaded::Valid(s) => (s, Vec::new()),
        Loaded::Invalid(s, v) => (s, v),
    };
    let report = ValidateReport {
        valid: violations.is_empty(),
        n: s.n(),
        g: s.g(),
        kind: s.kind(),
        violations,
    };
    emit(json, &report, || {
        let mut out = String::new();
        if report.valid {
            let _ = writeln!(out, "valid {}, n={} g={}", kind_name(s.kind()), s.n(), s.g());
        } else {
            let _ = writeln!(
                out,
                "invalid {}, n={} g={}: {} violation(s)",
                kind_name(s.kind()),
                s.n(),
                s.g(),
                report.violations.len()
            );
            for v in &report.violations {
                let _ = writeln!(out, "  {v}");
            }
        }
        out
    })?;
    Ok(if report.valid { Status::Ok } else { Status::Failed })
}

#[derive(Serialize)]
struct ProfileReport {
    n: usize,
    g: usize,
    kind: Kind,
    profile: StructuralProfile,
}

fn profile_cmd(s: &PoGammaStructure, json: bool) -> Result<Status> {
    let profile = structural_profile(s);
    let report = ProfileReport {
        n: s.n(),
        g: s.g(),
        kind: s.kind(),
        profile,
    };
    emit(json, &report, || {
        format!(
            "band: {}\ncommutative: {}\nsemilattice: {}\na ≤ b ⇒ aγb = a: {}\na ≤ b ⇔ aγb = a: {}\n",
            profile.is_band, profile.is_commutative, profile.is_semilattice, profile.order_forward, profile.order_iff
        )
    })?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct ElementFilters {
    element: usize,
    principal_filter: ElementSet,
    up_set: ElementSet,
}

#[derive(Serialize)]
struct FiltersReport {
    elements: Vec<ElementFilters>,
    filters: Option<Vec<ElementSet>>,
}

fn filters_cmd(s: &PoGammaStructure, element: Option<usize>, json: bool) -> Result<Status> {
    let targets: Vec<usize> = match element {
        Some(a) if a >= s.n() => bail!("element {a} is out of range for n={}", s.n()),
        Some(a) => vec![a],
        None => (0..s.n()).collect(),
    };
    let elements = targets
        .into_iter()
        .map(|a| {
            Ok(ElementFilters {
                element: a,
                principal_filter: principal_filter(s, a)?,
                up_set: up_set(s, a)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let report = FiltersReport {
        elements,
        filters: all_filters(s).ok(),
    };
    emit(json, &report, || {
        let mut out = String::new();
        for e in &report.elements {
            let _ = writeln!(out, "N({a})={}, [{a})={}", e.principal_filter, e.up_set, a = e.element);
        }
        match &report.filters {
            Some(all) => {
                let list: Vec<String> = all.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "filters ({}): {}", all.len(), list.join(" "));
            }
            None => out.push_str("filters: carrier too large for a subset scan\n"),
        }
        out
    })?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct NReport {
    class_of: Vec<usize>,
    classes: Vec<ElementSet>,
    class_order: Vec<Vec<bool>>,
    principal_filters: Vec<ElementSet>,
    is_equality: bool,
}

fn nrel_cmd(s: &PoGammaStructure, json: bool) -> Result<Status> {
    let nrel = relation_n(s)?;
    let order = class_order(s, &nrel)?;
    let report = NReport {
        class_of: nrel.class_of().to_vec(),
        classes: nrel.classes(),
        class_order: order.rows(),
        principal_filters: (0..s.n())
            .map(|a| principal_filter(s, a))
            .collect::<gamma_lab::Result<_>>()?,
        is_equality: nrel.is_discrete(),
    };
    emit(json, &report, || {
        let mut out = String::new();
        for (a, f) in report.principal_filters.iter().enumerate() {
            let _ = writeln!(out, "N({a})={f}");
        }
        let classes: Vec<String> = report.classes.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "N-classes: {}", classes.join(" "));
        out.push_str("class order ≼ (row ≼ column):\n");
        out.push_str(&matrix(&report.class_order));
        out
    })?;
    Ok(Status::Ok)
}

fn matrix(rows: &[Vec<bool>]) -> String {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|&b| if b { "1" } else { "0" })
                .collect::<Vec<_>>()
                .join(" ")
                + "\n"
        })
        .collect()
}

#[derive(Serialize)]
struct CongruenceEntry {
    class_of: Vec<usize>,
    complete: bool,
}

#[derive(Serialize)]
struct CongruencesReport {
    semilattice_congruences: Vec<CongruenceEntry>,
    smallest: Vec<usize>,
    smallest_complete: Vec<usize>,
    n_relation: Option<Vec<usize>>,
}

fn congruences_cmd(s: &PoGammaStructure, json: bool) -> Result<Status> {
    let all = enumerate_semilattice_congruences(s)?;
    let entries = all
        .iter()
        .map(|p| {
            Ok(CongruenceEntry {
                class_of: p.class_of().to_vec(),
                complete: check_congruence(s, p)?.is_complete,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let report = CongruencesReport {
        semilattice_congruences: entries,
        smallest: smallest_semilattice_congruence(s, false)?.class_of().to_vec(),
        smallest_complete: smallest_semilattice_congruence(s, true)?.class_of().to_vec(),
        n_relation: s
            .is_semigroup()
            .then(|| relation_n(s))
            .transpose()?
            .map(|p| p.class_of().to_vec()),
    };
    emit(json, &report, || {
        let mut out = format!("semilattice congruences ({}):\n", report.semilattice_congruences.len());
        for e in &report.semilattice_congruences {
            let _ = writeln!(out, "  {:?}{}", e.class_of, if e.complete { " complete" } else { "" });
        }
        let _ = writeln!(out, "smallest: {:?}", report.smallest);
        let _ = writeln!(out, "smallest complete: {:?}", report.smallest_complete);
        if let Some(nr) = &report.n_relation {
            let _ = writeln!(out, "N: {nr:?}");
        }
        out
    })?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct QuotientReport {
    class_of: Vec<usize>,
    k: usize,
    document: String,
    upset: Option<UpsetReport>,
}

#[derive(Serialize)]
struct UpsetReport {
    element: usize,
    classes: ElementSet,
    is_filter: bool,
}

fn quotient_cmd(s: &PoGammaStructure, labels: Option<&[usize]>, element: Option<usize>, json: bool) -> Result<Status> {
    let p = match labels {
        Some(l) if l.len() != s.n() => bail!("partition has {} labels, structure has {} elements", l.len(), s.n()),
        Some(l) => Partition::from_labels(l),
        None => relation_n(s)?,
    };
    let q = quotient(s, &p)?;
    let upset = element
        .map(|x| -> Result<UpsetReport> {
            let t = quotient_upset_t(s, &p, x)?;
            let is_filter = gamma_lab::is_filter(q.as_structure(), &t)?.verdict;
            Ok(UpsetReport {
                element: x,
                classes: t,
                is_filter,
            })
        })
        .transpose()?;
    let report = QuotientReport {
        class_of: p.class_of().to_vec(),
        k: q.k,
        document: serialize_structure(q.as_structure()),
        upset,
    };
    emit(json, &report, || {
        let mut out = format!("partition {:?}, {} classes\n", report.class_of, report.k);
        out.push_str(&report.document);
        if let Some(u) = &report.upset {
            let _ = writeln!(out, "T({})={} filter: {}", u.element, u.classes, u.is_filter);
        }
        out
    })?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct ClaimLine {
    kind: ClaimKind,
    statement: &'static str,
    #[serde(flatten)]
    verdict: ClaimVerdict,
}

fn claims_cmd(s: &PoGammaStructure, only: Option<&str>, json: bool) -> Result<Status> {
    let ids: Vec<ClaimId> = match only {
        Some(id) => vec![id.parse()?],
        None => ClaimId::ALL.to_vec(),
    };
    let mut lines = Vec::new();
    for id in ids {
        if id.needs_semigroup() && !s.is_semigroup() {
            continue;
        }
        lines.push(ClaimLine {
            kind: id.kind(),
            statement: id.statement(),
            verdict: check_claim(id, s)?,
        });
    }
    let proved_failure = lines.iter().any(|l| l.kind == ClaimKind::Proved && !l.verdict.holds());
    emit(json, &lines, || {
        let mut out = String::new();
        for l in &lines {
            let status = match (l.verdict.holds(), l.verdict.vacuous) {
                (true, true) => "holds (vacuous)".to_string(),
                (true, false) => "holds".to_string(),
                (false, _) => format!("FAILS at {}", l.verdict.witness.as_ref().expect("failure witness")),
            };
            let _ = writeln!(
                out,
                "{:<4} {:<14} {status}   {}",
                l.verdict.claim.to_string(),
                format!("{:?}", l.kind),
                l.statement
            );
        }
        out
    })?;
    Ok(if proved_failure { Status::Failed } else { Status::Ok })
}

fn search_cmd(claim: &str, corpus: &gamma_lab::Corpus, limit: usize, json: bool) -> Result<Status> {
    let id: ClaimId = claim.parse()?;
    let report = search_counterexamples(id, corpus, limit)?;
    emit(json, &report, || {
        let mut out = format!(
            "claim {} ({:?}): {}\n",
            report.claim, report.claim_kind, report.statement
        );
        let _ = writeln!(out, "structures checked: {}", report.structures_checked);
        let _ = writeln!(out, "vacuous: {}", report.vacuous);
        let _ = writeln!(out, "failures: {}", report.failures);
        let _ = writeln!(out, "elapsed: {:.2?}", report.elapsed);
        for c in &report.counterexamples {
            let _ = writeln!(out, "--- counterexample #{} at {}", c.index, c.witness);
            out.push_str(&serialize_structure(&c.structure));
        }
        if report.truncated {
            let _ = writeln!(out, "(list truncated at {})", report.limit);
        }
        out
    })?;
    let proved_failure = report.claim_kind == ClaimKind::Proved && report.failures > 0;
    Ok(if proved_failure { Status::Failed } else { Status::Ok })
}

fn gen_cmd(corpus: &gamma_lab::Corpus, out: Option<&Path>, json: bool) -> Result<Status> {
    let structures = corpus.structures()?;
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let width = structures.len().to_string().len().max(4);
        for (i, s) in structures.iter().enumerate() {
            let path = dir.join(format!("s{i:0width$}.pgs"));
            std::fs::write(&path, serialize_structure(s)).with_context(|| format!("writing {}", path.display()))?;
        }
        eprintln!("wrote {} structures to {}", structures.len(), dir.display());
        return Ok(Status::Ok);
    }
    emit(json, &structures, || {
        structures
            .iter()
            .map(serialize_structure)
            .collect::<Vec<_>>()
            .join("---\n")
    })?;
    Ok(Status::Ok)
}
