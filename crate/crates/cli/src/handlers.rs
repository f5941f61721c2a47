use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use syncong::congruence::Congruence;
use syncong::error::{Error, InternalError};
use syncong::homomorphism::Homomorphism;
use syncong::profinite::{ConditionStatus, CylinderSet, OmegaExponent, Thread};
use syncong::suites;
use syncong::translations::Provenance;
use syncong::truncated::{self, SparseSet};
use syncong::{serialize_algebra, serialize_dfa, serialize_system, Partition, SubsetL, Term};

use crate::select::{
    assignment_selector, cylinder_selector, level_partition_selector, load_algebra, load_dfa,
    load_system, parse_indices, subset_selector, CliError, CliResult,
};

/// What a verb produced: a text report, a JSON payload, optionally a DOT
/// drawing, and the exit code to finish with (nonzero for verbs whose job
/// is to diagnose something and found it broken).
pub struct Output {
    pub text: String,
    pub json: Value,
    pub dot: Option<String>,
    pub code: i32,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            dot: None,
            code: 0,
        }
    }
}

fn fmt_map(image: &[usize]) -> String {
    let words: Vec<String> = image.iter().map(|v| v.to_string()).collect();
    format!("[{}]", words.join(" "))
}

fn provenance_label(p: &Provenance) -> String {
    match p {
        Provenance::Identity => "identity".into(),
        Provenance::Elementary {
            symbol,
            coordinate,
            fixed,
        } => format!("{symbol} at slot {coordinate}, other slots {fixed:?}"),
        Provenance::Composite { generators } => format!("compose generators {generators:?}"),
        Provenance::TermInstance {
            term,
            distinguished,
            parameters,
        } => {
            let params: Vec<String> = parameters
                .iter()
                .map(|(var, val)| format!("{var}={val}"))
                .collect();
            format!("term {term} in {distinguished} with {}", params.join(","))
        }
    }
}

fn functions_json(set: &syncong::DeterminingSet) -> Value {
    Value::Array(
        set.functions()
            .iter()
            .map(|f| {
                json!({
                    "image": f.image(),
                    "provenance": provenance_label(f.provenance()),
                })
            })
            .collect(),
    )
}

pub fn syn(algebra: &Path, subset: &str) -> CliResult<Output> {
    let file = load_algebra(algebra)?;
    let l = subset_selector(subset, &file)?;
    let analysis = syncong::syntactic_congruence(&file.algebra, &l)?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "algebra {} (carrier {})",
        file.algebra.name(),
        file.algebra.carrier_size()
    );
    let _ = writeln!(text, "subset {l}");
    let _ = writeln!(
        text,
        "syntactic classes {} ({} classes)",
        analysis.congruence.partition(),
        analysis.congruence.class_count()
    );
    let _ = writeln!(
        text,
        "quotient {} (carrier {})",
        analysis.quotient.name(),
        analysis.quotient.carrier_size()
    );
    let _ = writeln!(text, "morphism {}", fmt_map(analysis.eta.image()));
    let _ = writeln!(
        text,
        "translation monoid size {}",
        analysis.monoid.elements().len()
    );
    let json = json!({
        "algebra": file.algebra.name(),
        "carrier": file.algebra.carrier_size(),
        "subset": l.indices(),
        "classes": analysis.congruence.partition().classes(),
        "class_count": analysis.congruence.class_count(),
        "quotient": {
            "name": analysis.quotient.name(),
            "carrier": analysis.quotient.carrier_size(),
        },
        "morphism": analysis.eta.image(),
        "monoid_size": analysis.monoid.elements().len(),
    });
    Ok(Output::new(text, json))
}

pub fn detset(algebra: &Path, subset: &str) -> CliResult<Output> {
    let file = load_algebra(algebra)?;
    let l = subset_selector(subset, &file)?;
    let set = syncong::determining_set_from_quotient(&file.algebra, &l)?;
    let check = syncong::is_s_determined(&file.algebra, &l, &set)?;
    let bound = syncong::index_bound_check(&file.algebra, &l, &set)?;
    let mut text = String::new();
    let _ = writeln!(text, "determining set for {l} ({} maps)", set.len());
    for f in set.functions() {
        let _ = writeln!(text, "  {}  {}", fmt_map(f.image()), provenance_label(f.provenance()));
    }
    let _ = writeln!(text, "determines: {}", check.determined);
    let _ = writeln!(
        text,
        "index bound: {} classes with {} maps (2^{} = {})",
        bound.class_count,
        bound.set_size,
        bound.set_size,
        1usize.checked_shl(bound.set_size as u32).map_or("large".into(), |v| v.to_string())
    );
    let json = json!({
        "subset": l.indices(),
        "functions": functions_json(&set),
        "count": set.len(),
        "determined": check.determined,
        "index_bound": {
            "class_count": bound.class_count,
            "set_size": bound.set_size,
            "holds": bound.holds,
        },
    });
    Ok(Output::new(text, json))
}

pub fn mindetset(algebra: &Path, subset: &str) -> CliResult<Output> {
    let file = load_algebra(algebra)?;
    let l = subset_selector(subset, &file)?;
    let set = syncong::determining_set_from_quotient(&file.algebra, &l)?;
    let minimal = syncong::minimal_determining_subset(&file.algebra, &l, &set)?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "minimal determining subset for {l}: {} of {} maps",
        minimal.len(),
        set.len()
    );
    for f in minimal.functions() {
        let _ = writeln!(text, "  {}  {}", fmt_map(f.image()), provenance_label(f.provenance()));
    }
    let json = json!({
        "subset": l.indices(),
        "initial_count": set.len(),
        "minimal_count": minimal.len(),
        "functions": functions_json(&minimal),
    });
    Ok(Output::new(text, json))
}

fn quotient_dot(
    source: &syncong::FiniteAlgebra,
    congruence: &Congruence,
    quotient: &syncong::FiniteAlgebra,
    projection: &Homomorphism,
) -> String {
    let mut dot = String::new();
    let _ = writeln!(dot, "digraph quotient {{");
    let _ = writeln!(dot, "  rankdir=LR;");
    let _ = writeln!(dot, "  subgraph cluster_source {{");
    let _ = writeln!(dot, "    label=\"{}\";", source.name());
    for e in 0..source.carrier_size() {
        let _ = writeln!(dot, "    s{e} [label=\"{e}\", shape=circle];");
    }
    let _ = writeln!(dot, "  }}");
    let _ = writeln!(dot, "  subgraph cluster_quotient {{");
    let _ = writeln!(dot, "    label=\"{}\";", quotient.name());
    for (c, class) in congruence.partition().classes().iter().enumerate() {
        let members: Vec<String> = class.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(dot, "    q{c} [label=\"{{{}}}\", shape=box];", members.join(","));
    }
    let _ = writeln!(dot, "  }}");
    for e in 0..source.carrier_size() {
        let _ = writeln!(dot, "  s{e} -> q{};", projection.apply(e));
    }
    let _ = writeln!(dot, "}}");
    dot
}

pub fn quotient(algebra: &Path, by: Option<&str>, subset: Option<&str>) -> CliResult<Output> {
    let file = load_algebra(algebra)?;
    let congruence = match (by, subset) {
        (Some(p), None) => {
            let partition = Partition::parse(p, file.algebra.carrier_size())?;
            Congruence::certify(&file.algebra, partition)?
        }
        (None, Some(s)) => {
            let l = subset_selector(s, &file)?;
            syncong::largest_congruence_saturating(&file.algebra, &l)?
        }
        _ => {
            return Err(CliError::Core(Error::BadParameter(
                "give exactly one of --by <blocks> or --subset <selector>".into(),
            )))
        }
    };
    let (q, projection) = congruence.quotient()?;
    let q_file = syncong::AlgFile {
        algebra: q.clone(),
        subsets: Vec::new(),
    };
    let mut text = String::new();
    let _ = writeln!(text, "classes {}", congruence.partition());
    let _ = writeln!(text, "projection {}", fmt_map(projection.image()));
    let _ = write!(text, "{}", serialize_algebra(&q_file));
    let json = json!({
        "classes": congruence.partition().classes(),
        "projection": projection.image(),
        "quotient": {
            "name": q.name(),
            "carrier": q.carrier_size(),
            "canonical": serialize_algebra(&q_file),
        },
    });
    let dot = quotient_dot(&file.algebra, &congruence, &q, &projection);
    Ok(Output {
        text,
        json,
        dot: Some(dot),
        code: 0,
    })
}

pub fn tm(algebra: &Path) -> CliResult<Output> {
    let file = load_algebra(algebra)?;
    let monoid = syncong::translation_monoid(&file.algebra)?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "translation monoid of {}: {} elements",
        file.algebra.name(),
        monoid.elements().len()
    );
    let _ = writeln!(text, "generators:");
    for g in monoid.generators() {
        let _ = writeln!(text, "  {}  {}", fmt_map(g.image()), provenance_label(g.provenance()));
    }
    let _ = writeln!(text, "elements:");
    for f in monoid.elements() {
        let _ = writeln!(text, "  {}", fmt_map(f.image()));
    }
    let json = json!({
        "algebra": file.algebra.name(),
        "size": monoid.elements().len(),
        "generators": monoid.generators().iter().map(|g| json!({
            "image": g.image(),
            "provenance": provenance_label(g.provenance()),
        })).collect::<Vec<_>>(),
        "elements": monoid.elements().iter().map(|f| f.image().to_vec()).collect::<Vec<_>>(),
    });
    Ok(Output::new(text, json))
}

pub fn pullback(source: &Path, target: &Path, map: &str, subset: &str) -> CliResult<Output> {
    let src = load_algebra(source)?;
    let tgt = load_algebra(target)?;
    let image = parse_indices(map)?;
    let phi = Homomorphism::new(src.algebra.clone(), tgt.algebra.clone(), image)?;
    let l = subset_selector(subset, &tgt)?;
    let report = syncong::pullback_syntactic_check(&phi, &l)?;
    let mut text = String::new();
    let _ = writeln!(text, "map {}", fmt_map(phi.image()));
    let _ = writeln!(text, "target subset {l}");
    let _ = writeln!(text, "preimage {}", report.preimage);
    let _ = writeln!(
        text,
        "source syntactic classes {}",
        report.source_congruence.partition()
    );
    let _ = writeln!(
        text,
        "target syntactic classes {}",
        report.target_congruence.partition()
    );
    let _ = writeln!(
        text,
        "pullback equals the source congruence; induced isomorphism {}",
        fmt_map(report.induced.image())
    );
    let json = json!({
        "map": phi.image(),
        "subset": l.indices(),
        "preimage": report.preimage.indices(),
        "source_classes": report.source_congruence.partition().classes(),
        "target_classes": report.target_congruence.partition().classes(),
        "pullback_classes": report.pullback.classes(),
        "induced": report.induced.image(),
        "verified": true,
    });
    Ok(Output::new(text, json))
}

pub fn sys_validate(system: &Path) -> CliResult<Output> {
    let sys = load_system(system)?;
    let diag = sys.validate();
    let ok = diag.ok();
    let mut text = String::new();
    let _ = writeln!(text, "system {} (depth {})", sys.name(), sys.depth());
    for c in &diag.checks {
        let _ = writeln!(
            text,
            "map {} -> {}: homomorphism {}, surjective {}{}",
            c.upper,
            c.lower,
            if c.homomorphism { "yes" } else { "no" },
            if c.surjective { "yes" } else { "no" },
            c.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default()
        );
    }
    let _ = writeln!(text, "valid: {}", if ok { "yes" } else { "no" });
    let json = json!({
        "system": sys.name(),
        "depth": sys.depth(),
        "valid": ok,
        "checks": serde_json::to_value(&diag.checks).expect("diagnostics serialize"),
    });
    Ok(Output {
        text,
        json,
        dot: None,
        code: if ok { 0 } else { 1 },
    })
}

pub fn sys_separate(system: &Path, t1: &str, t2: &str) -> CliResult<Output> {
    let sys = load_system(system)?;
    let a = Thread::new(&sys, parse_indices(t1)?)?;
    let b = Thread::new(&sys, parse_indices(t2)?)?;
    let level = syncong::separate_points(&a, &b)?;
    let text = match level {
        Some(k) => format!("threads first differ at level {k}\n"),
        None => "threads agree at every level\n".to_string(),
    };
    let json = json!({
        "first": a.values(),
        "second": b.values(),
        "separating_level": level,
    });
    Ok(Output::new(text, json))
}

pub fn sys_recognize(system: &Path, cyl: &str) -> CliResult<Output> {
    let sys = load_system(system)?;
    let (level, indices) = cylinder_selector(cyl)?;
    let cylinder = CylinderSet::new(&sys, level, &indices)?;
    let rec = syncong::recognize_clopen(&sys, &cylinder)?;
    let mut text = String::new();
    let _ = writeln!(text, "system {} (depth {})", sys.name(), sys.depth());
    let _ = writeln!(text, "cylinder at level {level}: {}", cylinder.subset);
    let _ = writeln!(
        text,
        "recognizer carrier {}, image {}",
        rec.recognizer.carrier_size(),
        rec.image
    );
    let mut levels_json = Vec::new();
    for lv in &rec.levels {
        let lifted = syncong::cylinder_syntactic(&sys, &cylinder, lv.level)?;
        let _ = writeln!(
            text,
            "level {}: cylinder {}, preimage identity {}, syntactic classes {}",
            lv.level,
            lv.cylinder,
            if lv.identity_holds { "holds" } else { "fails" },
            lifted.partition()
        );
        levels_json.push(json!({
            "level": lv.level,
            "cylinder": lv.cylinder.indices(),
            "into_recognizer": lv.into_recognizer.image(),
            "identity_holds": lv.identity_holds,
            "syntactic_classes": lifted.partition().classes(),
        }));
    }
    let json = json!({
        "system": sys.name(),
        "depth": sys.depth(),
        "base_level": rec.base_level,
        "recognizer_carrier": rec.recognizer.carrier_size(),
        "image": rec.image.indices(),
        "levels": levels_json,
    });
    Ok(Output::new(text, json))
}

pub fn sys_quotient(system: &Path, thetas: &[String]) -> CliResult<Output> {
    let sys = load_system(system)?;
    let mut parsed: Vec<Option<Partition>> = vec![None; sys.depth()];
    for spec in thetas {
        let (level, blocks) = level_partition_selector(spec)?;
        if level == 0 || level > sys.depth() {
            return Err(CliError::Core(Error::LevelOutOfRange {
                level,
                depth: sys.depth(),
            }));
        }
        let carrier = sys.level(level)?.carrier_size();
        if parsed[level - 1].is_some() {
            return Err(CliError::Core(Error::BadParameter(format!(
                "level {level} given twice"
            ))));
        }
        parsed[level - 1] = Some(Partition::parse(&blocks, carrier)?);
    }
    let mut congruences = Vec::with_capacity(sys.depth());
    for (i, p) in parsed.into_iter().enumerate() {
        let p = p.ok_or_else(|| {
            CliError::Core(Error::BadParameter(format!(
                "missing --theta for level {}",
                i + 1
            )))
        })?;
        congruences.push(Congruence::certify(sys.level(i + 1)?, p)?);
    }
    let q = syncong::quotient_system(&sys, &congruences)?;
    let mut text = String::new();
    for (i, proj) in q.projections.iter().enumerate() {
        let _ = writeln!(text, "projection at level {}: {}", i + 1, fmt_map(proj.image()));
    }
    let _ = write!(text, "{}", serialize_system(&q.system));
    let json = json!({
        "system": q.system.name(),
        "depth": q.system.depth(),
        "projections": q.projections.iter().map(|p| p.image().to_vec()).collect::<Vec<_>>(),
        "canonical": serialize_system(&q.system),
    });
    Ok(Output::new(text, json))
}

pub fn meet(algebra: &Path, blocks: &str) -> CliResult<Output> {
    let file = load_algebra(algebra)?;
    let partition = Partition::parse(blocks, file.algebra.carrier_size())?;
    let subsets: Vec<SubsetL> = partition
        .classes()
        .iter()
        .map(|c| SubsetL::from_indices(file.algebra.carrier_size(), c))
        .collect::<Result<_, _>>()?;
    let theta = syncong::profinite::partition_meet_congruence(&file.algebra, &subsets)?;
    let text = format!(
        "blocks {}\nmeet of the blockwise syntactic congruences: {} ({} classes)\n",
        partition,
        theta.partition(),
        theta.class_count()
    );
    let json = json!({
        "blocks": partition.classes(),
        "classes": theta.partition().classes(),
        "class_count": theta.class_count(),
    });
    Ok(Output::new(text, json))
}

pub fn omega(algebra: &Path, element: usize, power: &str) -> CliResult<Output> {
    let file = load_algebra(algebra)?;
    let exponent = match power {
        "omega" | "w" => OmegaExponent::Omega,
        n => OmegaExponent::Factorial(n.parse::<u64>().map_err(|_| {
            CliError::Core(Error::BadParameter(format!(
                "power must be `omega` or a number, got `{n}`"
            )))
        })?),
    };
    let value = syncong::omega_power(&file.algebra, element, exponent)?;
    let label = match exponent {
        OmegaExponent::Omega => "omega".to_string(),
        OmegaExponent::Factorial(n) => format!("{n}!"),
    };
    let text = format!("{element}^{label} = {value}\n");
    let json = json!({
        "element": element,
        "power": label,
        "value": value,
    });
    Ok(Output::new(text, json))
}

pub fn thm61(algebra: &Path, subset: &str) -> CliResult<Output> {
    let file = load_algebra(algebra)?;
    let l = subset_selector(subset, &file)?;
    let report = syncong::determination_report(&file.algebra, &l)?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "recognizability report for {} in {} ({} syntactic classes)",
        l,
        report.algebra,
        report.class_count
    );
    for c in &report.conditions {
        let status = match &c.status {
            ConditionStatus::Holds => "holds".to_string(),
            ConditionStatus::Trivial => "trivial".to_string(),
            ConditionStatus::ImpliedBy { condition } => format!("implied by {condition}"),
            ConditionStatus::OutOfScope => "out of scope".to_string(),
        };
        let _ = writeln!(text, "({:>2}) {:<13} {}", c.id, status, c.summary);
    }
    let json = serde_json::to_value(&report).expect("report serializes");
    Ok(Output::new(text, json))
}

pub fn dfa_synmon(dfa: &Path) -> CliResult<Output> {
    let d = load_dfa(dfa)?;
    let sm = syncong::syntactic_monoid(&d)?;
    let mut text = String::new();
    let _ = writeln!(text, "minimal automaton:");
    let _ = write!(text, "{}", serialize_dfa(&sm.minimal));
    let _ = writeln!(text, "syntactic monoid: {} elements", sm.size());
    for (letter, &e) in sm.minimal.alphabet().iter().zip(&sm.transitions.letter_elements) {
        let _ = writeln!(
            text,
            "  letter {letter} -> element {e} {}",
            fmt_map(sm.transitions.monoid.elements()[e].image())
        );
    }
    let _ = writeln!(text, "identity element {}", sm.identity);
    let _ = writeln!(text, "accepted elements {}", sm.accepted);
    let _ = writeln!(text, "faithful: yes");
    let json = json!({
        "automaton": d.name(),
        "minimal": {
            "states": sm.minimal.state_count(),
            "initial": sm.minimal.initial(),
            "accepting": sm.minimal.accepting().indices(),
            "canonical": serialize_dfa(&sm.minimal),
        },
        "monoid_size": sm.size(),
        "elements": sm.transitions.monoid.elements().iter().map(|f| f.image().to_vec()).collect::<Vec<_>>(),
        "letters": sm.minimal.alphabet().iter().zip(&sm.transitions.letter_elements)
            .map(|(l, &e)| json!({"letter": l, "element": e}))
            .collect::<Vec<_>>(),
        "identity": sm.identity,
        "accepted": sm.accepted.indices(),
        "faithful": true,
    });
    Ok(Output::new(text, json))
}

pub struct CheckArgs {
    pub suite: String,
    pub n: Option<u64>,
    pub xmax: Option<u64>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub set: Option<String>,
}

fn sweep_output(report: suites::SweepReport) -> CliResult<Output> {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "suite {}: {} samples, {} checks, {} failures",
        report.label,
        report.samples,
        report.checks,
        report.failures.len()
    );
    for f in &report.failures {
        let _ = writeln!(text, "  {f}");
    }
    let ok = report.ok();
    let label = report.label.clone();
    let json = serde_json::to_value(&report).expect("sweep report serializes");
    if !ok {
        return Err(CliError::Core(
            InternalError::CertifyFailed(format!(
                "suite {label} reported {} failures",
                report.failures.len()
            ))
            .into(),
        ));
    }
    Ok(Output::new(text, json))
}

fn sparse_set(spec: Option<&str>) -> CliResult<SparseSet> {
    match spec.unwrap_or("powers") {
        "powers" | "powers-of-two" => Ok(SparseSet::PowersOfTwo),
        "primes" => Ok(SparseSet::Primes),
        other => Err(CliError::Core(Error::BadParameter(format!(
            "membership set must be `powers` or `primes`, got `{other}`"
        )))),
    }
}

pub fn check(args: &CheckArgs) -> CliResult<Output> {
    match args.suite.as_str() {
        "ex52" => sweep_output(suites::constant_op_sweep()?),
        "oracle" => sweep_output(suites::oracle_sweep(
            args.samples.unwrap_or(200),
            4,
            args.seed,
        )?),
        "pullback" => sweep_output(suites::pullback_sweep(args.samples.unwrap_or(100), args.seed)?),
        "detset" => sweep_output(suites::determining_set_sweep(
            args.samples.unwrap_or(200),
            args.seed,
        )?),
        "linearize" => sweep_output(suites::linearization_sweep(
            args.samples.unwrap_or(500),
            args.seed,
        )?),
        "omega" => sweep_output(suites::omega_sweep(args.samples.unwrap_or(50), args.seed)?),
        "ex512" => {
            let bound = args.n.unwrap_or(64);
            let xmax = args.xmax.unwrap_or(4096);
            let report = truncated::separation_sweep(bound, xmax, sparse_set(args.set.as_deref())?)?;
            let mut text = String::new();
            let _ = writeln!(
                text,
                "window {bound}, shifts to {xmax}, membership {}: {}/{} pairs separated",
                report.set.label(),
                report.witnesses.len(),
                report.pairs_total
            );
            let _ = writeln!(
                text,
                "any determining set needs at least {} maps",
                report.min_determining_size
            );
            if !report.all_separated() {
                let _ = writeln!(text, "unseparated pairs: {:?}", report.unseparated);
            }
            let ok = report.all_separated();
            let json = serde_json::to_value(&report).expect("separation report serializes");
            if !ok {
                return Err(CliError::Core(Error::BadParameter(
                    "some pairs were not separated within the shift bound; raise --xmax".into(),
                )));
            }
            Ok(Output::new(text, json))
        }
        "ex517" => {
            let bound = args.n.unwrap_or(20);
            let report = truncated::one_point_product_sweep(bound)?;
            let mut text = String::new();
            let _ = writeln!(
                text,
                "window {bound}: {}/{} mixed pairs separated, {} separations inside the infinite block (expected 0)",
                report.mixed_separated,
                report.mixed_checked,
                report.infinite_separations.len()
            );
            for note in &report.notes {
                let _ = writeln!(text, "note: {note}");
            }
            let ok = report.ok();
            let json = serde_json::to_value(&report).expect("product report serializes");
            if !ok {
                return Err(CliError::Core(
                    InternalError::CertifyFailed("product-window sweep found violations".into())
                        .into(),
                ));
            }
            Ok(Output::new(text, json))
        }
        other => Err(CliError::Core(Error::BadParameter(format!(
            "unknown suite `{other}`; valid: ex52, ex512, ex517, oracle, pullback, detset, linearize, omega"
        )))),
    }
}

pub fn eval(algebra: &Path, term: &str, assign: &str) -> CliResult<Output> {
    let file = load_algebra(algebra)?;
    let t = Term::parse(term, file.algebra.signature())?;
    let assignment = assignment_selector(assign)?;
    let value = syncong::eval_term(&file.algebra, &t, &assignment)?;
    let text = format!("{t} = {value}\n");
    let json = json!({
        "term": t.to_string(),
        "value": value,
    });
    Ok(Output::new(text, json))
}

pub fn linearize(algebra: &Path, term: &str, var: &str) -> CliResult<Output> {
    let file = load_algebra(algebra)?;
    let t = Term::parse(term, file.algebra.signature())?;
    let lin = syncong::linearize(&t, var)?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{} splits of {t} along {var} (moving {}, before {}, after {})",
        lin.terms.len(),
        lin.x,
        lin.y,
        lin.z
    );
    for (i, s) in lin.terms.iter().enumerate() {
        let _ = writeln!(text, "  {}: {s}", i + 1);
    }
    let json = json!({
        "term": t.to_string(),
        "variable": var,
        "moving": lin.x,
        "before": lin.y,
        "after": lin.z,
        "splits": lin.terms.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
    });
    Ok(Output::new(text, json))
}

pub fn fmt(
    algebra: Option<&Path>,
    system: Option<&Path>,
    dfa: Option<&Path>,
) -> CliResult<Output> {
    let canonical = match (algebra, system, dfa) {
        (Some(p), None, None) => serialize_algebra(&load_algebra(p)?),
        (None, Some(p), None) => serialize_system(&load_system(p)?),
        (None, None, Some(p)) => serialize_dfa(&load_dfa(p)?),
        _ => {
            return Err(CliError::Core(Error::BadParameter(
                "give exactly one of --algebra, --system, --dfa".into(),
            )))
        }
    };
    let json = json!({ "canonical": canonical });
    Ok(Output::new(canonical, json))
}
