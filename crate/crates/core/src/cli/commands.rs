use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use super::circuitfile::CircuitFile;
use super::expr::parse_operator;
use super::report::{digest, Report};
use super::rulefile::RuleFile;
use super::{builtin, Cli, Command, Failure, Params, Source};
use crate::circuits::{equivalence_witness, synthesize, Equivalence, Fdfc};
use crate::classify::{classify_automaton, Classification};
use crate::fca::{validate_local_rule, Automaton, LocalUnitary};
use crate::graded::GradedOperator;
use crate::support::{compute_index_at, IndexValue};

/// Text for humans and the report for `--json`.
pub struct Output {
    pub text: String,
    pub report: Report,
}

struct Loaded {
    automaton: Automaton,
    digest: String,
    label: String,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn load_rule_file(path: &Path) -> Result<Loaded, Failure> {
    let text = read(path)?;
    let file = RuleFile::parse(&text).map_err(Failure::input)?;
    let rule = file.to_rule().map_err(Failure::input)?;
    Ok(Loaded {
        automaton: Automaton::Custom(rule),
        digest: digest([text.as_bytes()]),
        label: path.display().to_string(),
    })
}

fn load_builtin(name: &str, p: &Params) -> Result<Loaded, Failure> {
    let automaton = builtin(name, p)?;
    let params = format!("theta={:e};n={};phi={:e}", p.theta, p.n, p.phi);
    Ok(Loaded {
        label: automaton.to_string(),
        automaton,
        digest: digest([name.as_bytes(), params.as_bytes()]),
    })
}

fn load(src: &Source) -> Result<Loaded, Failure> {
    match (&src.rule, &src.builtin) {
        (Some(path), None) => load_rule_file(path),
        (None, Some(name)) => load_builtin(name, &src.params),
        _ => Err(Failure::input("give a rule file or --builtin <name>")),
    }
}

/// `builtin:<name>` or a rule file path.
fn load_spec(spec: &str, p: &Params) -> Result<Loaded, Failure> {
    match spec.strip_prefix("builtin:") {
        Some(name) => load_builtin(name, p),
        None => load_rule_file(Path::new(spec)),
    }
}

/// Refuses rules that do not define an automaton.
fn require_valid(l: &Loaded, tol: f64, command: &str) -> Result<(), Failure> {
    let report = validate_local_rule(&l.automaton.local_rule(), tol);
    if report.is_valid() {
        return Ok(());
    }
    let violations: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
    let r = Report::new(command, l.digest.clone(), json!({ "valid": false, "violations": violations }));
    Err(Failure::refused(format!("{} is not a valid automaton: {}", l.label, violations[0])).with_report(r))
}

fn index_json(v: &IndexValue) -> Value {
    let mut out = json!({
        "exact": v.to_string(),
        "log2_num": v.log2_num,
        "log2_den": IndexValue::LOG2_DEN,
        "value": v.value(),
    });
    if let Some(p) = v.provenance {
        out["m"] = json!(p.m);
        out["p_plus_q"] = json!(p.p_plus_q);
        out["d"] = json!(p.d);
    }
    out
}

fn unitary_json(u: &LocalUnitary) -> Value {
    json!({ "theta": u.theta, "n": u.n })
}

fn classification_json(c: &Classification) -> Value {
    match c {
        Classification::LocalConjugation(u) => json!({ "family": c.family(), "unitary": unitary_json(u) }),
        Classification::ControlledPhase { phi, unitary } => {
            json!({ "family": c.family(), "phi": phi, "unitary": unitary_json(unitary) })
        }
        Classification::Forking { unitary, pre } => json!({
            "family": c.family(),
            "unitary": unitary_json(unitary),
            "pre": unitary_json(pre),
        }),
        Classification::ShiftComposed { direction, inner }
        | Classification::MajoranaShiftComposed { direction, inner } => json!({
            "family": c.family(),
            "direction": direction.to_string(),
            "inner": classification_json(inner),
        }),
    }
}

fn validate(path: &Path, tol: f64) -> Result<Output, Failure> {
    let l = load_rule_file(path)?;
    require_valid(&l, tol, "validate")?;
    let report = Report::new("validate", l.digest, json!({ "valid": true, "violations": [] }));
    Ok(Output {
        text: format!("{}: valid", path.display()),
        report,
    })
}

fn index(src: &Source, tol: f64) -> Result<Output, Failure> {
    let l = load(src)?;
    require_valid(&l, tol, "index")?;
    let w = compute_index_at(&l.automaton, 0).map_err(|e| Failure::refused(e.to_string()))?;
    let v = w.index;
    let report = Report::new("index", l.digest, index_json(&v))
        .with_index(&v)
        .note(format!("left support algebra: {} (dimension {})", w.left_class, w.left.dimension()));
    Ok(Output {
        text: format!("index {} ≈ {:.6}", v, v.value()),
        report,
    })
}

fn classify(src: &Source, tol: f64) -> Result<Output, Failure> {
    let l = load(src)?;
    require_valid(&l, tol, "classify")?;
    let c = classify_automaton(&l.automaton).map_err(|e| Failure::refused(e.to_string()))?;
    let normal = c.to_automaton().local_rule();
    let mut result = classification_json(&c);
    result["normal_form"] = serde_json::to_value(RuleFile::from_rule(&normal)).expect("rule files serialize");
    let report = Report::new("classify", l.digest, result).with_index(&c.index());
    Ok(Output {
        text: format!("{}\nX(0) -> {}\nY(0) -> {}", c, normal.image_x, normal.image_y),
        report,
    })
}

/// Largest deviation between circuit and automaton on the generators of one
/// period of cells.
fn circuit_residual(circuit: &Fdfc, aut: &Automaton) -> f64 {
    let cells = circuit.period().max(2);
    (0..cells)
        .flat_map(|c| [GradedOperator::x(c), GradedOperator::y(c)])
        .map(|g| circuit.evolve(&g).max_abs_diff(&aut.evolve(&g)))
        .fold(0.0, f64::max)
}

/// Serializes `circuit`, reloads it and checks the reloaded copy against `aut`.
fn checked_file(circuit: &Fdfc, aut: &Automaton, tol: f64) -> Result<(CircuitFile, f64), Failure> {
    let file = CircuitFile::from_fdfc(circuit).map_err(Failure::refused)?;
    let reloaded = CircuitFile::parse(&file.to_json())
        .and_then(|f| f.to_fdfc())
        .map_err(Failure::refused)?;
    let residual = circuit_residual(&reloaded, aut);
    if residual > tol {
        return Err(Failure::refused(format!(
            "circuit does not reproduce the automaton (residual {residual:.3e})"
        )));
    }
    Ok((file, residual))
}

fn write_output(path: Option<&Path>, file: &CircuitFile) -> Result<(), Failure> {
    if let Some(p) = path {
        fs::write(p, file.to_json()).map_err(|e| Failure::input(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn circuit_text(file: &CircuitFile, residual: f64) -> String {
    format!("circuit of depth {} (residual {residual:.3e})", file.layers.len())
}

fn synthesize_cmd(src: &Source, output: Option<&Path>, tol: f64) -> Result<Output, Failure> {
    let l = load(src)?;
    require_valid(&l, tol, "synthesize")?;
    let v = compute_index_at(&l.automaton, 0)
        .map_err(|e| Failure::refused(e.to_string()))?
        .index;
    if !v.is_one() {
        let r = Report::new("synthesize", l.digest.clone(), index_json(&v)).with_index(&v);
        return Err(Failure::refused(format!(
            "index is {v}; an automaton is implementable by a finite-depth circuit if and only if its index is one"
        ))
        .with_report(r));
    }
    let c = classify_automaton(&l.automaton).map_err(|e| Failure::refused(e.to_string()))?;
    let circuit = synthesize(&c).map_err(|e| Failure::refused(e.to_string()))?;
    let (file, residual) = checked_file(&circuit, &l.automaton, tol)?;
    write_output(output, &file)?;
    let result = json!({
        "classification": classification_json(&c),
        "depth": file.layers.len(),
        "residual": residual,
        "circuit": serde_json::to_value(&file).expect("circuit files serialize"),
    });
    Ok(Output {
        text: circuit_text(&file, residual),
        report: Report::new("synthesize", l.digest, result).with_index(&v),
    })
}

fn check_circuit(path: &Path, src: &Source, tol: f64) -> Result<Output, Failure> {
    let l = load(src)?;
    let text = read(path)?;
    let circuit = CircuitFile::parse(&text)
        .and_then(|f| f.to_fdfc())
        .map_err(Failure::input)?;
    let residual = circuit_residual(&circuit, &l.automaton);
    let d = digest([text.as_bytes(), l.digest.as_bytes()]);
    let report = Report::new("check-circuit", d, json!({ "residual": residual, "matches": residual <= tol }));
    if residual > tol {
        return Err(Failure::refused(format!("circuit misses the automaton by {residual:.3e}")).with_report(report));
    }
    Ok(Output {
        text: format!("circuit matches (residual {residual:.3e})"),
        report,
    })
}

fn parse_window(s: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::input(format!("window must look like lo..hi, got '{s}'"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn evolve(src: &Source, expr: &str, steps: usize, window: Option<&str>, tol: f64) -> Result<Output, Failure> {
    let l = load(src)?;
    require_valid(&l, tol, "evolve")?;
    let op = parse_operator(expr).map_err(|e| Failure::input(format!("bad operator expression: {e}")))?;
    let window = window.map(parse_window).transpose()?;
    let fits = |o: &GradedOperator| match window {
        Some((lo, hi)) => o.support().iter().all(|c| (lo..=hi).contains(c)),
        None => true,
    };
    let mut cur = op;
    for step in 0..=steps {
        if !fits(&cur) {
            return Err(Failure::refused(format!(
                "operator leaves the window after {step} step(s)"
            )));
        }
        if step < steps {
            cur = l.automaton.evolve(&cur).pruned(crate::graded::ZERO_TOL);
        }
    }
    let terms = serde_json::to_value(super::rulefile::terms_of(&cur)).expect("terms serialize");
    let d = digest([l.digest.as_bytes(), expr.as_bytes(), &steps.to_le_bytes()]);
    let report = Report::new("evolve", d, json!({ "operator": cur.to_string(), "terms": terms, "steps": steps }));
    Ok(Output {
        text: cur.to_string(),
        report,
    })
}

fn equivalence(a: &str, b: &str, p: &Params, output: Option<&Path>, tol: f64) -> Result<Output, Failure> {
    let la = load_spec(a, p)?;
    let lb = load_spec(b, p)?;
    require_valid(&la, tol, "equivalence")?;
    require_valid(&lb, tol, "equivalence")?;
    let d = digest([la.digest.as_bytes(), lb.digest.as_bytes()]);
    match equivalence_witness(&la.automaton, &lb.automaton).map_err(|e| Failure::refused(e.to_string()))? {
        Equivalence::NotEquivalent(ratio) => {
            let r = Report::new("equivalence", d, json!({ "equivalent": false, "ratio": index_json(&ratio) }))
                .with_index(&ratio);
            Err(Failure::refused(format!("not equivalent: index ratio {ratio}")).with_report(r))
        }
        Equivalence::Witness(circuit) => {
            let file = CircuitFile::from_fdfc(&circuit).map_err(Failure::refused)?;
            let reloaded = CircuitFile::parse(&file.to_json())
                .and_then(|f| f.to_fdfc())
                .map_err(Failure::refused)?;
            // circuit ∘ b must agree with a
            let composed = (0..reloaded.period().max(2))
                .flat_map(|c| [GradedOperator::x(c), GradedOperator::y(c)])
                .map(|g| {
                    reloaded
                        .evolve(&lb.automaton.evolve(&g))
                        .max_abs_diff(&la.automaton.evolve(&g))
                })
                .fold(0.0, f64::max);
            if composed > tol {
                return Err(Failure::refused(format!(
                    "reloaded witness misses by {composed:.3e}"
                )));
            }
            write_output(output, &file)?;
            let result = json!({
                "equivalent": true,
                "depth": file.layers.len(),
                "circuit": serde_json::to_value(&file).expect("circuit files serialize"),
            });
            Ok(Output {
                text: format!("equivalent; witness circuit of depth {}", file.layers.len()),
                report: Report::new("equivalence", d, result).with_index(&IndexValue::one()),
            })
        }
    }
}

pub fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    let tol = cli.tolerance;
    match &cli.command {
        Command::Validate { rule } => validate(rule, tol),
        Command::Index(src) => index(src, tol),
        Command::Classify(src) => classify(src, tol),
        Command::Synthesize { source, output } => synthesize_cmd(source, output.as_deref(), tol),
        Command::CheckCircuit { circuit, source } => check_circuit(circuit, source, tol),
        Command::Evolve {
            source,
            op,
            steps,
            window,
        } => evolve(source, op, *steps, window.as_deref(), tol),
        Command::Equivalence { a, b, params, output } => equivalence(a, b, params, output.as_deref(), tol),
    }
}
