use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use thicket::lattice::{analyze, export_dot, LatticeReport, Witness};
use thicket::space::{
    check_morphism, check_support_datum, datum_to_json, parse_datum, parse_morphism,
    random_support_datum, universal_morphism, MorphismFailure, SupportDatum, SupportReport,
    SupportSpace, Violation,
};
use thicket::tensor::{comparison_map, primes, verify_tt_support, TtReport};
use thicket::{build_sp, builtin_from_spec, enumerate_thick, parse_presentation, Presentation};

use crate::{Command, Common, Outcome};

type CmdResult = Result<Outcome, String>;

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load(common: &Common) -> Result<Presentation, String> {
    let p = match (&common.source.builtin, &common.source.input) {
        (Some(spec), None) => builtin_from_spec(spec),
        (None, Some(path)) => parse_presentation(&read(path)?),
        _ => unreachable!("clap enforces exactly one input source"),
    };
    p.map_err(|e| e.to_string())
}

fn ok(stdout: String) -> CmdResult {
    Ok(Outcome {
        stdout,
        valid: true,
    })
}

fn json_out(v: Value, valid: bool) -> CmdResult {
    let mut s = serde_json::to_string_pretty(&v).expect("json value serializes");
    s.push('\n');
    Ok(Outcome { stdout: s, valid })
}

pub fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::Enumerate(c) => enumerate(&c),
        Command::Lattice {
            common,
            dot,
            max_size,
        } => lattice(&common, dot, max_size),
        Command::Space { common, max_size } => space(&common, max_size),
        Command::Check { common, datum } => check(&common, datum.as_deref()),
        Command::Map {
            common,
            datum,
            morphism,
        } => map(&common, datum.as_deref(), morphism.as_deref()),
        Command::Spectrum(c) => spectrum(&c),
        Command::Compare(c) => compare(&c),
        Command::Generate {
            common,
            seed,
            points,
        } => generate(&common, seed, points),
    }
}

fn enumerate(c: &Common) -> CmdResult {
    let p = load(c)?;
    let l = enumerate_thick(&p);
    let labels: Vec<String> = l
        .elements()
        .iter()
        .map(|j| p.format_set(j.members()))
        .collect();
    if c.json {
        return json_out(json!({ "size": l.len(), "elements": labels }), true);
    }
    let mut out = String::new();
    for label in labels {
        out.push_str(&label);
        out.push('\n');
    }
    ok(out)
}

fn witness_json(p: &Presentation, w: &Option<Witness>) -> Value {
    match w {
        None => Value::Null,
        Some(w) => json!({
            "x": p.format_set(w.x.members()),
            "y": p.format_set(w.y.members()),
            "z": p.format_set(w.z.members()),
        }),
    }
}

fn witness_text(p: &Presentation, w: &Witness) -> String {
    format!(
        "x={} y={} z={}",
        p.format_set(w.x.members()),
        p.format_set(w.y.members()),
        p.format_set(w.z.members())
    )
}

fn lattice_text(p: &Presentation, r: &LatticeReport) -> String {
    let mut out = String::new();
    let atoms: Vec<String> = r.atoms.iter().map(|a| p.format_set(a.members())).collect();
    let _ = writeln!(out, "size: {}", r.size);
    let _ = writeln!(out, "height: {}", r.height);
    let _ = writeln!(out, "atoms: {}", atoms.join(" "));
    let _ = writeln!(out, "distributive: {}", r.is_distributive);
    if let Some(w) = &r.distributive_witness {
        let _ = writeln!(out, "distributive witness: {}", witness_text(p, w));
    }
    let _ = writeln!(out, "modular: {}", r.is_modular);
    if let Some(w) = &r.modular_witness {
        let _ = writeln!(out, "modular witness: {}", witness_text(p, w));
    }
    out
}

fn lattice(c: &Common, dot: Option<Option<std::path::PathBuf>>, max_size: usize) -> CmdResult {
    let p = load(c)?;
    let l = enumerate_thick(&p);
    let r = analyze(&l, max_size).map_err(|e| e.to_string())?;
    let dot_text = dot.as_ref().map(|_| export_dot(&l, &p));
    let inline_dot = match (&dot, &dot_text) {
        (Some(Some(path)), Some(text)) => {
            fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            None
        }
        (Some(None), Some(text)) => Some(text.clone()),
        _ => None,
    };
    if c.json {
        let mut v = json!({
            "size": r.size,
            "height": r.height,
            "atoms": r.atoms.iter().map(|a| p.format_set(a.members())).collect::<Vec<_>>(),
            "distributive": { "holds": r.is_distributive, "witness": witness_json(&p, &r.distributive_witness) },
            "modular": { "holds": r.is_modular, "witness": witness_json(&p, &r.modular_witness) },
        });
        if let Some(d) = inline_dot {
            v["dot"] = Value::String(d);
        }
        return json_out(v, true);
    }
    let mut out = lattice_text(&p, &r);
    if let Some(d) = inline_dot {
        out.push_str(&d);
    }
    ok(out)
}

fn space(c: &Common, max_size: usize) -> CmdResult {
    let p = load(c)?;
    let s = build_sp(&enumerate_thick(&p), &p);
    let closed = s.space.closed_family(max_size).ok().map(|f| f.len());
    let sup: Vec<(String, String)> = p
        .ids()
        .map(|a| (p.name(a).to_owned(), s.space.format_points(s.sup(a))))
        .collect();
    if c.json {
        return json_out(
            json!({
                "points": s.space.points(),
                "sup": sup.iter().map(|(a, pts)| json!({ "indecomposable": a, "points": pts })).collect::<Vec<_>>(),
                "closed_sets": closed,
            }),
            true,
        );
    }
    let mut out = String::new();
    let _ = writeln!(out, "points: {}", s.len());
    for label in s.space.points() {
        let _ = writeln!(out, "  {label}");
    }
    match closed {
        Some(n) => {
            let _ = writeln!(out, "closed sets: {n}");
        }
        None => {
            let _ = writeln!(out, "closed sets: more than {max_size}");
        }
    }
    for (a, pts) in sup {
        let _ = writeln!(out, "sup({a}) = {pts}");
    }
    ok(out)
}

fn load_datum(
    p: &Presentation,
    s: &SupportSpace,
    path: Option<&Path>,
) -> Result<SupportDatum, String> {
    match path {
        Some(path) => parse_datum(&read(path)?, p).map_err(|e| e.to_string()),
        None => Ok(s.as_datum()),
    }
}

fn violation_lines(p: &Presentation, d: &SupportDatum, r: &SupportReport) -> Vec<String> {
    r.violations
        .iter()
        .map(|v| match v {
            Violation::Arity { expected, actual } => {
                format!("σ has {actual} entries, expected {expected}")
            }
            Violation::NotClosed { indec } => format!("σ({}) is not closed", p.name(*indec)),
            Violation::Triangle {
                triangle,
                rotation,
                excess,
            } => {
                let t = &p.triangles()[*triangle];
                format!(
                    "SD4 triangle {triangle} ({}, {}, {}): {rotation} fails at {}",
                    p.format_object(&t.a),
                    p.format_object(&t.b),
                    p.format_object(&t.c),
                    d.space.format_points(excess)
                )
            }
        })
        .collect()
}

fn report_text(p: &Presentation, d: &SupportDatum, r: &SupportReport, out: &mut String) {
    for (axiom, reason) in &r.structural {
        let _ = writeln!(out, "{axiom}: {reason}");
    }
    let _ = writeln!(
        out,
        "SD4: checked {} triangles in all three rotations",
        r.triangles_checked
    );
    for line in violation_lines(p, d, r) {
        let _ = writeln!(out, "violation: {line}");
    }
}

fn report_json(p: &Presentation, d: &SupportDatum, r: &SupportReport) -> Value {
    json!({
        "structural": r.structural.iter().map(|(a, why)| json!({ "axiom": a, "reason": why })).collect::<Vec<_>>(),
        "triangles_checked": r.triangles_checked,
        "violations": violation_lines(p, d, r),
        "valid": r.is_valid(),
    })
}

fn check(c: &Common, datum: Option<&Path>) -> CmdResult {
    let p = load(c)?;
    let s = build_sp(&enumerate_thick(&p), &p);
    let d = load_datum(&p, &s, datum)?;
    let r = check_support_datum(&d, &p);
    if c.json {
        return json_out(report_json(&p, &d, &r), r.is_valid());
    }
    let mut out = String::new();
    report_text(&p, &d, &r, &mut out);
    let _ = writeln!(out, "valid: {}", r.is_valid());
    Ok(Outcome {
        stdout: out,
        valid: r.is_valid(),
    })
}

fn failure_text(p: &Presentation, d: &SupportDatum, f: &MorphismFailure) -> String {
    match f {
        MorphismFailure::Shape(msg) => msg.clone(),
        MorphismFailure::NotContinuous { indec, preimage } => format!(
            "not continuous: preimage of sup({}) = {} is not closed",
            p.name(*indec),
            d.space.format_points(preimage)
        ),
        MorphismFailure::Pullback {
            indec,
            preimage,
            sigma,
        } => format!(
            "pullback fails at {}: preimage of sup = {} but σ = {}",
            p.name(*indec),
            d.space.format_points(preimage),
            d.space.format_points(sigma)
        ),
    }
}

fn map(c: &Common, datum: Option<&Path>, morphism: Option<&Path>) -> CmdResult {
    let p = load(c)?;
    let s = build_sp(&enumerate_thick(&p), &p);
    let d = load_datum(&p, &s, datum)?;
    let report = check_support_datum(&d, &p);
    let universal = if report.is_valid() {
        universal_morphism(&d, &s, &p).map_err(|e| e.to_string())
    } else {
        Err("the datum violates the support axioms".to_owned())
    };
    let supplied = morphism
        .map(|path| parse_morphism(&read(path)?, &d, &s).map_err(|e| e.to_string()))
        .transpose()?;

    let (shown, verdict, agrees) = match (&supplied, &universal) {
        (Some(g), u) => {
            let v = check_morphism(&d, &s, g, &p);
            (Some(g), v, u.as_ref().ok().map(|f| f == g))
        }
        (None, Ok(f)) => (Some(f), check_morphism(&d, &s, f, &p), None),
        (None, Err(e)) => {
            let mut out = String::new();
            if c.json {
                return json_out(
                    json!({ "datum": report_json(&p, &d, &report), "universal": Value::Null, "error": e }),
                    false,
                );
            }
            report_text(&p, &d, &report, &mut out);
            let _ = writeln!(out, "universal morphism: not computed: {e}");
            return Ok(Outcome {
                stdout: out,
                valid: false,
            });
        }
    };
    let g = shown.expect("a morphism is shown whenever no early return happened");
    let rows: Vec<(String, String)> = g
        .map
        .iter()
        .enumerate()
        .map(|(x, &y)| {
            let target = if y < s.len() {
                s.point_label(y).to_owned()
            } else {
                format!("#{y}")
            };
            (d.space.point(x).to_owned(), target)
        })
        .collect();
    let failure = verdict.failure.as_ref().map(|f| failure_text(&p, &d, f));
    let valid = verdict.ok();
    if c.json {
        return json_out(
            json!({
                "morphism": if supplied.is_some() { "supplied" } else { "universal" },
                "map": rows.iter().map(|(x, y)| json!([x, y])).collect::<Vec<_>>(),
                "ok": valid,
                "failure": failure,
                "agrees_with_universal": agrees,
            }),
            valid,
        );
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "morphism: {}",
        if supplied.is_some() {
            "supplied"
        } else {
            "universal"
        }
    );
    for (x, y) in &rows {
        let _ = writeln!(out, "{x} -> {y}");
    }
    match &failure {
        None => {
            let _ = writeln!(out, "check: ok");
        }
        Some(f) => {
            let _ = writeln!(out, "check: failed: {f}");
        }
    }
    if let Some(a) = agrees {
        let _ = writeln!(out, "agrees with universal: {a}");
    }
    Ok(Outcome { stdout: out, valid })
}

fn tt_lines(p: &Presentation, r: &TtReport, spc_labels: &[String]) -> Vec<String> {
    let fmt = |set: &thicket::PointSet| {
        format!(
            "[{}]",
            set.iter()
                .map(|i| spc_labels[i].as_str())
                .collect::<Vec<_>>()
                .join(", ")
        )
    };
    let mut lines = Vec::new();
    if let Some(missing) = &r.unit_missing {
        lines.push(format!("SD5 supp(1) misses {}", fmt(missing)));
    }
    for v in &r.product_violations {
        lines.push(format!(
            "SD6 at ({}, {}): supp(x⊗y) = {} but supp(x) ∩ supp(y) = {}",
            p.name(v.x),
            p.name(v.y),
            fmt(&v.product),
            fmt(&v.intersection)
        ));
    }
    lines
}

fn spectrum(c: &Common) -> CmdResult {
    let p = load(c)?;
    let spc = primes(&p).map_err(|e| e.to_string())?;
    let r = verify_tt_support(&spc, &p).map_err(|e| e.to_string())?;
    let d = spc.as_datum(&p);
    let labels: Vec<String> = d.space.points().to_vec();
    let supp: Vec<(String, String)> = p
        .ids()
        .map(|a| (p.name(a).to_owned(), d.space.format_points(spc.supp(a))))
        .collect();
    let tt = tt_lines(&p, &r, &labels);
    let valid = r.is_valid();
    if c.json {
        return json_out(
            json!({
                "primes": labels,
                "supp": supp.iter().map(|(a, pts)| json!({ "indecomposable": a, "points": pts })).collect::<Vec<_>>(),
                "support_datum": report_json(&p, &d, &r.base),
                "tensor_violations": tt,
                "valid": valid,
            }),
            valid,
        );
    }
    let mut out = String::new();
    let _ = writeln!(out, "primes: {}", spc.len());
    for l in &labels {
        let _ = writeln!(out, "  {l}");
    }
    for (a, pts) in &supp {
        let _ = writeln!(out, "supp({a}) = {pts}");
    }
    report_text(&p, &d, &r.base, &mut out);
    let _ = writeln!(
        out,
        "SD5: supp(1) = Spc {}",
        if r.unit_missing.is_none() {
            "holds"
        } else {
            "fails"
        }
    );
    let _ = writeln!(
        out,
        "SD6: supp(x⊗y) = supp(x) ∩ supp(y) checked on {} pairs",
        p.len() * p.len()
    );
    for line in tt {
        let _ = writeln!(out, "violation: {line}");
    }
    let _ = writeln!(out, "valid: {valid}");
    Ok(Outcome { stdout: out, valid })
}

fn compare(c: &Common) -> CmdResult {
    let p = load(c)?;
    let u = build_sp(&enumerate_thick(&p), &p);
    let spc = primes(&p).map_err(|e| e.to_string())?;
    let (iota, r) = comparison_map(&spc, &u, &p).map_err(|e| e.to_string())?;
    let valid = r.fixes_primes && r.pullback_matches;
    let rows: Vec<(String, String)> = iota
        .map
        .iter()
        .zip(&spc.primes)
        .map(|(&j, q)| (p.format_set(q.members()), u.point_label(j).to_owned()))
        .collect();
    if c.json {
        let mut v = serde_json::to_value(&r).expect("report serializes");
        v["map"] = rows.iter().map(|(q, j)| json!([q, j])).collect();
        return json_out(v, valid);
    }
    let mut out = String::new();
    let _ = writeln!(out, "|Spc| = {}", r.spc_size);
    let _ = writeln!(out, "|Sp| = {}", r.sp_size);
    let _ = writeln!(out, "injective: {}", r.injective);
    let _ = writeln!(out, "fixes primes: {}", r.fixes_primes);
    let _ = writeln!(out, "pullback matches: {}", r.pullback_matches);
    for (q, j) in rows {
        let _ = writeln!(out, "ι({q}) = {j}");
    }
    Ok(Outcome { stdout: out, valid })
}

fn generate(c: &Common, seed: u64, points: usize) -> CmdResult {
    let p = load(c)?;
    let s = build_sp(&enumerate_thick(&p), &p);
    let d = random_support_datum(&s, points, seed);
    let mut out = datum_to_json(&d, &p, Some(&s));
    out.push('\n');
    ok(out)
}
