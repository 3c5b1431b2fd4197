use std::fmt::Write as _;
use std::io::Read as _;
use std::path::Path;

use serde_json::{json, Value};

use nichols::braiding::{BraidingClass, BraidingMatrix};
use nichols::cartan::{cartan_data, cartan_type_exponents, CartanData, CartanType, DEFAULT_N_MAX};
use nichols::freealg::{parse_element, NicholsOracle};
use nichols::groupoid::{
    decide_rank2, enumerate, gk_dimension, reflect_matrix, Caps, Gk, GroupoidReport, Rank2Decision, Verdict,
};
use nichols::rank2::{verify_suite_seeded, SuiteReport, SUITE_NAMES};
use nichols::{Error, Scalar};

use crate::{CapArgs, Command, Failure, Format, InputArgs};

/// A failed run, with whatever report was produced before the failure.
pub struct Outcome {
    pub output: Option<String>,
    pub failure: Failure,
}

impl From<Failure> for Outcome {
    fn from(failure: Failure) -> Outcome {
        Outcome { output: None, failure }
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Outcome {
        Failure::from(e).into()
    }
}

type Run = Result<String, Outcome>;

pub fn run(cmd: Command) -> Run {
    match cmd {
        Command::Classify(input) => classify(&input),
        Command::Reflect { input, vertex } => reflect(&input, vertex),
        Command::Groupoid { input, caps, decide } => groupoid(&input, &caps, decide),
        Command::Gkdim { input, caps, plain } => gkdim(&input, &caps, plain),
        Command::Oracle {
            input,
            element,
            dim,
            max_degree,
        } => oracle(&input, element.as_deref(), dim.as_deref(), max_degree),
        Command::Verify { suite, seed, format } => verify(&suite, seed, format),
    }
}

/// The matrix and the cyclotomic order declared in the file.
fn load(path: &Path) -> Result<(BraidingMatrix, u32), Outcome> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("reading standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("reading {}: {e}", path.display())))?
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
        context: "matrix JSON".into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let m = BraidingMatrix::from_json(&v)?;
    let order = v["cyclotomic_order"].as_u64().expect("validated by from_json") as u32;
    Ok((m, order))
}

fn caps(c: &CapArgs) -> Caps {
    Caps {
        max_matrices: c.max_matrices,
        max_root_height: c.max_root_height,
        max_states: c.max_states,
        n_max: DEFAULT_N_MAX,
    }
}

fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Formats scalars over one cyclotomic order so the output re-parses.
struct Fmt(u32);

impl Fmt {
    fn of(m: &BraidingMatrix) -> Fmt {
        Fmt(m.cyclotomic_order())
    }

    fn s(&self, x: &Scalar) -> String {
        x.lift_to(self.0).expect("order divides").to_string()
    }
}

fn class_name(c: BraidingClass) -> &'static str {
    match c {
        BraidingClass::Torsion => "Torsion",
        BraidingClass::Generic => "Generic",
        BraidingClass::Semigeneric => "Semigeneric",
    }
}

fn cartan_rows(d: &CartanData) -> Vec<Value> {
    d.c.iter()
        .zip(&d.reflectable)
        .map(|(row, &ok)| if ok { json!(row) } else { Value::Null })
        .collect()
}

fn classify(input: &InputArgs) -> Run {
    let (m, _) = load(&input.input)?;
    let f = Fmt::of(&m);
    let diagram = m.diagram();
    let data = cartan_data(&m, DEFAULT_N_MAX)?;
    let exps = match cartan_type_exponents(&m) {
        CartanType::CartanType(a) => json!(a),
        CartanType::NotCartan => Value::Null,
    };
    let mut components = vec![];
    for (vs, cls) in m.component_classes() {
        let d = cartan_data(&m.restrict(&vs), DEFAULT_N_MAX)?;
        components.push(json!({
            "vertices": vs.iter().map(|v| v + 1).collect::<Vec<_>>(),
            "class": class_name(cls),
            "gcm": d.gcm_class,
        }));
    }
    let report = json!({
        "cyclotomic_order": f.0,
        "theta": m.theta(),
        "class": class_name(m.classify_class()),
        "diagram": {
            "diagonal": diagram.vertex_labels.iter().map(|s| f.s(s)).collect::<Vec<_>>(),
            "edges": diagram.edges.iter().map(|(i, j, s)| json!([i + 1, j + 1, f.s(s)])).collect::<Vec<_>>(),
        },
        "cartan": cartan_rows(&data),
        "reflectable": data.reflectable,
        "bounded": data.bounded,
        "gcm": data.gcm_class,
        "cartan_type": exps,
        "components": components,
    });
    Ok(match input.format {
        Format::Json => to_json_text(&report),
        Format::Table => classify_table(&report),
    })
}

fn classify_table(r: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "class        {}", r["class"].as_str().unwrap_or(""));
    let _ = writeln!(out, "gcm          {}", r["gcm"].as_str().unwrap_or(""));
    for (i, q) in r["diagram"]["diagonal"].as_array().into_iter().flatten().enumerate() {
        let _ = writeln!(out, "vertex {:<5} {}", i + 1, q.as_str().unwrap_or(""));
    }
    for e in r["diagram"]["edges"].as_array().into_iter().flatten() {
        let pair = format!("{}-{}", e[0], e[1]);
        let _ = writeln!(out, "edge {pair:<7} {}", e[2].as_str().unwrap_or(""));
    }
    let _ = writeln!(out, "cartan");
    for row in r["cartan"].as_array().into_iter().flatten() {
        match row.as_array() {
            Some(xs) => {
                let cells: Vec<String> = xs.iter().map(|x| format!("{:>4}", x.to_string())).collect();
                let _ = writeln!(out, " {}", cells.join(""));
            }
            None => {
                let _ = writeln!(out, "  not reflectable");
            }
        }
    }
    out
}

fn reflect(input: &InputArgs, vertex: u64) -> Run {
    let (m, _) = load(&input.input)?;
    let i = (vertex - 1) as usize;
    if i >= m.theta() {
        return Err(Failure::Input(format!("vertex {vertex} out of range for rank {}", m.theta())).into());
    }
    let r = match reflect_matrix(&m, i) {
        Ok(r) => r,
        Err(Error::NotReflectable(_)) => {
            return Err(Failure::Math(format!("cannot reflect at vertex {vertex}")).into());
        }
        Err(e) => return Err(e.into()),
    };
    Ok(match input.format {
        Format::Json => to_json_text(&r.to_json()),
        Format::Table => matrix_table(&r),
    })
}

fn matrix_table(m: &BraidingMatrix) -> String {
    let f = Fmt::of(m);
    let rows: Vec<Vec<String>> = m.rows().iter().map(|r| r.iter().map(|s| f.s(s)).collect()).collect();
    let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "{}", cells.join("  "));
    }
    out
}

fn gk_json(g: Gk) -> Value {
    match g {
        Gk::Finite(n) => json!(n),
        Gk::Infinite => json!("infinity"),
        Gk::Unknown => json!("unknown"),
    }
}

fn groupoid(input: &InputArgs, c: &CapArgs, decide: bool) -> Run {
    let (m, _) = load(&input.input)?;
    let caps = caps(c);
    let report = if decide {
        match decide_rank2(&m, &caps)? {
            Rank2Decision::FiniteRootSystem(r) => r,
            Rank2Decision::InfiniteGK { report, .. } => report,
        }
    } else {
        enumerate(&m, &caps)?
    };
    let text = match input.format {
        Format::Json => to_json_text(&report.to_json()),
        Format::Table => groupoid_table(&report),
    };
    match &report.verdict {
        Verdict::CapExceeded(msg) => Err(Outcome {
            output: Some(text),
            failure: Failure::Cap(format!("resource cap exceeded: {msg}")),
        }),
        _ => Ok(text),
    }
}

fn groupoid_table(r: &GroupoidReport) -> String {
    let v = r.to_json();
    let mut out = String::new();
    let verdict = &v["verdict"];
    let _ = write!(out, "verdict      {}", verdict["kind"].as_str().unwrap_or(""));
    if let Some(d) = verdict["detail"].as_str() {
        let _ = write!(out, " ({d})");
    }
    out.push('\n');
    let _ = writeln!(out, "gk           {}", r.gk);
    let _ = writeln!(out, "z            exp(2πi/{})", v["cyclotomic_order"]);
    let _ = writeln!(out, "matrices     {}", r.matrices.len());
    let _ = writeln!(out, "roots at the seed");
    for root in v["roots"][0].as_array().into_iter().flatten() {
        let _ = writeln!(
            out,
            "  {:<16} q = {:<16} height {}",
            root["root"].to_string(),
            root["q"].as_str().unwrap_or(""),
            match &root["height"] {
                Value::String(s) => s.clone(),
                h => h.to_string(),
            }
        );
    }
    out
}

fn gkdim(input: &InputArgs, c: &CapArgs, plain: bool) -> Run {
    let (m, _) = load(&input.input)?;
    let caps = caps(c);
    let (gk, verdict) = if m.theta() == 2 && !plain {
        match decide_rank2(&m, &caps) {
            Ok(Rank2Decision::FiniteRootSystem(r)) => (gk_dimension(&r), r.to_json()["verdict"].clone()),
            Ok(Rank2Decision::InfiniteGK { report, .. }) => (Gk::Infinite, report.to_json()["verdict"].clone()),
            Err(Error::CapExceeded(msg)) => (Gk::Unknown, json!({ "kind": "cap-exceeded", "detail": msg })),
            Err(e) => return Err(e.into()),
        }
    } else {
        let r = enumerate(&m, &caps)?;
        (gk_dimension(&r), r.to_json()["verdict"].clone())
    };
    let text = match input.format {
        Format::Json => to_json_text(&json!({ "gk": gk_json(gk), "verdict": verdict })),
        Format::Table => format!("{gk}\n"),
    };
    match gk {
        Gk::Unknown => Err(Outcome {
            output: Some(text),
            failure: Failure::Cap("resource cap exceeded before a decision".into()),
        }),
        _ => Ok(text),
    }
}

/// Elements with more terms than this are reported without a normal form.
const MAX_PRINTED_TERMS: usize = 256;

fn parse_degree(text: &str, theta: usize) -> Result<Vec<usize>, Failure> {
    let d: Vec<usize> = text
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Input(format!("bad degree `{text}`: {e}")))?;
    if d.len() != theta {
        return Err(Failure::Input(format!("degree `{text}` must have {theta} entries")));
    }
    Ok(d)
}

fn oracle(input: &InputArgs, element: Option<&str>, dim: Option<&str>, max_degree: usize) -> Run {
    let (m, order) = load(&input.input)?;
    let o = NicholsOracle::new(&m).with_max_degree(max_degree);
    let mut report = serde_json::Map::new();
    report.insert("max_degree".into(), json!(max_degree));
    if let Some(text) = element {
        let x = parse_element(text, &m, order)?;
        let zero = o.is_zero(&x)?;
        let degrees: Vec<Vec<usize>> = x.components().into_keys().collect();
        report.insert("element".into(), json!(text));
        report.insert("terms".into(), json!(x.len()));
        if x.len() <= MAX_PRINTED_TERMS {
            report.insert("expanded".into(), json!(x.to_string()));
        }
        report.insert("degrees".into(), json!(degrees));
        report.insert("zero_in_nichols".into(), json!(zero));
    }
    if let Some(text) = dim {
        let d = parse_degree(text, m.theta())?;
        report.insert("degree".into(), json!(d));
        report.insert("dim".into(), json!(o.graded_dim(&d)?));
    }
    let report = Value::Object(report);
    Ok(match input.format {
        Format::Json => to_json_text(&report),
        Format::Table => {
            let mut out = String::new();
            if let Some(z) = report.get("zero_in_nichols") {
                let _ = writeln!(out, "zero in B(V)  {z}");
            }
            if let Some(d) = report.get("dim") {
                let _ = writeln!(out, "dim           {d}");
            }
            out
        }
    })
}

fn verify(suite: &str, seed: u64, format: Format) -> Run {
    let names: Vec<&str> = if suite == "all" {
        SUITE_NAMES.to_vec()
    } else {
        vec![suite]
    };
    let mut reports: Vec<SuiteReport> = vec![];
    for name in names {
        reports.push(verify_suite_seeded(name, seed)?);
    }
    let text = match format {
        Format::Json if reports.len() == 1 => to_json_text(&reports[0].to_json()),
        Format::Json => to_json_text(&Value::Array(reports.iter().map(SuiteReport::to_json).collect())),
        Format::Table => reports.iter().map(suite_table).collect(),
    };
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.all_pass())
        .map(|r| r.suite.as_str())
        .collect();
    if failed.is_empty() {
        Ok(text)
    } else {
        Err(Outcome {
            output: Some(text),
            failure: Failure::Math(format!("failing suites: {}", failed.join(", "))),
        })
    }
}

fn suite_table(r: &SuiteReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}: {}/{} lines pass", r.suite, r.passed(), r.lines.len());
    for l in &r.lines {
        let _ = writeln!(
            out,
            "  [{}] {:<10} {}  =>  {}",
            if l.pass { "ok" } else { "FAIL" },
            l.label,
            l.assertion,
            l.evaluation
        );
    }
    out
}
