//! Batch front end for the `neglab` toolkit.
//!
//! Every run is a pure function of (subcommand, flags, seed): reports are
//! emitted with sorted keys and fixed field orders, so identical invocations
//! produce identical bytes.  Exit codes: 0 success, 1 verification failure
//! (a failed certificate or invariant), 2 usage or input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use neglab::cert::{order_certificate, verify_certificate, CheckReport, Family};
use neglab::construct::{construct, construct_kollar};
use neglab::error::Error;
use neglab::gf::FiniteField;
use neglab::interp::interpolation_matrix;
use neglab::jsonio::{
    bounds_json, certificate_from_json, certificate_json, check_report_json, class_json,
    coprime_witness_json, decomposition_json, expected_dim_json, kollar_json, model_from_json,
    order_search_json, pell_row_json, rational_json, scheme_from_json, sweep_json, to_text,
};
use neglab::lattice::{discriminant_lemma_sweep, parse_class};
use neglab::pell::{convergent, negative_pell_class, pell_divisor};
use neglab::shgh::{expected_dim, shgh_semi_effective_order, vdim, PlaneClass};
use neglab::zariski::{
    denominator_bounds, find_coprime_ample, volume_of_perturbed_ample, zariski_decompose,
    SurfaceModel,
};

#[derive(Parser)]
#[command(
    name = "neglab",
    version,
    about = "Exact lattice arithmetic, Zariski volumes, Pell divisors, and certified constructions"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate Pell convergents of sqrt(10) and the divisor classes they feed.
    Pell {
        /// Largest index k; rows run k = 1..=max-k.
        #[arg(long = "max-k", default_value_t = 5)]
        max_k: u64,
    },

    /// Virtual/expected dimension of a plane class, or its conditional order.
    Shgh {
        /// Plane class "(d;m1,m2,...)"; exponent runs allowed, e.g. "(19;6^10)".
        #[arg(long)]
        class: String,

        /// Evaluate the t-th multiple of the class.
        #[arg(long, default_value_t = 1, conflicts_with = "order")]
        multiple: u64,

        /// Search for the least multiple with nonnegative expected dimension.
        #[arg(long)]
        order: bool,

        /// Largest multiple examined by the order search.
        #[arg(long = "max-multiple", default_value_t = 60)]
        max_multiple: u64,
    },

    /// Zariski decomposition and volume of a class on a model read from JSON.
    Zariski {
        /// Model JSON file: {"lattice": ..., "curves": [...], "ample": ...}.
        #[arg(long, value_name = "FILE")]
        model: PathBuf,

        /// Class to decompose, in display form on the model lattice.
        #[arg(long)]
        class: String,
    },

    /// Build a construction certificate, or the fibered-class checks for kollar(m).
    Construct {
        /// One of: sextic, rational_nodal(d), fermat(n), finite_field(q),
        /// chain(d,r), kollar(m).
        #[arg(long)]
        family: String,

        /// Also certify order lower bounds, filling order_bounds.
        #[arg(long)]
        bounds: bool,
    },

    /// Re-verify a construction certificate from a JSON file.
    Certify {
        /// Certificate JSON file.
        cert: PathBuf,
    },

    /// Rank and dimension of a fat-point interpolation system over GF(q).
    Interp {
        /// Field order, as "q" or "p^e".
        #[arg(long)]
        field: String,

        /// Degree of the forms being interpolated.
        #[arg(long)]
        degree: u64,

        /// Scheme JSON file: {"points": [["0","1","2"], ...], "multiplicities": [...]}.
        #[arg(long, value_name = "FILE")]
        scheme: PathBuf,
    },

    /// Seeded property sweep of the discriminant divisibility g | det.
    LemmaCheck {
        #[arg(long, default_value_t = 1000)]
        trials: usize,

        #[arg(long = "max-rank", default_value_t = 6)]
        max_rank: usize,

        /// Sweep seed; falls back to NEGLAB_SEED, then to 42.
        #[arg(long)]
        seed: Option<u64>,
    },

    /// Volume-denominator bounds, abstract or witnessed by a Pell class.
    Bounds {
        /// Pseudoeffective threshold for the abstract bounds.
        #[arg(long, requires = "rho", conflicts_with = "pell_k")]
        bprim: Option<String>,

        /// Picard rank for the abstract bounds.
        #[arg(long, requires = "bprim")]
        rho: Option<usize>,

        /// Build the end-to-end denominator witness from the k-th negative
        /// Pell class on the eleven-point blow-up.
        #[arg(long = "pell-k")]
        pell_k: Option<u64>,

        /// Candidate budget for the coprime-ample search.
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
    },
}

/// A finished report: canonical JSON plus optional tabular/pretty renderings.
struct Report {
    json: Value,
    table: Option<Table>,
    pretty: Option<String>,
    /// True when the run must exit 1 (failed verification or sweep).
    failed: bool,
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Report {
    fn plain(json: Value) -> Self {
        Report { json, table: None, pretty: None, failed: false }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_text(&self.json),
            Format::Csv => match &self.table {
                Some(t) => render_csv(&t.header, &t.rows),
                None => {
                    let mut fields = Vec::new();
                    flatten("", &self.json, &mut fields);
                    let rows: Vec<Vec<String>> =
                        fields.into_iter().map(|(k, v)| vec![k, v]).collect();
                    render_csv(&["field".into(), "value".into()], &rows)
                }
            },
            Format::Pretty => {
                if let Some(p) = &self.pretty {
                    return p.clone();
                }
                if let Some(t) = &self.table {
                    return render_aligned(&t.header, &t.rows);
                }
                let mut fields = Vec::new();
                flatten("", &self.json, &mut fields);
                let mut s = String::new();
                for (k, v) in fields {
                    s.push_str(&k);
                    s.push_str(" = ");
                    s.push_str(&v);
                    s.push('\n');
                }
                s
            }
        }
    }
}

/// Depth-first flattening of a JSON value into dotted (path, scalar) pairs.
/// Objects iterate in key order, so the listing is canonical.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let path = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&path(k), x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&path(&i.to_string()), x, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::Number(n) => out.push((prefix.to_string(), n.to_string())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn render_csv(header: &[String], rows: &[Vec<String>]) -> String {
    let mut s = String::new();
    let emit = |line: &[String], s: &mut String| {
        let cells: Vec<String> = line.iter().map(|c| csv_escape(c)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    };
    emit(header, &mut s);
    for row in rows {
        emit(row, &mut s);
    }
    s
}

fn render_aligned(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut s = String::new();
    let emit = |line: &[String], s: &mut String| {
        for (i, cell) in line.iter().enumerate() {
            s.push_str(&format!("{:<width$}", cell, width = widths[i]));
            if i + 1 < cols {
                s.push_str("  ");
            }
        }
        while s.ends_with(' ') {
            s.pop();
        }
        s.push('\n');
    };
    emit(header, &mut s);
    for row in rows {
        emit(row, &mut s);
    }
    s
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Malformed(format!("{} is not valid JSON: {e}", path.display())))
}

// ------------------------------------------------------------- subcommands

fn run_pell(max_k: u64) -> Result<Report, Error> {
    if max_k < 1 {
        return Err(Error::Parameter("--max-k must be at least 1".into()));
    }
    let mut rows_json = Vec::new();
    let mut rows = Vec::new();
    for k in 1..=max_k {
        let rec = convergent(k as i64)?;
        let div = pell_divisor(k)?;
        let neg = negative_pell_class(k)?;
        rows_json.push(pell_row_json(&rec, &div, &neg));
        rows.push(vec![
            k.to_string(),
            rec.p.to_string(),
            rec.q.to_string(),
            div.degree.to_string(),
            div.multiplicity.to_string(),
            div.multiplier.to_string(),
            div.primitive.to_string(),
            div.class.self_intersection().to_integer().to_string(),
            neg.extra.to_string(),
            neg.self_intersection.to_string(),
        ]);
    }
    let header: Vec<String> =
        ["k", "p", "q", "d", "m", "c", "F", "D2", "s", "G2"].map(String::from).to_vec();
    Ok(Report {
        json: json!({ "max_k": max_k, "rows": rows_json }),
        table: Some(Table { header, rows }),
        pretty: None,
        failed: false,
    })
}

fn run_shgh(class: &str, multiple: u64, order: bool, max_multiple: u64) -> Result<Report, Error> {
    let base = PlaneClass::parse(class)?;
    if order {
        let search = shgh_semi_effective_order(&base, max_multiple)?;
        return Ok(Report::plain(json!({
            "class": base.to_string(),
            "search": order_search_json(&search),
        })));
    }
    let scaled = base.multiple(multiple)?;
    Ok(Report::plain(json!({
        "class": base.to_string(),
        "multiple": multiple,
        "scaled_class": scaled.to_string(),
        "vdim": vdim(&scaled).to_string(),
        "expected_dim": expected_dim_json(&expected_dim(&scaled)),
    })))
}

fn run_zariski(model_path: &Path, class: &str) -> Result<Report, Error> {
    let model = model_from_json(&read_json(model_path)?)?;
    let class = parse_class(model.lattice(), class)?;
    let z = zariski_decompose(&model, &class)?;
    Ok(Report::plain(decomposition_json(&z)))
}

fn run_construct(family: &str, bounds: bool) -> Result<Report, Error> {
    let text = family.trim();
    if let Some(arg) = text.strip_prefix("kollar(").and_then(|r| r.strip_suffix(')')) {
        let m: u64 = arg
            .trim()
            .parse()
            .map_err(|_| Error::Malformed(format!("bad kollar argument {arg:?}")))?;
        let checks = construct_kollar(m)?;
        return Ok(Report::plain(kollar_json(&checks)));
    }
    let fam = Family::parse(text)?;
    let mut cert = construct(&fam)?;
    if bounds {
        cert = order_certificate(&cert)?;
    }
    Ok(Report::plain(certificate_json(&cert)))
}

fn certify_pretty(report: &CheckReport) -> String {
    let mut s = format!("certificate: {}\n", report.family);
    for check in &report.checks {
        let mark = if check.passed { "PASS" } else { "FAIL" };
        s.push_str(&format!("[{mark}] {}: {}\n", check.name, check.detail));
    }
    s.push_str(&format!("overall: {}\n", if report.overall_pass { "PASS" } else { "FAIL" }));
    s
}

fn run_certify(cert_path: &Path) -> Result<Report, Error> {
    let cert = certificate_from_json(&read_json(cert_path)?)?;
    let report = verify_certificate(&cert);
    Ok(Report {
        json: check_report_json(&report),
        table: None,
        pretty: Some(certify_pretty(&report)),
        failed: !report.overall_pass,
    })
}

fn parse_field(text: &str) -> Result<FiniteField, Error> {
    let bad = |t: &str| Error::Malformed(format!("bad field order {t:?}; use \"q\" or \"p^e\""));
    if let Some((p, e)) = text.split_once('^') {
        let p: u64 = p.trim().parse().map_err(|_| bad(text))?;
        let e: u32 = e.trim().parse().map_err(|_| bad(text))?;
        FiniteField::prime_power(p, e)
    } else {
        let q: u64 = text.trim().parse().map_err(|_| bad(text))?;
        FiniteField::new(q)
    }
}

fn run_interp(field: &str, degree: u64, scheme_path: &Path) -> Result<Report, Error> {
    let field = parse_field(field)?;
    let scheme = scheme_from_json(field, &read_json(scheme_path)?)?;
    let matrix = interpolation_matrix(degree, &scheme)?;
    let rank = matrix.rank_certificate().rank;
    Ok(Report::plain(json!({
        "field_order": scheme.field.order(),
        "degree": degree,
        "rows": matrix.rows,
        "cols": matrix.cols,
        "rank": rank,
        "dimension": matrix.cols - rank,
        "conditions": scheme.condition_count(),
    })))
}

fn run_lemma_check(trials: usize, max_rank: usize, seed: Option<u64>) -> Result<Report, Error> {
    let seed = match seed {
        Some(s) => s,
        None => match std::env::var("NEGLAB_SEED") {
            Ok(text) => text
                .parse()
                .map_err(|_| Error::Malformed(format!("NEGLAB_SEED={text:?} is not a 64-bit seed")))?,
            Err(_) => 42,
        },
    };
    let sweep = discriminant_lemma_sweep(trials, max_rank, seed)?;
    let failed = sweep.violations > 0;
    Ok(Report { json: sweep_json(&sweep), table: None, pretty: None, failed })
}

fn run_bounds(
    bprim: Option<&str>,
    rho: Option<usize>,
    pell_k: Option<u64>,
    budget: u64,
) -> Result<Report, Error> {
    if let Some(k) = pell_k {
        return run_pell_witness(k, budget);
    }
    let (Some(bprim), Some(rho)) = (bprim, rho) else {
        return Err(Error::Parameter(
            "bounds needs either --pell-k K or --bprim B with --rho R".into(),
        ));
    };
    let bprim: BigInt = bprim
        .trim()
        .parse()
        .map_err(|_| Error::Malformed(format!("bad bprim {bprim:?}")))?;
    let bounds = denominator_bounds(&bprim, rho, None)?;
    let mut v = bounds_json(&bounds);
    let obj = v.as_object_mut().expect("bounds report is an object");
    obj.insert("bprim".into(), Value::String(bprim.to_string()));
    obj.insert("rho".into(), json!(rho));
    Ok(Report::plain(v))
}

/// End-to-end denominator witness: the k-th negative Pell class `G` on the
/// eleven-point blow-up, a model-ample `A` with `gcd(A.G, |G^2|) = 1`, and
/// the decomposition of `A + mG` just past the threshold, whose volume
/// denominator is exactly `|G^2|`.
fn run_pell_witness(k: u64, budget: u64) -> Result<Report, Error> {
    let neg = negative_pell_class(k)?;
    let curve = neg.class.clone();
    let lattice = curve.lattice().clone();

    let search_model = SurfaceModel::new(&lattice, vec![curve.clone()], None)?;
    let witness = find_coprime_ample(&search_model, &curve, budget)?;
    let ample = witness.ample.clone();

    let pairing = ample.intersect(&curve)?;
    let c_squared = curve.self_intersection();
    let alpha = -(&pairing / &c_squared);
    let m: BigInt = alpha.floor().to_integer() + BigInt::one();

    let closed_form = volume_of_perturbed_ample(&ample, &curve, &m)?;
    let model = SurfaceModel::new(&lattice, vec![curve.clone()], Some(ample.clone()))?;
    let perturbed = ample.add(&curve.scale_int(&m))?;
    let z = zariski_decompose(&model, &perturbed)?;

    let abs_c_squared = c_squared.to_integer().abs();
    let witnessed = z.volume == closed_form && z.denominator == abs_c_squared;
    Ok(Report {
        json: json!({
            "k": k,
            "class": class_json(&curve),
            "c_squared": c_squared.to_integer().to_string(),
            "order_conditional": neg.conditional_order.to_string(),
            "ample_search": coprime_witness_json(&witness),
            "alpha": rational_json(&alpha),
            "m": m.to_string(),
            "perturbed_class": class_json(&perturbed),
            "volume": rational_json(&z.volume),
            "denominator": z.denominator.to_string(),
            "denominator_equals_abs_c_squared": witnessed,
        }),
        table: None,
        pretty: None,
        failed: !witnessed,
    })
}

fn dispatch(command: &Command) -> Result<Report, Error> {
    match command {
        Command::Pell { max_k } => run_pell(*max_k),
        Command::Shgh { class, multiple, order, max_multiple } => {
            run_shgh(class, *multiple, *order, *max_multiple)
        }
        Command::Zariski { model, class } => run_zariski(model, class),
        Command::Construct { family, bounds } => run_construct(family, *bounds),
        Command::Certify { cert } => run_certify(cert),
        Command::Interp { field, degree, scheme } => run_interp(field, *degree, scheme),
        Command::LemmaCheck { trials, max_rank, seed } => {
            run_lemma_check(*trials, *max_rank, *seed)
        }
        Command::Bounds { bprim, rho, pell_k, budget } => {
            run_bounds(bprim.as_deref(), *rho, *pell_k, *budget)
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        // A violated invariant or failed re-verification is a result, not a
        // usage problem.
        Error::LemmaViolation(_) | Error::CertificationFailed(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(report) => {
            let text = report.render(cli.format);
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(if report.failed { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
