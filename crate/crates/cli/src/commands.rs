use std::fs;
use std::io::Write;
use std::path::Path;

use coulomb_exterior::bvp::{self, BoundaryData, NormMeasure, SolveOptions};
use coulomb_exterior::oracle::{self, OracleMode, SurveyOptions};
use coulomb_exterior::radial::{scale_n, Convention, LPolicy};
use coulomb_exterior::{verify, BoundaryData64, PhysParams64};

use crate::args::{Command, Common, EigenfunctionOpts, Format, Measure, Mode, OracleOpts, Policy, Table};

#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable or malformed input.
    Config(String),
    /// A library operation failed.
    Module { module: &'static str, message: String },
    /// `verify` ran but some checks failed.
    Verification(Vec<String>),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Module { .. } | Failure::Verification(_) => 1,
        }
    }

    /// Machine-readable report for stderr.
    pub fn report(&self) -> String {
        let value = match self {
            Failure::Config(message) => serde_json::json!({"error": {"kind": "config", "message": message}}),
            Failure::Module { module, message } => {
                serde_json::json!({"error": {"kind": "module", "module": module, "message": message}})
            }
            Failure::Verification(failed) => {
                serde_json::json!({"error": {"kind": "verification", "failed_checks": failed}})
            }
        };
        value.to_string()
    }
}

fn module<E: std::fmt::Display>(module: &'static str) -> impl Fn(E) -> Failure {
    move |e| Failure::Module {
        module,
        message: e.to_string(),
    }
}

pub fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Spectrum(c) => spectrum(&c),
        Command::Eigenfunction { common, opts } => eigenfunction(&common, &opts),
        Command::Verify(c) => verify_cmd(&c),
        Command::Oracle { common, opts } => oracle_cmd(&common, &opts, false),
        Command::Compare { common, opts } => oracle_cmd(&common, &opts, true),
    }
}

fn phys(c: &Common) -> Result<PhysParams64, Failure> {
    if c.kmax < 1 {
        return Err(Failure::Config("--kmax must be at least 1".into()));
    }
    PhysParams64::new(c.z, c.r0).map_err(|e| Failure::Config(e.to_string()))
}

fn options(c: &Common) -> SolveOptions {
    SolveOptions {
        policy: match c.lmax_policy {
            Policy::Standard => LPolicy::Standard,
            Policy::Paper => LPolicy::Paper,
        },
        convention: if c.paper_literal { Convention::PaperLiteral } else { Convention::Standard },
        measure: match c.measure {
            Measure::Volume => NormMeasure::Volume,
            Measure::Radial => NormMeasure::Radial,
        },
    }
}

enum Source {
    Inline(Vec<f64>),
    File(BoundaryData64),
}

fn source(flag: &str, raw: &str) -> Result<Source, Failure> {
    if let Some(path) = raw.strip_prefix('@') {
        let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("--{flag} {raw}: {e}")))?;
        return BoundaryData::parse_text(&text)
            .map(Source::File)
            .map_err(|e| Failure::Config(format!("--{flag} {raw}: {e}")));
    }
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Config(format!("--{flag}: `{s}` is not a number")))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Source::Inline)
}

/// Zonal data from `--alpha` / `--beta`, padded with `(1, 0)` up to the
/// largest angular momentum in play.
fn boundary(c: &Common, opts: &SolveOptions) -> Result<BoundaryData64, Failure> {
    let alpha = c.alpha.as_deref().map(|s| source("alpha", s)).transpose()?;
    let beta = c.beta.as_deref().map(|s| source("beta", s)).transpose()?;
    let (alpha, beta): (Vec<f64>, Vec<f64>) = match (alpha, beta) {
        (None, None) => (vec![1.0], vec![0.0]),
        (Some(Source::File(f)), None) | (None, Some(Source::File(f))) => (f.alpha().to_vec(), f.beta().to_vec()),
        (a, b) => {
            let pick = |s: Option<Source>, from_file: fn(&BoundaryData64) -> &[f64]| match s {
                Some(Source::Inline(v)) => v,
                Some(Source::File(f)) => from_file(&f).to_vec(),
                None => Vec::new(),
            };
            (pick(a, BoundaryData::alpha), pick(b, BoundaryData::beta))
        }
    };
    let n = alpha.len().max(beta.len()).max(1);
    let pad = |mut v: Vec<f64>, fill: f64| {
        v.resize(n, fill);
        v
    };
    let bd = BoundaryData::new(pad(alpha, 1.0), pad(beta, 0.0)).map_err(|e| Failure::Config(e.to_string()))?;
    Ok(bd.extended_to(opts.policy.l_max(c.kmax) as usize))
}

fn emit(out: Option<&Path>, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, body).map_err(|e| Failure::Config(format!("--out {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .map_err(|e| Failure::Config(format!("stdout: {e}")))
        }
    }
}

fn json_body(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn spectrum(c: &Common) -> Result<(), Failure> {
    let pp = phys(c)?;
    let opts = options(c);
    let bd = boundary(c, &opts)?;
    let rows = bvp::spectrum_table(&pp, &bd, c.kmax, opts);
    let body = match c.format.unwrap_or(Format::Csv) {
        Format::Csv => bvp::spectrum_csv(&rows),
        Format::Json => json_body(&bvp::spectrum_json(&pp, &opts, &rows)),
    };
    emit(c.out.as_deref(), &body)
}

fn eigenfunction(c: &Common, e: &EigenfunctionOpts) -> Result<(), Failure> {
    let pp = phys(c)?;
    let opts = options(c);
    if e.k < 1 {
        return Err(Failure::Config("--k must be at least 1".into()));
    }
    if e.rpoints < 2 || e.ntheta < 2 || !(e.rspan > 0.0) {
        return Err(Failure::Config("--rpoints and --ntheta must be >= 2, --rspan positive".into()));
    }
    let bd = if e.phi_matched {
        BoundaryData::phi_matched(&pp, e.k, opts.policy, opts.convention).map_err(module("bvp"))?
    } else {
        boundary(&Common { kmax: c.kmax.max(e.k), ..c.clone() }, &opts)?
    };
    let ep = bvp::build_eigenpair(&pp, e.k, &bd, opts).map_err(module("bvp"))?;
    let n = scale_n(&pp, e.k);
    let span = e.rspan / n;
    let rs: Vec<f64> = (0..e.rpoints)
        .map(|i| pp.r0 + span * i as f64 / (e.rpoints - 1) as f64)
        .collect();
    let format = c.format.unwrap_or(Format::Csv);
    let body = match e.table {
        Table::Radial => {
            let rows = bvp::radial_profile(&ep, &rs).map_err(module("bvp"))?;
            match format {
                Format::Csv => {
                    let mut s = String::from("l,r,radial\n");
                    for (l, r, v) in rows {
                        s.push_str(&format!("{l},{},{}\n", bvp::fmt17(r), bvp::fmt17(v)));
                    }
                    s
                }
                Format::Json => json_body(&serde_json::json!({
                    "eigenpair": ep.to_json(),
                    "profile": rows.iter().map(|&(l, r, v)| serde_json::json!({"l": l, "r": r, "radial": v})).collect::<Vec<_>>(),
                })),
            }
        }
        Table::Density => {
            let thetas: Vec<f64> = (0..e.ntheta)
                .map(|i| std::f64::consts::PI * i as f64 / (e.ntheta - 1) as f64)
                .collect();
            let rows = bvp::density_slice(&ep, &rs, &thetas, e.phi).map_err(module("bvp"))?;
            match format {
                Format::Csv => {
                    let mut s = String::from("r,theta,density\n");
                    for (r, t, d) in rows {
                        s.push_str(&format!("{},{},{}\n", bvp::fmt17(r), bvp::fmt17(t), bvp::fmt17(d)));
                    }
                    s
                }
                Format::Json => json_body(&serde_json::json!({
                    "eigenpair": ep.to_json(),
                    "phi": e.phi,
                    "density": rows.iter().map(|&(r, t, d)| serde_json::json!({"r": r, "theta": t, "density": d})).collect::<Vec<_>>(),
                })),
            }
        }
    };
    emit(c.out.as_deref(), &body)
}

fn verify_cmd(c: &Common) -> Result<(), Failure> {
    let report = verify::run_all(c.seed);
    let body = match c.format {
        None => report.to_text(),
        Some(Format::Csv) => report.to_csv(),
        Some(Format::Json) => json_body(&serde_json::to_value(&report).expect("serializable")),
    };
    emit(c.out.as_deref(), &body)?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Verification(
            report
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| format!("{}/{}", c.suite, c.name))
                .collect(),
        ))
    }
}

fn oracle_cmd(c: &Common, o: &OracleOpts, compare: bool) -> Result<(), Failure> {
    let pp = phys(c)?;
    let opts = options(c);
    let bd = boundary(c, &opts)?;
    if o.npoints < 100 {
        return Err(Failure::Config("--npoints must be at least 100".into()));
    }
    if !(o.tol > 0.0) {
        return Err(Failure::Config("--tol must be positive".into()));
    }
    let mode = match o.mode {
        Mode::WholeSpace => OracleMode::WholeSpace,
        Mode::Exterior => OracleMode::Exterior,
    };
    let survey_opts = SurveyOptions {
        mode,
        kmax: c.kmax,
        policy: opts.policy,
        r_max: o.rmax.unwrap_or_else(|| oracle::default_r_max(c.kmax, c.z)),
        n_points: o.npoints,
        tol: o.tol,
    };
    let surveys = oracle::survey(&pp, &bd, survey_opts).map_err(|e| match e {
        oracle::OracleError::InvalidProblem(m) => Failure::Config(m),
        other => module::<oracle::OracleError>("oracle")(other),
    })?;
    let format = c.format.unwrap_or(Format::Csv);
    let body = match (compare, format) {
        (false, Format::Csv) => oracle::oracle_csv(&oracle::survey_rows(&surveys)),
        (false, Format::Json) => json_body(&serde_json::to_value(&surveys).expect("serializable")),
        (true, Format::Csv) => oracle::comparison_csv(&surveys),
        (true, Format::Json) => json_body(&oracle::comparison_json(mode, o.tol, &surveys)),
    };
    emit(c.out.as_deref(), &body)
}
