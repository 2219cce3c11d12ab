//! Command-line interface for exact splitting-type computations on
//! rational curves on hypersurfaces.
//!
//! Exit codes: 0 when every requested check passes, 1 when a mathematical
//! check fails on well-formed input, 2 on malformed input or usage errors.
//! Output is plain text (or a single JSON document with `--json`) and is
//! byte-identical across runs for identical inputs and seeds; no
//! environment variables are consulted and no color is ever emitted.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ColorChoice, Parser, Subcommand};

use splitcert_core::config::{hilbert_ideal, hilbert_structure, LineConfiguration};
use splitcert_core::curve::comb_hypotheses;
use splitcert_core::example::{build_example, verify_example, VerificationReport};
use splitcert_core::experiments::{re_verify_witness, very_free_search, TrialConfig, TrialStats};
use splitcert_core::json::{
    configuration_from_file, configuration_to_file, comb_from_file, hypersurface_from_file,
    hypersurface_to_file, multi_form_to_dto, rational_curve_from_file, rational_curve_to_file,
    CombFile, ConfigurationFile, CurveFile, HypersurfaceFile, MultiFormDto,
};
use splitcert_core::multi::binomial;
use splitcert_core::{
    CurveBundles, Error, Field, FieldSpec, Hypersurface, MultiForm, PrimeField, RationalCurve,
    Rationals, SplittingType,
};

#[derive(Parser)]
#[command(
    name = "splitcert",
    version,
    about = "Exact splitting types of bundles restricted to rational curves on hypersurfaces",
    color = ColorChoice::Never
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the worked family of lines in dimension n and verify every
    /// recorded claim about it.
    ExampleVerify {
        /// Scalar field: Q or F<p>.
        #[arg(long)]
        field: String,
        /// Ambient projective dimension (at least 4).
        #[arg(long)]
        n: usize,
        /// Emit the full report as JSON on stdout.
        #[arg(long)]
        json: bool,
        /// Write the instance and the report as JSON files into a directory.
        #[arg(long, value_name = "DIR")]
        emit_dir: Option<PathBuf>,
    },
    /// Splitting types of the kernel, tangent, and normal bundles for a
    /// curve on a hypersurface.
    Splitting {
        /// Hypersurface JSON file.
        #[arg(long, value_name = "FILE")]
        hypersurface: PathBuf,
        /// Curve JSON file.
        #[arg(long, value_name = "FILE")]
        curve: PathBuf,
        /// Emit the report as JSON on stdout.
        #[arg(long)]
        json: bool,
    },
    /// Compare the normal splitting with the expected one for a curve of
    /// low degree on a hypersurface of degree equal to the dimension.
    Typical {
        /// Hypersurface JSON file.
        #[arg(long, value_name = "FILE")]
        hypersurface: PathBuf,
        /// Curve JSON file.
        #[arg(long, value_name = "FILE")]
        curve: PathBuf,
        /// Emit the report as JSON on stdout.
        #[arg(long)]
        json: bool,
    },
    /// Check whether every summand of the restricted tangent bundle has
    /// positive degree.
    VeryFree {
        /// Hypersurface JSON file.
        #[arg(long, value_name = "FILE")]
        hypersurface: PathBuf,
        /// Curve JSON file.
        #[arg(long, value_name = "FILE")]
        curve: PathBuf,
        /// Emit the report as JSON on stdout.
        #[arg(long)]
        json: bool,
    },
    /// Section count of the structure sheaf of a marked union of lines at
    /// one degree, with the matching ideal dimension.
    Hilbert {
        /// Configuration JSON file (lines with marked intersections).
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
        /// Twist degree d of the section count.
        #[arg(long)]
        degree: i64,
        /// Emit the report as JSON on stdout.
        #[arg(long)]
        json: bool,
    },
    /// Basis of the forms of a given degree vanishing on the listed
    /// curves (on nothing, when no curves are given).
    LinearSystem {
        /// Degree of the forms.
        #[arg(long)]
        degree: u32,
        /// Curve files; all must share one field and one ambient dimension.
        #[arg(value_name = "CURVE_FILE")]
        curves: Vec<PathBuf>,
        /// Scalar field, required when no curve files are given.
        #[arg(long)]
        field: Option<String>,
        /// Ambient dimension, required when no curve files are given.
        #[arg(long)]
        n: Option<usize>,
        /// Emit the report as JSON on stdout.
        #[arg(long)]
        json: bool,
    },
    /// Verify the gluing hypotheses of a comb of rational curves on a
    /// hypersurface and compute the resulting modifications.
    CombCheck {
        /// Comb JSON file (hypersurface, handle, teeth, nodes).
        #[arg(long, value_name = "FILE")]
        comb: PathBuf,
        /// Emit the report as JSON on stdout.
        #[arg(long)]
        json: bool,
    },
    /// Randomized sampling of curves and hypersurfaces through them, with
    /// tallies and replayable witnesses.
    Search {
        /// Scalar field: Q or F<p>.
        #[arg(long)]
        field: String,
        /// Ambient projective dimension.
        #[arg(long)]
        n: usize,
        /// Hypersurface degree.
        #[arg(long)]
        degree: u32,
        /// Curve degree.
        #[arg(long)]
        curve_degree: u32,
        /// Number of independent trials.
        #[arg(long)]
        trials: u64,
        /// Master seed; trial i uses stream i of this seed.
        #[arg(long)]
        seed: u64,
        /// Coefficient height bound for rational sampling.
        #[arg(long, default_value_t = 10)]
        height: u32,
        /// Emit the report as JSON on stdout.
        #[arg(long)]
        json: bool,
        /// Write each stored witness as a JSON file into a directory.
        #[arg(long, value_name = "DIR")]
        witness_out: Option<PathBuf>,
        /// Write the tallies as CSV.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
    /// Check that a curve that is very free inside a coordinate linear
    /// section stays very free in the ambient hypersurface.
    SectionCheck {
        /// Hypersurface JSON file.
        #[arg(long, value_name = "FILE")]
        hypersurface: PathBuf,
        /// Curve JSON file.
        #[arg(long, value_name = "FILE")]
        curve: PathBuf,
        /// Strictly increasing ambient coordinate indices of the section.
        #[arg(long, value_delimiter = ',', value_name = "I,J,...")]
        vars: Vec<usize>,
        /// Emit the report as JSON on stdout.
        #[arg(long)]
        json: bool,
    },
}

/// A failure, tagged with the exit code it deserves.
enum Failure {
    /// A mathematical check failed on well-formed input (exit 1).
    Math(String),
    /// The input or invocation is malformed (exit 2).
    Input(String),
}

type CmdResult = Result<(), Failure>;

/// Library errors split by whether they indict the input or the claim.
fn classify(e: Error) -> Failure {
    match e {
        Error::BadInput(_)
        | Error::ParseScalar { .. }
        | Error::NotPrime(_)
        | Error::ModulusTooLarge(_)
        | Error::OutOfRange(_)
        | Error::PreconditionFailed(_)
        | Error::EmptySystem
        | Error::DuplicatePoint
        | Error::ZeroDirection
        | Error::InconsistentMarking(_)
        | Error::AllZero => Failure::Input(e.to_string()),
        other => Failure::Math(other.to_string()),
    }
}

fn input_err(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

/// Either concrete field, so commands can stay generic over the scalars.
enum FieldHandle {
    Q(Rationals),
    Fp(PrimeField),
}

fn handle_of_spec(spec: &FieldSpec) -> Result<FieldHandle, Failure> {
    spec.validate().map_err(classify)?;
    Ok(match spec {
        FieldSpec::Rationals => FieldHandle::Q(Rationals),
        FieldSpec::Prime { p } => FieldHandle::Fp(PrimeField::new(*p).map_err(classify)?),
    })
}

fn handle_of_flag(flag: &str) -> Result<FieldHandle, Failure> {
    let spec = FieldSpec::from_flag(flag).map_err(classify)?;
    handle_of_spec(&spec)
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| input_err(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| {
        input_err(format!(
            "JSON error in {} at line {} column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn write_output(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| input_err(format!("cannot write {}: {e}", path.display())))
}

fn to_pretty<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialization cannot fail") + "\n"
}

/// Load a hypersurface and a curve that must share one field.
fn load_pair(
    hypersurface: &Path,
    curve: &Path,
) -> Result<(FieldHandle, HypersurfaceFile, CurveFile), Failure> {
    let x_file: HypersurfaceFile = parse_json(hypersurface, &read_text(hypersurface)?)?;
    let c_file: CurveFile = parse_json(curve, &read_text(curve)?)?;
    if x_file.field != c_file.field {
        return Err(input_err(format!(
            "field mismatch: hypersurface is over {} but curve is over {}",
            x_file.field.flag(),
            c_file.field.flag()
        )));
    }
    let handle = handle_of_spec(&x_file.field)?;
    Ok((handle, x_file, c_file))
}

fn degrees_json(s: &SplittingType) -> serde_json::Value {
    serde_json::json!(s)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Render a form as a readable polynomial string.
fn format_form<K: Field>(form: &MultiForm<K>) -> String {
    let field = form.field();
    let mut parts = Vec::new();
    for (exp, c) in form.terms() {
        let mut factors = Vec::new();
        let coeff = field.format_elem(c);
        if coeff != "1" || exp.iter().all(|&e| e == 0) {
            factors.push(coeff);
        }
        for (i, &e) in exp.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(format!("x{i}")),
                _ => factors.push(format!("x{i}^{e}")),
            }
        }
        parts.push(factors.join("*"));
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

fn main() -> ExitCode {
    // Rust ignores SIGPIPE by default, turning writes to a closed pipe
    // (`splitcert … | head`) into panics; restore the conventional silent
    // death so the binary composes with shell pipelines.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Cmd::ExampleVerify {
            field,
            n,
            json,
            emit_dir,
        } => cmd_example_verify(&field, n, json, emit_dir.as_deref()),
        Cmd::Splitting {
            hypersurface,
            curve,
            json,
        } => cmd_splitting(&hypersurface, &curve, json),
        Cmd::Typical {
            hypersurface,
            curve,
            json,
        } => cmd_typical(&hypersurface, &curve, json),
        Cmd::VeryFree {
            hypersurface,
            curve,
            json,
        } => cmd_very_free(&hypersurface, &curve, json),
        Cmd::Hilbert {
            config,
            degree,
            json,
        } => cmd_hilbert(&config, degree, json),
        Cmd::LinearSystem {
            degree,
            curves,
            field,
            n,
            json,
        } => cmd_linear_system(degree, &curves, field.as_deref(), n, json),
        Cmd::CombCheck { comb, json } => cmd_comb_check(&comb, json),
        Cmd::Search {
            field,
            n,
            degree,
            curve_degree,
            trials,
            seed,
            height,
            json,
            witness_out,
            csv,
        } => cmd_search(
            &field,
            n,
            degree,
            curve_degree,
            trials,
            seed,
            height,
            json,
            witness_out.as_deref(),
            csv.as_deref(),
        ),
        Cmd::SectionCheck {
            hypersurface,
            curve,
            vars,
            json,
        } => cmd_section_check(&hypersurface, &curve, &vars, json),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Math(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("input error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn cmd_example_verify(
    field_flag: &str,
    n: usize,
    json: bool,
    emit_dir: Option<&Path>,
) -> CmdResult {
    fn run<K: Field>(field: K, n: usize, json: bool, emit_dir: Option<&Path>) -> CmdResult {
        let inst = build_example(field, n).map_err(classify)?;
        let report: VerificationReport = verify_example(&inst);
        if let Some(dir) = emit_dir {
            std::fs::create_dir_all(dir)
                .map_err(|e| input_err(format!("cannot create {}: {e}", dir.display())))?;
            write_output(
                &dir.join("hypersurface.json"),
                &to_pretty(&hypersurface_to_file(inst.hypersurface())),
            )?;
            for (i, line) in inst.lines().iter().enumerate() {
                write_output(
                    &dir.join(format!("line_{}.json", i + 1)),
                    &to_pretty(&rational_curve_to_file(line)),
                )?;
            }
            let config = inst.standard_configuration().map_err(classify)?;
            write_output(
                &dir.join("configuration.json"),
                &to_pretty(&configuration_to_file(&config)),
            )?;
            write_output(&dir.join("report.json"), &to_pretty(&report))?;
        }
        if json {
            print!("{}", to_pretty(&report));
        } else {
            println!("n = {} over {}", report.n, report.field.flag());
            for claim in &report.claims {
                println!(
                    "{} {:<12} {}",
                    if claim.pass { "pass" } else { "FAIL" },
                    claim.id,
                    claim.statement
                );
            }
            let passed = report.claims.iter().filter(|c| c.pass).count();
            println!("{passed} of {} claims pass", report.claims.len());
        }
        if report.all_pass() {
            Ok(())
        } else {
            Err(Failure::Math(format!(
                "failing claims: {}",
                report.failing_ids().join(", ")
            )))
        }
    }
    match handle_of_flag(field_flag)? {
        FieldHandle::Q(f) => run(f, n, json, emit_dir),
        FieldHandle::Fp(f) => run(f, n, json, emit_dir),
    }
}

fn cmd_splitting(hypersurface: &Path, curve: &Path, json: bool) -> CmdResult {
    fn run<K: Field>(
        field: K,
        x_file: &HypersurfaceFile,
        c_file: &CurveFile,
        json: bool,
    ) -> CmdResult {
        let x = hypersurface_from_file(field, x_file).map_err(classify)?;
        let c = rational_curve_from_file(field, c_file).map_err(classify)?;
        let bundles = CurveBundles::new(x, c).map_err(classify)?;
        let kernel = bundles.kernel_splitting();
        let tangent = bundles.tangent_splitting();
        let normal = bundles.normal_splitting();
        if json {
            let value = serde_json::json!({
                "field": field.spec(),
                "n": bundles.hypersurface().n(),
                "hypersurface_degree": bundles.hypersurface().degree(),
                "curve_degree": bundles.curve().degree(),
                "kernel": degrees_json(&kernel),
                "tangent": degrees_json(&tangent),
                "normal": degrees_json(&normal),
                "very_free": bundles.is_very_free(),
            });
            print!("{}", to_pretty(&value));
        } else {
            println!(
                "curve of degree {} on a degree-{} hypersurface in dimension {} over {}",
                bundles.curve().degree(),
                bundles.hypersurface().degree(),
                bundles.hypersurface().n(),
                field.spec().flag()
            );
            println!("kernel: {kernel}");
            println!("tangent: {tangent}");
            println!("normal: {normal}");
            println!("very free: {}", yes_no(bundles.is_very_free()));
        }
        Ok(())
    }
    let (handle, x_file, c_file) = load_pair(hypersurface, curve)?;
    match handle {
        FieldHandle::Q(f) => run(f, &x_file, &c_file, json),
        FieldHandle::Fp(f) => run(f, &x_file, &c_file, json),
    }
}

fn cmd_typical(hypersurface: &Path, curve: &Path, json: bool) -> CmdResult {
    fn run<K: Field>(
        field: K,
        x_file: &HypersurfaceFile,
        c_file: &CurveFile,
        json: bool,
    ) -> CmdResult {
        let x = hypersurface_from_file(field, x_file).map_err(classify)?;
        let c = rational_curve_from_file(field, c_file).map_err(classify)?;
        let bundles = CurveBundles::new(x, c).map_err(classify)?;
        let report = bundles.is_typical().map_err(classify)?;
        if json {
            print!("{}", to_pretty(&report));
        } else {
            println!("typical: {}", yes_no(report.typical));
            println!("normal: {}", report.normal_splitting);
            println!("expected: {}", report.expected);
            let counts: Vec<String> = report
                .section_counts
                .iter()
                .map(|(k, h)| format!("twist {k}: {h}"))
                .collect();
            println!("conormal section counts: {}", counts.join(", "));
        }
        if report.typical {
            Ok(())
        } else {
            Err(Failure::Math(format!(
                "normal splitting {} differs from the expected {}",
                report.normal_splitting, report.expected
            )))
        }
    }
    let (handle, x_file, c_file) = load_pair(hypersurface, curve)?;
    match handle {
        FieldHandle::Q(f) => run(f, &x_file, &c_file, json),
        FieldHandle::Fp(f) => run(f, &x_file, &c_file, json),
    }
}

fn cmd_very_free(hypersurface: &Path, curve: &Path, json: bool) -> CmdResult {
    fn run<K: Field>(
        field: K,
        x_file: &HypersurfaceFile,
        c_file: &CurveFile,
        json: bool,
    ) -> CmdResult {
        let x = hypersurface_from_file(field, x_file).map_err(classify)?;
        let c = rational_curve_from_file(field, c_file).map_err(classify)?;
        let bundles = CurveBundles::new(x, c).map_err(classify)?;
        let tangent = bundles.tangent_splitting();
        let very_free = bundles.is_very_free();
        if json {
            let value = serde_json::json!({
                "tangent": degrees_json(&tangent),
                "very_free": very_free,
            });
            print!("{}", to_pretty(&value));
        } else {
            println!("tangent: {tangent}");
            println!("very free: {}", yes_no(very_free));
        }
        if very_free {
            Ok(())
        } else {
            Err(Failure::Math(format!(
                "tangent splitting {tangent} has a summand of degree below 1"
            )))
        }
    }
    let (handle, x_file, c_file) = load_pair(hypersurface, curve)?;
    match handle {
        FieldHandle::Q(f) => run(f, &x_file, &c_file, json),
        FieldHandle::Fp(f) => run(f, &x_file, &c_file, json),
    }
}

fn cmd_hilbert(config: &Path, degree: i64, json: bool) -> CmdResult {
    fn run<K: Field>(field: K, file: &ConfigurationFile, degree: i64, json: bool) -> CmdResult {
        let config: LineConfiguration<K> = configuration_from_file(field, file).map_err(classify)?;
        let structure = hilbert_structure(&config, degree).map_err(classify)?;
        let ideal = hilbert_ideal(&config, degree as u32).map_err(classify)?;
        let total = binomial(config.n() + degree as usize, degree as usize);
        let surjective = structure + ideal == total;
        if json {
            let value = serde_json::json!({
                "degree": degree,
                "structure_sections": structure,
                "ideal_dimension": ideal,
                "ambient_forms": total,
                "restriction_surjective": surjective,
            });
            print!("{}", to_pretty(&value));
        } else {
            println!("degree {degree}: structure sections {structure}, ideal dimension {ideal}, ambient forms {total}");
            println!("restriction surjective: {}", yes_no(surjective));
        }
        if surjective {
            Ok(())
        } else {
            Err(Failure::Math(format!(
                "sections ({structure}) plus ideal ({ideal}) miss the ambient count ({total})"
            )))
        }
    }
    let file: ConfigurationFile = parse_json(config, &read_text(config)?)?;
    match handle_of_spec(&file.field)? {
        FieldHandle::Q(f) => run(f, &file, degree, json),
        FieldHandle::Fp(f) => run(f, &file, degree, json),
    }
}

fn cmd_linear_system(
    degree: u32,
    curve_paths: &[PathBuf],
    field_flag: Option<&str>,
    n_opt: Option<usize>,
    json: bool,
) -> CmdResult {
    fn run<K: Field>(field: K, n: usize, curves: &[CurveFile], degree: u32, json: bool) -> CmdResult {
        let curves: Vec<RationalCurve<K>> = curves
            .iter()
            .map(|f| rational_curve_from_file(field, f))
            .collect::<Result<_, _>>()
            .map_err(classify)?;
        let basis =
            splitcert_core::config::linear_system_through(field, n, &curves, degree)
                .map_err(classify)?;
        if json {
            let dtos: Vec<MultiFormDto> = basis.iter().map(multi_form_to_dto).collect();
            let value = serde_json::json!({
                "degree": degree,
                "dimension": basis.len(),
                "basis": dtos,
            });
            print!("{}", to_pretty(&value));
        } else {
            println!("dimension: {}", basis.len());
            for form in &basis {
                println!("{}", format_form(form));
            }
        }
        Ok(())
    }
    let files: Vec<CurveFile> = curve_paths
        .iter()
        .map(|p| parse_json(p, &read_text(p)?))
        .collect::<Result<_, _>>()?;
    let (spec, n) = if let Some(first) = files.first() {
        for f in &files[1..] {
            if f.field != first.field {
                return Err(input_err("curve files use different fields"));
            }
        }
        let n = first.components.len() - 1;
        for f in &files {
            if f.components.len() != n + 1 {
                return Err(input_err("curve files use different ambient dimensions"));
            }
        }
        if let Some(explicit) = n_opt {
            if explicit != n {
                return Err(input_err(format!(
                    "--n {explicit} contradicts the curve files (dimension {n})"
                )));
            }
        }
        (first.field, n)
    } else {
        let flag = field_flag
            .ok_or_else(|| input_err("--field is required when no curve files are given"))?;
        let n =
            n_opt.ok_or_else(|| input_err("--n is required when no curve files are given"))?;
        (FieldSpec::from_flag(flag).map_err(classify)?, n)
    };
    match handle_of_spec(&spec)? {
        FieldHandle::Q(f) => run(f, n, &files, degree, json),
        FieldHandle::Fp(f) => run(f, n, &files, degree, json),
    }
}

fn cmd_comb_check(comb: &Path, json: bool) -> CmdResult {
    fn run<K: Field>(field: K, file: &CombFile, json: bool) -> CmdResult {
        let input = comb_from_file(field, file).map_err(classify)?;
        let report = comb_hypotheses(
            &input.hypersurface,
            &input.handle,
            &input.teeth,
            &input.nodes,
        )
        .map_err(classify)?;
        let mut failures = Vec::new();
        if !report.handle_typical {
            failures.push("the handle is not typical".to_string());
        }
        for (i, &t) in report.teeth_typical.iter().enumerate() {
            if !t {
                failures.push(format!("tooth {} is not typical", i + 1));
            }
        }
        for (i, &b) in report.handle_dir_in_tooth_trivial.iter().enumerate() {
            if b {
                failures.push(format!(
                    "node {}: the handle direction lies in the section subbundle of the tooth",
                    i + 1
                ));
            }
        }
        for (i, &b) in report.tooth_dir_in_handle_trivial.iter().enumerate() {
            if b {
                failures.push(format!(
                    "node {}: the tooth direction lies in the section subbundle of the handle",
                    i + 1
                ));
            }
        }
        if report.teeth_disjoint == Some(false) {
            failures.push("two teeth intersect".to_string());
        }
        if let Some(m) = &report.handle_modification {
            if !m.all_at_least(0) {
                failures.push(format!("the handle modification {m} keeps a negative summand"));
            }
        }
        for (i, m) in report.tooth_modifications.iter().enumerate() {
            if !m.all_at_least(0) {
                failures.push(format!(
                    "the modification of tooth {} is {m}, keeping a negative summand",
                    i + 1
                ));
            }
        }
        if json {
            print!("{}", to_pretty(&report));
        } else {
            println!("handle typical: {}", yes_no(report.handle_typical));
            for (i, &t) in report.teeth_typical.iter().enumerate() {
                println!("tooth {} typical: {}", i + 1, yes_no(t));
            }
            for i in 0..report.handle_dir_in_tooth_trivial.len() {
                println!(
                    "node {}: handle direction in tooth section subbundle: {}; tooth direction in handle section subbundle: {}",
                    i + 1,
                    yes_no(report.handle_dir_in_tooth_trivial[i]),
                    yes_no(report.tooth_dir_in_handle_trivial[i]),
                );
            }
            match report.teeth_disjoint {
                Some(b) => println!("teeth pairwise disjoint: {}", yes_no(b)),
                None => println!("teeth pairwise disjoint: not checked (teeth are not all lines)"),
            }
            match report.tooth_classes_span {
                Some(b) => println!(
                    "tooth classes span the handle normal fiber (informational): {}",
                    yes_no(b)
                ),
                None => println!(
                    "tooth classes span the handle normal fiber (informational): not checked (nodes are not concurrent)"
                ),
            }
            match &report.handle_modification {
                Some(m) => println!("handle modification: {m}"),
                None => println!("handle modification: not computed (node parameters repeat)"),
            }
            for (i, m) in report.tooth_modifications.iter().enumerate() {
                println!("tooth {} modification: {m}", i + 1);
            }
            println!(
                "comb hypotheses: {}",
                if failures.is_empty() { "pass" } else { "FAIL" }
            );
        }
        if failures.is_empty() {
            Ok(())
        } else {
            Err(Failure::Math(failures.join("; ")))
        }
    }
    let file: CombFile = parse_json(comb, &read_text(comb)?)?;
    match handle_of_spec(&file.field)? {
        FieldHandle::Q(f) => run(f, &file, json),
        FieldHandle::Fp(f) => run(f, &file, json),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    field_flag: &str,
    n: usize,
    degree: u32,
    curve_degree: u32,
    trials: u64,
    seed: u64,
    height: u32,
    json: bool,
    witness_out: Option<&Path>,
    csv: Option<&Path>,
) -> CmdResult {
    fn run<K: Field>(
        field: K,
        cfg: &TrialConfig,
        json: bool,
        witness_out: Option<&Path>,
        csv: Option<&Path>,
    ) -> CmdResult {
        let stats: TrialStats = very_free_search(field, cfg).map_err(classify)?;
        for w in &stats.witnesses {
            if !re_verify_witness(field, w).map_err(classify)? {
                return Err(Failure::Math(format!(
                    "stored witness from trial {} does not re-verify",
                    w.trial
                )));
            }
        }
        if let Some(dir) = witness_out {
            std::fs::create_dir_all(dir)
                .map_err(|e| input_err(format!("cannot create {}: {e}", dir.display())))?;
            for w in &stats.witnesses {
                write_output(
                    &dir.join(format!("witness_{}_{}.json", w.category, w.trial)),
                    &to_pretty(w),
                )?;
            }
        }
        let counts = &stats.counts;
        let rows: [(&str, u64); 10] = [
            ("trials", counts.trials),
            ("curve_resamples", counts.curve_resamples),
            ("on_hypersurface", counts.on_hypersurface),
            ("smooth_along", counts.smooth_along),
            ("singular_along", counts.singular_along),
            ("not_immersion", counts.not_immersion),
            ("typical", counts.typical),
            ("not_typical", counts.not_typical),
            ("very_free", counts.very_free),
            ("errors", counts.errors),
        ];
        if let Some(path) = csv {
            let mut text = String::from("statistic,count\n");
            for (name, value) in rows {
                text.push_str(&format!("{name},{value}\n"));
            }
            write_output(path, &text)?;
        }
        if json {
            print!("{}", to_pretty(&stats));
        } else {
            for (name, value) in rows {
                println!("{name}: {value}");
            }
            println!("witnesses stored: {}", stats.witnesses.len());
        }
        Ok(())
    }
    let handle = handle_of_flag(field_flag)?;
    let cfg = TrialConfig {
        n,
        d: degree,
        e: curve_degree,
        field: match &handle {
            FieldHandle::Q(_) => FieldSpec::Rationals,
            FieldHandle::Fp(f) => FieldSpec::Prime { p: f.modulus() },
        },
        trials,
        seed,
        height,
    };
    match handle {
        FieldHandle::Q(f) => run(f, &cfg, json, witness_out, csv),
        FieldHandle::Fp(f) => run(f, &cfg, json, witness_out, csv),
    }
}

fn cmd_section_check(hypersurface: &Path, curve: &Path, vars: &[usize], json: bool) -> CmdResult {
    fn run<K: Field>(
        field: K,
        x_file: &HypersurfaceFile,
        c_file: &CurveFile,
        vars: &[usize],
        json: bool,
    ) -> CmdResult {
        let x: Hypersurface<K> = hypersurface_from_file(field, x_file).map_err(classify)?;
        let c = rational_curve_from_file(field, c_file).map_err(classify)?;
        let report = splitcert_core::experiments::section_lift_check(&x, vars, &c)
            .map_err(classify)?;
        if json {
            print!("{}", to_pretty(&report));
        } else {
            match &report.section_tangent {
                Some(s) => println!("section tangent: {s}"),
                None => println!("section tangent: conic case, very free automatically"),
            }
            println!("ambient tangent: {}", report.ambient_tangent);
            println!("very free in ambient: {}", yes_no(report.very_free_in_ambient));
        }
        if report.very_free_in_ambient {
            Ok(())
        } else {
            Err(Failure::Math(format!(
                "the lifted curve is not very free: ambient tangent {}",
                report.ambient_tangent
            )))
        }
    }
    let (handle, x_file, c_file) = load_pair(hypersurface, curve)?;
    match handle {
        FieldHandle::Q(f) => run(f, &x_file, &c_file, vars, json),
        FieldHandle::Fp(f) => run(f, &x_file, &c_file, vars, json),
    }
}
