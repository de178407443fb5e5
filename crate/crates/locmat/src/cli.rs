//! Command-line front end.
//!
//! Exit codes: 0 success, 1 domain error (singular input, failed
//! verification, ...), 2 usage or parse error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use locmat_core::{
    decompose_gl, decompose_transvections, lemma1_rewrite, sl_membership, AutomorphismDescriptor,
    Field, PeriodicMatrix, RelativeDeterminant, SlMembership, SteinitzNumber,
};
use serde_json::json;

use crate::formats::{
    descriptor_from_json, matrix_from_json, DescriptorFile, FormatError, MatrixFile, WordFile,
};
use crate::verify::{self, Suite};

#[derive(Debug, Parser)]
#[command(name = "locmat", version, about = "Periodic matrices over Steinitz numbers")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Steinitz number arithmetic.
    #[command(subcommand)]
    Steinitz(SteinitzCmd),
    /// Periodic matrix arithmetic on matrix files.
    #[command(subcommand)]
    Matrix(MatrixCmd),
    /// Group membership and decompositions.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Relative determinant over a root tower.
    Detr {
        #[arg(long)]
        s: String,
        file: PathBuf,
    },
    /// Automorphism descriptors.
    #[command(subcommand)]
    Auto(AutoCmd),
    /// Run the seeded property suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, env = "LOCMAT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Debug, Subcommand)]
enum SteinitzCmd {
    Eval { expr: String },
    /// Whether A divides B.
    Divides { a: String, b: String },
    Lcm {
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    Gcd {
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    /// The maximal X with B·X = A.
    Quotient { a: String, b: String },
}

#[derive(Debug, Subcommand)]
enum MatrixCmd {
    /// Product of the matrices, left to right.
    Mul {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    Add {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    Inv { file: PathBuf },
    Transpose { file: PathBuf },
    /// Determinant of the block at level m (default: the minimal period).
    Det {
        #[arg(long)]
        at: Option<usize>,
        file: PathBuf,
    },
    /// Minimal period and canonical block.
    Canon { file: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Sl,
    Gl,
}

#[derive(Debug, Subcommand)]
enum GroupCmd {
    SlMember {
        #[arg(long)]
        s: String,
        file: PathBuf,
    },
    Decompose {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        at: Option<usize>,
        file: PathBuf,
    },
    Lemma1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Field descriptor.
        #[arg(long, default_value = "GF(5)")]
        field: String,
    },
}

#[derive(Debug, Subcommand)]
enum AutoCmd {
    /// Applies the descriptors right to left to the matrix in the last file.
    Apply {
        #[arg(required = true, num_args = 2..)]
        files: Vec<PathBuf>,
    },
    /// Composes the descriptors left to right, `d1 ∘ d2 ∘ …`.
    Compose {
        #[arg(required = true)]
        descriptors: Vec<PathBuf>,
        /// Also apply the composite to this matrix.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }
}

fn usage(what: impl std::fmt::Display, e: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("{what}: {e}"))
}

fn domain(what: impl std::fmt::Display, e: impl std::fmt::Display) -> Failure {
    Failure::Domain(format!("{what}: {e}"))
}

/// Input errors (syntax, malformed files) are usage errors; everything the
/// algebra rejects is a domain error.
fn format_failure(path: &Path, e: FormatError) -> Failure {
    let what = path.display();
    match e {
        FormatError::Auto(_) => domain(what, e),
        _ => usage(what, e),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(path.display(), e))
}

fn load_matrix(path: &Path) -> Result<PeriodicMatrix, Failure> {
    matrix_from_json(&read(path)?).map_err(|e| format_failure(path, e))
}

fn load_descriptor(path: &Path) -> Result<AutomorphismDescriptor, Failure> {
    descriptor_from_json(&read(path)?).map_err(|e| format_failure(path, e))
}

fn steinitz(expr: &str) -> Result<SteinitzNumber, Failure> {
    SteinitzNumber::parse(expr).map_err(|e| usage(format!("{expr:?}"), e))
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

struct Out {
    json: bool,
    text: String,
}

impl Out {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    /// Human text or the JSON value, depending on the mode.
    fn either(&mut self, human: impl AsRef<str>, machine: serde_json::Value) {
        if self.json {
            let s = pretty(&machine);
            self.line(s);
        } else {
            self.line(human);
        }
    }

    fn matrix(&mut self, a: &PeriodicMatrix) {
        self.line(pretty(&MatrixFile::from_matrix(a)));
    }
}

/// Human form of a Steinitz number: the decimal value when finite and
/// small, the prime-power product otherwise.
fn human_steinitz(s: &SteinitzNumber) -> String {
    match s.to_biguint(256) {
        Some(n) => n.to_string(),
        None => s.to_string(),
    }
}

fn steinitz_out(out: &mut Out, s: &SteinitzNumber) {
    out.either(human_steinitz(s), json!({ "steinitz": s.to_string() }));
}

fn dispatch(cli: Cli, out: &mut Out) -> Result<(), Failure> {
    match cli.command {
        Command::Steinitz(cmd) => match cmd {
            SteinitzCmd::Eval { expr } => steinitz_out(out, &steinitz(&expr)?),
            SteinitzCmd::Divides { a, b } => {
                let d = steinitz(&a)?.divides(&steinitz(&b)?);
                out.either(d.to_string(), json!({ "divides": d }));
            }
            SteinitzCmd::Lcm { exprs } => {
                let xs = exprs.iter().map(|e| steinitz(e)).collect::<Result<Vec<_>, _>>()?;
                let r = SteinitzNumber::lcm_all(&xs).map_err(|e| usage("lcm", e))?;
                steinitz_out(out, &r);
            }
            SteinitzCmd::Gcd { exprs } => {
                let xs = exprs.iter().map(|e| steinitz(e)).collect::<Result<Vec<_>, _>>()?;
                let r = SteinitzNumber::gcd_all(&xs).map_err(|e| usage("gcd", e))?;
                steinitz_out(out, &r);
            }
            SteinitzCmd::Quotient { a, b } => {
                let q = steinitz(&a)?
                    .quotient(&steinitz(&b)?)
                    .map_err(|e| domain(format!("{a} / {b}"), e))?;
                steinitz_out(out, &q);
            }
        },
        Command::Matrix(cmd) => matrix_cmd(cmd, out)?,
        Command::Group(cmd) => group_cmd(cmd, out)?,
        Command::Detr { s, file } => {
            let idx = steinitz(&s)?;
            let a = load_matrix(&file)?;
            let rd = RelativeDeterminant::for_index(a.field(), &idx)
                .map_err(|e| domain(format!("{} over s = {s}", a.field()), e))?;
            let v = rd.det_r(&a).map_err(|e| domain(file.display(), e))?;
            let lit = a.field().element(v).to_string();
            out.either(&lit, json!({ "detr": lit }));
        }
        Command::Auto(cmd) => auto_cmd(cmd, out)?,
        Command::Verify { suite, seed, trials } => {
            let report = verify::run(suite, seed, trials);
            if out.json {
                out.line(pretty(&report));
            } else {
                out.text.push_str(&report.render());
            }
            if !report.passed {
                return Err(Failure::Domain(format!("verification failed (seed {seed})")));
            }
        }
    }
    Ok(())
}

fn matrix_cmd(cmd: MatrixCmd, out: &mut Out) -> Result<(), Failure> {
    match cmd {
        MatrixCmd::Mul { files } => {
            let mut acc = load_matrix(&files[0])?;
            for f in &files[1..] {
                acc = acc.mul(&load_matrix(f)?).map_err(|e| domain(f.display(), e))?;
            }
            out.matrix(&acc);
        }
        MatrixCmd::Add { files } => {
            let mut acc = load_matrix(&files[0])?;
            for f in &files[1..] {
                acc = acc.add(&load_matrix(f)?).map_err(|e| domain(f.display(), e))?;
            }
            out.matrix(&acc);
        }
        MatrixCmd::Inv { file } => {
            let a = load_matrix(&file)?;
            out.matrix(&a.inverse().map_err(|e| domain(file.display(), e))?);
        }
        MatrixCmd::Transpose { file } => out.matrix(&load_matrix(&file)?.transpose()),
        MatrixCmd::Det { at, file } => {
            let a = load_matrix(&file)?;
            let m = at.unwrap_or(a.period());
            let det = a.det_at(m).map_err(|e| domain(file.display(), e))?;
            let lit = a.field().element(det).to_string();
            out.either(&lit, json!({ "det": lit, "level": m }));
        }
        MatrixCmd::Canon { file } => {
            let a = load_matrix(&file)?;
            if !out.json {
                out.line(format!("period {}", a.period()));
            }
            out.matrix(&a);
        }
    }
    Ok(())
}

fn group_cmd(cmd: GroupCmd, out: &mut Out) -> Result<(), Failure> {
    match cmd {
        GroupCmd::SlMember { s, file } => {
            let idx = steinitz(&s)?;
            let a = load_matrix(&file)?;
            match sl_membership(&a, &idx) {
                SlMembership::Member { level } => out.either(
                    format!("member level={level}"),
                    json!({ "member": true, "level": level }),
                ),
                SlMembership::NotMember => {
                    out.either("not-member", json!({ "member": false, "level": null }))
                }
            }
        }
        GroupCmd::Decompose { mode, at, file } => {
            let a = load_matrix(&file)?;
            let m = at.unwrap_or(a.period());
            let word = match mode {
                Mode::Sl => decompose_transvections(&a, m),
                Mode::Gl => decompose_gl(&a, m),
            }
            .map_err(|e| domain(file.display(), e))?;
            out.line(pretty(&WordFile::from_word(&word)));
        }
        GroupCmd::Lemma1 { n, q, i, j, alpha, field } => {
            let f = Field::parse(&field).map_err(|e| usage(format!("--field {field:?}"), e))?;
            let a = f
                .parse_element(&alpha)
                .map_err(|e| usage(format!("--alpha {alpha:?}"), e))?;
            let word = lemma1_rewrite(&f, i, j, a, q, n)
                .map_err(|e| usage(format!("lemma1 n={n} q={q} i={i} j={j}"), e))?;
            out.line(pretty(&WordFile::from_word(&word)));
        }
    }
    Ok(())
}

fn auto_cmd(cmd: AutoCmd, out: &mut Out) -> Result<(), Failure> {
    match cmd {
        AutoCmd::Apply { files } => {
            let (mfile, dfiles) = files.split_last().expect("at least two files");
            let mut x = load_matrix(mfile)?;
            for d in dfiles.iter().rev() {
                x = load_descriptor(d)?
                    .apply(&x)
                    .map_err(|e| domain(format!("{} applied to {}", d.display(), mfile.display()), e))?;
            }
            out.matrix(&x);
        }
        AutoCmd::Compose { descriptors, matrix } => {
            let mut acc = AutomorphismDescriptor::identity();
            for d in &descriptors {
                acc = acc.compose(&load_descriptor(d)?).map_err(|e| domain(d.display(), e))?;
            }
            let desc = DescriptorFile::from_descriptor(&acc);
            match matrix {
                None => out.line(pretty(&desc)),
                Some(path) => {
                    let g = load_matrix(&path)?;
                    let image = acc.apply(&g).map_err(|e| domain(path.display(), e))?;
                    out.line(pretty(&json!({
                        "descriptor": desc,
                        "image": MatrixFile::from_matrix(&image),
                    })));
                }
            }
        }
    }
    Ok(())
}

/// Parses `args` (including the program name), runs the command and writes
/// its output. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut out = Out {
        json: cli.json,
        text: String::new(),
    };
    let result = dispatch(cli, &mut out);
    let _ = stdout.write_all(out.text.as_bytes());
    match result {
        Ok(()) => 0,
        Err(f) => {
            let (Failure::Usage(msg) | Failure::Domain(msg)) = &f;
            let _ = writeln!(stderr, "error: {msg}");
            f.code()
        }
    }
}
