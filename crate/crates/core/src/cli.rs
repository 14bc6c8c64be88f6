//! The `hoalg` command line.

use std::io::{Read, Write};

use clap::{Parser, Subcommand};

use crate::envelope::{envelope_general, envelope_of_dgl, Envelope};
use crate::error::{Error, Result};
use crate::format::{load, AlgebraFile, Kind, Structure};
use crate::homotopy::{antisymmetrize, bar, check_stasheff, LInfAlgebra};
use crate::models::{
    example, quillen_model_of, sullivan_model, whitehead_massey_certificate, Example,
};
use crate::multiop::Truncation;
use crate::transfer::{
    homology_contraction, transfer_ainf, transfer_linf, underlying_complex, ContractionOptions,
};

/// Environment variable with default bounds as `max_degree,max_arity,max_weight`.
pub const TRUNCATION_ENV: &str = "HOALG_TRUNCATION";

#[derive(Debug, Parser)]
#[command(name = "hoalg", version, about = "Exact A∞/L∞ algebra computations over ℚ")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Bounds {
    /// Largest degree kept.
    #[arg(long)]
    max_degree: Option<i64>,
    /// Largest operation arity kept.
    #[arg(long)]
    max_arity: Option<usize>,
    /// Longest word kept in free constructions.
    #[arg(long)]
    max_weight: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the defining identities of a structure.
    Verify {
        /// AlgebraFile path, or - for stdin.
        file: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Antisymmetrize an A∞ algebra into an L∞ algebra.
    Antisymmetrize {
        /// AlgebraFile path, or - for stdin.
        file: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Transfer a structure to the homology of its underlying complex.
    Transfer {
        /// AlgebraFile path, or - for stdin.
        file: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Universal enveloping A∞ algebra of a DGL or minimal L∞ algebra.
    Envelope {
        /// AlgebraFile path, or - for stdin.
        file: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Sullivan model read off the envelope.
    Sullivan {
        /// AlgebraFile path, or - for stdin.
        file: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Quillen model read off the envelope.
    Quillen {
        /// AlgebraFile path, or - for stdin.
        file: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Emit a catalog L∞ model: odd_sphere N, even_sphere N, cpk K, em_product N1,N2,...
    Example {
        name: String,
        params: Vec<String>,
    },
    /// Compare a higher bracket with antisymmetrized higher products.
    CertifyWhitehead {
        /// AlgebraFile path, or - for stdin.
        file: String,
        /// Comma separated basis names.
        #[arg(long)]
        tuple: String,
        #[command(flatten)]
        bounds: Bounds,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Invalid(_) | Error::UnknownBasis(_) | Error::InvalidTruncation(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Check(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(String, bool), Failure>;

fn env_truncation(env: Option<&str>) -> std::result::Result<Option<Truncation>, Failure> {
    let Some(v) = env else { return Ok(None) };
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    let bad = || Failure::Usage(format!("{TRUNCATION_ENV} must be `max_degree,max_arity,max_weight`, got `{v}`"));
    let [d, a, w] = parts.as_slice() else { return Err(bad()) };
    let t = Truncation::new(
        d.parse().map_err(|_| bad())?,
        a.parse().map_err(|_| bad())?,
        w.parse().map_err(|_| bad())?,
    )?;
    Ok(Some(t))
}

struct Context<'a> {
    stdin: &'a mut dyn Read,
    env: Option<String>,
}

impl Context<'_> {
    fn read(&mut self, file: &str) -> std::result::Result<String, Failure> {
        if file == "-" {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::Usage(format!("reading standard input: {e}")))?;
            Ok(s)
        } else {
            std::fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{file}: {e}")))
        }
    }

    /// Flags, then the file's truncation, then the environment, then the
    /// defaults.
    fn bounds(&self, b: &Bounds, file: Option<&Truncation>) -> std::result::Result<Truncation, Failure> {
        let base = match file {
            Some(t) => *t,
            None => env_truncation(self.env.as_deref())?.unwrap_or_default(),
        };
        let t = Truncation {
            max_degree: b.max_degree.unwrap_or(base.max_degree),
            max_arity: b.max_arity.unwrap_or(base.max_arity),
            max_weight: b.max_weight.unwrap_or(base.max_weight),
        };
        t.validate()?;
        Ok(t)
    }

    /// Reads and checks a file, returning it with the effective bounds.
    fn load(&mut self, file: &str, b: &Bounds) -> std::result::Result<(AlgebraFile, Truncation), Failure> {
        let text = self.read(file)?;
        let parsed = crate::format::parse(&text)?;
        let t = self.bounds(b, parsed.truncation.as_ref())?;
        let f = load(&text, &t)?;
        Ok((f, t))
    }
}

fn lie_input(f: &AlgebraFile, what: &str) -> std::result::Result<LInfAlgebra, Failure> {
    match &f.structure {
        Structure::Lie(l) => Ok(l.clone()),
        Structure::Assoc(_) => Err(Failure::Usage(format!("{what} needs a linf or dgl file, got {}", f.kind))),
    }
}

fn build_envelope(f: &AlgebraFile, t: &Truncation) -> std::result::Result<Envelope, Failure> {
    let l = lie_input(f, "envelope")?;
    let route_dgl = f.kind == Kind::Dgl || (l.is_dgl() && !l.is_minimal());
    let e = if route_dgl {
        let c = homology_contraction(&underlying_complex(&l)?, &ContractionOptions::default())?;
        envelope_of_dgl(&l, &c, t)?
    } else {
        envelope_general(&l, t, None)?
    };
    Ok(e)
}

fn verify(ctx: &mut Context, file: &str, b: &Bounds) -> Outcome {
    let text = ctx.read(file)?;
    let f = crate::format::parse(&text)?;
    let t = ctx.bounds(b, f.truncation.as_ref())?;
    let report = f.structure.check(&t)?;
    let space = f.structure.space();
    let identity = if f.kind.is_lie() { "Jacobi" } else { "Stasheff" };
    let mut out = String::new();
    let bounds = format!("degree ≤ {}, arity ≤ {}", t.max_degree, t.max_arity);
    let mut ok = report.passed();
    match report.first_failure(space, space) {
        None => out.push_str(&format!("ok: {} {identity} instances hold within {bounds}\n", report.checked)),
        Some(msg) => out.push_str(&format!(
            "FAIL: {msg}\n{} of {} {identity} instances fail within {bounds}\n",
            report.violations.len(),
            report.checked
        )),
    }
    if let Structure::Assoc(a) = &f.structure {
        let b = bar(a, &t)?;
        let defects = b.check();
        if !defects.square_zero {
            ok = false;
            out.push_str("FAIL: the bar codifferential does not square to zero\n");
        }
    }
    Ok((out, ok))
}

fn run_command(cmd: Command, ctx: &mut Context) -> Outcome {
    match cmd {
        Command::Verify { file, bounds } => verify(ctx, &file, &bounds),
        Command::Antisymmetrize { file, bounds } => {
            let (f, t) = ctx.load(&file, &bounds)?;
            let Structure::Assoc(a) = &f.structure else {
                return Err(Failure::Usage(format!("antisymmetrize needs an ainf or dga file, got {}", f.kind)));
            };
            let l = antisymmetrize(a, &t)?;
            let kind = if f.kind == Kind::Dga { Kind::Dgl } else { Kind::LInf };
            Ok((AlgebraFile::lie(kind, l, Some(t)).dump(), true))
        }
        Command::Transfer { file, bounds } => {
            let (f, t) = ctx.load(&file, &bounds)?;
            let out = match &f.structure {
                Structure::Lie(l) => {
                    let c = homology_contraction(&underlying_complex(l)?, &ContractionOptions::default())?;
                    let (small, _) = transfer_linf(&c, l, &t)?;
                    AlgebraFile::lie(Kind::LInf, small, Some(t))
                }
                Structure::Assoc(a) => {
                    let c = homology_contraction(&underlying_complex(a)?, &ContractionOptions::default())?;
                    let (small, _) = transfer_ainf(&c, a, &t)?;
                    AlgebraFile::assoc(Kind::AInf, small, Some(t))
                }
            };
            let ok = out.structure.check(&t)?.passed();
            Ok((out.dump(), ok))
        }
        Command::Envelope { file, bounds } => {
            let (f, t) = ctx.load(&file, &bounds)?;
            let e = build_envelope(&f, &t)?;
            let ok = check_stasheff(&e.structure, &t)?.passed();
            let mut s = format!(
                "# enveloping A∞ algebra of a {}; homotopy compatible: {}\n",
                f.kind,
                if e.homotopy_compatible { "yes" } else { "no" }
            );
            s.push_str(&AlgebraFile::assoc(Kind::AInf, e.structure.clone(), Some(t)).dump());
            Ok((s, ok))
        }
        Command::Sullivan { file, bounds } => {
            let (f, t) = ctx.load(&file, &bounds)?;
            let e = build_envelope(&f, &t)?;
            let s = sullivan_model(&e, &t)?;
            let mut out = String::from("# Sullivan model, cohomological degrees\n");
            for (_, name, deg) in s.generators.basis() {
                out.push_str(&format!("generator {name}:{deg}\n"));
            }
            for g in 0..s.generators.dim() {
                out.push_str(&s.format_generator(g));
                out.push('\n');
            }
            let defects = s.square_defects();
            if defects.is_empty() {
                out.push_str("d² = 0\n");
            } else {
                let names: Vec<&str> = defects.iter().map(|&u| s.space().name(u)).collect();
                out.push_str(&format!("FAIL: d² ≠ 0 on {}\n", names.join(", ")));
            }
            Ok((out, defects.is_empty()))
        }
        Command::Quillen { file, bounds } => {
            let (f, t) = ctx.load(&file, &bounds)?;
            let e = build_envelope(&f, &t)?;
            let q = quillen_model_of(&e, &t)?;
            let tensor = q.lie.tensor();
            let gens = tensor.generators();
            let mut out = String::from("# Quillen model\n");
            for (_, name, deg) in gens.basis() {
                out.push_str(&format!("generator {name}:{deg}\n"));
            }
            for g in 0..gens.dim() {
                let v = &tensor.generator_differential()[g];
                out.push_str(&format!("∂({}) = {}\n", gens.name(g), v.format(tensor.space())));
            }
            let h = q.homology_dims()?;
            let h: Vec<String> = h.iter().map(|(d, n)| format!("{d}:{n}")).collect();
            out.push_str(&format!("homology {}\n", h.join(" ")));
            let defects = q.square_defects();
            let mismatches = q.homology_mismatches()?;
            let top = tensor.max_degree();
            if defects.is_empty() {
                out.push_str(&format!("∂² = 0 up to degree {top}\n"));
            } else {
                out.push_str(&format!("FAIL: ∂² ≠ 0 on {} basis tensors\n", defects.len()));
            }
            for (d, got, want) in &mismatches {
                out.push_str(&format!("FAIL: homology in degree {d} has dimension {got}, L has {want}\n"));
            }
            Ok((out, defects.is_empty() && mismatches.is_empty()))
        }
        Command::Example { name, params } => {
            let params: Vec<&str> = params.iter().map(String::as_str).collect();
            let ex = Example::parse(&name, &params)?;
            let l = example(&ex)?;
            let mut s = format!("# {ex}\n");
            s.push_str(&AlgebraFile::lie(Kind::LInf, l, None).dump());
            Ok((s, true))
        }
        Command::CertifyWhitehead { file, tuple, bounds } => {
            let (f, t) = ctx.load(&file, &bounds)?;
            let e = build_envelope(&f, &t)?;
            let l = e.lie.space();
            let names: Vec<&str> = tuple.split(',').map(str::trim).collect();
            let idx = names
                .iter()
                .map(|n| l.require(n))
                .collect::<Result<Vec<_>>>()?;
            let c = whitehead_massey_certificate(&e, &idx, &t)?;
            let n = idx.len();
            let space = e.space();
            let mut out = format!("tuple ({})\nepsilon {}\n", names.join(","), c.epsilon);
            out.push_str(&format!("bracket ε·l{n} = {}\n", c.bracket.format(l)));
            out.push_str(&format!("lhs {}\n", c.lhs.format(space)));
            for term in &c.terms {
                let perm: Vec<String> = term.sigma.images().iter().map(|i| (i + 1).to_string()).collect();
                out.push_str(&format!(
                    "term σ=({}) χ={} ε_σ={} {}\n",
                    perm.join(","),
                    term.chi,
                    term.epsilon,
                    term.representative.format(space)
                ));
            }
            out.push_str(&format!("rhs {}\n", c.rhs.format(space)));
            if c.equal() {
                out.push_str("verdict equal\n");
            } else {
                out.push_str(&format!("verdict residual {}\n", c.residual.format(space)));
            }
            Ok((out, c.equal()))
        }
    }
}

/// Runs the command line on `args` (including the program name) and
/// returns the exit code: 0 on success, 1 when a check or certificate
/// fails, 2 on usage errors.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut ctx = Context {
        stdin,
        env: std::env::var(TRUNCATION_ENV).ok(),
    };
    match run_command(cli.command, &mut ctx) {
        Ok((text, ok)) => {
            let _ = stdout.write_all(text.as_bytes());
            if ok {
                0
            } else {
                1
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}
