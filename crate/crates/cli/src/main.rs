//! `mpdagger`: Moore-Penrose inverses and decompositions over JSON files.
//!
//! Exit status is 0 when the operation succeeds or the checked property
//! holds, 1 when a property fails or a decomposition is refused, and 2 for
//! malformed input or a capability the instance lacks.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mpdagger::category::{DaggerCategory, SpecialMaps, Tolerance};
use mpdagger::decomp::{
    check_gcsvd, check_gsvd, check_polar, gcsvd_from_mp, gsvd_from_mp, kernel_identities, mp_from_gcsvd, mp_from_gsvd,
    mp_from_polar, polar_from_mp, Gcsvd,
};
use mpdagger::karoubi::{iso_from_mp, mp_from_iso, Karoubi};
use mpdagger::matrix::{json::MatrixFile, ComplexMatrix, Mat};
use mpdagger::pinj::{self, verify_inverse_category_laws, PartialInjection, Pinj, PinjFile};
use mpdagger::rel::{self, brute_force_mp, gcsvd_rel, split_per, FiniteRelation, Rel, RelationFile};
use mpdagger::Error;
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(name = "mpdagger", version, about = "Moore-Penrose inverses in dagger categories")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Input file; repeat for binary operations.
    #[arg(long = "in", value_name = "PATH", global = true)]
    inputs: Vec<PathBuf>,
    /// Write the result here instead of standard output.
    #[arg(long, value_name = "PATH", global = true)]
    out: Option<PathBuf>,
    /// Singular-value cutoff for numerical rank (matrices only).
    #[arg(long, value_name = "REAL", global = true)]
    rank_tol: Option<f64>,
    /// Relative slack for equality checks (matrices only).
    #[arg(long, value_name = "REAL", global = true)]
    eq_tol: Option<f64>,
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// M-P inverse of a matrix, relation or partial injection.
    Pinv,
    /// Singular value decomposition A = U·Σ·V† of a matrix.
    Svd,
    /// Compact SVD f = r·d·s from the M-P inverse.
    Gcsvd,
    /// Full SVD f = u·(d ⊕ 0)·v from the M-P inverse and dagger kernels.
    Gsvd,
    /// Polar decomposition f = u·h with h = √(f†f).
    Polar,
    /// Check the four M-P axioms for a pair `--in f --in g`.
    VerifyMp,
    /// Dagger kernel of a matrix.
    Kernel,
    /// Split a dagger idempotent e as r with r·r† = e and r†·r = 1.
    SplitIdem,
    /// Rank criterion for an M-P inverse under the plain transpose.
    RankTranspose,
    /// Operations on finite relations.
    Rel {
        #[command(subcommand)]
        cmd: RelCmd,
    },
    /// Operations on partial injections.
    Pinj {
        #[command(subcommand)]
        cmd: PinjCmd,
    },
    /// Operations in the dagger Karoubi envelope.
    Karoubi {
        #[command(subcommand)]
        cmd: KaroubiCmd,
    },
}

#[derive(Subcommand)]
enum RelCmd {
    /// Whether any two rows are disjoint or equal.
    Difunctional,
    /// The M-P inverse (the converse, when the relation is difunctional).
    Mp,
    /// Exhaustive search for M-P inverses (at most 16 cells).
    Oracle,
    /// Split a partial equivalence relation through its classes.
    SplitPer,
    /// Compact SVD through the classes of both sides.
    Gcsvd,
}

#[derive(Subcommand)]
enum PinjCmd {
    /// M-P axioms for f and f†; with a second input, the inverse-category laws too.
    Verify,
}

#[derive(Subcommand)]
enum KaroubiCmd {
    /// Round trip between an M-P pair and an isomorphism of split objects.
    Check,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(e) if e.is_mathematical() => 1,
            _ => 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(msg) => f.write_str(msg),
            Failure::Lib(e) => write!(f, "{e}"),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

/// A JSON result plus whether the property it reports holds.
struct Outcome {
    value: Value,
    holds: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, holds: true }
    }
}

trait Encode {
    fn encode(&self) -> Value;
}

impl Encode for ComplexMatrix {
    fn encode(&self) -> Value {
        serde_json::to_value(MatrixFile::from(self)).expect("matrix encodes")
    }
}

impl Encode for FiniteRelation {
    fn encode(&self) -> Value {
        serde_json::to_value(RelationFile::from(self)).expect("relation encodes")
    }
}

impl Encode for PartialInjection {
    fn encode(&self) -> Value {
        serde_json::to_value(PinjFile::from(self)).expect("partial injection encodes")
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report encodes")
}

enum Input {
    Matrix(ComplexMatrix),
    Relation(FiniteRelation),
    Pinj(PartialInjection),
}

impl Input {
    fn kind(&self) -> &'static str {
        match self {
            Input::Matrix(_) => "matrix",
            Input::Relation(_) => "relation",
            Input::Pinj(_) => "partial injection",
        }
    }
}

fn read_input(path: &PathBuf) -> Run<Input> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let has = |key| value.get(key).is_some();
    let parsed = if has("rows") || has("data") {
        mpdagger::matrix::json::from_json(&text).map(Input::Matrix)
    } else if has("pairs") {
        rel::from_json(&text).map(Input::Relation)
    } else if has("map") {
        pinj::from_json(&text).map(Input::Pinj)
    } else {
        return Err(Failure::Usage(format!("{}: not a matrix, relation or partial injection file", path.display())));
    };
    parsed.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Runs `$body` with `$cat` bound to the instance matching the input.
macro_rules! with_instance {
    ($input:expr, $mat:expr, |$cat:ident, $f:ident| $body:expr) => {
        match $input {
            Input::Matrix($f) => {
                let $cat = $mat;
                $body
            }
            Input::Relation($f) => {
                let $cat = &Rel;
                $body
            }
            Input::Pinj($f) => {
                let $cat = &Pinj;
                $body
            }
        }
    };
}

/// As `with_instance!` for two inputs of the same kind.
macro_rules! with_pair {
    ($a:expr, $b:expr, $mat:expr, |$cat:ident, $f:ident, $g:ident| $body:expr) => {
        match ($a, $b) {
            (Input::Matrix($f), Input::Matrix($g)) => {
                let $cat = $mat;
                $body
            }
            (Input::Relation($f), Input::Relation($g)) => {
                let $cat = &Rel;
                $body
            }
            (Input::Pinj($f), Input::Pinj($g)) => {
                let $cat = &Pinj;
                $body
            }
            (a, b) => Err(Failure::Usage(format!("inputs are a {} and a {}", a.kind(), b.kind()))),
        }
    };
}

struct Ctx {
    mat: Mat,
    inputs: Vec<Input>,
}

impl Ctx {
    fn new(cli: &Cli) -> Run<Self> {
        let tol = Tolerance::new(cli.rank_tol, cli.eq_tol.unwrap_or(Tolerance::DEFAULT_EQ_TOL))?;
        let inputs = cli.inputs.iter().map(read_input).collect::<Run<Vec<_>>>()?;
        Ok(Ctx { mat: Mat::new(tol), inputs })
    }

    fn arity(&self, min: usize, max: usize) -> Run<()> {
        let n = self.inputs.len();
        if n < min || n > max {
            let want = if min == max { format!("{min}") } else { format!("{min} or {max}") };
            return Err(Failure::Usage(format!("expected {want} --in file(s), got {n}")));
        }
        Ok(())
    }

    fn one(&self) -> Run<&Input> {
        self.arity(1, 1)?;
        Ok(&self.inputs[0])
    }

    fn matrix(&self) -> Run<&ComplexMatrix> {
        match self.one()? {
            Input::Matrix(a) => Ok(a),
            other => Err(Failure::Usage(format!("expected a matrix, got a {}", other.kind()))),
        }
    }

    fn relation(&self) -> Run<&FiniteRelation> {
        match self.one()? {
            Input::Relation(r) => Ok(r),
            other => Err(Failure::Usage(format!("expected a relation, got a {}", other.kind()))),
        }
    }

    fn pinj(&self, index: usize) -> Run<&PartialInjection> {
        match &self.inputs[index] {
            Input::Pinj(f) => Ok(f),
            other => Err(Failure::Usage(format!("expected a partial injection, got a {}", other.kind()))),
        }
    }
}

fn gcsvd_value<C>(cat: &C, f: &C::Morphism, f_mp: &C::Morphism, t: &Gcsvd<C::Morphism>) -> Run<Value>
where
    C: DaggerCategory,
    C::Morphism: Encode,
{
    let report = check_gcsvd(cat, f, t)?;
    let back = mp_from_gcsvd(cat, t)?;
    let mut residuals = to_value(&report);
    residuals["mp_round_trip"] = json!(cat.deviation(&back, f_mp)?);
    Ok(json!({
        "r": t.r.encode(),
        "d": t.d.encode(),
        "d_inv": t.d_inv.encode(),
        "s": t.s.encode(),
        "residuals": residuals,
    }))
}

fn gcsvd<C>(cat: &C, f: &C::Morphism) -> Run<Outcome>
where
    C: DaggerCategory,
    C::Morphism: Encode,
{
    let f_mp = cat.mp_inverse(f)?;
    let t = gcsvd_from_mp(cat, f, &f_mp)?;
    Ok(Outcome::ok(gcsvd_value(cat, f, &f_mp, &t)?))
}

fn gsvd<C>(cat: &C, f: &C::Morphism) -> Run<Outcome>
where
    C: DaggerCategory,
    C::Morphism: Encode,
    C::Object: serde::Serialize,
{
    let f_mp = cat.mp_inverse(f)?;
    let t = gsvd_from_mp(cat, f, &f_mp)?;
    let report = check_gsvd(cat, f, &t)?;
    let kernels = kernel_identities(cat, f, &f_mp, &t.kernel, &t.cokernel)?;
    let (back, _) = mp_from_gsvd(cat, &t)?;
    let mut residuals = to_value(&report);
    residuals["kernel_identities"] = to_value(&kernels);
    residuals["mp_round_trip"] = json!(cat.deviation(&back, &f_mp)?);
    Ok(Outcome::ok(json!({
        "u": t.u.encode(),
        "d": t.d.encode(),
        "d_inv": t.d_inv.encode(),
        "v": t.v.encode(),
        "classical_V": cat.dagger(&t.v).encode(),
        "dims": { "x": to_value(&t.x), "z": to_value(&t.z), "y": to_value(&t.y), "w": to_value(&t.w) },
        "residuals": residuals,
    })))
}

fn polar<C>(cat: &C, f: &C::Morphism) -> Run<Outcome>
where
    C: DaggerCategory,
    C::Morphism: Encode,
{
    let f_mp = cat.mp_inverse(f)?;
    let p = polar_from_mp(cat, f, &f_mp)?;
    let report = check_polar(cat, f, &p)?;
    let back = mp_from_polar(cat, &p)?;
    let mut residuals = to_value(&report);
    residuals["mp_round_trip"] = json!(cat.deviation(&back, &f_mp)?);
    Ok(Outcome::ok(json!({
        "u": p.u.encode(),
        "h": p.h.encode(),
        "h_mp": p.h_mp.encode(),
        "residuals": residuals,
    })))
}

fn verify_mp<C>(cat: &C, f: &C::Morphism, g: &C::Morphism) -> Run<Outcome>
where
    C: DaggerCategory,
{
    let report = cat.verify_mp(f, g)?;
    let mut value = to_value(&report);
    value["all_hold"] = json!(report.all_hold());
    value["max_relative_residual"] = json!(report.max_relative_residual());
    Ok(Outcome { value, holds: report.all_hold() })
}

fn karoubi_check<C>(cat: &C, f: &C::Morphism, given: Option<&C::Morphism>) -> Run<Outcome>
where
    C: DaggerCategory,
    C::Morphism: Encode,
{
    let f_mp = match given {
        Some(g) => g.clone(),
        None => cat.mp_inverse(f)?,
    };
    let k = Karoubi::new(cat);
    let iso = iso_from_mp(&k, f, &f_mp)?;
    let (f2, g2) = mp_from_iso(&k, &iso.forward, &iso.backward)?;
    let forward = cat.deviation(&f2, f)?;
    let backward = cat.deviation(&g2, &f_mp)?;
    let report = cat.verify_mp(&f2, &g2)?;
    let holds = report.all_hold() && forward == 0.0 && backward == 0.0;
    Ok(Outcome {
        value: json!({
            "source_idempotent": iso.forward.dom.e.encode(),
            "target_idempotent": iso.forward.cod.e.encode(),
            "forward": iso.forward.f.encode(),
            "backward": iso.backward.f.encode(),
            "residuals": { "forward_round_trip": forward, "backward_round_trip": backward, "mp": to_value(&report) },
        }),
        holds,
    })
}

fn run(cli: &Cli) -> Run<Outcome> {
    let ctx = Ctx::new(cli)?;
    let mat = &ctx.mat;
    match &cli.cmd {
        Cmd::Pinv => with_instance!(ctx.one()?, mat, |cat, f| Ok(Outcome::ok(cat.mp_inverse(f)?.encode()))),
        Cmd::Svd => {
            let a = ctx.matrix()?;
            let s = mat.svd(a)?;
            let reconstruction = mat.close(&s.reconstruct(), a, mat.magnitude(a))?;
            Ok(Outcome::ok(json!({
                "u": s.u.encode(),
                "sigma": s.sigma,
                "v": s.v.encode(),
                "rank": s.rank,
                "rank_tol": s.rank_tol,
                "residuals": { "reconstruction": to_value(&reconstruction) },
            })))
        }
        Cmd::Gcsvd => with_instance!(ctx.one()?, mat, |cat, f| gcsvd(cat, f)),
        Cmd::Gsvd => with_instance!(ctx.one()?, mat, |cat, f| gsvd(cat, f)),
        Cmd::Polar => with_instance!(ctx.one()?, mat, |cat, f| polar(cat, f)),
        Cmd::VerifyMp => {
            ctx.arity(2, 2)?;
            with_pair!(&ctx.inputs[0], &ctx.inputs[1], mat, |cat, f, g| verify_mp(cat, f, g))
        }
        Cmd::Kernel => with_instance!(ctx.one()?, mat, |cat, f| Ok(Outcome::ok(cat.dagger_kernel(f)?.encode()))),
        Cmd::SplitIdem => {
            with_instance!(ctx.one()?, mat, |cat, f| Ok(Outcome::ok(cat.split_idempotent(f)?.encode())))
        }
        Cmd::RankTranspose => {
            let ranks = mat.transpose_ranks(ctx.matrix()?)?;
            let mut value = json!({ "has_mp": ranks.has_mp() });
            if let (Value::Object(out), Value::Object(rest)) = (&mut value, to_value(&ranks)) {
                out.extend(rest);
            }
            Ok(Outcome { value, holds: ranks.has_mp() })
        }
        Cmd::Rel { cmd } => {
            let r = ctx.relation()?;
            match cmd {
                RelCmd::Difunctional => {
                    let d = r.is_difunctional();
                    Ok(Outcome { value: json!({ "difunctional": d }), holds: d })
                }
                RelCmd::Mp => Ok(Outcome::ok(Rel.mp_inverse(r)?.encode())),
                RelCmd::Oracle => {
                    let found = brute_force_mp(r)?;
                    let value = json!({
                        "mp": found.as_ref().map_or(Value::Null, Encode::encode),
                        "matches_converse": found.as_ref().is_some_and(|g| *g == r.converse()),
                    });
                    Ok(Outcome { value, holds: found.is_some() })
                }
                RelCmd::SplitPer => Ok(Outcome::ok(split_per(r)?.encode())),
                RelCmd::Gcsvd => {
                    let t = gcsvd_rel(r)?;
                    Ok(Outcome::ok(gcsvd_value(&Rel, r, &r.converse(), &t)?))
                }
            }
        }
        Cmd::Pinj { cmd: PinjCmd::Verify } => {
            ctx.arity(1, 2)?;
            let f = ctx.pinj(0)?;
            let dagger = f.dagger();
            let report = Pinj.verify_mp(f, &dagger)?;
            let mut holds = report.all_hold();
            let mut value = Map::new();
            value.insert("mp_inverse".into(), dagger.encode());
            value.insert("mp".into(), to_value(&report));
            if ctx.inputs.len() == 2 {
                let laws = verify_inverse_category_laws(f, ctx.pinj(1)?)?;
                holds &= laws.regular && laws.commuting;
                value.insert("laws".into(), to_value(&laws));
            }
            value.insert("all_hold".into(), json!(holds));
            Ok(Outcome { value: Value::Object(value), holds })
        }
        Cmd::Karoubi { cmd: KaroubiCmd::Check } => {
            ctx.arity(1, 2)?;
            match ctx.inputs.as_slice() {
                [f] => with_instance!(f, mat, |cat, f| karoubi_check(cat, f, None)),
                [f, g] => with_pair!(f, g, mat, |cat, f, g| karoubi_check(cat, f, Some(g))),
                _ => unreachable!("arity checked"),
            }
        }
    }
}

fn emit(cli: &Cli, value: &Value) -> std::io::Result<()> {
    let mut text = if cli.pretty { serde_json::to_string_pretty(value) } else { serde_json::to_string(value) }
        .expect("JSON value serializes");
    text.push('\n');
    match &cli.out {
        Some(path) => fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli, &outcome.value) {
                eprintln!("mpdagger: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if !outcome.holds {
                eprintln!("mpdagger: property does not hold");
            }
            ExitCode::from(if outcome.holds { 0 } else { 1 })
        }
        Err(failure) => {
            eprintln!("mpdagger: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
