//! The `hopfcross` command line.
//!
//! Every subcommand collects its checks into a [`VerificationReport`]; the
//! exit code is 0 when all of them pass, 1 when one fails and 2 for bad
//! input or usage.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hopfcross::cross::{
    assemble, check_extension, mbar_data, mirror_data, quasitriangular_coincidence, twisted_mirror_data, Bicrossproduct,
    Construction, CrossError,
};
use hopfcross::hopf::{check_morphism, validate_hopf_with_cap, HopfAlgebra, HopfValidation, DEFAULT_DIM_CAP};
use hopfcross::io::{
    emit_report, load_element, load_hopf, load_request, save_hopf, tensor_value, IoError, LoadOptions, VerificationReport,
};
use hopfcross::scalar::Field;
use hopfcross::sweedler::{check_identity, parse_identity_file, EvaluationContext};
use hopfcross::twist::{twist_hopf, verify_cocycle, verify_quasitriangular, Cocycle, TwistError};

/// Environment variable holding the modulus for `--field fp`.
pub const PRIME_VAR: &str = "HOPFCROSS_PRIME";

#[derive(Debug, Parser)]
#[command(name = "hopfcross", version, about = "Exact checks for finite-dimensional Hopf algebras, twists and cross products")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Write the verification report to this file
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Do not run the axiom suite on input algebras
    #[arg(long, global = true)]
    skip_verify: bool,
    /// Ground field: `q`, `fp:<prime>`, or `fp` with the prime taken from HOPFCROSS_PRIME
    #[arg(long, global = true, value_name = "FIELD")]
    field: Option<String>,
    /// Allow dimensions above the cap of 64
    #[arg(long, global = true)]
    force: bool,
    /// Record wall-clock time per check (reports are then not reproducible)
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the Hopf axiom suite
    Check { hopf: PathBuf },
    /// Twist by a cocycle
    Twist {
        hopf: PathBuf,
        cocycle: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build M(H)
    Mirror {
        hopf: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build M_χ(H)
    MirrorTwisted {
        hopf: PathBuf,
        cocycle: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build M̄(H)
    Mbar {
        hopf: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a construction request file
    Build {
        request: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check every identity of an identity file
    Prove {
        hopf: PathBuf,
        identities: PathBuf,
        /// Bind a cocycle name to an element file, as `NAME=PATH` or `PATH` for `X`
        #[arg(long, value_name = "[NAME=]PATH")]
        cocycle: Vec<String>,
    },
    /// Compare M_R(H) with M̄(H^cop) for an R-matrix
    Coincide { hopf: PathBuf, rmatrix: PathBuf },
}

/// Bad input or usage; exit code 2.
#[derive(Debug)]
struct InputError(String);

impl From<IoError> for InputError {
    fn from(e: IoError) -> Self {
        InputError(e.to_string())
    }
}

type Outcome<T> = Result<T, InputError>;

struct Session {
    opts: LoadOptions,
    cap: usize,
    timings: bool,
    report: VerificationReport,
}

impl Session {
    /// Runs `f` as check `id`; `Some(witness)` is a failure.
    fn check(&mut self, id: &str, f: impl FnOnce() -> Option<Value>) -> bool {
        let start = Instant::now();
        let witness = f();
        let passed = witness.is_none();
        match &witness {
            None => println!("PASS {id}"),
            Some(w) => println!("FAIL {id}: {w}"),
        }
        self.report.push(id, witness);
        if self.timings {
            self.report.checks.last_mut().expect("just pushed").millis = Some(start.elapsed().as_millis());
        }
        passed
    }

    fn load_hopf(&mut self, path: &Path) -> Outcome<HopfAlgebra> {
        self.report.add_input(path)?;
        let opts = LoadOptions { skip_verify: true, ..self.opts };
        Ok(load_hopf(path, &opts)?)
    }

    /// Checks the axioms of an input algebra unless `--skip-verify`.
    fn verify_input(&mut self, prefix: &str, h: &HopfAlgebra) -> Outcome<bool> {
        if self.opts.skip_verify {
            return Ok(true);
        }
        self.axioms(prefix, h)
    }

    fn axioms(&mut self, prefix: &str, h: &HopfAlgebra) -> Outcome<bool> {
        let validation = self.validate(h)?;
        let mut ok = true;
        for c in validation.checks {
            let id = format!("{prefix}.{}", c.axiom.name());
            ok &= self.check(&id, || {
                c.witness.map(|w| json!({ "basis": w.basis, "lhs": tensor_value(&w.lhs), "rhs": tensor_value(&w.rhs) }))
            });
        }
        Ok(ok)
    }

    fn validate(&self, h: &HopfAlgebra) -> Outcome<HopfValidation> {
        validate_hopf_with_cap(h, self.cap).map_err(|e| InputError(format!("{e}; pass --force to lift the cap")))
    }

    fn guard(&self, dim: usize) -> Outcome<()> {
        if dim > self.cap {
            return Err(InputError(format!("dimension {dim} exceeds the cap {}; pass --force to proceed", self.cap)));
        }
        Ok(())
    }

    /// Loads an element file whose host must agree with `h`.
    fn load_element(&mut self, path: &Path, h: &HopfAlgebra) -> Outcome<hopfcross::tensor::SparseTensor> {
        self.report.add_input(path)?;
        let opts = LoadOptions { skip_verify: true, ..self.opts };
        let e = load_element(path, &opts)?;
        if let Some(p) = &e.host_path {
            self.report.add_input(p)?;
        }
        if !e.host.same_structure(h) {
            return Err(InputError(format!("{}: host differs from the given Hopf algebra", path.display())));
        }
        Ok(e.element)
    }

    fn cocycle(&mut self, h: &HopfAlgebra, element: &hopfcross::tensor::SparseTensor) -> Option<Cocycle> {
        let mut out = None;
        self.check("cocycle", || match verify_cocycle(h, element) {
            Ok(c) => {
                out = Some(c);
                None
            }
            Err(e) => Some(twist_witness(&e)),
        });
        out
    }
}

fn twist_witness(e: &TwistError) -> Value {
    match e {
        TwistError::Condition(f) => json!({
            "condition": f.condition,
            "basis": f.basis,
            "lhs": tensor_value(&f.lhs),
            "rhs": tensor_value(&f.rhs),
        }),
        other => json!({ "error": other.to_string() }),
    }
}

fn cross_witness(e: &CrossError) -> Value {
    match e {
        CrossError::Mismatch(m) | CrossError::Theta(m) => json!({
            "route": m.route,
            "map": m.map,
            "basis": m.basis,
            "expected": tensor_value(&m.expected),
            "found": tensor_value(&m.found),
        }),
        CrossError::Twist(t) => twist_witness(t),
        other => json!({ "error": other.to_string() }),
    }
}

fn parse_field(text: &str) -> Outcome<Field> {
    let text = if text.trim() == "fp" {
        let p = std::env::var(PRIME_VAR).map_err(|_| InputError(format!("--field fp needs {PRIME_VAR} to be set")))?;
        format!("fp:{}", p.trim())
    } else {
        text.to_string()
    };
    text.parse().map_err(|e| InputError(format!("--field: {e}")))
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            2
        }
    }
}

fn run(cli: Cli) -> Outcome<i32> {
    let g = cli.global;
    let field = g.field.as_deref().map(parse_field).transpose()?;
    let mut s = Session {
        opts: LoadOptions { field, skip_verify: g.skip_verify },
        cap: if g.force { usize::MAX } else { DEFAULT_DIM_CAP },
        timings: g.timings,
        report: VerificationReport::new(""),
    };
    let (name, output) = match cli.command {
        Command::Check { hopf } => {
            let h = s.load_hopf(&hopf)?;
            s.guard(h.dim())?;
            s.axioms("axiom", &h)?;
            ("check", None)
        }
        Command::Twist { hopf, cocycle, output } => ("twist", twist(&mut s, &hopf, &cocycle)?.zip(output)),
        Command::Mirror { hopf, output } => ("mirror", cross(&mut s, Construction::Mirror, &hopf, None)?.zip(output)),
        Command::MirrorTwisted { hopf, cocycle, output } => (
            "twisted_mirror",
            cross(&mut s, Construction::TwistedMirror, &hopf, Some(&cocycle))?.zip(output),
        ),
        Command::Mbar { hopf, output } => ("mbar", cross(&mut s, Construction::Mbar, &hopf, None)?.zip(output)),
        Command::Build { request, output } => {
            s.report.add_input(&request)?;
            let r = load_request(&request)?;
            let total = cross(&mut s, r.construction, &r.hopf, r.cocycle.as_deref())?;
            (r.construction.name(), total.zip(output))
        }
        Command::Prove { hopf, identities, cocycle } => {
            prove(&mut s, &hopf, &identities, &cocycle)?;
            ("prove", None)
        }
        Command::Coincide { hopf, rmatrix } => {
            coincide(&mut s, &hopf, &rmatrix)?;
            ("coincide", None)
        }
    };
    s.report.construction = name.to_string();
    if let Some((h, path)) = output {
        save_hopf(&h, &path)?;
    }
    if let Some(path) = &g.report {
        emit_report(&s.report, path)?;
    }
    Ok(if s.report.passed() { 0 } else { 1 })
}

/// Returns the twisted algebra when every check passed.
fn twist(s: &mut Session, hopf: &Path, cocycle: &Path) -> Outcome<Option<HopfAlgebra>> {
    let h = s.load_hopf(hopf)?;
    s.guard(h.dim())?;
    if !s.verify_input("input", &h)? {
        return Ok(None);
    }
    let element = s.load_element(cocycle, &h)?;
    let Some(c) = s.cocycle(&h, &element) else { return Ok(None) };
    let twisted = match twist_hopf(&c) {
        Ok(t) => t,
        Err(e) => {
            s.check("twist", || Some(twist_witness(&e)));
            return Ok(None);
        }
    };
    let ok = s.axioms("twisted", &twisted)?;
    let untwisted = c.untwisting().and_then(|u| twist_hopf(&u));
    let ok = s.check("untwist", || match &untwisted {
        Ok(back) => back.structure_difference(&h).map(|m| json!({ "differs_in": m })),
        Err(e) => Some(twist_witness(e)),
    }) && ok;
    Ok(ok.then_some(twisted))
}

/// Returns the total algebra when every check passed.
fn cross(s: &mut Session, construction: Construction, hopf: &Path, cocycle: Option<&Path>) -> Outcome<Option<HopfAlgebra>> {
    let h = s.load_hopf(hopf)?;
    s.guard(h.dim() * h.dim())?;
    if !s.verify_input("input", &h)? {
        return Ok(None);
    }
    let data = match (construction, cocycle) {
        (Construction::TwistedMirror, Some(path)) => {
            let element = s.load_element(path, &h)?;
            let Some(c) = s.cocycle(&h, &element) else { return Ok(None) };
            twisted_mirror_data(&h, &c)
        }
        (Construction::TwistedMirror, None) => return Err(InputError("twisted_mirror needs a cocycle".into())),
        (Construction::Mirror, _) => mirror_data(&h),
        (Construction::Mbar, _) => mbar_data(&h),
    };
    let data = match data {
        Ok(d) => d,
        Err(e) => {
            s.check("data", || Some(cross_witness(&e)));
            return Ok(None);
        }
    };
    let invariants = data.check_invariants();
    let mut ok = s.check("data.invariants", || (!invariants.is_empty()).then(|| json!(invariants)));
    let mut built: Option<Bicrossproduct> = None;
    ok &= s.check("assembly.routes_agree", || match assemble(&data) {
        Ok(b) => {
            built = Some(b);
            None
        }
        Err(e) => Some(cross_witness(&e)),
    });
    let Some(b) = built else { return Ok(None) };
    ok &= s.axioms("total", b.total())?;
    let theta = check_morphism(b.theta(), b.tensor_product(), b.explicit());
    ok &= s.check("theta.isomorphism", || match &theta {
        Ok(r) if r.is_isomorphism() => None,
        Ok(r) => Some(json!(r)),
        Err(e) => Some(json!({ "error": e.to_string() })),
    });
    let bracket = b.check_theta_coproduct();
    ok &= s.check("theta.coproduct", || match &bracket {
        Ok(c) => c.witness.as_ref().map(|w| {
            json!({ "basis": w.assignment, "lhs": tensor_value(&w.lhs), "rhs": tensor_value(&w.rhs) })
        }),
        Err(e) => Some(cross_witness(e)),
    });
    let extension = check_extension(&b);
    ok &= s.check("extension", || match &extension {
        Ok(r) if r.passed() => None,
        Ok(r) => Some(json!(r)),
        Err(e) => Some(cross_witness(e)),
    });
    s.report.outcome = Some(json!({ "dim": b.total().dim() }));
    Ok(ok.then(|| b.total().clone()))
}

fn prove(s: &mut Session, hopf: &Path, identities: &Path, bindings: &[String]) -> Outcome<()> {
    let h = s.load_hopf(hopf)?;
    s.guard(h.dim())?;
    if !s.verify_input("input", &h)? {
        return Ok(());
    }
    s.report.add_input(identities)?;
    let text = std::fs::read_to_string(identities).map_err(|e| InputError(format!("{}: {e}", identities.display())))?;
    let lines = parse_identity_file(&text)
        .map_err(|e| InputError(format!("{}:{}:{}: {}", identities.display(), e.line, e.column, e.message)))?;
    let mut ctx = EvaluationContext::new(&h);
    let mut bound = serde_json::Map::new();
    for b in bindings {
        let (name, path) = match b.split_once('=') {
            Some((n, p)) => (n.to_string(), PathBuf::from(p)),
            None => ("X".to_string(), PathBuf::from(b)),
        };
        let element = s.load_element(&path, &h)?;
        if let Err(e) = ctx.bind(&name, &element) {
            s.check(&format!("cocycle.{name}"), || Some(json!({ "error": e.to_string() })));
            return Ok(());
        }
        bound.insert(name, json!(path.display().to_string()));
    }
    // names left unbound stand for the trivial cocycle 1⊗1
    let one = h.tensor_unit(2);
    for l in &lines {
        for name in &l.declarations.cocycles {
            if !ctx.is_bound(name) {
                ctx.bind(name, &one).map_err(|e| InputError(e.to_string()))?;
                bound.insert(name.clone(), json!("trivial"));
            }
        }
    }
    for l in &lines {
        let id = format!("{} (line {})", l.name, l.line);
        let result = check_identity(&l.lhs, &l.rhs, &ctx);
        let passed = s.check(&id, || match &result {
            Ok(c) => c.witness.as_ref().map(|w| {
                json!({ "line": l.line, "assignment": w.assignment, "lhs": tensor_value(&w.lhs), "rhs": tensor_value(&w.rhs) })
            }),
            Err(e) => Some(json!({ "line": l.line, "error": e.to_string() })),
        });
        if !passed {
            eprintln!("{}:{}: identity `{}` does not hold", identities.display(), l.line, l.name);
        }
    }
    s.report.outcome = Some(json!({ "bindings": bound }));
    Ok(())
}

fn coincide(s: &mut Session, hopf: &Path, rmatrix: &Path) -> Outcome<()> {
    let h = s.load_hopf(hopf)?;
    s.guard(h.dim() * h.dim())?;
    if !s.verify_input("input", &h)? {
        return Ok(());
    }
    let r = s.load_element(rmatrix, &h)?;
    let mut q = None;
    s.check("quasitriangular", || match verify_quasitriangular(&h, &r) {
        Ok(x) => {
            q = Some(x);
            None
        }
        Err(e) => Some(twist_witness(&e)),
    });
    let Some(q) = q else { return Ok(()) };
    let mut report = None;
    s.check("comparison_computed", || match quasitriangular_coincidence(&h, &q) {
        Ok(r) => {
            report = Some(r);
            None
        }
        Err(e) => Some(cross_witness(&e)),
    });
    // whether the totals coincide is an outcome to record, not a check
    if let Some(r) = report {
        println!("antipode map S⊗id is a Hopf isomorphism: {}", r.antipode_map.is_isomorphism());
        println!("θ_R∘(S⊗id)∘θ̄⁻¹ is a Hopf isomorphism: {}", r.through_theta.is_isomorphism());
        s.report.outcome = Some(json!({
            "coincides_via_antipode_map": r.antipode_map.is_isomorphism(),
            "coincides_via_theta": r.through_theta.is_isomorphism(),
            "details": r,
        }));
    }
    Ok(())
}
