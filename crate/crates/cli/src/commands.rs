//! Command-line definition and dispatch.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use gradjet::brst::{
    brst_generator, nilpotency_check, relative_cohomology, s_operator, BrstError, ChargeGrading, CochainTruncation,
    Criterion,
};
use gradjet::calculus::{
    contract, d, d_h, d_v, is_contact_preserving, lie, lie_cartan, variational, ComponentFamily, Derivation,
};
use gradjet::jetalg::{GradedForm, ModelContext, ScalarPoly};
use gradjet::variational::{
    divergence_symmetry, euler_lagrange, fvf_residual, lepagean, trivialize, DivergenceSymmetry, Lagrangian,
    VariationalError,
};

use crate::model::{parse_model, ModelFile};
use crate::render::jet_var_text;
use crate::report::{Check, Format, Report, Status, Value};
use crate::syntax::parse_form;

#[derive(Parser, Debug)]
#[command(name = "gradjet", version, about = "Exact variational calculus on jet spaces with even and odd fields")]
pub struct Cli {
    /// Model file declaring the base, fields, Lagrangians, symmetries and algebras.
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    #[arg(long, global = true, value_enum, env = "GRADJET_FORMAT", default_value = "text")]
    pub format: Format,
    /// Re-assert the identities behind the result and report their residuals.
    #[arg(long, global = true)]
    pub verify: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Euler–Lagrange expressions and the form δL.
    El { lagrangian: String },
    /// Lepagean equivalent Ξ_L = Ξ + L.
    Lepagean { lagrangian: String },
    /// Residual of the first variational formula.
    Fvf { lagrangian: String, symmetry: String },
    /// Noether current of a divergence symmetry.
    Noether { lagrangian: String, symmetry: String },
    /// Potential ξ with d_H ξ = L, if L is variationally trivial.
    Trivialize { lagrangian: String },
    /// Lie derivative of a form along a symmetry.
    Lie { symmetry: String, form: String },
    /// Prolonged components up to a jet order.
    Prolong {
        symmetry: String,
        #[arg(long)]
        order: usize,
    },
    /// BRST generator of a declared Lie algebra.
    Brst {
        #[arg(long)]
        algebra: String,
    },
    /// Nilpotency test for a symmetry or the BRST generator of an algebra.
    Nilpotent { generator: String },
    /// Truncated relative (s, d_H) cohomology.
    #[command(allow_negative_numbers = true)]
    Cohomology {
        generator: String,
        #[arg(long)]
        charge: i64,
        #[arg(long)]
        formdeg: usize,
        #[arg(long)]
        max_jet: i64,
        #[arg(long)]
        max_deg: usize,
        #[arg(long)]
        max_base: usize,
    },
}

impl Command {
    fn echo(&self) -> String {
        match self {
            Command::El { lagrangian } => format!("el {lagrangian}"),
            Command::Lepagean { lagrangian } => format!("lepagean {lagrangian}"),
            Command::Fvf { lagrangian, symmetry } => format!("fvf {lagrangian} {symmetry}"),
            Command::Noether { lagrangian, symmetry } => format!("noether {lagrangian} {symmetry}"),
            Command::Trivialize { lagrangian } => format!("trivialize {lagrangian}"),
            Command::Lie { symmetry, form } => format!("lie {symmetry} {form}"),
            Command::Prolong { symmetry, order } => format!("prolong {symmetry} --order {order}"),
            Command::Brst { algebra } => format!("brst --algebra {algebra}"),
            Command::Nilpotent { generator } => format!("nilpotent {generator}"),
            Command::Cohomology {
                generator,
                charge,
                formdeg,
                max_jet,
                max_deg,
                max_base,
            } => format!(
                "cohomology {generator} --charge {charge} --formdeg {formdeg} --max-jet {max_jet} --max-deg {max_deg} --max-base {max_base}"
            ),
        }
    }
}

/// Failures that are not mathematical refusals (exit code 1).
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}:{error}")]
    Parse {
        path: String,
        error: crate::syntax::ParseError,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Reads and parses the model file named on the command line.
pub fn load_model(cli: &Cli) -> Result<ModelFile, CliError> {
    let path = cli.model.as_ref().ok_or_else(|| usage("--model <FILE> is required"))?;
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_model(&text).map_err(|error| CliError::Parse {
        path: path.display().to_string(),
        error,
    })
}

/// Partial result of a command before timing is attached.
struct Outcome {
    status: Status,
    result: Value,
    checks: Vec<Check>,
    ctx: ModelContext,
}

impl Outcome {
    fn ok(ctx: &ModelContext, result: Value, checks: Vec<Check>) -> Self {
        Outcome {
            status: Status::Ok,
            result,
            checks,
            ctx: ctx.clone(),
        }
    }

    fn refused(ctx: &ModelContext, reason: impl Into<String>, witness: Option<GradedForm>) -> Self {
        let mut entries = vec![("reason".to_string(), Value::text(reason))];
        if let Some(w) = witness {
            entries.push(("witness".to_string(), Value::Form(w)));
        }
        Outcome {
            status: Status::Refused,
            result: Value::Map(entries),
            checks: Vec::new(),
            ctx: ctx.clone(),
        }
    }
}

/// Runs a parsed command against a model.
pub fn run(cli: &Cli, model: &ModelFile) -> Result<Report, CliError> {
    let start = Instant::now();
    let out = dispatch(&cli.command, model)?;
    Ok(Report {
        command: cli.command.echo(),
        status: out.status,
        result: out.result,
        verification: cli.verify.then_some(out.checks),
        elapsed: start.elapsed(),
        ctx: out.ctx,
    })
}

fn lagrangian<'a>(model: &'a ModelFile, name: &str) -> Result<&'a Lagrangian, CliError> {
    model.lagrangian(name).ok_or_else(|| usage(format!("unknown Lagrangian `{name}`")))
}

fn symmetry<'a>(model: &'a ModelFile, name: &str) -> Result<&'a Derivation, CliError> {
    model.symmetry(name).ok_or_else(|| usage(format!("unknown symmetry `{name}`")))
}

/// A symmetry of the model, or the BRST generator of a declared algebra
/// over the model's base coordinates.
fn generator(model: &ModelFile, name: &str) -> Result<(ModelContext, Derivation), CliError> {
    if let Some(v) = model.symmetry(name) {
        return Ok((model.ctx.clone(), v.clone()));
    }
    if let Some(g) = model.algebra(name) {
        let b = brst_generator(g, model.ctx.coords()).map_err(|e| usage(e.to_string()))?;
        return Ok((b.ctx, b.generator));
    }
    Err(usage(format!("`{name}` is neither a symmetry nor an algebra")))
}

fn field_map(ctx: &ModelContext, values: &[ScalarPoly]) -> Value {
    Value::map(
        ctx.fields()
            .iter()
            .zip(values)
            .map(|(f, p)| (f.name.clone(), Value::Form(p.to_form()))),
    )
}

fn dispatch(command: &Command, model: &ModelFile) -> Result<Outcome, CliError> {
    let ctx = &model.ctx;
    match command {
        Command::El { lagrangian: name } => {
            let l = lagrangian(model, name)?;
            let el = euler_lagrange(ctx, l);
            let checks = vec![Check::new("δL − ρ(dL) = 0", &el.form - &variational(ctx, &l.form(ctx)))];
            let result = Value::map([("components", field_map(ctx, &el.components)), ("form", Value::Form(el.form))]);
            Ok(Outcome::ok(ctx, result, checks))
        }
        Command::Lepagean { lagrangian: name } => {
            let l = lagrangian(model, name)?;
            let lep = lepagean(ctx, l);
            let el = euler_lagrange(ctx, l);
            let checks = vec![Check::new(
                "d_V L − δL + d_H Ξ = 0",
                &(&d_v(&l.form(ctx)) - &el.form) + &d_h(&lep.xi),
            )];
            let coefficients = Value::map(
                lep.coefficients
                    .iter()
                    .map(|(var, c)| (jet_var_text(ctx, var), Value::Form(c.to_form()))),
            );
            let result = Value::map([
                ("coefficients", coefficients),
                ("xi", Value::Form(lep.xi)),
                ("xi_l", Value::Form(lep.xi_l)),
            ]);
            Ok(Outcome::ok(ctx, result, checks))
        }
        Command::Fvf {
            lagrangian: name,
            symmetry: sym,
        } => {
            let l = lagrangian(model, name)?;
            let v = symmetry(model, sym)?;
            let residual = fvf_residual(ctx, l, v);
            let checks = vec![
                Check::new("first variational formula", residual.clone()),
                Check::new("L_v L − (v⌋dL + d(v⌋L)) = 0", &lie(v, &l.form(ctx)) - &lie_cartan(v, &l.form(ctx))),
            ];
            let result = Value::map([("holds", Value::Bool(residual.is_zero())), ("residual", Value::Form(residual))]);
            Ok(Outcome::ok(ctx, result, checks))
        }
        Command::Noether {
            lagrangian: name,
            symmetry: sym,
        } => {
            let l = lagrangian(model, name)?;
            let v = symmetry(model, sym)?;
            match divergence_symmetry(ctx, l, v) {
                Ok(DivergenceSymmetry::Yes(n)) => {
                    let change = lie(v, &l.form(ctx));
                    let checks = vec![
                        Check::new("d_H J + v_V⌋δL = 0", &d_h(&n.current) + &n.defect),
                        Check::new("L_v L − d_H σ = 0", &change - &d_h(&n.boundary)),
                    ];
                    let result = Value::map([
                        ("current", Value::Form(n.current)),
                        ("boundary", Value::Form(n.boundary)),
                        ("source", Value::Form(n.defect)),
                    ]);
                    Ok(Outcome::ok(ctx, result, checks))
                }
                Ok(DivergenceSymmetry::No { witness }) => Ok(Outcome::refused(
                    ctx,
                    "not a divergence symmetry: δ(L_v L) ≠ 0",
                    Some(witness),
                )),
                Err(e) => variational_refusal(ctx, e),
            }
        }
        Command::Trivialize { lagrangian: name } => {
            let l = lagrangian(model, name)?;
            match trivialize(ctx, l) {
                Ok(xi) => {
                    let checks = vec![Check::new("d_H ξ − L = 0", &d_h(&xi) - &l.form(ctx))];
                    Ok(Outcome::ok(ctx, Value::map([("potential", Value::Form(xi))]), checks))
                }
                Err(e) => variational_refusal(ctx, e),
            }
        }
        Command::Lie { symmetry: sym, form } => {
            let v = symmetry(model, sym)?;
            let phi = parse_form(model, form).map_err(|e| usage(format!("form argument: {e}")))?;
            let value = lie(v, &phi);
            let checks = vec![Check::new("L_v φ − (v⌋dφ + d(v⌋φ)) = 0", &value - &lie_cartan(v, &phi))];
            Ok(Outcome::ok(ctx, Value::map([("lie", Value::Form(value))]), checks))
        }
        Command::Prolong { symmetry: sym, order } => {
            let v = symmetry(model, sym)?;
            let components = v.prolongation(ctx, *order);
            let mut checks = Vec::new();
            for (var, c) in &components {
                let cartan = contract(v, &d(&ScalarPoly::jet(var.clone()).into_form()));
                checks.push(Check::new(
                    format!("v⌋d{} − υ = 0", jet_var_text(ctx, var)),
                    &cartan - &c.to_form(),
                ));
            }
            let family = ComponentFamily::from_derivation(ctx, v, *order);
            let defect = match is_contact_preserving(ctx, &family) {
                Ok(()) => GradedForm::zero(),
                Err(e) => e.defect,
            };
            checks.push(Check::new("h_0(L_v θ) = 0", defect));
            let result = Value::map([(
                "components",
                Value::map(
                    components
                        .iter()
                        .map(|(var, c)| (jet_var_text(ctx, var), Value::Form(c.to_form()))),
                ),
            )]);
            Ok(Outcome::ok(ctx, result, checks))
        }
        Command::Brst { algebra } => {
            let g = model
                .algebra(algebra)
                .ok_or_else(|| usage(format!("unknown algebra `{algebra}`")))?;
            let b = match brst_generator(g, ctx.coords()) {
                Ok(b) => b,
                Err(e) => return brst_refusal(ctx, e),
            };
            let v = &b.generator;
            let order = v.jet_order() + 1;
            let defect = match is_contact_preserving(&b.ctx, &ComponentFamily::from_derivation(&b.ctx, v, order)) {
                Ok(()) => GradedForm::zero(),
                Err(e) => e.defect,
            };
            let mut checks = vec![Check::new("h_0(L_υ θ) = 0", defect)];
            if g.jacobi_verified() {
                for (a, f) in b.ctx.fields().iter().enumerate() {
                    let field = ScalarPoly::jet(b.ctx.field_var(a)).into_form();
                    let twice = s_operator(v, &s_operator(v, &field).map_err(internal)?).map_err(internal)?;
                    checks.push(Check::new(format!("s s {} = 0", f.name), twice));
                }
            }
            let result = Value::map([
                ("dimension", Value::Int(g.dim() as i64)),
                ("jacobi", Value::Bool(g.jacobi_verified())),
                ("generator", field_map(&b.ctx, v.characteristics())),
            ]);
            Ok(Outcome::ok(&b.ctx, result, checks))
        }
        Command::Nilpotent { generator: name } => {
            let (gctx, v) = generator(model, name)?;
            let report = match nilpotency_check(&gctx, &v) {
                Ok(r) => r,
                Err(e) => return brst_refusal(&gctx, e),
            };
            let verdict = match (report.nilpotent, report.criterion) {
                (true, Criterion::Zero) => "nilpotent (zero derivation)",
                (true, _) => "nilpotent (sufficient condition)",
                (false, Criterion::Parity) => "not nilpotent (even derivation)",
                (false, Criterion::Probe) => "not nilpotent (probe counterexample)",
                (false, _) => "not nilpotent",
            };
            let criterion = match report.criterion {
                Criterion::Zero => "zero",
                Criterion::Parity => "parity",
                Criterion::Characteristics => "characteristics",
                Criterion::Probe => "probe",
            };
            let mut entries = vec![
                ("verdict".to_string(), Value::text(verdict)),
                ("nilpotent".to_string(), Value::Bool(report.nilpotent)),
                ("criterion".to_string(), Value::text(criterion)),
            ];
            if let Some((a, w)) = &report.witness {
                entries.push((
                    "witness".to_string(),
                    Value::map([
                        ("field", Value::text(gctx.field(*a).name.clone())),
                        ("value", Value::Form(w.clone())),
                    ]),
                ));
            }
            if let Some(p) = &report.probe {
                let mut probe = vec![
                    ("seed".to_string(), Value::text(format!("{:#018x}", p.seed))),
                    ("samples".to_string(), Value::Int(p.samples as i64)),
                ];
                if let Some((phi, twice)) = &p.counterexample {
                    probe.push(("form".to_string(), Value::Form(phi.clone())));
                    probe.push(("image".to_string(), Value::Form(twice.clone())));
                }
                entries.push(("probe".to_string(), Value::Map(probe)));
            }
            let mut checks = Vec::new();
            if report.nilpotent {
                for (a, f) in gctx.fields().iter().enumerate() {
                    checks.push(Check::new(
                        format!("L_v υ^{} = 0", f.name),
                        lie(&v, &v.characteristic(a).to_form()),
                    ));
                }
            }
            Ok(Outcome::ok(&gctx, Value::Map(entries), checks))
        }
        Command::Cohomology {
            generator: name,
            charge,
            formdeg,
            max_jet,
            max_deg,
            max_base,
        } => {
            let (gctx, v) = generator(model, name)?;
            if *formdeg > gctx.base_dim() {
                return Err(usage(format!("--formdeg exceeds the base dimension {}", gctx.base_dim())));
            }
            let grading = ChargeGrading::from_context(&gctx);
            let t = CochainTruncation {
                max_jet: *max_jet,
                max_degree: *max_deg,
                max_base: *max_base,
                charge: *charge,
                form_degree: *formdeg,
            };
            let h = match relative_cohomology(&gctx, &v, &grading, &t) {
                Ok(h) => h,
                Err(e) => return brst_refusal(&gctx, e),
            };
            let mut checks = Vec::new();
            let mut s2 = GradedForm::zero();
            let mut anti = GradedForm::zero();
            for b in h.basis() {
                let sb = s_operator(&v, b).map_err(internal)?;
                s2 += s_operator(&v, &sb).map_err(internal)?;
                anti += &d_h(&sb) + &s_operator(&v, &d_h(b)).map_err(internal)?;
            }
            checks.push(Check::new("s s = 0 on the truncation", s2));
            checks.push(Check::new("d_H s + s d_H = 0 on the truncation", anti));
            let result = Value::map([
                ("step", Value::Int(h.step)),
                ("domain_dim", Value::Int(h.domain_dim as i64)),
                ("cocycle_dim", Value::Int(h.cocycle_dim as i64)),
                ("exact_dim", Value::Int(h.exact_dim as i64)),
                ("dimension", Value::Int(h.dimension as i64)),
                ("iterated", Value::Bool(h.iterated)),
                ("representatives", Value::List(h.representatives.into_iter().map(Value::Form).collect())),
            ]);
            Ok(Outcome::ok(&gctx, result, checks))
        }
    }
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

fn variational_refusal(ctx: &ModelContext, e: VariationalError) -> Result<Outcome, CliError> {
    match e {
        VariationalError::NotTrivial { euler_lagrange } => {
            let mut out = Outcome::refused(ctx, "Lagrangian is not variationally trivial", Some(euler_lagrange.form));
            if let Value::Map(entries) = &mut out.result {
                entries.push(("components".to_string(), field_map(ctx, &euler_lagrange.components)));
            }
            Ok(out)
        }
        VariationalError::NotInKernel { ref rho } => Ok(Outcome::refused(ctx, e.to_string(), Some(rho.clone()))),
        VariationalError::IdentityFailed(_) => Err(internal(e)),
        other => Ok(Outcome::refused(ctx, other.to_string(), None)),
    }
}

fn brst_refusal(ctx: &ModelContext, e: BrstError) -> Result<Outcome, CliError> {
    match e {
        BrstError::NotClosed { ref form, .. } | BrstError::NotSubcomplex { ref form, .. } => {
            Ok(Outcome::refused(ctx, e.to_string(), Some(form.clone())))
        }
        BrstError::Calculus(_) | BrstError::Algebra(_) => Err(internal(e)),
        other => Ok(Outcome::refused(ctx, other.to_string(), None)),
    }
}

/// Full command-line entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = i32::from(!matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion));
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let report = load_model(&cli).and_then(|model| run(&cli, &model));
    match report {
        Ok(r) => {
            let _ = write!(out, "{}", r.render(cli.format));
            r.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
