use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use padic_hilbert::hsiso::{self, AntiLinearOp};
use padic_hilbert::operators::{hs_ip, MatrixOperator};
use padic_hilbert::padic::sqrt_ext;
use padic_hilbert::spaces::{self, ip, sup_norm};
use padic_hilbert::subspaces;
use padic_hilbert::tensor::{self, proj_norm, tensor_ip};
use padic_hilbert::wire::{self, norm_json, scalar_json, vector_json};
use padic_hilbert::{selftest, Error, FieldConfig, MuKind};

#[derive(Parser)]
#[command(name = "padic-hilbert", version, about = "Exact computations in p-adic Hilbert spaces")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// odd prime
    #[arg(long, global = true, env = "PADIC_P", default_value_t = 5)]
    p: u32,
    #[arg(long, global = true, env = "PADIC_MU", default_value = "nonresidue")]
    mu: MuKind,
    /// relative precision in p-adic digits
    #[arg(long, global = true, env = "PADIC_PRECISION", default_value_t = 32)]
    precision: u32,
    #[arg(long, global = true, env = "PADIC_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, env = "PADIC_FORMAT", value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Args)]
struct Input {
    /// JSON given inline, as a file path, or `-` for stdin (the default)
    input: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Scalars of Q_p(√μ): evaluation, absolute value, square root
    Scalar {
        #[arg(value_enum)]
        op: ScalarOp,
        #[command(flatten)]
        input: Input,
    },
    /// Vectors: sup norm, inner product, orthogonality
    Vec {
        #[arg(value_enum)]
        op: VecOp,
        #[command(flatten)]
        input: Input,
    },
    /// Matrix operators: classification, adjoint, trace, trace pairing
    Op {
        #[arg(value_enum)]
        op: OpOp,
        #[command(flatten)]
        input: Input,
    },
    /// Tensors: projective norm, inner product, rank, zero test
    Tensor {
        #[arg(value_enum)]
        op: TensorOp,
        #[command(flatten)]
        input: Input,
    },
    /// Trace-class operators as tensors and back
    Iso {
        #[arg(value_enum)]
        op: IsoOp,
        #[command(flatten)]
        input: Input,
    },
    /// Conjugations and anti-unitary operators
    Conj {
        #[arg(value_enum)]
        op: ConjOp,
        /// witness z₁ for the dichotomy, e.g. `sqrt(1/2)`
        #[arg(long, default_value = "sqrt(1/2)")]
        z1: String,
        #[arg(long, default_value = "sqrt(-1)")]
        z2: String,
        #[arg(long, default_value_t = 1)]
        base_dim: usize,
        /// random probes for the sampled predicates
        #[arg(long, default_value_t = 16)]
        probes: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Subspaces: orthogonal complement, regularity, tensor subspaces
    Sub {
        #[arg(value_enum)]
        op: SubOp,
        #[arg(long, default_value_t = 16)]
        probes: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Seeded property suites with a JSON summary
    Selftest {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScalarOp {
    Eval,
    Abs,
    Sqrt,
}

#[derive(Clone, Copy, ValueEnum)]
enum VecOp {
    Norm,
    Ip,
    Orth,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpOp {
    Classify,
    Adjoint,
    Trace,
    Hsip,
}

#[derive(Clone, Copy, ValueEnum)]
enum TensorOp {
    Norm,
    Ip,
    Rank,
    Zero,
}

#[derive(Clone, Copy, ValueEnum)]
enum IsoOp {
    Forward,
    Backward,
    Roundtrip,
    Rankone,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConjOp {
    Build,
    Zcheck,
    Dichotomy,
    Decompose,
}

#[derive(Clone, Copy, ValueEnum)]
enum SubOp {
    Perp,
    Regular,
    C0iso,
    Tensor,
}

enum Failure {
    Domain(Error),
    Selftest(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Out = std::result::Result<Value, Failure>;

fn read_input(input: &Input) -> Result<Value, Error> {
    let raw = match input.input.as_deref() {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Error::parse("", format!("reading stdin: {e}")))?;
            s
        }
        Some(s) if s.trim_start().starts_with(['{', '[', '"']) => s.to_string(),
        Some(path) if std::path::Path::new(path).is_file() => {
            std::fs::read_to_string(path).map_err(|e| Error::parse("", format!("reading {path}: {e}")))?
        }
        Some(s) => s.to_string(),
    };
    serde_json::from_str(&raw).map_err(|e| Error::parse("", format!("invalid JSON: {e}")))
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value, Error> {
    v.get(key).ok_or_else(|| Error::parse(format!("/{key}"), "missing field"))
}

fn ptr(key: &str) -> String {
    format!("/{key}")
}

fn linear_part(cfg: FieldConfig, v: &Value) -> Result<MatrixOperator, Error> {
    match v.get("linear") {
        Some(l) => wire::parse_operator(cfg, l, "/linear"),
        None => wire::parse_operator(cfg, v, ""),
    }
}

fn run(g: &Global, cmd: &Cmd) -> Out {
    let cfg = FieldConfig::new(g.p, g.mu, g.precision)?;
    match cmd {
        Cmd::Scalar { op, input } => {
            let v = read_input(input)?;
            let out = match op {
                ScalarOp::Eval => {
                    let z = wire::parse_scalar(cfg, &v, "")?;
                    json!({"value": scalar_json(&z), "norm": norm_json(z.abs()?), "norm_of_field": wire::qp_json(&z.norm())})
                }
                ScalarOp::Abs => json!({"norm": norm_json(wire::parse_scalar(cfg, &v, "")?.abs()?)}),
                ScalarOp::Sqrt => {
                    let z = wire::parse_scalar(cfg, &v, "")?;
                    if !z.in_qp() {
                        return Err(Error::parse("/b", "square roots are taken of elements of Q_p").into());
                    }
                    json!({"root": scalar_json(&sqrt_ext(cfg, z.a())?)})
                }
            };
            Ok(out)
        }
        Cmd::Vec { op, input } => {
            let v = read_input(input)?;
            Ok(match op {
                VecOp::Norm => json!({"norm": norm_json(sup_norm(&wire::parse_vector(cfg, &v, "")?)?)}),
                VecOp::Ip | VecOp::Orth => {
                    let x = wire::parse_vector(cfg, get(&v, "x")?, &ptr("x"))?;
                    let y = wire::parse_vector(cfg, get(&v, "y")?, &ptr("y"))?;
                    if let VecOp::Ip = op {
                        json!({"ip": scalar_json(&ip(&x, &y)?)})
                    } else {
                        let r = spaces::norm_orthogonal(&x, &y)?;
                        json!({
                            "norm_orthogonal": r.norm_orthogonal,
                            "ip_orthogonal": r.ip_orthogonal,
                            "t_coefficient": norm_json(r.t_coefficient),
                        })
                    }
                }
            })
        }
        Cmd::Op { op, input } => {
            let v = read_input(input)?;
            Ok(match op {
                OpOp::Classify => {
                    let r = wire::parse_operator(cfg, &v, "")?.classify()?;
                    json!({
                        "all_over": r.all_over,
                        "bounded": r.bounded,
                        "adjointable": r.adjointable,
                        "trace_class": r.trace_class,
                        "compact_and_adjointable": r.compact_and_adjointable,
                        "op_norm": r.op_norm.map(norm_json),
                    })
                }
                OpOp::Adjoint => wire::operator_json(&wire::parse_operator(cfg, &v, "")?.adjoint()?),
                OpOp::Trace => json!({"trace": scalar_json(&wire::parse_operator(cfg, &v, "")?.trace()?)}),
                OpOp::Hsip => {
                    let s = wire::parse_operator(cfg, get(&v, "s")?, &ptr("s"))?;
                    let t = wire::parse_operator(cfg, get(&v, "t")?, &ptr("t"))?;
                    json!({"hs_ip": scalar_json(&hs_ip(&s, &t)?)})
                }
            })
        }
        Cmd::Tensor { op, input } => {
            let v = read_input(input)?;
            Ok(match op {
                TensorOp::Norm => json!({"norm": norm_json(proj_norm(&wire::parse_tensor(cfg, &v, "")?)?)}),
                TensorOp::Ip => {
                    let u = wire::parse_tensor(cfg, get(&v, "u")?, &ptr("u"))?;
                    let w = wire::parse_tensor(cfg, get(&v, "v")?, &ptr("v"))?;
                    json!({"ip": scalar_json(&tensor_ip(&u, &w)?)})
                }
                TensorOp::Rank => json!({"rank": tensor::tensor_rank(&wire::parse_tensor(cfg, &v, "")?)?}),
                TensorOp::Zero => {
                    let t = wire::parse_tensor(cfg, &v, "")?;
                    let (dh, dk) = t.dims();
                    let by_functionals = match t.pairs() {
                        Some(p) => Some(tensor::is_zero_by_functionals(p, dh, dk)?),
                        None => None,
                    };
                    json!({"zero": t.is_zero(), "zero_by_functionals": by_functionals})
                }
            })
        }
        Cmd::Iso { op, input } => {
            let v = read_input(input)?;
            Ok(match op {
                IsoOp::Forward => wire::tensor_json(&hsiso::iso_i(&wire::parse_operator(cfg, &v, "")?)?),
                IsoOp::Backward => wire::operator_json(&hsiso::iso_i_star(&wire::parse_tensor(cfg, &v, "")?)?),
                IsoOp::Roundtrip => {
                    let t = wire::parse_operator(cfg, &v, "")?;
                    let u = hsiso::iso_i(&t)?;
                    let back = hsiso::iso_i_star(&u)?;
                    json!({
                        "tensor": wire::tensor_json(&u),
                        "operator": wire::operator_json(&back),
                        "identity": back.eq_at_precision(&t.truncate_to_precision()?),
                        "norm_preserved": proj_norm(&u)? == t.op_norm()?,
                    })
                }
                IsoOp::Rankone => {
                    let a = wire::parse_vector(cfg, get(&v, "v")?, &ptr("v"))?;
                    let b = wire::parse_vector(cfg, get(&v, "w")?, &ptr("w"))?;
                    let t = hsiso::rank_one(&a, &b);
                    let u = hsiso::iso_i(&t)?;
                    json!({
                        "operator": wire::operator_json(&t),
                        "tensor": wire::tensor_json(&u),
                        "law": u == tensor::simple_tensor(&a.conj(), &b),
                    })
                }
            })
        }
        Cmd::Conj { op, z1, z2, base_dim, probes, input } => conj(cfg, g.seed, *op, z1, z2, *base_dim, *probes, input),
        Cmd::Sub { op, probes, input } => {
            let v = read_input(input)?;
            Ok(match op {
                SubOp::Perp => {
                    let w = wire::parse_subspace(cfg, &v, "")?;
                    let r = subspaces::perp(&w)?;
                    json!({"basis": wire::vectors_json(&r.basis), "hilbert": format!("{:?}", r.verdict).to_lowercase()})
                }
                SubOp::Regular => {
                    let w = wire::parse_subspace(cfg, &v, "")?;
                    let r = subspaces::is_regular(&w, *probes, g.seed)?;
                    json!({
                        "verdict": r.verdict.name(),
                        "splits": r.splits,
                        "probes": r.probes,
                        "splitting_on_probes": r.splitting_on_probes,
                        "sampled": true,
                        "perp_hilbert": format!("{:?}", r.perp.verdict).to_lowercase(),
                        "extension": r.extension.as_deref().map(wire::vectors_json),
                        "witness": r.witness.as_ref().map(|(a, b)| json!([vector_json(a), vector_json(b)])),
                    })
                }
                SubOp::C0iso => {
                    let t = wire::parse_tensor(cfg, &v, "")?;
                    let seq = subspaces::c0_iso(&t);
                    json!({
                        "sequence": wire::vectors_json(&seq),
                        "sup_norm": norm_json(subspaces::sequence_norm(&seq)?),
                        "proj_norm": norm_json(proj_norm(&t)?),
                    })
                }
                SubOp::Tensor => {
                    let h = get(&v, "h_dim")?.as_u64().ok_or_else(|| Error::parse("/h_dim", "expected a dimension"))?;
                    let w = wire::parse_subspace(cfg, get(&v, "subspace")?, "/subspace")?;
                    let t = subspaces::tensor_subspace(h as usize, &w)?;
                    json!({"subspace": wire::subspace_json(&t), "regular": t.extension().is_some()})
                }
            })
        }
        Cmd::Selftest { suite, cases } => {
            let r = selftest::run(suite, cfg, *cases, g.seed)?;
            if r.ok() {
                Ok(r.to_json())
            } else {
                Err(Failure::Selftest(r.to_json()))
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn conj(cfg: FieldConfig, seed: u64, op: ConjOp, z1: &str, z2: &str, base_dim: usize, probes: usize, input: &Input) -> Out {
    Ok(match op {
        ConjOp::Build => {
            let v = read_input(input)?;
            let basis = wire::parse_vectors(cfg, get(&v, "basis")?, "/basis")?;
            let z = hsiso::conjugation_for_basis(&basis)?;
            json!({"linear": wire::operator_json(z.linear_part()), "involutive": z.is_involutive()?})
        }
        ConjOp::Zcheck => {
            let v = read_input(input)?;
            let z = AntiLinearOp::new(linear_part(cfg, &v)?)?;
            let r = hsiso::z_predicates(&z, probes, seed)?;
            json!({
                "z": r.z,
                "sampled": r.sampled,
                "verdict": match r.verdict() { Some(true) => "anti_unitary", Some(false) => "not_anti_unitary", None => "mixed" },
            })
        }
        ConjOp::Dichotomy => {
            let z1 = wire::parse_scalar(cfg, &Value::String(z1.into()), "/z1")?;
            let z2 = wire::parse_scalar(cfg, &Value::String(z2.into()), "/z2")?;
            let r = hsiso::swap_dichotomy(cfg, &z1, &z2, base_dim)?;
            json!({
                "branch": r.branch.name(),
                "involutive": r.involutive,
                "z1": scalar_json(&r.z1),
                "z2": scalar_json(&r.z2),
                "psi": wire::vectors_json(&r.psi),
                "z_invariant": r.z_invariant,
                "self_ip": r.self_ip.iter().map(scalar_json).collect::<Vec<_>>(),
                "ip_orthogonal": r.ip_orthogonal,
                "normal": r.normal,
                "orthonormal": r.orthonormal,
                "bilinear_even": scalar_json(&r.bilinear_even),
                "bilinear_odd": scalar_json(&r.bilinear_odd),
                "t1": norm_json(r.t1),
                "t2": norm_json(r.t2),
                "t1_below_one_achievable": r.t1_achievable,
                "perturbations": r.perturbations.iter().map(|(a, b)| json!([norm_json(*a), norm_json(*b)])).collect::<Vec<_>>(),
                "perturbation_below_one": r.perturbation_below_one,
            })
        }
        ConjOp::Decompose => {
            let v = read_input(input)?;
            let x = wire::parse_vector(cfg, get(&v, "x")?, "/x")?;
            let z = match v.get("linear") {
                Some(l) => AntiLinearOp::new(wire::parse_operator(cfg, l, "/linear")?)?,
                None => AntiLinearOp::j0(cfg, x.dim()),
            };
            let (c1, c2) = hsiso::z_invariant_decomposition(&z, &x)?;
            let back = hsiso::reconstruct(&c1, &c2)?;
            json!({"chi1": vector_json(&c1), "chi2": vector_json(&c2), "reconstructed": back.eq_at_precision(&x)})
        }
    })
}

fn emit(v: &Value, format: Format) -> String {
    match format {
        Format::Json => v.to_string(),
        Format::Pretty => serde_json::to_string_pretty(v).expect("values serialize"),
    }
}

// a closed pipe downstream is not an error worth reporting
fn print_out(v: &Value, format: Format) {
    let _ = writeln!(std::io::stdout(), "{}", emit(v, format));
}

fn main() -> ExitCode {
    // usage errors share exit code 1 with other input errors; 2 means precision loss
    let cli = Cli::try_parse().unwrap_or_else(|e| {
        let code = if e.use_stderr() { 1 } else { 0 };
        e.print().ok();
        std::process::exit(code)
    });
    match run(&cli.global, &cli.cmd) {
        Ok(v) => {
            print_out(&v, cli.global.format);
            ExitCode::SUCCESS
        }
        Err(Failure::Selftest(v)) => {
            print_out(&v, cli.global.format);
            ExitCode::from(3)
        }
        Err(Failure::Domain(e)) => {
            let mut diag = json!({"error": e.to_string()});
            if let Error::Parse { pointer, message } = &e {
                diag["pointer"] = json!(pointer);
                diag["message"] = json!(message);
            }
            eprintln!("{diag}");
            ExitCode::from(if e.is_precision_loss() { 2 } else { 1 })
        }
    }
}
