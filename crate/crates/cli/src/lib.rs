//! Command dispatch for the `volrig` binary.
//!
//! [`run_command`] parses an argument vector and returns the exit code with
//! the full report, so the binary and the tests share one code path.
//! Exit codes: 0 success, 1 property violation, 2 usage or input error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use volrig_core::cycles::{
    boundary_identity_check, contraction_reduce, cycle_space, default_admissible, is_minimal_cycle,
    is_minimal_cycle_over, verify_dataset, Chain,
};
use volrig_core::io::{dataset_root, load_dataset, parse_complex, write_complex, DATA_ENV};
use volrig_core::linalg::{trial_rng, Field, PrimeField, PRIMES};
use volrig_core::rigidity::{exact_rank, EXACT_CHECK_LIMIT};
use volrig_core::shifting::{
    psi_kernel_vectors, psi_matrix, shifted_level, sigma0, sigma0_membership, GenericBasis, Order,
};
use volrig_core::sparsity::{
    build_counterexample, complete_to_sparse_basis, is_sparse, is_tight, SparsityParams,
};
use volrig_core::{generic_rank, Error, Face, Genericity, Placement, SimplicialComplex};

#[derive(Parser, Debug)]
#[command(
    name = "volrig",
    version,
    about = "Volume rigidity, exterior shifting and sparsity of simplicial complexes"
)]
struct Cli {
    /// Random placements or bases per query; ranks take the maximum.
    #[arg(long, global = true, default_value_t = 3)]
    trials: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Index into the prime table (0-3).
    #[arg(long, global = true, default_value_t = 0)]
    prime: usize,
    /// Emit a JSON object instead of text lines.
    #[arg(long, global = true)]
    json: bool,
    /// Cross-check ranks over the rationals when the instance is small.
    #[arg(long, global = true)]
    exact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Complex file.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
}

#[derive(Args, Debug)]
struct Counts {
    /// Defaults to d - 1.
    #[arg(long)]
    a: Option<usize>,
    /// Defaults to d^2 - d - 1.
    #[arg(long)]
    b: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrderArg {
    P,
    Lex,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generic rank of the volume-rigidity matrix.
    Rank(Input),
    /// Rank and rigidity verdict; fails when the complex is not rigid.
    Rigid(Input),
    /// One level of the exterior shift.
    Shift {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "p")]
        order: OrderArg,
        /// Face size; defaults to the facet size.
        #[arg(long)]
        level: Option<usize>,
    },
    /// Whether {1,3,...,d,n} lies in the partial-order shift.
    Sigma0(Input),
    /// Rank and kernel of the psi map for given d and n.
    Psi {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
    },
    /// (a,b)-sparsity with the first smallest violating vertex set.
    Sparsity {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        counts: Counts,
    },
    /// (a,b)-tightness.
    Tight {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        counts: Counts,
    },
    /// Greedy lex completion to a sparse set of a n - b facets.
    CompleteBasis {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        counts: Counts,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iterated cone over K_{3,3}, completed and checked.
    Counterexample {
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Contract one edge, or reduce by admissible contractions.
    Contract {
        #[command(flatten)]
        input: Input,
        /// Edge as `u,w`; without it the complex is fully reduced.
        #[arg(long, value_parser = parse_edge)]
        edge: Option<(usize, usize)>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Top-dimensional cycle space and minimal-cycle flags.
    Homology(Input),
    /// Boundary identity for V(K,p) z on random placements and chains.
    BoundaryId {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Rigidity of every complex in a dataset directory.
    VerifyDataset {
        /// Dataset directory; otherwise taken from VOLRIG_DATA.
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Subdirectory of the data root, e.g. `torus`.
        #[arg(long)]
        name: Option<String>,
    },
}

fn parse_edge(s: &str) -> Result<(usize, usize), String> {
    let (u, w) = s.split_once(',').ok_or("expected u,w")?;
    let p = |x: &str| x.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((p(u)?, p(w)?))
}

/// Text lines, a JSON value, and whether the asserted property held.
struct Report {
    lines: Vec<String>,
    json: Value,
    ok: bool,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

struct Ctx {
    g: Genericity,
    prime: usize,
    exact: bool,
}

impl Ctx {
    fn tag(&self) -> String {
        format!("[trials={} prime=p{}]", self.g.trials, self.prime)
    }

    fn meta(&self) -> Value {
        json!({ "trials": self.g.trials, "prime": self.prime, "modulus": self.g.field.modulus(), "seed": self.g.seed })
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn read(path: &Path) -> Result<SimplicialComplex, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(parse_complex(&text)?)
}

fn write(path: &Path, k: &SimplicialComplex) -> Result<(), CliError> {
    fs::write(path, write_complex(k))
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn params(k: &SimplicialComplex, c: &Counts) -> Result<SparsityParams, CliError> {
    let d = k.d();
    let a = c.a.unwrap_or(d.saturating_sub(1));
    let b = c.b.unwrap_or((d * d).saturating_sub(d + 1));
    Ok(SparsityParams::new(a, b, d)?)
}

fn faces_json(f: &[Face]) -> Value {
    Value::from(f.iter().map(|f| f.vertices().to_vec()).collect::<Vec<_>>())
}

fn rank_report(ctx: &Ctx, k: &SimplicialComplex, assert_rigid: bool) -> Result<Report, CliError> {
    let r = generic_rank(k, &ctx.g)?;
    let tag = ctx.tag();
    let mut lines = vec![
        format!("rank {} {tag}", r.generic_rank),
        format!("target {}", r.target_rank),
        format!("corank {}", r.corank),
    ];
    if !r.stable {
        lines.push(format!("trial ranks {:?} disagree {tag}", r.trial_ranks));
    }
    let mut ok = true;
    let mut exact = Value::Null;
    if ctx.exact {
        match exact_rank(k, ctx.g.seed) {
            Ok(q) => {
                let agree = q == r.generic_rank;
                ok &= agree;
                lines.push(format!(
                    "exact rank {q} over Q, agrees {} {tag}",
                    yes(agree)
                ));
                exact = json!(q);
            }
            Err(Error::InstanceTooLarge { .. }) => lines.push(format!(
                "exact check skipped: (d-1)n exceeds {EXACT_CHECK_LIMIT}"
            )),
            Err(e) => return Err(e.into()),
        }
    }
    if assert_rigid {
        lines.push(format!(
            "{} {tag}",
            if r.is_rigid { "RIGID" } else { "NOT RIGID" }
        ));
        ok &= r.is_rigid;
    }
    let mut json = serde_json::to_value(&r).expect("report serializes");
    json["exact_rank"] = exact;
    json["meta"] = ctx.meta();
    Ok(Report { lines, json, ok })
}

fn dispatch(ctx: &Ctx, cmd: &Command) -> Result<Report, CliError> {
    let tag = ctx.tag();
    match cmd {
        Command::Rank(i) => rank_report(ctx, &read(&i.input)?, false),
        Command::Rigid(i) => rank_report(ctx, &read(&i.input)?, true),
        Command::Shift {
            input,
            order,
            level,
        } => {
            let k = read(&input.input)?;
            let size = level.unwrap_or(k.d());
            let ord = match order {
                OrderArg::P => Order::Partial,
                OrderArg::Lex => Order::Lex,
            };
            let faces = shifted_level(&k, size, ord, &ctx.g)?;
            let name = match order {
                OrderArg::P => "p",
                OrderArg::Lex => "lex",
            };
            let mut lines: Vec<String> = faces.iter().map(|f| f.to_string()).collect();
            lines.push(format!(
                "level {size} order {name}: {} faces {tag}",
                faces.len()
            ));
            Ok(Report {
                lines,
                json: json!({ "order": name, "level": size, "faces": faces_json(&faces), "meta": ctx.meta() }),
                ok: true,
            })
        }
        Command::Sigma0(i) => {
            let k = read(&i.input)?;
            let s0 = sigma0(k.d(), k.n())?;
            let m = sigma0_membership(&k, &ctx.g)?;
            Ok(Report {
                lines: vec![format!("SIGMA0 {} {s0} {tag}", yes(m))],
                json: json!({ "sigma0": s0.vertices(), "member": m, "meta": ctx.meta() }),
                ok: m,
            })
        }
        Command::Psi { d, n } => {
            let f = ctx.g.field;
            let basis = GenericBasis::sample(&f, *n, ctx.g.seed)?;
            let m = psi_matrix(&basis, *d)?;
            let rank = m.rank();
            let kernel = m.cols() - rank;
            let want_rank = 1 + n.saturating_sub(*d) * (d - 1);
            let want_kernel = d * d - d - 1;
            let vectors = psi_kernel_vectors(&basis, *d)?;
            let annihilated = vectors.iter().all(|z| {
                m.mul_vec(z)
                    .map(|y| y.iter().all(|x| f.is_zero(x)))
                    .unwrap_or(false)
            });
            let ok = rank == want_rank && kernel == want_kernel && annihilated;
            Ok(Report {
                lines: vec![
                    format!(
                        "psi {}x{} rank {rank} (expected {want_rank}) {tag}",
                        m.rows(),
                        m.cols()
                    ),
                    format!("kernel {kernel} (expected {want_kernel})"),
                    format!(
                        "explicit kernel vectors annihilated: {} ({} vectors) {tag}",
                        yes(annihilated),
                        vectors.len()
                    ),
                ],
                json: json!({ "rows": m.rows(), "cols": m.cols(), "rank": rank, "kernel": kernel, "kernel_vectors_ok": annihilated, "meta": ctx.meta() }),
                ok,
            })
        }
        Command::Sparsity { input, counts } => {
            let k = read(&input.input)?;
            let p = params(&k, counts)?;
            let v = is_sparse(&k, &p)?;
            let mut line = format!("SPARSE({},{}) {}", p.a, p.b, yes(v.sparse));
            let tag_suffix = format!(" {tag}");
            if let Some(w) = &v.witness {
                line.push_str(&format!(
                    " witness {w} spans {}",
                    volrig_core::sparsity::spanned_count(&k, w.vertices())
                ));
            }
            line.push_str(&tag_suffix);
            Ok(Report {
                lines: vec![line],
                json: json!({ "a": p.a, "b": p.b, "verdict": v }),
                ok: v.sparse,
            })
        }
        Command::Tight { input, counts } => {
            let k = read(&input.input)?;
            let p = params(&k, counts)?;
            let t = is_tight(&k, &p)?;
            Ok(Report {
                lines: vec![format!(
                    "TIGHT({},{}) {} facets {} target {} {tag}",
                    p.a,
                    p.b,
                    yes(t),
                    k.num_facets(),
                    p.bound(k.n())
                )],
                json: json!({ "a": p.a, "b": p.b, "tight": t }),
                ok: t,
            })
        }
        Command::CompleteBasis { input, counts, out } => {
            let k = read(&input.input)?;
            let p = params(&k, counts)?;
            let c = complete_to_sparse_basis(&k, &p)?;
            if let Some(o) = out {
                write(o, &c.complex)?;
            }
            let tight = is_tight(&c.complex, &p)?;
            let mut lines: Vec<String> = c.added.iter().map(|f| format!("added {f}")).collect();
            lines.push(format!(
                "facets {} target {} TIGHT {} {tag}",
                c.complex.num_facets(),
                p.bound(k.n()),
                yes(tight)
            ));
            Ok(Report {
                lines,
                json: json!({ "added": faces_json(&c.added), "facets": c.complex.num_facets(), "tight": tight }),
                ok: true,
            })
        }
        Command::Counterexample { d, out } => {
            let c = build_counterexample(*d)?;
            let k = &c.completion.complex;
            if let Some(o) = out {
                write(o, k)?;
            }
            let p = SparsityParams::volume(*d)?;
            let tight = is_tight(k, &p)?;
            let r = generic_rank(k, &ctx.g)?;
            let s0 = sigma0_membership(k, &ctx.g)?;
            Ok(Report {
                lines: vec![
                    format!(
                        "vertices {} facets {} added {}",
                        k.n(),
                        k.num_facets(),
                        c.completion.added.len()
                    ),
                    format!("TIGHT({},{}) {} {tag}", p.a, p.b, yes(tight)),
                    format!(
                        "rank {} target {} RIGID {} {tag}",
                        r.generic_rank,
                        r.target_rank,
                        yes(r.is_rigid)
                    ),
                    format!("SIGMA0 {} {tag}", yes(s0)),
                ],
                json: json!({
                    "facets": faces_json(k.facets()), "tight": tight, "rigid": r.is_rigid,
                    "generic_rank": r.generic_rank, "target_rank": r.target_rank, "sigma0": s0, "meta": ctx.meta()
                }),
                ok: tight && !r.is_rigid && !s0,
            })
        }
        Command::Contract { input, edge, out } => {
            let k = read(&input.input)?;
            let (res, log) = match edge {
                Some((u, w)) => (k.contract_edge(*u, *w)?, vec![(*u, *w)]),
                None => contraction_reduce(&k, default_admissible),
            };
            if let Some(o) = out {
                write(o, &res)?;
            }
            let mut lines: Vec<String> = log
                .iter()
                .map(|(u, w)| format!("contract {{{u},{w}}}"))
                .collect();
            lines.push(format!("vertices {} facets {}", res.n(), res.num_facets()));
            lines.extend(write_complex(&res).lines().map(str::to_string));
            Ok(Report {
                lines,
                json: json!({ "log": log, "n": res.n(), "facets": faces_json(res.facets()) }),
                ok: true,
            })
        }
        Command::Homology(i) => {
            let k = read(&i.input)?;
            let z = cycle_space(&volrig_core::linalg::Rationals, &k)?;
            let minimal_q = is_minimal_cycle(&k)?;
            let minimal_f2 = is_minimal_cycle_over(&PrimeField::new(2), &k)?;
            let mut lines = vec![
                format!("cycle space dimension {} over Q", z.cols()),
                format!("minimal cycle over Q {} {tag}", yes(minimal_q)),
                format!("minimal cycle over F2 {} {tag}", yes(minimal_f2)),
            ];
            let gens: Vec<Vec<String>> = (0..z.cols())
                .map(|c| z.column(c).iter().map(|x| x.to_string()).collect())
                .collect();
            for g in &gens {
                lines.push(format!("generator {}", g.join(" ")));
            }
            Ok(Report {
                lines,
                json: json!({ "dimension": z.cols(), "minimal_q": minimal_q, "minimal_f2": minimal_f2, "generators": gens }),
                ok: true,
            })
        }
        Command::BoundaryId { input, samples } => {
            let k = read(&input.input)?;
            let f = ctx.g.field;
            let mut agree = 0;
            for s in 0..*samples as u64 {
                let mut rng = trial_rng(ctx.g.seed, s);
                let p = Placement::random(&f, k.d(), k.n(), &mut rng);
                let z: Vec<u64> = (0..k.num_facets()).map(|_| f.sample(&mut rng)).collect();
                if boundary_identity_check(&f, &k, &p, &Chain::from_dense(&k, &z))? {
                    agree += 1;
                }
            }
            Ok(Report {
                lines: vec![format!("boundary identity holds {agree}/{samples} {tag}")],
                json: json!({ "samples": samples, "agree": agree, "meta": ctx.meta() }),
                ok: agree == *samples,
            })
        }
        Command::VerifyDataset { dir, name } => {
            let base = match dir {
                Some(d) => d.clone(),
                None => dataset_root().ok_or_else(|| {
                    CliError::Usage(format!("no --dir given and {DATA_ENV} is not set"))
                })?,
            };
            let path = match name {
                Some(n) => base.join(n),
                None => base,
            };
            let ds = load_dataset(&path)?;
            let r = verify_dataset(&ds, &ctx.g)?;
            let mut lines: Vec<String> = r
                .entries
                .iter()
                .map(|e| {
                    let s0 = e.sigma0.map_or("n/a", yes);
                    let verdict = if e.is_rigid { "RIGID" } else { "NOT RIGID" };
                    format!(
                        "{} n={} facets={} rank={} target={} {verdict} SIGMA0 {s0} {tag}",
                        e.file, e.n, e.facets, e.generic_rank, e.target_rank
                    )
                })
                .collect();
            lines.push(format!(
                "{}: {}/{} rigid, {}/{} sigma0 {tag}",
                r.name, r.rigid, r.total, r.sigma0, r.total
            ));
            let ok = r.rigid == r.total;
            let mut json = serde_json::to_value(&r).expect("report serializes");
            json["meta"] = ctx.meta();
            Ok(Report { lines, json, ok })
        }
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    let field = match PRIMES.get(cli.prime) {
        Some(&p) => PrimeField::new(p),
        None => {
            return (
                2,
                format!("error: --prime must be below {}\n", PRIMES.len()),
            )
        }
    };
    if cli.trials == 0 {
        return (2, "error: --trials must be at least 1\n".into());
    }
    let ctx = Ctx {
        g: Genericity::new(field, cli.trials, cli.seed),
        prime: cli.prime,
        exact: cli.exact,
    };
    match dispatch(&ctx, &cli.command) {
        Ok(r) => {
            let text = if cli.json {
                format!("{}\n", serde_json::to_string_pretty(&r.json).expect("json"))
            } else {
                r.lines.join("\n") + "\n"
            };
            (if r.ok { 0 } else { 1 }, text)
        }
        Err(e) => (2, format!("error: {e}\n")),
    }
}
