mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ramification::classify::{is_galois, splitting_field, ClassificationRequest, DEFAULT_CAP};
use ramification::eisenstein::{l_equiv, EisensteinPoly, InsepProfile, Rat};
use ramification::ext_arith::minpoly_uniformizer;
use ramification::io::{field_from_value, field_to_value, poly_from_value, poly_to_value, read_json, write_json};
use ramification::literal::parse_x_poly;
use ramification::local_field::{ExtInt, LocalField};
use ramification::reduce::reduce_to_standard;
use ramification::standard_form::StandardForm;
use ramification::{Error, ErrorKind};

const EXIT_VALIDATION: u8 = 2;
const EXIT_PRECISION: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "ramify", version, about = "Ramification invariants and standard forms of Eisenstein polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a field description and print its normalized form.
    FieldCheck {
        #[arg(long)]
        field: PathBuf,
    },
    /// Indices of inseparability of a polynomial.
    Indices {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        field: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// rho_h(l) for every h, and phi_{L/K}(l).
    Rho {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        field: Option<PathBuf>,
        #[arg(long)]
        ell: u64,
    },
    /// Whether two polynomials are l-equivalent.
    Equiv {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        field: Option<PathBuf>,
        #[arg(long)]
        ell: u64,
    },
    /// Minimum polynomial of a uniformizer given as a polynomial in a root X.
    Minpoly {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        field: Option<PathBuf>,
        #[arg(long)]
        expr: String,
    },
    /// Reduce a two-index polynomial of degree p^k to standard form.
    Reduce {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        field: Option<PathBuf>,
        #[arg(long)]
        ell_max: Option<u64>,
        /// Write the per-step trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Enumerate all standard forms for (K, k, i0) as JSON lines.
    Classify {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        i0: u64,
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        galois_filter: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Galois test and splitting field of a polynomial (reduced first) or a standard form.
    Galois {
        #[arg(long, conflicts_with = "form", required_unless_present = "form")]
        poly: Option<PathBuf>,
        /// Standard-form JSON; requires --field.
        #[arg(long, requires = "field")]
        form: Option<PathBuf>,
        #[arg(long)]
        field: Option<PathBuf>,
    },
    /// Run the built-in worked examples end to end and print a pass/fail table.
    VerifyPaper {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn load_field(path: Option<&Path>) -> Result<Option<LocalField>, Error> {
    path.map(|p| field_from_value(&read_json(p)?)).transpose()
}

fn load_poly(path: &Path, field: Option<&LocalField>) -> Result<EisensteinPoly, Error> {
    poly_from_value(&read_json(path)?, field)
}

fn ext(x: ExtInt) -> Value {
    match x {
        ExtInt::Fin(v) => json!(v),
        ExtInt::Inf => json!("inf"),
    }
}

fn profile_json(prof: &InsepProfile) -> Value {
    json!({
        "p": prof.p,
        "n": prof.n,
        "u": prof.u,
        "k": prof.k,
        "e_K": ext(prof.e_k),
        "tilde": prof.tilde.iter().map(|&i| ext(i)).collect::<Vec<_>>(),
        "indices": prof.idx.iter().map(|&i| ext(i)).collect::<Vec<_>>(),
        "distinct": prof.distinct_count,
        "two_index": prof.two_index.as_ref().map(|t| json!({
            "i0": t.i0,
            "A0": t.a0,
            "b0": t.b0,
            "break": t.brk.to_string(),
        })),
    })
}

fn profile_table(prof: &InsepProfile) -> String {
    let mut out = format!("n = {} = {} * {}^{}, e_K = {}\n", prof.n, prof.u, prof.p, prof.k, prof.e_k);
    out.push_str(&format!("{:>3}  {:>8}  {:>8}\n", "j", "tilde_j", "i_j"));
    for j in 0..=prof.k as usize {
        out.push_str(&format!("{:>3}  {:>8}  {:>8}\n", j, prof.tilde[j].to_string(), prof.idx[j].to_string()));
    }
    if let Some(t) = &prof.two_index {
        out.push_str(&format!("two-index: i0 = {}, A0 = {}, b0 = {}, break = {}\n", t.i0, t.a0, t.b0, t.brk));
    }
    out
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn form_record(sf: &StandardForm) -> Value {
    let mut v = sf.to_json();
    v["galois"] = json!(is_galois(sf).galois);
    v
}

fn run(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::FieldCheck { field } => {
            let k = field_from_value(&read_json(&field)?)?;
            let mut v = field_to_value(&k);
            v["q"] = json!(k.residue().size());
            v["e_K"] = ext(k.e_k());
            print_json(&v);
        }
        Command::Indices { poly, field, format } => {
            let field = load_field(field.as_deref())?;
            let prof = load_poly(&poly, field.as_ref())?.indices()?;
            match format {
                Format::Json => print_json(&profile_json(&prof)),
                Format::Table => print!("{}", profile_table(&prof)),
            }
        }
        Command::Rho { poly, field, ell } => {
            let field = load_field(field.as_deref())?;
            let prof = load_poly(&poly, field.as_ref())?.indices()?;
            let rho: serde_json::Map<String, Value> =
                (1..=prof.n).map(|h| (h.to_string(), ext(prof.rho(h, ell)))).collect();
            print_json(&json!({
                "ell": ell,
                "phi_LK": prof.phi_lk(Rat::from_integer(ell as i64)).to_string(),
                "rho": rho,
            }));
        }
        Command::Equiv { f, g, field, ell } => {
            let field = load_field(field.as_deref())?;
            let f = load_poly(&f, field.as_ref())?;
            let g = load_poly(&g, Some(field.as_ref().unwrap_or(f.field())))?;
            print_json(&json!({ "ell": ell, "equivalent": l_equiv(&f, &g, ell)? }));
        }
        Command::Minpoly { poly, field, expr } => {
            let field = load_field(field.as_deref())?;
            let f = load_poly(&poly, field.as_ref())?;
            let x = parse_x_poly(&expr, f.field()).map_err(|e| Error::Format(format!("--expr: {e}")))?;
            print_json(&poly_to_value(&minpoly_uniformizer(&f, &x)?, true));
        }
        Command::Reduce { poly, field, ell_max, trace } => {
            let field = load_field(field.as_deref())?;
            let f = load_poly(&poly, field.as_ref())?;
            let (sf, tr) = reduce_to_standard(&f, ell_max)?;
            if let Some(path) = trace {
                write_json(&path, &tr.to_json())?;
            }
            print_json(&sf.to_json());
        }
        Command::Classify { field, k, i0, count_only, galois_filter, cap, jobs } => {
            let field = field_from_value(&read_json(&field)?)?;
            let req = ClassificationRequest::new(&field, k, i0).with_cap(cap);
            if count_only && !galois_filter {
                println!("{}", req.count()?);
                return Ok(());
            }
            let forms: Vec<StandardForm> = if jobs > 1 {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build()
                    .map_err(|e| Error::Format(e.to_string()))?;
                pool.install(|| req.enumerate_par())?
            } else {
                req.enumerate()?.collect()
            };
            let selected = forms.iter().filter(|sf| !galois_filter || is_galois(sf).galois);
            if count_only {
                println!("{}", selected.count());
                return Ok(());
            }
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            for sf in selected {
                writeln!(out, "{}", form_record(sf)).map_err(|source| Error::Io { path: "<stdout>".into(), source })?;
            }
        }
        Command::Galois { poly, form, field } => {
            let field = load_field(field.as_deref())?;
            let sf = match (poly, form) {
                (Some(p), _) => reduce_to_standard(&load_poly(&p, field.as_ref())?, None)?.0,
                (None, Some(s)) => {
                    let field = field.expect("clap requires --field with --form");
                    StandardForm::from_json(&field, &read_json(&s)?)?
                }
                (None, None) => unreachable!("clap requires --poly or --form"),
            };
            let g = is_galois(&sf);
            print_json(&json!({
                "standard_form": sf.to_json(),
                "galois": g.galois,
                "group": g.group,
                "splitting_field": splitting_field(&sf).to_json(),
            }));
        }
        Command::VerifyPaper { seed } => {
            if !verify::run(seed) {
                return Err(Error::Format("some checks failed".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e.kind() {
                ErrorKind::Validation => ExitCode::from(EXIT_VALIDATION),
                ErrorKind::Precision => ExitCode::from(EXIT_PRECISION),
            }
        }
    }
}
