use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use cvact::activation::{nogo_run, nogo_run_with_certificate, random_scenario, NoGoScenario};
use cvact::error::Error;
use cvact::fock::fock_elements;
use cvact::gaussian::{is_classical, ppt_separability, CovarianceMatrix, StandardFormParams};
use cvact::io::{fmt_sig, parse_covariance};
use cvact::negativity::{
    bound_extrema, lower_bound, negativity_pure_nbar, negativity_truncated, BoundFamily,
    DEFAULT_MAX_CUTOFF, DEFAULT_TOL,
};

#[derive(Parser)]
#[command(
    name = "cvact",
    version,
    about = "Negativity of quantumness for two-mode Gaussian states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Output negativity of a standard-form state.
    Negativity {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_CUTOFF)]
        max_cutoff: usize,
    },
    /// Negativity and lower bound over a range of mean photon numbers, as CSV.
    Sweep(SweepArgs),
    /// Classical, separable-nonclassical or entangled, for a covariance-matrix file.
    Classify {
        /// Plain text (mode count, then rows) or JSON.
        file: PathBuf,
    },
    /// Certifies separability of randomly drawn Gaussian activation circuits.
    NogoDemo(NogoArgs),
    /// Maximum and zero crossing of a closed-form lower bound.
    BoundExtrema {
        #[arg(long, value_enum)]
        family: ExtremaFamily,
    },
    /// One Fock element of a standard-form state, optionally dumping the table.
    FockElement {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        cutoff: usize,
        /// Element `m1,m2,n1,n2`, i.e. ⟨m1 m2|ρ|n1 n2⟩.
        #[arg(long, value_delimiter = ',', required = true)]
        index: Vec<usize>,
        /// Write all nonzero elements as CSV.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
    #[arg(long, allow_hyphen_values = true)]
    c1: f64,
    #[arg(long, allow_hyphen_values = true)]
    c2: f64,
}

impl ParamArgs {
    fn params(&self) -> StandardFormParams {
        StandardFormParams::new(self.a, self.b, self.c1, self.c2)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Pure,
    CoherentMixture,
    /// `a = b = n̄ + ½`, `c1 = −c2 = κ√(n̄(n̄+1))`.
    StandardFormGrid,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtremaFamily {
    Pure,
    CoherentMixture,
}

impl From<ExtremaFamily> for BoundFamily {
    fn from(f: ExtremaFamily) -> Self {
        match f {
            ExtremaFamily::Pure => BoundFamily::Pure,
            ExtremaFamily::CoherentMixture => BoundFamily::CoherentMixture,
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, default_value_t = 0.0)]
    nbar_min: f64,
    #[arg(long)]
    nbar_max: f64,
    #[arg(long, default_value_t = 21)]
    steps: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_CUTOFF)]
    max_cutoff: usize,
    /// Correlation fractions for `standard-form-grid`, each in [0, 1].
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    kappa: Vec<f64>,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NogoArgs {
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Run the scenarios in this JSON file (one object or an array) instead of random ones.
    #[arg(long)]
    scenario_file: Option<PathBuf>,
    /// Write the scenarios that were run as JSON.
    #[arg(long)]
    dump_scenarios: Option<PathBuf>,
    /// Add this multiple of the identity to the first certificate block.
    #[arg(long, default_value_t = 0.0)]
    inflate_certificate: f64,
    /// Per-trial CSV output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Negativity {
            params,
            tol,
            max_cutoff,
        } => cmd_negativity(&params.params(), tol, max_cutoff),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Classify { file } => cmd_classify(&file),
        Command::NogoDemo(args) => cmd_nogo_demo(&args),
        Command::BoundExtrema { family } => cmd_bound_extrema(family.into()),
        Command::FockElement {
            params,
            cutoff,
            index,
            dump,
        } => cmd_fock_element(&params.params(), cutoff, &index, dump.as_deref()),
    }
}

fn cmd_negativity(p: &StandardFormParams, tol: f64, max_cutoff: usize) -> Result<ExitCode> {
    let cm = p.assemble()?;
    let res = negativity_truncated(&cm, tol, max_cutoff)?;
    println!("value {}", fmt_sig(res.value));
    println!("cutoff_used {}", res.cutoff_used);
    println!("tail_estimate {}", fmt_sig(res.tail_estimate));
    println!("converged {}", res.converged);
    Ok(if res.converged {
        ExitCode::SUCCESS
    } else {
        eprintln!("not converged within max cutoff {max_cutoff}");
        ExitCode::from(2)
    })
}

fn family_params(family: Family, nbar: f64, kappa: f64) -> StandardFormParams {
    match family {
        Family::Pure => StandardFormParams::pure_with_mean_photons(nbar),
        Family::CoherentMixture => StandardFormParams::coherent_mixture(nbar),
        Family::StandardFormGrid => {
            let c = kappa * (nbar * (nbar + 1.0)).sqrt();
            StandardFormParams::new(nbar + 0.5, nbar + 0.5, c, -c)
        }
    }
}

fn cmd_sweep(args: &SweepArgs) -> Result<ExitCode> {
    if args.nbar_min.is_nan()
        || args.nbar_max.is_nan()
        || args.nbar_min < 0.0
        || args.nbar_min >= args.nbar_max
    {
        bail!("need 0 <= nbar-min < nbar-max");
    }
    if args.steps < 2 {
        bail!("steps must be at least 2");
    }
    let kappas: Vec<f64> = match args.family {
        Family::StandardFormGrid => {
            if args.kappa.iter().any(|k| !(0.0..=1.0).contains(k)) {
                bail!("kappa values must lie in [0, 1]");
            }
            args.kappa.clone()
        }
        _ => vec![f64::NAN],
    };
    let points: Vec<(f64, f64)> = (0..args.steps)
        .flat_map(|i| {
            let t = i as f64 / (args.steps - 1) as f64;
            let nbar = args.nbar_min + t * (args.nbar_max - args.nbar_min);
            kappas.iter().map(move |&k| (nbar, k))
        })
        .collect();
    let rows: Vec<Vec<String>> = points
        .par_iter()
        .map(|&(nbar, kappa)| -> Result<Vec<String>> {
            let cm = family_params(args.family, nbar, kappa).assemble()?;
            let res = negativity_truncated(&cm, args.tol, args.max_cutoff)?;
            let lb = lower_bound(&cm)?;
            let mut row = vec![
                fmt_sig(nbar),
                fmt_sig(res.value),
                fmt_sig(lb.lower_bound),
                res.cutoff_used.to_string(),
                res.converged.to_string(),
            ];
            match args.family {
                Family::Pure => row.push(fmt_sig(negativity_pure_nbar(nbar))),
                Family::StandardFormGrid => row.push(fmt_sig(kappa)),
                Family::CoherentMixture => {}
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;

    let mut header = vec![
        "nbar",
        "negativity",
        "lower_bound",
        "cutoff_used",
        "converged",
    ];
    match args.family {
        Family::Pure => header.push("closed_form"),
        Family::StandardFormGrid => header.push("kappa"),
        Family::CoherentMixture => {}
    }
    let sink: Box<dyn Write> = match &args.out {
        Some(path) => {
            Box::new(File::create(path).with_context(|| format!("creating {}", path.display()))?)
        }
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(&header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(file: &Path) -> Result<ExitCode> {
    let text =
        std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let cm = parse_covariance(&text).with_context(|| format!("parsing {}", file.display()))?;
    if cm.modes() != 2 {
        return Err(Error::NotTwoModes(cm.modes()).into());
    }
    let label = if is_classical(&cm, &[0])? {
        "Classical"
    } else if ppt_separability(&cm)?.is_separable() {
        "SeparableNonclassical"
    } else {
        "Entangled"
    };
    println!("{label}");
    Ok(ExitCode::SUCCESS)
}

fn load_scenarios(path: &Path) -> Result<Vec<NoGoScenario>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let scenarios = if value.is_array() {
        serde_json::from_value(value)?
    } else {
        vec![serde_json::from_value(value)?]
    };
    for s in &scenarios {
        NoGoScenario::validate(s)?;
    }
    Ok(scenarios)
}

fn cmd_nogo_demo(args: &NogoArgs) -> Result<ExitCode> {
    let scenarios = match &args.scenario_file {
        Some(path) => load_scenarios(path)?,
        None => {
            if args.trials == 0 {
                bail!("trials must be at least 1");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            (0..args.trials)
                .map(|_| random_scenario(&mut rng))
                .collect()
        }
    };
    if let Some(path) = &args.dump_scenarios {
        let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        serde_json::to_writer_pretty(f, &scenarios)?;
    }

    let mut rows = Vec::with_capacity(scenarios.len());
    let mut passed = 0;
    let mut min_eig = f64::INFINITY;
    for (trial, sc) in scenarios.iter().enumerate() {
        let result = if args.inflate_certificate != 0.0 {
            let base = nogo_run(sc)?;
            let g1 = CovarianceMatrix::new(
                base.certificate.gamma_1.matrix()
                    + nalgebra::DMatrix::identity(4, 4) * args.inflate_certificate,
            )?;
            nogo_run_with_certificate(sc, Some((&g1, &base.certificate.gamma_2)))
        } else {
            nogo_run(sc)
        };
        let row = match result {
            Ok(out) => {
                min_eig = min_eig.min(out.certificate.min_eigenvalue);
                let ok = out.ppt.is_separable();
                passed += usize::from(ok);
                let status = if ok { "pass" } else { "ppt-failed" };
                (
                    trial,
                    status,
                    out.certificate.min_eigenvalue,
                    out.ppt.min_pt_symplectic_eig,
                )
            }
            Err(Error::CertificateFailed { min_eigenvalue }) => {
                min_eig = min_eig.min(min_eigenvalue);
                eprintln!(
                    "trial {trial}: certificate failed, min eigenvalue {}",
                    fmt_sig(min_eigenvalue)
                );
                (trial, "certificate-failed", min_eigenvalue, f64::NAN)
            }
            Err(e) => return Err(e.into()),
        };
        rows.push(row);
    }
    let failed = scenarios.len() - passed;
    println!("trials {}", scenarios.len());
    println!("passed {passed}");
    println!("failed {failed}");
    println!("min_certificate_eigenvalue {}", fmt_sig(min_eig));

    if let Some(path) = &args.out {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record([
            "trial",
            "status",
            "certificate_min_eigenvalue",
            "ppt_min_symplectic",
        ])?;
        for (trial, status, eig, ppt) in rows {
            w.write_record([
                trial.to_string(),
                status.to_string(),
                fmt_sig(eig),
                fmt_sig(ppt),
            ])?;
        }
        w.flush()?;
    }
    Ok(if failed > 0 {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_bound_extrema(family: BoundFamily) -> Result<ExitCode> {
    let e = bound_extrema(family);
    println!("argmax_nbar {:.4}", e.argmax_nbar);
    println!("max_value {}", fmt_sig(e.max_value));
    println!("zero_crossing_nbar {:.4}", e.zero_crossing_nbar);
    Ok(ExitCode::SUCCESS)
}

fn cmd_fock_element(
    p: &StandardFormParams,
    cutoff: usize,
    index: &[usize],
    dump: Option<&Path>,
) -> Result<ExitCode> {
    let tdm = fock_elements(&p.assemble()?, cutoff)?;
    let &[m1, m2, n1, n2] = index else {
        bail!("--index needs four values m1,m2,n1,n2");
    };
    let z = tdm
        .get(m1, m2, n1, n2)
        .with_context(|| format!("index exceeds cutoff {cutoff}"))?;
    println!("re {}", fmt_sig(z.re));
    println!("im {}", fmt_sig(z.im));
    println!("trace_deficit {}", fmt_sig(tdm.trace_deficit));
    if let Some(path) = dump {
        let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        tdm.write_csv(io::BufWriter::new(f), false)?;
    }
    Ok(ExitCode::SUCCESS)
}
