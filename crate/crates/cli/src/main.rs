use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use nhpoly::analysis::{
    analyze, build_delta, compare_polytopes, contract_iteratively, detect_binomial_segments, epsilon_sweep,
    find_contractible_vertices, is_permissible, permissibility_table, AnalyzeOptions, DEFAULT_BUDGET,
};
use nhpoly::equation::WeierstrassEquation;
use nhpoly::field::{parse_rational, Field};
use nhpoly::hull::{face_lattice_check, PolytopeContext};
use nhpoly::poly::variable_name;
use nhpoly::render::{render_figure, Format, RenderSpec};

#[derive(Parser)]
#[command(name = "nhpoly", version, about = "Newton–Hironaka polytopes of Weierstrass equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// The equation, e.g. "Z^3+(X^2+X*Y^2)*Z+X^2*Y".
    #[arg(long, conflicts_with = "input")]
    equation: Option<String>,
    /// Read the equation from a file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Coefficient field: q or fp:<p>.
    #[arg(long, default_value = "q")]
    field: String,
    /// inf, a positive rational, or classical.
    #[arg(long, default_value = "inf")]
    epsilon: String,
    /// Number of X variables, when the equation does not show them all.
    #[arg(long)]
    m: Option<usize>,
    /// Also write the JSON result here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the main output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: faces, rationality, audit, band, permissibility, sweep.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Upper end of the epsilon sweep.
        #[arg(long, default_value = "1")]
        qmax: String,
        #[arg(long)]
        no_sweep: bool,
    },
    /// Dump of the polytope in the chosen context.
    Polytope {
        #[command(flatten)]
        common: Common,
    },
    /// Face matching between the --epsilon context and --epsilon-b.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "classical")]
        epsilon_b: String,
    },
    /// Exact epsilon thresholds up to --qmax.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "1")]
        qmax: String,
    },
    /// Permissibility of (Z, X_i...); all coordinate ideals without --vars.
    Permissible {
        #[command(flatten)]
        common: Common,
        /// Comma-separated variable names, e.g. X,Y or X1,X3.
        #[arg(long)]
        vars: Option<String>,
    },
    /// The Tchirnhausen-reduced equation.
    Tchirnhausen {
        #[command(flatten)]
        common: Common,
    },
    /// Contractible vertices of the classical polytope.
    Contract {
        #[command(flatten)]
        common: Common,
        /// Repeat contractions until none is left.
        #[arg(long)]
        iterate: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Binomial segments of the classical polytope (m = 2).
    Segments {
        #[command(flatten)]
        common: Common,
    },
    /// TikZ or SVG picture (m = 2).
    Render {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "tikz")]
        format: String,
        #[arg(long, default_value_t = 6)]
        decimals: u32,
        /// Epsilon used to place points of an infinitesimal polytope.
        #[arg(long)]
        sample_q: Option<String>,
        /// Upper corner as x,y.
        #[arg(long)]
        viewport: Option<String>,
        /// SVG pixels per unit.
        #[arg(long, default_value_t = 100)]
        scale: u32,
        #[arg(long)]
        no_shade: bool,
        #[arg(long)]
        no_markers: bool,
        #[arg(long)]
        no_ticks: bool,
    },
}

enum Failure {
    /// Bad input; exit 2.
    Input(String),
    /// A broken internal invariant, with the self-check findings; exit 1.
    Invariant(Vec<String>),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

fn rational(text: &str, what: &str) -> Result<num_rational::BigRational, Failure> {
    parse_rational(text).ok_or_else(|| Failure::Input(format!("bad {what} `{text}`")))
}

impl Common {
    fn equation(&self) -> Result<WeierstrassEquation, Failure> {
        let text = match (&self.equation, &self.input) {
            (Some(t), _) => t.clone(),
            (None, Some(p)) => fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
            (None, None) => return Err(Failure::Input("one of --equation or --input is required".into())),
        };
        let field = Field::parse(&self.field)?;
        Ok(WeierstrassEquation::parse(text.trim(), field, self.m)?)
    }

    fn context(&self) -> Result<PolytopeContext, Failure> {
        Ok(PolytopeContext::parse(&self.epsilon)?)
    }

    fn emit(&self, main: &str, report: &Value) -> Result<(), Failure> {
        if let Some(p) = &self.json {
            fs::write(p, pretty(report)).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
        }
        match &self.out {
            Some(p) => fs::write(p, main).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
            None => print!("{main}"),
        }
        Ok(())
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn emit_json(common: &Common, v: Value) -> Result<(), Failure> {
    common.emit(&pretty(&v), &v)
}

fn parse_vars(text: &str, m: usize) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|name| {
            let name = name.trim();
            (0..m)
                .find(|&i| variable_name(m, i) == name)
                .ok_or_else(|| Failure::Input(format!("unknown variable `{name}` for m = {m}")))
        })
        .collect()
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Analyze { common, qmax, no_sweep } => {
            let f = common.equation()?;
            let opts = AnalyzeOptions {
                context: common.context()?,
                q_max: if no_sweep { None } else { Some(rational(&qmax, "--qmax")?) },
                ..AnalyzeOptions::default()
            };
            let report = analyze(&f, &opts)?;
            let value = serde_json::to_value(&report)?;
            common.emit(&pretty(&value), &value)?;
            let violations = report.invariant_violations();
            if !violations.is_empty() {
                return Err(Failure::Invariant(violations));
            }
        }
        Command::Polytope { common } => {
            let f = common.equation()?;
            let delta = build_delta(&f, &common.context()?)?;
            emit_json(&common, delta.to_json())?;
            let check = face_lattice_check(&delta);
            if !check.is_empty() {
                return Err(Failure::Invariant(check));
            }
        }
        Command::Compare { common, epsilon_b } => {
            let f = common.equation()?;
            let b = PolytopeContext::parse(&epsilon_b)?;
            emit_json(&common, serde_json::to_value(compare_polytopes(&f, &common.context()?, &b)?)?)?;
        }
        Command::Sweep { common, qmax } => {
            let f = common.equation()?;
            let report = epsilon_sweep(&f, &rational(&qmax, "--qmax")?)?;
            let value = serde_json::to_value(&report)?;
            common.emit(&pretty(&value), &value)?;
            if !report.leftmost_matches_infinitesimal {
                return Err(Failure::Invariant(vec!["leftmost sweep interval differs from the infinitesimal polytope".into()]));
            }
        }
        Command::Permissible { common, vars } => {
            let f = common.equation()?;
            let value = match vars {
                Some(v) => serde_json::to_value(is_permissible(&f, &parse_vars(&v, f.m())?)?)?,
                None => serde_json::to_value(permissibility_table(&f)?)?,
            };
            emit_json(&common, value)?;
        }
        Command::Tchirnhausen { common } => {
            let f = common.equation()?;
            let g = f.tchirnhausen()?;
            let value = json!({
                "input": f.render(),
                "result": g.render(),
                "already_reduced": f.is_tchirnhausen_reduced(),
            });
            common.emit(&format!("{}\n", g.render()), &value)?;
        }
        Command::Contract { common, iterate, budget } => {
            let f = common.equation()?;
            let value = if iterate {
                serde_json::to_value(contract_iteratively(&f, budget)?)?
            } else {
                serde_json::to_value(find_contractible_vertices(&f)?)?
            };
            emit_json(&common, value)?;
        }
        Command::Segments { common } => {
            let f = common.equation()?;
            emit_json(&common, serde_json::to_value(detect_binomial_segments(&f)?)?)?;
        }
        Command::Render { common, format, decimals, sample_q, viewport, scale, no_shade, no_markers, no_ticks } => {
            let f = common.equation()?;
            let ctx = common.context()?;
            let viewport = match viewport {
                Some(v) => {
                    let (x, y) = v.split_once(',').ok_or_else(|| Failure::Input(format!("bad --viewport `{v}`")))?;
                    Some((rational(x.trim(), "--viewport")?, rational(y.trim(), "--viewport")?))
                }
                None => None,
            };
            let spec = RenderSpec {
                format: format.parse::<Format>()?,
                viewport,
                sample_q: sample_q.map(|q| rational(&q, "--sample-q")).transpose()?,
                decimals,
                shade: !no_shade,
                markers: !no_markers,
                ticks: !no_ticks,
                svg_scale: scale,
            };
            let delta = build_delta(&f, &ctx)?;
            let figure = render_figure(&delta, &f, &spec)?;
            let meta = json!({
                "context": ctx,
                "sample_q": figure.sample_q,
                "vertices": figure.vertices,
                "polytope": delta.to_json(),
            });
            common.emit(&figure.text, &meta)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(found)) => {
            eprintln!("internal invariant violated; self-check dump:");
            for line in found {
                eprintln!("  {line}");
            }
            ExitCode::from(1)
        }
    }
}
