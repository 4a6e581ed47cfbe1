//! Command-line front end: distances, geodesics and oracle checks.

mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use laakso::fractal::Address;
use laakso::oracle::ApproxGraph;
use laakso::{
    classify, connect, distance, geodesic_path, minimal_interval, Error, Point, Rational,
    ScaleFactor, SpaceConfig, Strategy,
};
use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::render::{fraction, path_json};

#[derive(Parser)]
#[command(name = "laakso", version, about = "Exact distances and geodesics in Laakso spaces")]
struct Cli {
    /// Scale factor s > 2 (default 3).
    #[arg(long, global = true, conflicts_with = "q")]
    s: Option<String>,

    /// Dimension Q in (1, 2); sets s = 2^(1/(Q-1)).
    #[arg(long, global = true)]
    q: Option<String>,

    /// Explicit leading entries of m, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    m_override: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print n, the first entries of m and the products D_k.
    SpaceInfo {
        #[arg(long, short, default_value_t = 8)]
        k: usize,
    },
    /// List the levels of one order inside a height range.
    Wormholes {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value = "0")]
        from: String,
        #[arg(long, default_value = "1")]
        to: String,
    },
    /// Distance and minimal interval between two points (`address@height`).
    Distance { x: String, y: String },
    /// A geodesic between two points.
    Geodesic {
        x: String,
        y: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// A path built digit by digit with the given strategy.
    Path {
        x: String,
        y: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Nearest)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Pairwise distances between sampled points.
    Matrix {
        #[arg(long, default_value_t = 8)]
        samples: usize,
        /// Longest address prefix; heights are multiples of 1/D_len.
        #[arg(long, default_value_t = 3)]
        prefix_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare formula distances with shortest paths on a depth-K graph.
    OracleCheck {
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write the depth-K graph.
    OracleExport {
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = ExportFormat::Edgelist)]
        format: ExportFormat,
        /// Extra heights to insert, comma separated.
        #[arg(long, value_delimiter = ',')]
        extra: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Edgelist,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Nearest,
    IncreasingOrder,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("oracle disagreement: {0}")]
    Discrepancy(String),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Discrepancy(_) => 1,
            CliError::Core(Error::Parse { .. } | Error::InvalidScale(_) | Error::DigitRange(_)) => 2,
            CliError::Core(_) | CliError::Io(_) => 3,
        }
    }
}

fn parse_rational(text: &str) -> Result<Rational, Error> {
    laakso::numeric::parse_rational(text)
}

fn config(cli: &Cli) -> Result<SpaceConfig, Error> {
    let scale = match (&cli.s, &cli.q) {
        (Some(s), _) => ScaleFactor::from_s(parse_rational(s)?)?,
        (None, Some(q)) => ScaleFactor::from_dimension(parse_rational(q)?)?,
        (None, None) => ScaleFactor::from_s(Rational::from_integer(3.into()))?,
    };
    if cli.m_override.is_empty() {
        return Ok(SpaceConfig::new(scale));
    }
    let entries = cli
        .m_override
        .iter()
        .map(|t| {
            t.trim().parse::<BigInt>().map_err(|_| Error::Parse {
                token: t.clone(),
                reason: "expected an integer entry of m".into(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    SpaceConfig::with_m_override(scale, entries)
}

fn scale_json(cfg: &SpaceConfig) -> Value {
    match (cfg.dimension(), cfg.scale().exact()) {
        (Some(q), Some(s)) => json!({ "Q": fraction(q), "s": fraction(s) }),
        (Some(q), None) => json!({ "Q": fraction(q) }),
        (None, Some(s)) => json!({ "s": fraction(s) }),
        (None, None) => Value::Null,
    }
}

fn run(cli: &Cli, out: &mut impl Write) -> Result<(), CliError> {
    let cfg = config(cli)?;
    let ms = cfg.mseq();
    let point = |t: &str| cfg.parse_point(t);
    let value = match &cli.command {
        Command::SpaceInfo { k } => {
            let m: Vec<String> = ms.entries(*k)?.iter().map(ToString::to_string).collect();
            let d: Vec<String> = (1..=*k).map(|i| ms.denom(i).map(|x| x.to_string())).collect::<Result<_, _>>()?;
            json!({ "scale": scale_json(&cfg), "n": cfg.n().to_string(), "m": m, "D": d })
        }
        Command::Wormholes { order, from, to } => {
            if *order == 0 {
                return Err(Error::Parse { token: "0".into(), reason: "orders start at 1".into() }.into());
            }
            let levels = ms.levels_in(*order, &parse_rational(from)?, &parse_rational(to)?)?;
            Value::Array(levels.iter().map(|w| json!(fraction(&w.value))).collect())
        }
        Command::Distance { x, y } => {
            let (x, y) = (point(x)?, point(y)?);
            let d = distance(&cfg, &x, &y)?;
            let interval = if x == y {
                let h = fraction(x.height());
                json!({ "a": h, "b": h })
            } else {
                let mi = minimal_interval(&cfg, &x, &y)?;
                json!({ "a": fraction(&mi.a), "b": fraction(&mi.b) })
            };
            json!({ "x": x.to_string(), "y": y.to_string(), "distance": fraction(&d), "interval": interval })
        }
        Command::Geodesic { x, y, depth, format } => {
            let (x, y) = (point(x)?, point(y)?);
            let path = if x == y {
                connect(&cfg, &x, &y, Strategy::Nearest, (*depth).max(1))?
            } else {
                geodesic_path(&cfg, &x, &y, (*depth).max(1))?
            };
            if let Format::Svg = format {
                return Ok(out.write_all(render::svg(&cfg, &path)?.as_bytes())?);
            }
            let d = distance(&cfg, &x, &y)?;
            let mut v = path_report(&path);
            v["distance"] = json!(fraction(&d));
            if x != y {
                let mi = minimal_interval(&cfg, &x, &y)?;
                v["interval"] = json!({ "a": fraction(&mi.a), "b": fraction(&mi.b) });
            }
            v
        }
        Command::Path { x, y, strategy, depth, format } => {
            let (x, y) = (point(x)?, point(y)?);
            let strategy = match strategy {
                StrategyArg::Nearest => Strategy::Nearest,
                StrategyArg::IncreasingOrder => Strategy::IncreasingOrder,
            };
            let path = connect(&cfg, &x, &y, strategy, (*depth).max(1))?;
            if let Format::Svg = format {
                return Ok(out.write_all(render::svg(&cfg, &path)?.as_bytes())?);
            }
            path_report(&path)
        }
        Command::Matrix { samples, prefix_len, seed } => matrix(&cfg, *samples, *prefix_len, *seed)?,
        Command::OracleCheck { depth, samples, seed } => oracle_check(&cfg, *depth, *samples, *seed)?,
        Command::OracleExport { depth, format: ExportFormat::Edgelist, extra } => {
            let extra = extra.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>, _>>()?;
            let g = ApproxGraph::build(&cfg, *depth, &extra)?;
            return Ok(out.write_all(g.edgelist().as_bytes())?);
        }
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("json values serialize"))?;
    Ok(())
}

fn path_report(path: &laakso::PathRep) -> Value {
    let c = classify(path);
    let shape = match c.shape {
        laakso::PathShape::MonotoneUp => "monotone-up",
        laakso::PathShape::MonotoneDown => "monotone-down",
        laakso::PathShape::Oscillating => "oscillating",
        laakso::PathShape::Trivial => "trivial",
    };
    json!({
        "x": path.start.to_string(),
        "y": path.end.to_string(),
        "length": render::enclosure(&path.length()),
        "classification": { "shape": shape, "inversions": c.inversions() },
        "path": path_json(path),
    })
}

fn sample_point(cfg: &SpaceConfig, rng: &mut ChaCha8Rng, prefix_len: usize, grid: &BigInt) -> Result<Point, Error> {
    let len = rng.gen_range(0..=prefix_len);
    let digits: Vec<u8> = (0..len).map(|_| rng.gen_range(0..=1)).collect();
    let top = u64::try_from(grid.clone()).unwrap_or(u64::MAX);
    let j = rng.gen_range(0..=top);
    cfg.canonicalize(Address::finite(&digits), Rational::new(j.into(), grid.clone()))
}

fn matrix(cfg: &SpaceConfig, samples: usize, prefix_len: usize, seed: u64) -> Result<Value, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = cfg.mseq().denom(prefix_len.max(1))?;
    let points = (0..samples)
        .map(|_| sample_point(cfg, &mut rng, prefix_len, &grid))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows = vec![vec![String::new(); samples]; samples];
    for i in 0..samples {
        rows[i][i] = "0".into();
        for j in (i + 1)..samples {
            let d = fraction(&distance(cfg, &points[i], &points[j])?);
            rows[i][j] = d.clone();
            rows[j][i] = d;
        }
    }
    let labels: Vec<String> = points.iter().map(ToString::to_string).collect();
    Ok(json!({ "points": labels, "distances": rows }))
}

fn oracle_check(cfg: &SpaceConfig, depth: usize, samples: usize, seed: u64) -> Result<Value, CliError> {
    let g = ApproxGraph::build(cfg, depth, &[])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max = Rational::from_integer(0.into());
    let mut worst: Option<(String, String)> = None;
    for _ in 0..samples {
        let u = rng.gen_range(0..g.vertex_count());
        let v = rng.gen_range(0..g.vertex_count());
        let (x, y) = (g.point_at(cfg, u)?, g.point_at(cfg, v)?);
        let gap = (g.graph_distance(cfg, &x, &y)? - distance(cfg, &x, &y)?).abs();
        if gap > max {
            max = gap;
            worst = Some((x.to_string(), y.to_string()));
        }
    }
    if let Some((x, y)) = worst {
        return Err(CliError::Discrepancy(format!("{x} to {y} differs by {max}")));
    }
    Ok(json!({ "depth": depth, "samples": samples, "seed": seed, "max_discrepancy": fraction(&max) }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    match run(&cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("laakso: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
