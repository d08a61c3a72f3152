//! Ford domain command-line tools.
//!
//! Exit codes: 0 success (simple, no alarm), 1 usage or input error,
//! 2 not simple, 3 uncertain, 4 no sign change on the search interval,
//! 5 discreteness alarm.

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use fordom_cli::fmtnum::{fmt_complex, fmt_f64, parse_endpoint};
use fordom_cli::repdoc::parse_rep;
use fordom_cli::scene::{render_svg, scene_from_footprint, visibility_name};
use fordom_core::ford::{
    discreteness_alarm, face_pairing_check, ford_footprint, generator_spheres, is_simple_ford,
    SimpleVerdict, SphereRelation,
};
use fordom_core::geometry::{dual_geodesic, Geodesic, GeodesicRelation};
use fordom_core::group::{
    delta_generators, enumerate, example_simple_ford, prop42_family, thm43_family,
    CompressionBodyRep, FamilyTag,
};
use fordom_core::tunnel::{find_t0, lift_pair_distance, min_translate_distance, TunnelFamily};
use fordom_core::{BoundaryPoint, Tol};

const EXIT_OK: i32 = 0;
const EXIT_ERROR: i32 = 1;
const EXIT_NOT_SIMPLE: i32 = 2;
const EXIT_UNCERTAIN: i32 = 3;
const EXIT_NO_SIGN_CHANGE: i32 = 4;
const EXIT_ALARM: i32 = 5;

#[derive(Parser)]
#[command(name = "fordom", version, about = "Ford domains of compression-body groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Representation document (JSON) to load.
    #[arg(long, global = true, value_name = "FILE")]
    rep: Option<PathBuf>,

    /// Built-in example family.
    #[arg(long, global = true, value_enum, value_name = "NAME")]
    example: Option<ExampleKind>,

    /// Number of sphere-carrying generators (thm43).
    #[arg(long, global = true, value_name = "N")]
    n: Option<usize>,

    /// Family parameters, comma separated (thm43 wants n values).
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true,
        value_name = "T,.."
    )]
    t: Vec<f64>,

    /// Equality tolerance override; bisection tolerance for find-t0.
    #[arg(long, global = true, value_name = "EPS")]
    tol: Option<f64>,

    /// Visibility sampling resolution.
    #[arg(long, global = true, default_value_t = 64, value_name = "RES")]
    grid: usize,

    /// Word length bound for enumeration.
    #[arg(long, global = true, default_value_t = 2, value_name = "LEN")]
    max_word_len: usize,

    /// Lattice offset bound for enumeration.
    #[arg(long, global = true, default_value_t = 1, value_name = "B")]
    lattice_bound: i32,

    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Output format (svg applies to ford).
    #[arg(long, global = true, value_enum, default_value_t = Format::Report)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExampleKind {
    #[value(name = "simple-ford")]
    SimpleFord,
    #[value(name = "prop42")]
    Prop42,
    #[value(name = "thm43")]
    Thm43,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    #[value(name = "report")]
    Report,
    #[value(name = "svg")]
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Test whether the generator spheres cut out a simple Ford domain.
    #[command(name = "check-simple")]
    CheckSimple,
    /// Footprint of the Ford domain over the fundamental parallelogram.
    #[command(name = "ford")]
    Ford,
    /// Bisect a family parameter to the signed-area zero crossing.
    #[command(name = "find-t0")]
    FindT0 {
        /// Index of the varying generator.
        #[arg(long, default_value_t = 1, value_name = "K")]
        k: usize,
        /// Search interval (defaults to the full parameter range 0 4).
        #[arg(
            long,
            num_args = 2,
            allow_negative_numbers = true,
            value_names = ["LO", "HI"]
        )]
        interval: Option<Vec<f64>>,
    },
    /// Distance from a geodesic to its nearest group translate.
    #[command(name = "self-intersect")]
    SelfIntersect {
        /// Use the dual of I(delta_k) of the loaded family.
        #[arg(long, value_name = "K")]
        k: Option<usize>,
        /// Explicit geodesic by ideal endpoints ("re,im" or "inf").
        #[arg(
            long,
            num_args = 2,
            allow_hyphen_values = true,
            value_names = ["E1", "E2"]
        )]
        geodesic: Option<Vec<String>>,
    },
    /// Isometric sphere radius alarm over enumerated elements.
    #[command(name = "alarm")]
    Alarm,
    /// Face-pairing residuals of the generator spheres.
    #[command(name = "faces")]
    Faces,
}

struct Report {
    text: String,
}

impl Report {
    fn new(command: &str) -> Report {
        let mut report = Report {
            text: String::new(),
        };
        report.push("command", command);
        report
    }

    fn push(&mut self, key: &str, value: &str) {
        self.text.push_str(key);
        self.text.push_str(" = ");
        self.text.push_str(value);
        self.text.push('\n');
    }

    fn finish(self) -> String {
        self.text
    }
}

fn endpoint_name(p: BoundaryPoint) -> String {
    match p {
        BoundaryPoint::Infinity => "inf".into(),
        BoundaryPoint::Finite(z) => fmt_complex(z),
    }
}

fn push_geodesic(r: &mut Report, key: &str, g: &Geodesic) {
    let (a, b) = g.endpoints();
    r.push(&format!("{key}.e1"), &endpoint_name(a));
    r.push(&format!("{key}.e2"), &endpoint_name(b));
}

fn verdict_name(v: SimpleVerdict) -> &'static str {
    match v {
        SimpleVerdict::Simple => "simple",
        SimpleVerdict::NotSimple => "not_simple",
        SimpleVerdict::Uncertain => "uncertain",
    }
}

fn sphere_relation_name(rel: SphereRelation) -> &'static str {
    match rel {
        SphereRelation::Disjoint => "disjoint",
        SphereRelation::Tangent => "tangent",
        SphereRelation::Overlapping => "overlapping",
        SphereRelation::S1InsideS2 => "s1_inside_s2",
        SphereRelation::S2InsideS1 => "s2_inside_s1",
        SphereRelation::Equal => "equal",
    }
}

fn relation_name(rel: GeodesicRelation) -> &'static str {
    match rel {
        GeodesicRelation::Intersecting => "intersecting",
        GeodesicRelation::Disjoint => "disjoint",
        GeodesicRelation::Asymptotic => "asymptotic",
        GeodesicRelation::Equal => "equal",
    }
}

fn build_example(kind: ExampleKind, c: &Common) -> Result<CompressionBodyRep, String> {
    match kind {
        ExampleKind::SimpleFord => {
            if c.n.is_some() || !c.t.is_empty() {
                return Err("--n and --t do not apply to simple-ford".into());
            }
            Ok(example_simple_ford())
        }
        ExampleKind::Prop42 => {
            if c.n.is_some() {
                return Err("--n does not apply to prop42".into());
            }
            let t = match c.t.as_slice() {
                [] => 2.0,
                [t] => *t,
                _ => return Err("prop42 takes a single --t value".into()),
            };
            prop42_family(t).map_err(|e| e.to_string())
        }
        ExampleKind::Thm43 => {
            let n = c.n.unwrap_or(2);
            let ts = match c.t.as_slice() {
                [] => vec![2.0; n],
                given if given.len() == n => given.to_vec(),
                given => {
                    return Err(format!(
                        "--t needs {n} comma-separated values, got {}",
                        given.len()
                    ))
                }
            };
            thm43_family(n, &ts).map_err(|e| e.to_string())
        }
    }
}

fn resolve_rep(c: &Common) -> Result<CompressionBodyRep, String> {
    let mut rep = match (&c.rep, c.example) {
        (Some(_), Some(_)) => return Err("--rep and --example are mutually exclusive".into()),
        (None, None) => return Err("one of --rep or --example is required".into()),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            let (rep, warnings) = parse_rep(&text).map_err(|e| e.to_string())?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            rep
        }
        (None, Some(kind)) => build_example(kind, c)?,
    };
    if let Some(tol) = c.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err("--tol must be a positive finite number".into());
        }
        rep.tol = Tol::new(tol);
    }
    Ok(rep)
}

fn emit(c: &Common, text: &str) -> Result<(), String> {
    match &c.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => {
            use std::io::Write;
            // A consumer that stops reading (head, less) is not an error:
            // swallow EPIPE so the command still exits with its verdict code.
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(format!("stdout: {e}"))
                }
                _ => Ok(()),
            }
        }
    }
}

fn cmd_check_simple(c: &Common) -> Result<i32, String> {
    let rep = resolve_rep(c)?;
    let report = is_simple_ford(&rep).map_err(|e| e.to_string())?;
    let spheres = generator_spheres(&rep).map_err(|e| e.to_string())?;
    let mut r = Report::new("check-simple");
    r.push("verdict", verdict_name(report.verdict));
    r.push("min_gap", &fmt_f64(report.min_gap));
    for (i, s) in spheres.iter().enumerate() {
        let idx = i / 2 + 1;
        let label = if i % 2 == 0 {
            format!("g{idx}")
        } else {
            format!("G{idx}")
        };
        r.push(&format!("sphere.{label}.center"), &fmt_complex(s.center));
        r.push(&format!("sphere.{label}.radius"), &fmt_f64(s.radius));
    }
    if let Some((s1, s2, rel)) = &report.witness {
        r.push("witness.relation", sphere_relation_name(*rel));
        r.push("witness.sphere1.center", &fmt_complex(s1.center));
        r.push("witness.sphere1.radius", &fmt_f64(s1.radius));
        r.push("witness.sphere2.center", &fmt_complex(s2.center));
        r.push("witness.sphere2.radius", &fmt_f64(s2.radius));
    }
    emit(c, &r.finish())?;
    Ok(match report.verdict {
        SimpleVerdict::Simple => EXIT_OK,
        SimpleVerdict::NotSimple => EXIT_NOT_SIMPLE,
        SimpleVerdict::Uncertain => EXIT_UNCERTAIN,
    })
}

fn cmd_ford(c: &Common) -> Result<i32, String> {
    let rep = resolve_rep(c)?;
    let fp = ford_footprint(&rep, c.max_word_len, c.lattice_bound, c.grid)
        .map_err(|e| e.to_string())?;
    let scene = scene_from_footprint(&fp);
    let text = match c.format {
        Format::Svg => render_svg(&scene),
        Format::Report => {
            let mut r = Report::new("ford");
            r.push("max_word_len", &fp.max_len.to_string());
            r.push("lattice_bound", &fp.lattice_bound.to_string());
            r.push("grid", &fp.grid_res.to_string());
            r.push("parallelogram.base", &fmt_complex(scene.base));
            r.push("parallelogram.e1", &fmt_complex(scene.e1));
            r.push("parallelogram.e2", &fmt_complex(scene.e2));
            r.push("spheres", &scene.circles.len().to_string());
            for (i, circle) in scene.circles.iter().enumerate() {
                let key = |field: &str| format!("sphere.{i}.{field}");
                r.push(&key("owner"), &circle.owner);
                r.push(&key("center"), &fmt_complex(circle.center));
                r.push(&key("radius"), &fmt_f64(circle.radius));
                r.push(&key("visibility"), visibility_name(circle.visibility));
                if let Some(margin) = circle.margin {
                    r.push(&key("margin"), &fmt_f64(margin));
                }
            }
            r.finish()
        }
    };
    emit(c, &text)?;
    Ok(EXIT_OK)
}

fn cmd_find_t0(c: &Common, k: usize, interval: &Option<Vec<f64>>) -> Result<i32, String> {
    if c.rep.is_some() {
        return Err("find-t0 works on the built-in families; pass --example".into());
    }
    if !c.t.is_empty() {
        return Err("find-t0 searches the t parameter; do not pass --t".into());
    }
    let family = match c.example {
        Some(ExampleKind::Prop42) => {
            if c.n.is_some() {
                return Err("--n does not apply to prop42".into());
            }
            TunnelFamily::Prop42
        }
        Some(ExampleKind::Thm43) => TunnelFamily::Thm43 {
            n: c.n.unwrap_or(2),
        },
        Some(ExampleKind::SimpleFord) => {
            return Err("simple-ford is not a parameterized family".into())
        }
        None => return Err("find-t0 requires --example prop42 or --example thm43".into()),
    };
    let (lo, hi) = match interval {
        None => (0.0, 4.0),
        Some(v) => (v[0], v[1]),
    };
    let tol = c.tol.unwrap_or(1e-12);
    match find_t0(family, k, (lo, hi), tol) {
        Ok(f) => {
            let mut r = Report::new("find-t0");
            r.push(
                "family",
                match family {
                    TunnelFamily::Prop42 => "prop42",
                    TunnelFamily::Thm43 { .. } => "thm43",
                },
            );
            if let TunnelFamily::Thm43 { n } = family {
                r.push("n", &n.to_string());
            }
            r.push("k", &f.k.to_string());
            r.push("t0", &fmt_f64(f.t0));
            r.push("residual_area", &fmt_f64(f.residual_area));
            r.push("lift_distance", &fmt_f64(f.lift_distance_at_t0));
            r.push("betweenness", &f.betweenness.to_string());
            push_geodesic(&mut r, "witness.a", &f.witness.0);
            push_geodesic(&mut r, "witness.b", &f.witness.1);
            emit(c, &r.finish())?;
            Ok(EXIT_OK)
        }
        Err(fordom_core::Error::NoSignChange) => {
            eprintln!(
                "error: signed area does not change sign on [{}, {}]",
                fmt_f64(lo),
                fmt_f64(hi)
            );
            Ok(EXIT_NO_SIGN_CHANGE)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn cmd_self_intersect(
    c: &Common,
    k: Option<usize>,
    geodesic: &Option<Vec<String>>,
) -> Result<i32, String> {
    let rep = resolve_rep(c)?;
    let mut r = Report::new("self-intersect");
    let g = match (k, geodesic) {
        (Some(_), Some(_)) => return Err("--k and --geodesic are mutually exclusive".into()),
        (None, None) => return Err("one of --k or --geodesic is required".into()),
        (Some(k), None) => {
            let delta = match &rep.family {
                Some(FamilyTag::Prop42 { .. }) => {
                    if k != 1 {
                        return Err("prop42 has k = 1 only".into());
                    }
                    rep.gammas[1].inverse().compose(&rep.gammas[0])
                }
                Some(FamilyTag::Thm43 { n, .. }) => {
                    if k == 0 || k >= *n {
                        return Err(format!("k must lie in 1..{n}"));
                    }
                    delta_generators(&rep).map_err(|e| e.to_string())?[k - 1]
                }
                _ => {
                    return Err(
                        "--k needs a parameterized family (--example prop42 or thm43)".into(),
                    )
                }
            };
            r.push("k", &k.to_string());
            let (dist, rel) = lift_pair_distance(&rep, k).map_err(|e| e.to_string())?;
            r.push("lift_distance", &fmt_f64(dist));
            r.push("lift_relation", relation_name(rel));
            dual_geodesic(&delta).map_err(|e| e.to_string())?
        }
        (None, Some(ends)) => {
            let e1 = parse_endpoint(&ends[0])?;
            let e2 = parse_endpoint(&ends[1])?;
            Geodesic::new(e1, e2).map_err(|e| e.to_string())?
        }
    };
    push_geodesic(&mut r, "geodesic", &g);
    let (dist, (left, right)) =
        min_translate_distance(&rep, &g, c.max_word_len, c.lattice_bound)
            .map_err(|e| e.to_string())?;
    r.push("min_translate_distance", &fmt_f64(dist));
    r.push("witness.left", &left.to_string());
    r.push("witness.right", &right.to_string());
    emit(c, &r.finish())?;
    Ok(EXIT_OK)
}

fn cmd_alarm(c: &Common) -> Result<i32, String> {
    let rep = resolve_rep(c)?;
    let elements =
        enumerate(&rep, c.max_word_len, c.lattice_bound).map_err(|e| e.to_string())?;
    let report = discreteness_alarm(&rep, &elements);
    let mut r = Report::new("alarm");
    r.push("alarm", &report.alarm.to_string());
    r.push("threshold", &fmt_f64(report.threshold));
    r.push("offenders", &report.offenders.len().to_string());
    for (i, (word, radius)) in report.offenders.iter().enumerate() {
        r.push(&format!("offender.{i}.word"), &word.to_string());
        r.push(&format!("offender.{i}.radius"), &fmt_f64(*radius));
    }
    emit(c, &r.finish())?;
    Ok(if report.alarm { EXIT_ALARM } else { EXIT_OK })
}

fn cmd_faces(c: &Common) -> Result<i32, String> {
    let rep = resolve_rep(c)?;
    let report = face_pairing_check(&rep).map_err(|e| e.to_string())?;
    let mut r = Report::new("faces");
    r.push("pass", &report.pass.to_string());
    for (i, residual) in report.residuals.iter().enumerate() {
        r.push(&format!("residual.g{}", i + 1), &fmt_f64(*residual));
    }
    emit(c, &r.finish())?;
    Ok(EXIT_OK)
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_ERROR,
            };
            let _ = e.print();
            return code;
        }
    };
    if cli.common.format == Format::Svg && !matches!(cli.command, Command::Ford) {
        eprintln!("error: --format svg applies to the ford subcommand only");
        return EXIT_ERROR;
    }
    let result = match &cli.command {
        Command::CheckSimple => cmd_check_simple(&cli.common),
        Command::Ford => cmd_ford(&cli.common),
        Command::FindT0 { k, interval } => cmd_find_t0(&cli.common, *k, interval),
        Command::SelfIntersect { k, geodesic } => cmd_self_intersect(&cli.common, *k, geodesic),
        Command::Alarm => cmd_alarm(&cli.common),
        Command::Faces => cmd_faces(&cli.common),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_ERROR
        }
    }
}

fn main() {
    std::process::exit(run());
}
