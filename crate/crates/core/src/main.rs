use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use gsketch::estimators::{estimate_mst_weight_cfg, estimate_num_cc_cfg, estimate_num_scc, EstimateReport, SccConfig};
use gsketch::experiment::{run_experiment, space_sweep, verify_stream, ExperimentSpec};
use gsketch::generate::{
    self, gen_bhh_variant, gen_planted, shuffle_with_deletions, BhhInstance, BhhVariant, PlantedKind, Promise,
};
use gsketch::oracle::{Distance, ExplicitGraph, Property};
use gsketch::probe::Backend;
use gsketch::sketch::hash::derive;
use gsketch::testers::{
    test_connectivity, test_cycle_freeness, test_eulerianity, test_k_edge_connectivity, test_k_vertex_connectivity,
    test_planar_bipartiteness, Decision, TesterConfig, Verdict,
};
use gsketch::{Error, Stream};

/// Exit status for I/O, parse and parameter errors.
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "gsketch", version, about = "Sketching algorithms for dynamic graph streams")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Independent repetitions: median for estimates, majority for testers.
    #[arg(long, global = true, default_value_t = 1)]
    runs: u32,
    /// Worker threads for experiments (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance (stream file plus `<out>.cert.json`).
    #[command(subcommand)]
    Gen(GenCmd),
    /// Check a stream file for illegal updates.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Run an estimator.
    Estimate {
        what: EstimateKind,
        #[command(flatten)]
        common: AlgoArgs,
        /// Moment parameter of the small-component estimator.
        #[arg(long, default_value_t = 1)]
        t: u32,
        /// Accuracy parameter of the component-count reduction.
        #[arg(long, default_value_t = 1)]
        q: u32,
        /// Skip isolated sampled vertices.
        #[arg(long)]
        ignore_singletons: bool,
    },
    /// Run a property tester. Exit code 0 accept, 1 reject, 2 fail.
    Test {
        what: TestKind,
        #[command(flatten)]
        common: AlgoArgs,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        t: u32,
        /// Sketch failure probability.
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Exact reference computations.
    Oracle {
        what: OracleKind,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = PropertyArg::Connectivity)]
        property: PropertyArg,
        /// Size cutoff for `cc` small-component counts.
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// Monte-Carlo experiment from a JSON spec, or a sketch-size sweep.
    Experiment {
        spec: Option<PathBuf>,
        /// Sweep the connectivity tester's sketch size over these n.
        #[arg(long, value_delimiter = ',')]
        space_sweep: Option<Vec<u32>>,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct AlgoArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    eps: f64,
    /// Vertex sampling probability override.
    #[arg(long)]
    p: Option<f64>,
    /// Replace sketches with exact answers (same sampling).
    #[arg(long)]
    exact: bool,
}

impl AlgoArgs {
    fn backend(&self) -> Backend {
        if self.exact {
            Backend::Exact
        } else {
            Backend::Sketch
        }
    }
}

#[derive(Subcommand)]
enum GenCmd {
    /// Hidden-hypermatching gadget graph.
    Bhh {
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long)]
        nb: usize,
        #[arg(long)]
        t: usize,
        /// 0: Mx + w = 0, 1: Mx + w = 1.
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        promise: u8,
        /// Heavy edge weight for the MST variant.
        #[arg(long, default_value_t = 2)]
        weight: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Planted far family.
    Planted {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long, default_value_t = 16)]
        gadgets: usize,
        #[arg(long, default_value_t = 2)]
        clique: usize,
        #[arg(long, default_value_t = 0.1)]
        fraction: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random families.
    Random {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: u32,
        /// Extra edges (connected), trees (forest), or edge probability x1000 (gnp).
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[arg(long, default_value_t = 1)]
        max_weight: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-emit a stream with insert/delete churn.
    Churn {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        churn: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Connectivity,
    Mst,
    Cyclefree,
    Bipartite,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Components,
    FarKedge,
    PendantCliques,
    Triangles,
    OddDegree,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Tree,
    Forest,
    Connected,
    Gnp,
    Cycle,
    Path,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimateKind {
    Scc,
    Cc,
    Mst,
}

#[derive(Clone, Copy, ValueEnum)]
enum TestKind {
    Conn,
    Kedge,
    Kvertex,
    Cyclefree,
    Bipartite,
    Euler,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Cc,
    Mst,
    Edgeconn,
    Vertexconn,
    Distance,
    Euler,
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyArg {
    Connectivity,
    Cyclefree,
    Bipartite,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> gsketch::Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        println!("{}", text());
    }
    Ok(())
}

fn write_cert<T: Serialize>(out: &Path, cert: &T) -> gsketch::Result<()> {
    let mut p = out.as_os_str().to_owned();
    p.push(".cert.json");
    std::fs::write(PathBuf::from(p), serde_json::to_vec_pretty(cert)?)?;
    Ok(())
}

fn run(cli: Cli) -> gsketch::Result<u8> {
    if let Some(t) = cli.threads {
        // Only fails if a global pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    if cli.runs == 0 {
        return Err(Error::InvalidParameter("--runs must be at least 1".into()));
    }
    match cli.cmd {
        Cmd::Gen(g) => run_gen(g, cli.seed, cli.json),
        Cmd::Verify { input } => {
            let r = verify_stream(&input)?;
            emit(cli.json, &r, || match (&r.error, r.line, r.index) {
                (None, _, _) => format!("ok: n = {}, {} updates, {} final edges", r.n.unwrap_or(0), r.updates, r.edges.unwrap_or(0)),
                (Some(e), Some(l), _) => format!("illegal stream at line {l}: {e}"),
                (Some(e), None, Some(i)) => format!("illegal stream at update {i}: {e}"),
                (Some(e), None, None) => format!("invalid stream: {e}"),
            })?;
            Ok(if r.ok { 0 } else { 1 })
        }
        Cmd::Estimate {
            what,
            common,
            t,
            q,
            ignore_singletons,
        } => {
            let stream = Stream::load(&common.input)?;
            let mut reports = Vec::new();
            for i in 0..cli.runs {
                let seed = if cli.runs == 1 { cli.seed } else { derive(cli.seed, i as u64) };
                let r = match what {
                    EstimateKind::Scc => {
                        let cfg = SccConfig {
                            eps: common.eps,
                            t,
                            p: common.p,
                            max_size: None,
                            seed,
                            backend: common.backend(),
                        };
                        estimate_num_scc(&stream, &cfg, ignore_singletons)?
                    }
                    EstimateKind::Cc => estimate_num_cc_cfg(&stream, common.eps, q, seed, common.p, common.backend())?,
                    EstimateKind::Mst => estimate_mst_weight_cfg(&stream, common.eps, q, seed, common.p, common.backend())?,
                };
                reports.push(r);
            }
            let median = median_estimate(&reports);
            let out = json!({
                "value": median,
                "aborted": median.is_none(),
                "samples": reports.iter().map(|r| r.samples).max(),
                "sketch_words": reports.iter().map(|r| r.sketch_words).max(),
                "seed": cli.seed,
                "runs": reports,
            });
            emit(cli.json, &out, || match median {
                Some(v) => format!("{v}"),
                None => "aborted".to_string(),
            })?;
            Ok(if median.is_some() { 0 } else { 2 })
        }
        Cmd::Test {
            what,
            common,
            k,
            t,
            delta,
        } => {
            let stream = Stream::load(&common.input)?;
            let mut verdicts = Vec::new();
            for i in 0..cli.runs {
                let seed = if cli.runs == 1 { cli.seed } else { derive(cli.seed, i as u64) };
                let mut cfg = TesterConfig::new(common.eps, seed).with_k(k).with_backend(common.backend());
                cfg.p = common.p;
                cfg.t = t;
                cfg.delta = delta;
                let v = match what {
                    TestKind::Conn => test_connectivity(&stream, &cfg)?,
                    TestKind::Kedge => test_k_edge_connectivity(&stream, &cfg)?,
                    TestKind::Kvertex => test_k_vertex_connectivity(&stream, &cfg)?,
                    TestKind::Cyclefree => test_cycle_freeness(&stream, &cfg)?,
                    TestKind::Bipartite => test_planar_bipartiteness(&stream, &cfg)?,
                    TestKind::Euler => test_eulerianity(&stream, &cfg)?,
                };
                verdicts.push(v);
            }
            let decision = majority(&verdicts);
            if cli.json {
                if verdicts.len() == 1 {
                    emit(true, &verdicts[0], String::new)?;
                } else {
                    let rep = verdicts.iter().find(|v| v.decision == decision).unwrap_or(&verdicts[0]);
                    let out = json!({
                        "decision": decision,
                        "witness": rep.witness,
                        "stats": rep.stats,
                        "runs": verdicts,
                    });
                    emit(true, &out, String::new)?;
                }
            } else {
                println!("{}", describe(decision, &verdicts));
                for w in verdicts.iter().flat_map(|v| &v.warnings) {
                    eprintln!("warning: {w}");
                }
            }
            Ok(decision.exit_code() as u8)
        }
        Cmd::Oracle {
            what,
            input,
            property,
            max_size,
        } => run_oracle(what, &input, property, max_size, cli.json),
        Cmd::Experiment {
            spec,
            space_sweep: sweep,
            eps,
            out,
        } => {
            let value = match (spec, sweep) {
                (Some(path), None) => {
                    let mut spec = ExperimentSpec::load(&path)?;
                    if out.is_some() {
                        spec.output = None;
                    }
                    serde_json::to_value(run_experiment(&spec)?)?
                }
                (None, Some(ns)) => serde_json::to_value(space_sweep(eps, &ns, cli.seed)?)?,
                _ => {
                    return Err(Error::InvalidParameter(
                        "give either a spec file or --space-sweep n1,n2,...".into(),
                    ))
                }
            };
            let text = serde_json::to_string_pretty(&value)?;
            match out {
                Some(p) => std::fs::write(p, text)?,
                None => println!("{text}"),
            }
            Ok(0)
        }
    }
}

fn median_estimate(reports: &[EstimateReport]) -> Option<f64> {
    let mut vals: Vec<f64> = reports.iter().filter_map(|r| r.value).collect();
    if vals.is_empty() {
        return None;
    }
    vals.sort_by(|a, b| a.total_cmp(b));
    let mid = vals.len() / 2;
    Some(if vals.len() % 2 == 1 { vals[mid] } else { (vals[mid - 1] + vals[mid]) / 2.0 })
}

/// Majority over non-failed runs; ties and all-fail give `Fail`.
fn majority(verdicts: &[Verdict]) -> Decision {
    let acc = verdicts.iter().filter(|v| v.decision == Decision::Accept).count();
    let rej = verdicts.iter().filter(|v| v.decision == Decision::Reject).count();
    match acc.cmp(&rej) {
        std::cmp::Ordering::Greater => Decision::Accept,
        std::cmp::Ordering::Less => Decision::Reject,
        std::cmp::Ordering::Equal => Decision::Fail,
    }
}

fn describe(decision: Decision, verdicts: &[Verdict]) -> String {
    let word = match decision {
        Decision::Accept => "accept",
        Decision::Reject => "reject",
        Decision::Fail => "fail",
    };
    if verdicts.len() == 1 {
        let v = &verdicts[0];
        format!(
            "{word} ({}; {} sampled, {} sketch words)",
            v.reason, v.stats.samples, v.stats.sketch_words
        )
    } else {
        format!("{word} (majority of {} runs)", verdicts.len())
    }
}

fn run_gen(g: GenCmd, seed: u64, json_out: bool) -> gsketch::Result<u8> {
    let (stream, out) = match g {
        GenCmd::Bhh {
            variant,
            nb,
            t,
            promise,
            weight,
            out,
        } => {
            let promise = if promise == 1 { Promise::AllOnes } else { Promise::AllZeros };
            let inst = BhhInstance::random(nb, t, promise, seed)?;
            let variant = match variant {
                VariantArg::Connectivity => BhhVariant::Connectivity,
                VariantArg::Mst => BhhVariant::Mst { max_weight: weight },
                VariantArg::Cyclefree => BhhVariant::CycleFree,
                VariantArg::Bipartite => BhhVariant::Bipartite,
            };
            let (s, label) = gen_bhh_variant(&inst, variant)?;
            write_cert(&out, &json!({ "instance": inst, "variant": variant, "label": label }))?;
            (s, out)
        }
        GenCmd::Planted {
            kind,
            n,
            count,
            max_size,
            k,
            gadgets,
            clique,
            fraction,
            out,
        } => {
            let kind = match kind {
                KindArg::Components => PlantedKind::Components { count, max_size },
                KindArg::FarKedge => PlantedKind::FarFromKEdge { k, gadgets },
                KindArg::PendantCliques => PlantedKind::PendantCliques { k, gadgets, clique },
                KindArg::Triangles => PlantedKind::TriangleSoup,
                KindArg::OddDegree => PlantedKind::OddDegree { fraction },
            };
            let (s, cert) = gen_planted(kind, n, seed)?;
            write_cert(&out, &json!({ "kind": kind, "certificate": cert }))?;
            (s, out)
        }
        GenCmd::Random {
            family,
            n,
            extra,
            max_weight,
            out,
        } => {
            let s = match family {
                FamilyArg::Tree => generate::random_tree(n, seed),
                FamilyArg::Forest => generate::random_forest(n, extra.max(1) as u32, seed),
                FamilyArg::Connected => generate::random_connected(n, extra, max_weight, seed),
                FamilyArg::Gnp => generate::erdos_renyi(n, extra as f64 / 1000.0, seed),
                FamilyArg::Cycle => generate::cycle(n),
                FamilyArg::Path => generate::path(n),
            };
            (s, out)
        }
        GenCmd::Churn { input, churn, out } => {
            let s = shuffle_with_deletions(&Stream::load(&input)?, churn, seed)?;
            (s, out)
        }
    };
    stream.save(&out)?;
    let summary = json!({ "out": out, "n": stream.n(), "updates": stream.updates.len() });
    emit(json_out, &summary, || format!("wrote {} updates on n = {} to {}", stream.updates.len(), stream.n(), out.display()))?;
    Ok(0)
}

fn run_oracle(what: OracleKind, input: &Path, property: PropertyArg, max_size: Option<usize>, json_out: bool) -> gsketch::Result<u8> {
    let g = ExplicitGraph::from_stream(&Stream::load(input)?)?;
    let value = match what {
        OracleKind::Cc => {
            let mut v = json!({ "components": g.cc_count() });
            if let Some(s) = max_size {
                v["small_components"] = json!(g.scc_count(s));
            }
            v
        }
        OracleKind::Mst => match g.mst_weight() {
            Ok(w) => json!({ "mst_weight": w, "cc_per_level": g.cc_per_level(g.max_weight().max(1)) }),
            Err(_) => json!({ "mst_weight": null, "disconnected": true }),
        },
        OracleKind::Edgeconn => json!({ "edge_connectivity": g.edge_connectivity()? }),
        OracleKind::Vertexconn => json!({ "vertex_connectivity": g.vertex_connectivity()? }),
        OracleKind::Distance => {
            let p = match property {
                PropertyArg::Connectivity => Property::Connectivity,
                PropertyArg::Cyclefree => Property::CycleFree,
                PropertyArg::Bipartite => Property::Bipartite,
            };
            match g.distance(p) {
                Distance::Exact(d) => json!({ "distance": d, "m": g.m() }),
                Distance::Unavailable => json!({ "distance": null, "m": g.m() }),
            }
        }
        OracleKind::Euler => json!({ "eulerian": g.is_eulerian(), "odd_vertices": g.odd_degree_vertices() }),
    };
    emit(json_out, &value, || {
        value
            .as_object()
            .map(|o| o.iter().map(|(k, v)| format!("{k}: {v}")).collect::<Vec<_>>().join("\n"))
            .unwrap_or_default()
    })?;
    Ok(0)
}
