use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use interdep_core::complexity::phi_total;
use interdep_core::hypergraph::run_inference;
use interdep_core::lattice::subsets_by_size;
use interdep_core::measures::{self, MeasureReport};
use interdep_core::simulator::correlation::correlation_table;
use interdep_core::simulator::experiment::{
    incremental_experiment, noise_experiment, partition_experiment, write_incremental_tsv, write_noise_tsv,
    write_partition_tsv, NoiseConfig, SweepSettings,
};
use interdep_core::simulator::{generate, DependencyKind, DependencySpec, RNG_NAME, VARIABLE_NAMES};
use interdep_core::{
    Dataset, Delimiter, DeltaSign, EdgeMeasure, EntropyCache, Error, InferConfig, LoadOptions, LogBase, NullConfig,
    NullStatistic, VariableSubset, VERSION,
};
use serde::Serialize;
use serde_json::json;

use crate::args::*;
use crate::Failure;

pub struct Context {
    pub log_base: LogBase,
    pub sign: DeltaSign,
    pub out: PathBuf,
    pub seed: u64,
}

impl Context {
    pub fn new(global: &GlobalArgs) -> Result<Self, Failure> {
        Ok(Self {
            log_base: LogBase::new(global.log_base)?,
            sign: if global.alternating_sign {
                DeltaSign::Alternating
            } else {
                DeltaSign::Product
            },
            out: global.out.clone(),
            seed: global.seed,
        })
    }

    fn out_path(&self, file: &str) -> Result<PathBuf, Failure> {
        fs::create_dir_all(&self.out).map_err(|e| Error::io(&self.out, e))?;
        Ok(self.out.join(file))
    }

    fn provenance(&self, command: &str, config: serde_json::Value) -> serde_json::Value {
        json!({
            "tool": "interdep",
            "version": VERSION,
            "command": command,
            "seed": self.seed,
            "rng": RNG_NAME,
            "log_base": self.log_base,
            "sign": self.sign,
            "config": config,
        })
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    Ok(BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?))
}

/// A file when `path` is given, standard output otherwise.
fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json_file<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))?;
    Ok(())
}

fn flush(mut out: Box<dyn Write>) -> Result<(), Failure> {
    out.flush().map_err(|e| Error::io("<output>", e))?;
    Ok(())
}

fn load(args: &InputArgs) -> Result<Dataset, Failure> {
    let delimiter = match args.delimiter {
        Some(DelimiterArg::Csv) => Delimiter::Csv,
        Some(DelimiterArg::Tsv) => Delimiter::Tsv,
        None => Delimiter::from_path(&args.input),
    };
    let options = LoadOptions {
        delimiter,
        header: !args.no_header,
        map_labels: args.labels,
        cardinalities: (!args.cardinality.is_empty()).then(|| args.cardinality.clone()),
    };
    Ok(Dataset::load(&args.input, &options)?)
}

fn input_config(args: &InputArgs, ds: &Dataset) -> serde_json::Value {
    json!({
        "input": args.input.file_name().map(|n| n.to_string_lossy().into_owned()),
        "fingerprint": ds.fingerprint(),
        "n_samples": ds.n_samples(),
        "variables": ds.variables(),
    })
}

/// A variable given by name, or by index when no name matches.
fn resolve(ds: &Dataset, spec: &str) -> Result<usize, Failure> {
    match ds.index_of(spec) {
        Ok(i) => Ok(i),
        Err(e) => match spec.parse::<usize>() {
            Ok(i) if i < ds.n_vars() => Ok(i),
            _ => Err(e.into()),
        },
    }
}

fn check_sigma(ds: &Dataset, sigma: usize, min: usize) -> Result<(), Failure> {
    if sigma < min || sigma > ds.n_vars() {
        return Err(Failure::Usage(format!(
            "--sigma {sigma} must be between {min} and the number of variables ({})",
            ds.n_vars()
        )));
    }
    Ok(())
}

fn names(ds: &Dataset, s: &VariableSubset) -> String {
    s.iter()
        .map(|i| ds.variables()[i].name.as_str())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn simulate(ctx: &Context, args: &SimulateArgs) -> Result<(), Failure> {
    let kind: DependencyKind = args.kind.into();
    let spec = DependencySpec {
        kind,
        n_samples: args.n,
        seed: ctx.seed,
    };
    let ds = generate(&spec)?;
    let path = match &args.output {
        Some(p) => p.clone(),
        None => ctx.out_path(&format!("{kind}_n{}_seed{}.csv", args.n, ctx.seed))?,
    };
    ds.write(&path, Delimiter::from_path(&path), true)?;
    let meta = json!({
        "provenance": ctx.provenance("simulate", json!({ "kind": kind, "n_samples": args.n })),
        "fingerprint": ds.fingerprint(),
        "variables": ds.variables(),
    });
    write_json_file(&path.with_extension("json"), &meta)?;
    println!("{}", path.display());
    Ok(())
}

pub fn measures(ctx: &Context, args: &MeasuresArgs) -> Result<(), Failure> {
    let ds = load(&args.input)?;
    let target = args.target.as_deref().map(|t| resolve(&ds, t)).transpose()?;
    check_sigma(&ds, args.sigma, if target.is_some() { 3 } else { 2 })?;
    let subsets: Vec<VariableSubset> = match target {
        Some(t) => subsets_by_size(ds.n_vars(), 3, args.sigma)
            .filter(|s| s.contains(t))
            .collect(),
        None => subsets_by_size(ds.n_vars(), 2, args.sigma).collect(),
    };
    let mut cache = EntropyCache::empty(&ds, ctx.log_base);
    cache.extend_closure(&ds, &subsets)?;
    let reports: Vec<MeasureReport> = subsets
        .iter()
        .map(|s| MeasureReport::compute(&cache, s, ctx.sign))
        .collect::<Result<_, _>>()?;

    let mut config = input_config(&args.input, &ds);
    config["sigma"] = json!(args.sigma);
    config["target"] = json!(target.map(|t| &ds.variables()[t].name));
    let provenance = ctx.provenance("measures", config);
    let mut out = sink(args.output.as_deref())?;
    let io = |e| Error::io("<output>", e);
    match (args.format, target) {
        (StreamFormat::Jsonl, _) => {
            serde_json::to_writer(&mut out, &json!({ "provenance": provenance })).map_err(Error::from)?;
            out.write_all(b"\n").map_err(io)?;
            measures::write_jsonl(&reports, &mut out)?;
        }
        (StreamFormat::Tsv, None) => {
            writeln!(out, "# {provenance}").map_err(io)?;
            measures::write_tsv(&reports, ds.variables(), &mut out)?;
        }
        (StreamFormat::Tsv, Some(t)) => {
            writeln!(out, "# {provenance}").map_err(io)?;
            writeln!(out, "subset\tsize\ttarget\tdelta\tsymmetric_delta").map_err(io)?;
            for r in &reports {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{:.6}\t{:.6e}",
                    names(&ds, &r.subset),
                    r.subset.len(),
                    ds.variables()[t].name,
                    r.delta_by_target[&t],
                    r.symmetric_delta
                )
                .map_err(io)?;
            }
        }
    }
    flush(out)
}

pub fn infer(ctx: &Context, args: &InferArgs) -> Result<(), Failure> {
    let ds = load(&args.input)?;
    check_sigma(&ds, args.sigma, 2)?;
    if !(args.quantile > 0.0 && args.quantile < 1.0) {
        return Err(Failure::Usage(format!(
            "--quantile {} must lie strictly between 0 and 1",
            args.quantile
        )));
    }
    if args.threshold.is_none() && args.n_perm == 0 {
        return Err(Failure::Usage("--n-perm must be at least 1".into()));
    }
    let config = InferConfig {
        sigma: args.sigma,
        target: args.target.as_deref().map(|t| resolve(&ds, t)).transpose()?,
        null: NullConfig {
            n_perm: args.n_perm,
            quantile: args.quantile,
            seed: ctx.seed,
            statistic: match args.null_statistic {
                NullArg::Max => NullStatistic::Max,
                NullArg::Pooled => NullStatistic::Pooled,
            },
        },
        absolute_threshold: args.threshold,
        measure: match args.measure {
            MeasureArg::Delta => EdgeMeasure::SymmetricDelta,
            MeasureArg::Phi => EdgeMeasure::Phi,
        },
        minimal: args.minimal,
        log_base: ctx.log_base,
        sign: ctx.sign,
    };
    let hg = run_inference(&ds, &config)?;
    let stem = match &args.name {
        Some(n) => n.clone(),
        None => args
            .input
            .input
            .file_stem()
            .map_or_else(|| "hypergraph".to_string(), |s| s.to_string_lossy().into_owned()),
    };
    let mut written = Vec::new();
    if matches!(args.format, GraphFormat::Json | GraphFormat::Both) {
        let path = ctx.out_path(&format!("{stem}.hypergraph.json"))?;
        hg.write_json(&path)?;
        written.push(path);
    }
    if matches!(args.format, GraphFormat::Dot | GraphFormat::Both) {
        let path = ctx.out_path(&format!("{stem}.hypergraph.dot"))?;
        hg.write_dot(&path)?;
        written.push(path);
    }
    println!("{} edges", hg.edges.len());
    for e in &hg.edges {
        println!("{}\t{}\t{:.6e}", e.members.len(), names(&ds, &e.members), e.weight);
    }
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

pub fn complexity(ctx: &Context, args: &ComplexityArgs) -> Result<(), Failure> {
    let ds = load(&args.input)?;
    check_sigma(&ds, args.sigma, 2)?;
    let cache = EntropyCache::populate(&ds, args.sigma, ctx.log_base)?;
    let report = phi_total(&cache, args.sigma, ctx.sign)?;
    let top = report.top_k(args.top_k);
    let mut config = input_config(&args.input, &ds);
    config["sigma"] = json!(args.sigma);
    config["top_k"] = json!(args.top_k);
    let provenance = ctx.provenance("complexity", config);
    let mut out = sink(args.output.as_deref())?;
    let io = |e| Error::io("<output>", e);
    match args.format {
        TableFormat::Json => {
            let value = json!({
                "provenance": provenance,
                "psi": report.psi,
                "phi_total": report.phi_total,
                "n_components": report.phi_by_subset.len(),
                "top": top,
            });
            let text = serde_json::to_string_pretty(&value).map_err(Error::from)?;
            writeln!(out, "{text}").map_err(io)?;
        }
        TableFormat::Tsv => {
            writeln!(out, "# {provenance}").map_err(io)?;
            writeln!(out, "psi\t{:.6}", report.psi).map_err(io)?;
            writeln!(out, "phi_total\t{:.6e}", report.phi_total).map_err(io)?;
            writeln!(out, "subset\tsize\tphi\tsymmetric_delta\tnormalizer").map_err(io)?;
            for c in top {
                writeln!(
                    out,
                    "{}\t{}\t{:.6e}\t{:.6e}\t{:.6}",
                    names(&ds, &c.members),
                    c.members.len(),
                    c.phi,
                    c.symmetric_delta,
                    c.normalizer
                )
                .map_err(io)?;
            }
        }
    }
    flush(out)
}

pub fn baseline(ctx: &Context, args: &BaselineArgs) -> Result<(), Failure> {
    let ds = load(&args.input)?;
    let table = correlation_table(&ds)?;
    let provenance = ctx.provenance("baseline", input_config(&args.input, &ds));
    let mut out = sink(args.output.as_deref())?;
    let io = |e| Error::io("<output>", e);
    match args.format {
        TableFormat::Json => {
            let value = json!({ "provenance": provenance, "pairs": table });
            let text = serde_json::to_string_pretty(&value).map_err(Error::from)?;
            writeln!(out, "{text}").map_err(io)?;
        }
        TableFormat::Tsv => {
            writeln!(out, "# {provenance}").map_err(io)?;
            writeln!(out, "a\tb\tpearson\tspearman\tdegenerate").map_err(io)?;
            for c in &table {
                writeln!(
                    out,
                    "{}\t{}\t{:.6}\t{:.6}\t{}",
                    ds.variables()[c.i].name,
                    ds.variables()[c.j].name,
                    c.pearson.r,
                    c.spearman.r,
                    c.pearson.degenerate || c.spearman.degenerate
                )
                .map_err(io)?;
            }
        }
    }
    flush(out)
}

fn simulated_index(name: &str) -> Result<usize, Failure> {
    VARIABLE_NAMES
        .iter()
        .position(|v| *v == name)
        .ok_or_else(|| Failure::Usage(format!("unknown variable {name:?}; expected one of {VARIABLE_NAMES:?}")))
}

pub fn experiment(ctx: &Context, args: &ExperimentArgs) -> Result<(), Failure> {
    let focus = VariableSubset::from_indices(
        args.focus
            .iter()
            .map(|n| simulated_index(n))
            .collect::<Result<Vec<_>, _>>()?,
    )?;
    if focus.len() < 2 {
        return Err(Failure::Usage("--focus needs at least two variables".into()));
    }
    let settings = SweepSettings {
        focus,
        log_base: ctx.log_base,
        sign: ctx.sign,
    };
    let base = |n| {
        generate(&DependencySpec {
            kind: DependencyKind::WOfXy,
            n_samples: n,
            seed: ctx.seed,
        })
    };
    let (name, config, result, tsv): (&str, serde_json::Value, serde_json::Value, Vec<u8>) = match &args.kind {
        ExperimentKind::Partition { n, sizes } => {
            let ds = base(*n)?;
            let reports = sizes
                .iter()
                .map(|&s| partition_experiment(&ds, s, &settings))
                .collect::<Result<Vec<_>, _>>()?;
            let mut tsv = Vec::new();
            write_partition_tsv(&reports, &mut tsv)?;
            (
                "partition",
                json!({ "n_samples": n, "sizes": sizes }),
                json!(reports),
                tsv,
            )
        }
        ExperimentKind::Incremental { n, step, count } => {
            let ds = base(*n)?;
            let report = incremental_experiment(&ds, *step, *count, &settings)?;
            let mut tsv = Vec::new();
            write_incremental_tsv(&report, &mut tsv)?;
            (
                "incremental",
                json!({ "n_samples": n, "step": step, "count": count }),
                json!(report),
                tsv,
            )
        }
        ExperimentKind::Noise {
            n,
            levels,
            replicates,
            step,
            noise_target,
        } => {
            let ds = base(*n)?;
            let config = NoiseConfig {
                levels: *levels,
                replicates: *replicates,
                step: *step,
                targets: noise_target
                    .iter()
                    .map(|t| simulated_index(t))
                    .collect::<Result<_, _>>()?,
                seed: ctx.seed,
            };
            let report = noise_experiment(&ds, &config, &settings)?;
            let mut tsv = Vec::new();
            write_noise_tsv(&report, &mut tsv)?;
            ("noise", json!({ "n_samples": n, "noise": config }), json!(report), tsv)
        }
    };
    let json_path = ctx.out_path(&format!("experiment_{name}.json"))?;
    let tsv_path = ctx.out_path(&format!("experiment_{name}.tsv"))?;
    write_json_file(
        &json_path,
        &json!({ "provenance": ctx.provenance(&format!("experiment {name}"), config), "report": result }),
    )?;
    fs::write(&tsv_path, &tsv).map_err(|e| Error::io(&tsv_path, e))?;
    io::stdout().write_all(&tsv).map_err(|e| Error::io("<stdout>", e))?;
    println!("wrote {}", json_path.display());
    println!("wrote {}", tsv_path.display());
    Ok(())
}
