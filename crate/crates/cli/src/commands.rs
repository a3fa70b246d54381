use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;

use ionscreen::chem::{canonicalize, parse_smiles, Molecule};
use ionscreen::corpus::{labeled_synthetic_dataset, IonLibrary, BUNDLED_DATASET};
use ionscreen::datasets::{
    build_hydration_benchmark, format_float, generate_synthetic_systems, read_records, Category,
    Format, Pools, Property, PseudoLabelConfig, Role, SystemRecord,
};
use ionscreen::descriptors::{compute_descriptors, DESCRIPTOR_NAMES};
use ionscreen::evalharness::{
    cross_validate, make_split, rank_aggregate, DatasetTable, MetricMeans, MetricReport,
    SplitScheme, DEFAULT_FOLDS,
};
use ionscreen::featurize::{assemble_system, write_jsonl};
use ionscreen::fingerprints::{combined_similarity_matrix, fingerprint};
use ionscreen::plotdata::{label_histograms, rank_table_csv, SimilarityPlot};
use ionscreen::predictor::{
    train_on_records, Activation, ExternalPredictor, MlpConfig, ModelSpec, Predictor,
    RegressionModel,
};
use ionscreen::screening::{
    beam_search, hydration_benchmark_estimates, hydration_dg, il_organic_transfer, modify_anion,
    modify_side_chain, top_k_seeds, Candidate, LookupPredictor, Provenance, RolePool,
    SearchConfig, SearchResult,
};

use crate::args::{
    ActivationArg, Cli, Command, ModelArgs, ModelKindArg, ModifyArgs, PredictorSource,
    SearchArgs, TableFormat, ThermoOp,
};
use crate::config::{self, read_structured, FileConfig, DEFAULT_SEED};
use crate::error::{CliError, CliResult};
use crate::io::{
    create_output, load_records, output_error, read_pool, read_smiles_list, save_records,
    write_all, SmilesLine,
};

pub const DEFAULT_RIDGE_LAMBDA: f64 = 1.0;

struct Context {
    file: FileConfig,
    seed: u64,
    /// The seed came from a flag or the config file rather than the default.
    seed_explicit: bool,
}

pub fn run(cli: Cli) -> CliResult<()> {
    let file = config::load(cli.config.as_deref())?;
    let threads = cli.threads.map(|t| t as usize).or(file.threads);
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::config(format!("thread pool: {e}")))?;
    }
    let explicit = cli.seed.or(file.seed);
    let ctx = Context {
        seed: explicit.unwrap_or(DEFAULT_SEED),
        seed_explicit: explicit.is_some(),
        file,
    };
    match cli.command {
        Command::Canonicalize { input, output } => cmd_canonicalize(input.as_deref(), output.as_deref()),
        Command::Descriptors {
            input,
            output,
            format,
        } => cmd_descriptors(input.as_deref(), output.as_deref(), format),
        Command::Featurize { records, output } => {
            let recs = load_records(records.input.as_deref(), records.format())?;
            let graphs = recs
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    assemble_system(r).map_err(|e| {
                        CliError::new("E_FEATURIZE", format!("record {}: {e}", i + 1))
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            let mut out = create_output(output.as_deref())?;
            write_jsonl(&mut out, &graphs).map_err(|e| output_error(output.as_deref(), e))
        }
        Command::Fingerprint {
            input,
            output,
            kind,
            nbits,
        } => {
            let entries = read_smiles_list(input.as_deref())?;
            let mut text = String::from("smiles,kind,nbits,popcount,hex\n");
            for e in &entries {
                let mol = parse_line(e)?;
                let fp = fingerprint(&mol, kind, nbits)?;
                let _ = writeln!(
                    text,
                    "{},{kind},{nbits},{},{}",
                    canonical_of(e)?,
                    fp.popcount(),
                    fp.to_hex()
                );
            }
            write_all(output.as_deref(), &text)
        }
        Command::Similarity {
            input,
            output,
            order_output,
            json_output,
            kinds,
            nbits,
        } => {
            let entries = read_smiles_list(input.as_deref())?;
            let mols = entries.iter().map(parse_line).collect::<CliResult<Vec<_>>>()?;
            let labels = entries
                .iter()
                .map(|e| match &e.name {
                    Some(n) => Ok(n.clone()),
                    None => canonical_of(e),
                })
                .collect::<CliResult<Vec<_>>>()?;
            let matrix = combined_similarity_matrix(&mols, &kinds, nbits)?;
            let plot = SimilarityPlot::new(labels, matrix)?;
            write_all(output.as_deref(), &plot.matrix_csv())?;
            if let Some(p) = order_output {
                write_all(Some(&p), &plot.order_csv())?;
            }
            if let Some(p) = json_output {
                write_json(Some(&p), &plot)?;
            }
            Ok(())
        }
        Command::Split {
            records,
            scheme,
            k,
            output,
        } => {
            let recs = load_records(records.input.as_deref(), records.format())?;
            let scheme = scheme.or(ctx.file.scheme).unwrap_or(SplitScheme::Cation);
            let k = k.or(ctx.file.k).unwrap_or(DEFAULT_FOLDS);
            let plan = make_split(&recs, scheme, k, ctx.seed)?;
            log::info!("fold group counts: {:?}", plan.group_counts());
            write_json(output.as_deref(), &plan)
        }
        Command::Train {
            records,
            property,
            model,
            output,
        } => {
            let recs = load_records(records.input.as_deref(), records.format())?;
            let property = resolve_property(property.or(ctx.file.property), &recs)?;
            let specs = model_specs(&ctx, &model)?;
            if specs.len() != 1 {
                return Err(CliError::config("train takes a single --model"));
            }
            let features = feature_config(&ctx, &model);
            let m = train_on_records(&recs, property, &specs[0], &features)?;
            m.save(&output)?;
            log::info!("trained {} model for {property}", specs[0].name());
            Ok(())
        }
        Command::Evaluate {
            input,
            format,
            property,
            scheme,
            k,
            model,
            output,
            table_output,
            plot_dir,
            bins,
        } => {
            let (recs, dataset) = match &input {
                Some(p) => (
                    load_records(Some(p), format.map(Format::from))?,
                    p.file_stem().map_or("input".into(), |s| s.to_string_lossy().into_owned()),
                ),
                None => (read_records(BUNDLED_DATASET.as_bytes(), Format::Csv)?, "bundled".into()),
            };
            let property = resolve_property(property.or(ctx.file.property), &recs)?;
            let labeled: Vec<SystemRecord> = recs
                .iter()
                .filter(|r| r.property == Some(property) && r.value.is_some())
                .cloned()
                .collect();
            let scheme = scheme.or(ctx.file.scheme).unwrap_or(SplitScheme::Cation);
            let k = k.or(ctx.file.k).unwrap_or(DEFAULT_FOLDS);
            let plan = make_split(&labeled, scheme, k, ctx.seed)?;
            let specs = model_specs(&ctx, &model)?;
            let features = feature_config(&ctx, &model);
            let mut reports = Vec::with_capacity(specs.len());
            for spec in &specs {
                let report = cross_validate(&labeled, &plan, spec, property, &features)?;
                reports.push((spec.name().to_string(), report));
            }
            if let [(_, report)] = reports.as_slice() {
                write_json(output.as_deref(), report)?;
            } else {
                #[derive(Serialize)]
                struct Named<'a> {
                    model: &'a str,
                    report: &'a MetricReport,
                }
                let named: Vec<Named> = reports
                    .iter()
                    .map(|(m, r)| Named { model: m, report: r })
                    .collect();
                write_json(output.as_deref(), &named)?;
            }
            if let Some(p) = table_output {
                let mut text = format!("{}\n", MetricReport::CSV_HEADER);
                for (m, r) in &reports {
                    let _ = writeln!(text, "{}", r.csv_row(m));
                }
                write_all(Some(&p), &text)?;
            }
            if let Some(dir) = plot_dir {
                emit_plot_data(&dir, &dataset, &reports, &labeled, bins)?;
            }
            Ok(())
        }
        Command::Search {
            seeds,
            format,
            cation_pool,
            anion_pool,
            solute_pool,
            solvent_pool,
            top_k,
            iterations,
            predictor,
            search,
        } => {
            let records = load_records(Some(&seeds), format.map(Format::from))?;
            let mut pools = Vec::new();
            for (role, path) in [
                (Role::Cation, cation_pool),
                (Role::Anion, anion_pool),
                (Role::Solute, solute_pool),
                (Role::Solvent, solvent_pool),
            ] {
                if let Some(p) = path {
                    pools.push(RolePool {
                        role,
                        molecules: read_pool(&p)?,
                    });
                }
            }
            if pools.is_empty() {
                return Err(CliError::config(
                    "search needs at least one of --cation-pool, --anion-pool, --solute-pool, --solvent-pool",
                ));
            }
            let mut cfg = search_config(&ctx, &search, SearchConfig::default())?;
            if let Some(k) = top_k {
                cfg.top_k = k;
            }
            if let Some(it) = iterations {
                cfg.iterations = it;
            }
            let (pred, pred_property) = load_predictor(&predictor, &search, cfg.property)?;
            cfg.property = cfg.property.or(pred_property);
            let top = top_k_seeds(&records, pred.as_ref(), &cfg)?;
            let seeds: Vec<SystemRecord> = top.candidates.iter().map(|c| c.record.clone()).collect();
            let result = beam_search(&seeds, &pools, pred.as_ref(), &cfg)?;
            write_search_result(&result, &search)
        }
        Command::ModifyAnion(args) => cmd_modify(&ctx, args, Role::Anion),
        Command::ModifyCation(args) => cmd_modify(&ctx, args, Role::Cation),
        Command::Thermo { op } => {
            let v = match op {
                ThermoOp::Hydration {
                    solvation,
                    transfer,
                } => hydration_dg(solvation, transfer),
                ThermoOp::IlOrganic {
                    transfer_il_water,
                    transfer_org_water,
                } => il_organic_transfer(transfer_il_water, transfer_org_water),
            };
            write_all(None, &format!("{v}\n"))
        }
        Command::GenSynthetic {
            n,
            categories,
            label,
            cations,
            anions,
            solutes,
            solvents,
            output,
            format,
        } => {
            let library = IonLibrary::build();
            let pick = |path: Option<&Path>, default: &[String]| -> CliResult<Vec<String>> {
                match path {
                    Some(p) => read_pool(p),
                    None => Ok(default.to_vec()),
                }
            };
            let pools = Pools::new(
                &pick(cations.as_deref(), &library.cations)?,
                &pick(anions.as_deref(), &library.anions)?,
                &pick(solutes.as_deref(), &library.solutes)?,
                &pick(solvents.as_deref(), &library.solvents)?,
            )?;
            let records = match label {
                None => generate_synthetic_systems(&pools, n, ctx.seed, &categories)?,
                Some(property) => {
                    let category = match categories.as_slice() {
                        [c] => *c,
                        [] => property.allowed_categories()[0],
                        _ => {
                            return Err(CliError::config(
                                "--label needs at most one --category",
                            ))
                        }
                    };
                    labeled_synthetic_dataset(&pools, n, ctx.seed, category, property)?
                }
            };
            save_records(output.as_deref(), format.map(Format::from), &records)
        }
        Command::HydrationBenchmark {
            records,
            output,
            solvation_model,
            transfer_model,
            estimates,
        } => {
            let recs = load_records(records.input.as_deref(), records.format())?;
            let virtuals = build_hydration_benchmark(&recs, ctx.seed)?;
            save_records(output.as_deref(), None, &virtuals)?;
            if let (Some(s), Some(t), Some(e)) = (solvation_model, transfer_model, estimates) {
                let solv = RegressionModel::load(&s)?;
                let trans = RegressionModel::load(&t)?;
                let est = hydration_benchmark_estimates(&virtuals, &solv, &trans)?;
                write_json(Some(&e), &est)?;
            }
            Ok(())
        }
    }
}

fn parse_line(e: &SmilesLine) -> CliResult<Molecule> {
    parse_smiles(&e.smiles).map_err(|err| CliError::new("E_SMILES", format!("line {}: {err}", e.line)))
}

fn canonical_of(e: &SmilesLine) -> CliResult<String> {
    canonicalize(&e.smiles).map_err(|err| CliError::new("E_SMILES", format!("line {}: {err}", e.line)))
}

fn write_json<T: Serialize + ?Sized>(path: Option<&Path>, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::new("E_IO", format!("serialization: {e}")))?;
    text.push('\n');
    write_all(path, &text)
}

fn cmd_canonicalize(input: Option<&Path>, output: Option<&Path>) -> CliResult<()> {
    let mut text = String::new();
    for e in read_smiles_list(input)? {
        let c = canonical_of(&e)?;
        match &e.name {
            Some(n) => {
                let _ = writeln!(text, "{c} {n}");
            }
            None => {
                let _ = writeln!(text, "{c}");
            }
        }
    }
    write_all(output, &text)
}

fn cmd_descriptors(input: Option<&Path>, output: Option<&Path>, format: TableFormat) -> CliResult<()> {
    let entries = read_smiles_list(input)?;
    let mut rows = Vec::with_capacity(entries.len());
    for e in &entries {
        let mol = parse_line(e)?;
        let d = compute_descriptors(&mol)
            .map_err(|err| CliError::new("E_DESCRIPTOR", format!("line {}: {err}", e.line)))?;
        rows.push((canonical_of(e)?, e.name.clone().unwrap_or_default(), d.to_array()));
    }
    match format {
        TableFormat::Csv => {
            let mut text = String::from("smiles,name");
            for n in DESCRIPTOR_NAMES {
                text.push(',');
                text.push_str(n);
            }
            text.push('\n');
            for (s, name, values) in &rows {
                text.push_str(s);
                text.push(',');
                text.push_str(name);
                for v in values {
                    let _ = write!(text, ",{}", format_float(*v));
                }
                text.push('\n');
            }
            write_all(output, &text)
        }
        TableFormat::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                smiles: &'a str,
                name: &'a str,
                descriptors: BTreeMap<&'static str, f64>,
            }
            let out: Vec<Row> = rows
                .iter()
                .map(|(s, name, values)| Row {
                    smiles: s,
                    name,
                    descriptors: DESCRIPTOR_NAMES.iter().copied().zip(values.iter().copied()).collect(),
                })
                .collect();
            write_json(output, &out)
        }
    }
}

/// The property to model: the flag or config value, else the only property
/// labeled in `records`.
fn resolve_property(given: Option<Property>, records: &[SystemRecord]) -> CliResult<Property> {
    if let Some(p) = given {
        return Ok(p);
    }
    let present: std::collections::BTreeSet<Property> =
        records.iter().filter_map(|r| r.property).collect();
    match present.len() {
        1 => Ok(*present.iter().next().expect("one property")),
        0 => Err(CliError::new("E_DATASET", "no labeled records")),
        _ => Err(CliError::config(format!(
            "records carry several properties ({}); choose one with --property",
            present.iter().map(|p| p.name()).collect::<Vec<_>>().join(", ")
        ))),
    }
}

fn feature_config(ctx: &Context, args: &ModelArgs) -> PseudoLabelConfig {
    let mut f = PseudoLabelConfig::default();
    if let Some(s) = args.temperature_scale.or(ctx.file.temperature_scale) {
        f.temperature_scale = s;
    }
    f
}

fn model_specs(ctx: &Context, args: &ModelArgs) -> CliResult<Vec<ModelSpec>> {
    let base: Option<ModelSpec> = match &args.model_config {
        Some(p) => Some(read_structured(p)?),
        None => ctx.file.model.clone(),
    };
    let mut kinds = args.kinds.clone();
    if kinds.is_empty() {
        kinds.push(match base {
            Some(ModelSpec::Ridge { .. }) => ModelKindArg::Ridge,
            _ => ModelKindArg::Mlp,
        });
    }
    let mut seen = HashSet::new();
    if !kinds.iter().all(|k| seen.insert(*k)) {
        return Err(CliError::config("each --model may be given once"));
    }
    let mlp_flags = args.epochs.is_some()
        || args.hidden.is_some()
        || args.learning_rate.is_some()
        || args.batch_size.is_some()
        || args.activation.is_some();
    if args.lambda.is_some() && !kinds.contains(&ModelKindArg::Ridge) {
        return Err(CliError::config("--lambda applies to the ridge model only"));
    }
    if mlp_flags && !kinds.contains(&ModelKindArg::Mlp) {
        return Err(CliError::config("MLP hyperparameter flags need --model mlp"));
    }
    let mut specs = Vec::with_capacity(kinds.len());
    for kind in kinds {
        let spec = match (kind, &base) {
            (ModelKindArg::Ridge, Some(ModelSpec::Ridge { lambda })) => ModelSpec::Ridge {
                lambda: args.lambda.unwrap_or(*lambda),
            },
            (ModelKindArg::Ridge, _) => ModelSpec::Ridge {
                lambda: args.lambda.unwrap_or(DEFAULT_RIDGE_LAMBDA),
            },
            (ModelKindArg::Mlp, base) => {
                let mut cfg = match base {
                    Some(ModelSpec::Mlp(c)) => c.clone(),
                    _ => MlpConfig::default(),
                };
                if let Some(e) = args.epochs {
                    cfg.epochs = e;
                }
                if let Some(h) = &args.hidden {
                    cfg.hidden = h.clone();
                }
                if let Some(lr) = args.learning_rate {
                    cfg.learning_rate = lr;
                }
                if let Some(b) = args.batch_size {
                    cfg.batch_size = b;
                }
                if let Some(a) = args.activation {
                    cfg.activation = match a {
                        ActivationArg::Tanh => Activation::Tanh,
                        ActivationArg::Relu => Activation::Relu,
                    };
                }
                if ctx.seed_explicit {
                    cfg.seed = ctx.seed;
                }
                ModelSpec::Mlp(cfg)
            }
        };
        specs.push(spec);
    }
    Ok(specs)
}

fn emit_plot_data(
    dir: &Path,
    dataset: &str,
    reports: &[(String, MetricReport)],
    records: &[SystemRecord],
    bins: usize,
) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let models = reports
        .iter()
        .map(|(m, r)| {
            let corr = |s: &Option<ionscreen::evalharness::Summary>| s.map_or(f64::NEG_INFINITY, |s| s.mean);
            (
                m.clone(),
                MetricMeans {
                    rmse: r.rmse.mean,
                    pearson_r: corr(&r.pearson_r),
                    kendall_tau: corr(&r.kendall_tau),
                },
            )
        })
        .collect();
    let table = DatasetTable {
        dataset: dataset.to_string(),
        models,
    };
    let ranks = rank_aggregate(std::slice::from_ref(&table))?;
    write_all(
        Some(&dir.join("rank_table.csv")),
        &rank_table_csv(&ranks, &[dataset.to_string()]),
    )?;
    for (property, hist) in label_histograms(records, bins) {
        write_all(
            Some(&dir.join(format!("histogram_{property}.csv"))),
            &hist.to_csv(),
        )?;
    }
    Ok(())
}

fn search_config(ctx: &Context, args: &SearchArgs, base: SearchConfig) -> CliResult<SearchConfig> {
    let mut cfg = match &args.search_config {
        Some(p) => read_structured(p)?,
        None => ctx.file.search.clone().unwrap_or(base),
    };
    if let Some(o) = args.objective {
        cfg.objective = o;
    }
    if let Some(p) = args.property.or(ctx.file.property) {
        cfg.property = Some(p);
    }
    if let Some(w) = args.beam_width {
        cfg.beam_width = w;
    }
    if let Some(f) = args.similarity_floor {
        cfg.similarity_floor = f;
    }
    if let Some(fp) = args.fingerprint {
        cfg.fingerprint = fp;
    }
    if let Some(n) = args.nbits {
        cfg.nbits = n;
    }
    if ctx.seed_explicit {
        cfg.seed = ctx.seed;
    }
    Ok(cfg)
}

fn load_predictor(
    src: &PredictorSource,
    args: &SearchArgs,
    property: Option<Property>,
) -> CliResult<(Box<dyn Predictor>, Option<Property>)> {
    if let Some(p) = &src.model {
        let m = RegressionModel::load(p)?;
        let prop = m.property;
        return Ok((Box::new(m), prop));
    }
    if let Some(cmd) = &src.predictor_cmd {
        if !(args.predictor_timeout.is_finite() && args.predictor_timeout > 0.0) {
            return Err(CliError::config("--predictor-timeout must be positive"));
        }
        let ext = ExternalPredictor::from_command_line(cmd, Duration::from_secs_f64(args.predictor_timeout))?;
        return Ok((Box::new(ext), None));
    }
    let path = src.lookup.as_deref().expect("one predictor source is required");
    let recs = load_records(Some(path), None)?;
    let property = resolve_property(property, &recs)?;
    let mut lookup = LookupPredictor::default();
    for r in recs.iter().filter(|r| r.property == Some(property)) {
        if let Some(v) = r.value {
            lookup.insert(r, v);
        }
    }
    Ok((Box::new(lookup), Some(property)))
}

fn cmd_modify(ctx: &Context, args: ModifyArgs, role: Role) -> CliResult<()> {
    let canon = |s: &str| canonicalize(s).map_err(|e| CliError::new("E_SMILES", format!("'{s}': {e}")));
    let category = match (&args.solute, args.temperature) {
        (Some(_), _) => Category::IlSolute,
        (None, Some(_)) => Category::IlBulkWithT,
        (None, None) => Category::IlBulkNoT,
    };
    let mut start = SystemRecord::new(category);
    start.cation = Some(canon(&args.cation)?);
    start.anion = Some(canon(&args.anion)?);
    start.solute = args.solute.as_deref().map(canon).transpose()?;
    if category.has_temperature() {
        start.temperature = Some(args.temperature.unwrap_or(ionscreen::datasets::SYNTHETIC_TEMPERATURE_K));
    }
    let pool = read_pool(&args.pool)?;
    let mut cfg = search_config(ctx, &args.search, SearchConfig::modification())?;
    if let Some(b) = args.budget {
        cfg.iterations = b;
    }
    let (pred, pred_property) = load_predictor(&args.predictor, &args.search, cfg.property)?;
    cfg.property = cfg.property.or(pred_property);
    let result = match role {
        Role::Anion => modify_anion(&start, &pool, pred.as_ref(), &cfg)?,
        _ => modify_side_chain(&start, &pool, pred.as_ref(), &cfg)?,
    };
    write_search_result(&result, &args.search)
}

fn provenance_text(c: &Candidate) -> String {
    match &c.provenance {
        Provenance::Seed => "seed".into(),
        Provenance::Expanded {
            role, similarity, ..
        } => format!("{role} swap (sim {similarity:.3})"),
    }
}

fn write_search_result(result: &SearchResult, args: &SearchArgs) -> CliResult<()> {
    let path = args.output.as_deref();
    let mut out = create_output(path)?;
    for c in &result.ranked {
        serde_json::to_writer(&mut out, c)
            .map_err(std::io::Error::from)
            .and_then(|_| out.write_all(b"\n"))
            .map_err(|e| output_error(path, e))?;
    }
    out.flush().map_err(|e| output_error(path, e))?;

    let mut table = format!(
        "{:<9} {:>12}  {:<22} {}\n",
        "iteration", "best", "provenance", "system"
    );
    for (i, c) in result.trajectory.iter().enumerate() {
        let _ = writeln!(
            table,
            "{:<9} {:>12}  {:<22} {}",
            i,
            format_float(c.value),
            provenance_text(c),
            c.key
        );
    }
    let _ = writeln!(
        table,
        "iterations run: {}, predictor evaluations: {}",
        result.iterations_run, result.evaluations
    );
    match &args.trajectory {
        Some(p) => write_all(Some(p), &table),
        None => {
            eprint!("{table}");
            Ok(())
        }
    }
}
