use std::path::{Path, PathBuf};
use std::process::ExitCode;

use relprobe::config::RunConfig;
use relprobe::dataset::Dataset;
use relprobe::evaluation::{evaluate_agent, gold_selection, load_agent_responses, AgentEvaluation, EvalOptions};
use relprobe::io::read_string;
use relprobe::report::{write_reports, FrequencyTable, Manifest};
use relprobe::responses::{AgentKind, BogusKey};
use relprobe::{Error, Result};

pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_MISSING_INPUT: u8 = 3;
pub const EXIT_INVARIANT: u8 = 4;

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::MissingInput(_) | Error::Io { .. } => EXIT_MISSING_INPUT,
        Error::Invariant(_) => EXIT_INVARIANT,
        _ => EXIT_VALIDATION,
    }
}

pub struct Loaded {
    pub cfg: RunConfig,
    pub source: String,
    pub path: PathBuf,
    /// Whether this stage reads agent response files.
    pub responses: bool,
}

pub fn run<F>(config: &Path, threads: Option<usize>, responses: bool, f: F) -> Result<ExitCode>
where
    F: FnOnce(&Loaded, usize) -> Result<ExitCode>,
{
    let source = read_string(config)?;
    let base = config.parent().unwrap_or(Path::new("."));
    let cfg = RunConfig::parse(&source, base)?;
    if let Some(missing) = cfg.missing_input(responses) {
        return Err(Error::MissingInput(missing));
    }
    let threads = threads.unwrap_or(cfg.params.threads);
    let loaded = Loaded {
        cfg,
        source,
        path: config.to_path_buf(),
        responses,
    };
    f(&loaded, threads)
}

fn manifest(l: &Loaded, dataset: &Dataset) -> Result<()> {
    let mut inputs = if l.responses { l.cfg.input_files() } else { l.cfg.dataset_inputs() };
    inputs.sort();
    let agents = l.cfg.agents.iter().map(|a| a.id()).collect();
    Manifest::collect(&l.source, &inputs, agents, dataset)?.save(&l.cfg.output)
}

pub fn build(l: &Loaded) -> Result<ExitCode> {
    let dataset = Dataset::from_config(&l.cfg)?;
    dataset.check_invariants()?;
    dataset.save(&l.cfg.dataset_dir())?;
    manifest(l, &dataset)?;
    let s = &dataset.summary;
    log::info!(
        "{} tuples ({} after augmentation), {} probes, written to {}",
        s.source_tuples,
        s.augmented_tuples,
        s.probes,
        l.cfg.dataset_dir().display()
    );
    Ok(ExitCode::SUCCESS)
}

fn dataset(l: &Loaded) -> Result<Dataset> {
    let dir = l.cfg.dataset_dir();
    if !dir.join("probes.jsonl").exists() {
        log::error!("no dataset under {}; run `relprobe build -c {}` first", dir.display(), l.path.display());
        return Err(Error::MissingInput(dir.join("probes.jsonl")));
    }
    Dataset::load(&dir)
}

fn bogus(l: &Loaded) -> Result<BogusKey> {
    match &l.cfg.inputs.bogus_key {
        Some(p) => BogusKey::load(p),
        None => Ok(BogusKey::default()),
    }
}

pub fn validate(l: &Loaded) -> Result<ExitCode> {
    let dataset = dataset(l)?;
    let key = bogus(l)?;
    let mut failed = 0;
    for agent in &l.cfg.agents {
        match load_agent_responses(agent, &dataset.probes, &key, l.cfg.params.determiner_alpha) {
            Ok((r, _)) => log::info!("{}: ok, {} probes answered", agent.name, r.len()),
            Err(e) => {
                failed += 1;
                log::error!("{}: {e}", agent.name);
                if let Error::Schema { errors, .. } = &e {
                    for line in errors {
                        eprintln!("  {}: {line}", agent.responses.display());
                    }
                }
            }
        }
    }
    if failed > 0 {
        log::error!("{failed} of {} response file(s) failed validation", l.cfg.agents.len());
        return Ok(ExitCode::from(EXIT_VALIDATION));
    }
    Ok(ExitCode::SUCCESS)
}

pub fn evaluate(l: &Loaded, threads: usize) -> Result<ExitCode> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let dataset = dataset(l)?;
    if l.cfg.agents.is_empty() {
        return Err(Error::Config("no agents configured".into()));
    }
    let key = bogus(l)?;
    let alpha = l.cfg.params.determiner_alpha;
    let gold = match l.cfg.gold_agent() {
        Some(g) => {
            let (resp, stats) = load_agent_responses(g, &dataset.probes, &key, alpha)?;
            let sel = gold_selection(&resp, &dataset);
            Some((g.name.clone(), resp, stats, sel))
        }
        None => {
            log::warn!("no human-pool agent; prototypicality is skipped");
            None
        }
    };
    let opts = EvalOptions {
        symmetry_k: l.cfg.params.symmetry_k.clone(),
        oor_k: l.cfg.params.oor_k,
    };
    let out = l.cfg.results_dir();
    for agent in &l.cfg.agents {
        let eval = match &gold {
            Some((name, resp, stats, sel)) if *name == agent.name => {
                evaluate_agent(&dataset, resp, stats.clone(), Some((resp, sel)), &opts)?
            }
            _ => {
                let (resp, stats) = load_agent_responses(agent, &dataset.probes, &key, alpha)?;
                let g = gold.as_ref().map(|(_, r, _, s)| (r, s));
                evaluate_agent(&dataset, &resp, stats, g, &opts)?
            }
        };
        eval.check_invariants()?;
        eval.save(&out)?;
        log::info!("{}: AuDC {:.3}", agent.name, eval.audc.area);
    }
    manifest(l, &dataset)?;
    Ok(ExitCode::SUCCESS)
}

pub fn report(l: &Loaded) -> Result<ExitCode> {
    let dataset = dataset(l)?;
    let dir = l.cfg.results_dir();
    let mut evals = Vec::new();
    for agent in &l.cfg.agents {
        let path = dir.join(format!("{}.json", agent.name));
        if !path.exists() {
            log::warn!("{}: no stored results, left out of the report", agent.name);
            continue;
        }
        evals.push(AgentEvaluation::load(&path)?);
    }
    if evals.is_empty() {
        return Err(Error::MissingInput(dir));
    }
    // Humans first so pairwise tables read human-vs-model.
    evals.sort_by_key(|e| e.agent.kind != AgentKind::HumanPool);
    let freq = l.cfg.inputs.frequency.as_deref().map(FrequencyTable::load).transpose()?;
    let written = write_reports(&l.cfg.output, &dataset, &evals, freq.as_ref(), l.cfg.params.significance)?;
    manifest(l, &dataset)?;
    log::info!("wrote {} file(s) under {}", written.len(), l.cfg.output.display());
    Ok(ExitCode::SUCCESS)
}
